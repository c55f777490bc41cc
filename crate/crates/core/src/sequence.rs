use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite run of samples `x_s, x_{s+1}, …` with the closed interval they
/// are known to lie in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealSequence {
    values: Vec<f64>,
    start_index: u64,
    range: (f64, f64),
    source_tag: String,
}

impl RealSequence {
    /// Fails if any value is NaN or falls outside `range`.
    pub fn new(
        values: Vec<f64>,
        start_index: u64,
        range: (f64, f64),
        source_tag: impl Into<String>,
    ) -> Result<Self> {
        let (lo, hi) = range;
        if !(lo <= hi) {
            return Err(Error::pre(format!("empty range [{lo}, {hi}]")));
        }
        if start_index < 1 {
            return Err(Error::pre("start_index must be at least 1"));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(lo..=hi).contains(*v))
        {
            return Err(Error::pre(format!(
                "sample {} = {v} outside [{lo}, {hi}]",
                start_index + i as u64
            )));
        }
        Ok(RealSequence {
            values,
            start_index,
            range,
            source_tag: source_tag.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn start_index(&self) -> u64 {
        self.start_index
    }

    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    pub fn source_tag(&self) -> &str {
        &self.source_tag
    }

    /// The first `n` samples (all of them if `n` exceeds the length).
    pub fn prefix(&self, n: usize) -> RealSequence {
        RealSequence {
            values: self.values[..n.min(self.values.len())].to_vec(),
            start_index: self.start_index,
            range: self.range,
            source_tag: self.source_tag.clone(),
        }
    }

    /// `(index, value)` pairs.
    pub fn indexed(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.start_index + i as u64, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(RealSequence::new(vec![0.0, 1.5], 1, (-1.0, 1.0), "t").is_err());
        assert!(RealSequence::new(vec![f64::NAN], 1, (-1.0, 1.0), "t").is_err());
        assert!(RealSequence::new(vec![], 0, (0.0, 1.0), "t").is_err());
    }

    #[test]
    fn indexed_respects_offset() {
        let s = RealSequence::new(vec![0.1, 0.2], 5, (0.0, 1.0), "t").unwrap();
        let idx: Vec<u64> = s.indexed().map(|(i, _)| i).collect();
        assert_eq!(idx, vec![5, 6]);
        assert_eq!(s.prefix(1).values(), &[0.1]);
    }
}
