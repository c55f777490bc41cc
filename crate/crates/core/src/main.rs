fn main() {
    std::process::exit(frobtrace::cli::run(std::env::args_os()));
}
