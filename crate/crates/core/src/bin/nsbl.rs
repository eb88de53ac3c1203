fn main() {
    std::process::exit(nsbl::cli::run(std::env::args_os()));
}
