fn main() {
    std::process::exit(oneloop::cli::run(std::env::args_os()));
}
