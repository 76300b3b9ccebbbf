fn main() {
    std::process::exit(tropical_pants::cli::run(std::env::args_os()));
}
