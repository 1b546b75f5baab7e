fn main() {
    std::process::exit(pellfib::cli::run(std::env::args_os()));
}
