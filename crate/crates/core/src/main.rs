fn main() {
    std::process::exit(minitwistor::cli::run(std::env::args_os()));
}
