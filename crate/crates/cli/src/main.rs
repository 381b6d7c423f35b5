fn main() {
    std::process::exit(sociolex_cli::run(std::env::args_os()));
}
