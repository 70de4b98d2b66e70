fn main() {
    std::process::exit(dessins_cli::run(std::env::args_os()));
}
