fn main() {
    std::process::exit(quantic::cli::run(std::env::args_os(), &mut std::io::stdout()));
}
