fn main() {
    std::process::exit(nmkdv_cli::run(std::env::args_os()));
}
