fn main() {
    std::process::exit(pslab_cli::run(std::env::args_os()));
}
