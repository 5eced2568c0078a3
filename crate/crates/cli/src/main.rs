fn main() {
    std::process::exit(qhw_cli::run(std::env::args_os()));
}
