fn main() {
    std::process::exit(paghz::cli::run(std::env::args_os()));
}
