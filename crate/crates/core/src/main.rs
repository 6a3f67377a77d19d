fn main() {
    std::process::exit(qframe::cli::run(std::env::args_os()));
}
