fn main() {
    std::process::exit(quinticate::cli::run(std::env::args_os()));
}
