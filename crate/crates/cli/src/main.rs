fn main() {
    std::process::exit(gbq_cli::run(std::env::args_os()));
}
