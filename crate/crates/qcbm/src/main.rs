fn main() {
    std::process::exit(qcbm::cli::run(std::env::args_os()));
}
