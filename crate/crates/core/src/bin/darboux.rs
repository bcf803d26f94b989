fn main() {
    std::process::exit(darboux_core::cli::run(std::env::args_os()));
}
