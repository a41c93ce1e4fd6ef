fn main() {
    std::process::exit(wavecrit_core::cli::run(std::env::args_os()));
}
