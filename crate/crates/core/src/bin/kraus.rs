fn main() {
    std::process::exit(kraus_core::cli::main_with_args(std::env::args_os()));
}
