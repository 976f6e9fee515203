fn main() {
    std::process::exit(euler_core::cli::main_with_args(std::env::args_os()));
}
