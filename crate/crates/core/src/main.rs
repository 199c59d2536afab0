fn main() {
    std::process::exit(qkgw_core::cli::main_with_args(std::env::args_os()));
}
