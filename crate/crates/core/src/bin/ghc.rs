fn main() {
    std::process::exit(ghcomplex::cli::main_with_args(std::env::args_os()));
}
