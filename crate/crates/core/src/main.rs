fn main() {
    std::process::exit(dynr::cli::main_with_args(std::env::args_os()));
}
