fn main() {
    std::process::exit(weakdiam::cli::main_with_args(std::env::args_os()));
}
