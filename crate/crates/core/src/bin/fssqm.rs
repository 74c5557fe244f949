fn main() {
    std::process::exit(fssqm::cli::main_with_args(std::env::args_os()));
}
