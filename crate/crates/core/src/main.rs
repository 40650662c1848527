fn main() {
    std::process::exit(qsurf::cli::main_with_args(std::env::args_os()));
}
