fn main() {
    std::process::exit(covdepth_cli::main_with_args(std::env::args_os()));
}
