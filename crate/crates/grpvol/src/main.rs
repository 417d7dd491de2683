fn main() {
    std::process::exit(grpvol::cli::main_with_args(std::env::args_os()));
}
