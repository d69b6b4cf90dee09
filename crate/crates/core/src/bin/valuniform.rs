fn main() {
    std::process::exit(valuniform::cli::run_command(std::env::args_os()));
}
