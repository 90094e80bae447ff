fn main() {
    std::process::exit(pse_lab::cli::run(std::env::args_os()));
}
