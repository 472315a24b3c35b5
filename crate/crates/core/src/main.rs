fn main() {
    std::process::exit(flamewave::cli::run(std::env::args_os()));
}
