fn main() {
    std::process::exit(tridyn::cli::run(std::env::args_os()));
}
