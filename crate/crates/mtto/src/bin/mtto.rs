fn main() {
    std::process::exit(mtto::cli::run(std::env::args_os()));
}
