fn main() {
    std::process::exit(entpot::cli::run(std::env::args_os()));
}
