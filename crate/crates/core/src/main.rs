fn main() {
    std::process::exit(mhwalk::cli::run(std::env::args_os()));
}
