fn main() {
    std::process::exit(framescan::cli::run(std::env::args_os()));
}
