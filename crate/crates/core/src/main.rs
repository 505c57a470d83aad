fn main() {
    std::process::exit(rifscope::cli::run(std::env::args_os()));
}
