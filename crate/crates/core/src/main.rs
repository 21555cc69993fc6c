fn main() {
    std::process::exit(finbundle::cli::run(std::env::args_os()));
}
