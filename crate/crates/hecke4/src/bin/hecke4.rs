fn main() {
    std::process::exit(hecke4::cli::run(std::env::args_os()));
}
