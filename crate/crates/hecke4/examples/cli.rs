//! Drives the same entry point as the `hecke4` binary.
//!
//! cargo run --example cli -- --q 3 classify --family Family3

fn main() {
    let mut args: Vec<String> = std::env::args().collect();
    if args.len() == 1 {
        args.extend(["--radius", "2", "--format", "csv", "gen-complex"].map(String::from));
    }
    std::process::exit(hecke4::cli::run(args));
}
