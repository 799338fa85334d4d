fn main() { std::process::exit(doublecap::cli::run(std::env::args_os())); }
