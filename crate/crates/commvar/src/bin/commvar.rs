fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(commvar::cli::run(&args[1..]));
}
