fn main() {
    let (code, out) = llsdim::cli::run(std::env::args_os());
    print!("{out}");
    std::process::exit(code);
}
