fn main() {
    henselbez::cli::configure_threads();
    let code = henselbez::cli::run_command(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
