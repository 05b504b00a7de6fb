fn main() {
    std::process::exit(cavityqed_cli::dispatch(std::env::args_os()));
}
