fn main() {
    std::process::exit(microdistort::cli::dispatch(std::env::args_os()));
}
