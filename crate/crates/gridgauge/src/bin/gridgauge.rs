fn main() {
    std::process::exit(gridgauge::cli::run(std::env::args_os()));
}
