fn main() {
    std::process::exit(zq_distance::cli::run(std::env::args_os()));
}
