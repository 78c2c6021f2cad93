fn main() {
    std::process::exit(namr_sim::cli::run(std::env::args_os()));
}
