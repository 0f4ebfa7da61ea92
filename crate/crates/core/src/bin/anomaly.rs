fn main() {
    std::process::exit(anomaly_core::cli::main_with_args(std::env::args_os()));
}
