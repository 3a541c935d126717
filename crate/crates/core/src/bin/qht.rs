fn main() {
    std::process::exit(qht_core::shell::run_cli(std::env::args_os()));
}
