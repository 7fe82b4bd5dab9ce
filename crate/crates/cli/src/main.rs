fn main() {
    std::process::exit(lattice_ca_cli::run_cli(std::env::args_os()));
}
