fn main() {
    std::process::exit(ewens_ldp_core::harness::run_cli(std::env::args_os()));
}
