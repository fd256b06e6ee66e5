fn main() {
    std::process::exit(quartic_mass_cli::run(std::env::args_os()));
}
