fn main() {
    std::process::exit(roughstab_cli::run(std::env::args_os()));
}
