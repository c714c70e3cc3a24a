fn main() {
    std::process::exit(oja_regret_cli::run(std::env::args_os().collect()));
}
