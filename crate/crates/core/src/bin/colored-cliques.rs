fn main() {
    std::process::exit(colored_cliques::cli::run(std::env::args_os()));
}
