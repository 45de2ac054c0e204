fn main() {
    std::process::exit(clique_msf::cli::run(std::env::args_os()));
}
