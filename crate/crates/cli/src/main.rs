fn main() {
    std::process::exit(ulc_lab::run(std::env::args_os()));
}
