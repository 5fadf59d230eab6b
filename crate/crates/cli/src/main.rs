fn main() {
    std::process::exit(tfsym::run(std::env::args_os()));
}
