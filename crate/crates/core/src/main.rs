fn main() {
    std::process::exit(bohr_harmonic::cli::dispatch(std::env::args_os()));
}
