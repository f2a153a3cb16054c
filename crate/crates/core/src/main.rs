fn main() -> std::process::ExitCode {
    multisecant::cli::run(std::env::args_os())
}
