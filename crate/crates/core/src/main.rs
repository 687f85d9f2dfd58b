fn main() -> std::process::ExitCode {
    std::process::ExitCode::from(loopcell::cli::run(std::env::args_os()))
}
