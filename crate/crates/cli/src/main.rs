fn main() -> std::process::ExitCode {
    posetrace_cli::cli::main_with_args(std::env::args_os())
}
