fn main() -> std::process::ExitCode {
    qaffine::cli::main()
}
