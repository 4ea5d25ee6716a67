fn main() -> std::process::ExitCode {
    krein_lab::cli::main()
}
