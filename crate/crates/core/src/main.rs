fn main() -> std::process::ExitCode {
    equilib::cli::main()
}
