fn main() -> std::process::ExitCode {
    khovcss::cli::main()
}
