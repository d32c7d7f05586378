fn main() -> std::process::ExitCode {
    gbe_core::cli::main()
}
