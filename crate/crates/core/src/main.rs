fn main() -> std::process::ExitCode {
    argverdict::cli::main()
}
