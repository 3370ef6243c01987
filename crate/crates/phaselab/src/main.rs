//! Binary entry point: runs the CLI and reports failures as a
//! machine-readable JSON line on stderr with a nonzero exit code.

mod cli;

fn main() {
    if let Err(e) = cli::run() {
        eprintln!(
            "{}",
            serde_json::json!({ "error": e.to_string() })
        );
        std::process::exit(1);
    }
}
