use serde_json::Value;
use std::ffi::OsString;
use std::io::Write;

/// Print a line to stdout; treat a closed pipe as an orderly shutdown
/// (conventional Unix behavior under `fusionkit ... | head`).
fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{line}").is_err() {
        std::process::exit(0);
    }
}

fn main() {
    let args: Vec<OsString> = std::env::args_os().collect();
    let text_mode = args.iter().any(|a| a == "--text");
    let result = fusionkit_cli::run(args);
    for d in &result.diagnostics {
        eprintln!("{d}");
    }
    if !result.payload.is_null() {
        match &result.payload {
            // help / version text passes through verbatim
            Value::String(s) => emit(s),
            payload if text_mode => emit(&fusionkit_cli::render_text(payload)),
            payload => emit(&serde_json::to_string(payload).expect("payload serializes")),
        }
    }
    std::process::exit(result.status.exit_code());
}
