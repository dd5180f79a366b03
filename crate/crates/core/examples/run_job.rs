//! Run a JSON job without the binary.
//!
//! `cargo run --example run_job -- docs/samples/monodromy.json`

use maslov::io::{exit_code, parse_job, run_job, Format};

const DEFAULT: &str = r#"{
  "command": "leray",
  "format": "text",
  "lifts": [
    {"w": [[[-1.0, 0.0]]], "theta": 3.141592653589793},
    {"w": [[[1.0, 0.0]]], "theta": 0.0}
  ]
}"#;

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable job file"),
        None => DEFAULT.to_string(),
    };
    let job = match parse_job(&text) {
        Ok(job) => job,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    let outcome = run_job(&job);
    match (&outcome, job.format) {
        (Ok(r), Format::Json) => println!("{}", r.to_json()),
        (Ok(r), Format::Text) => print!("{}", r.to_text()),
        (Err(e), _) => eprintln!("{e}"),
    }
    std::process::exit(exit_code(&outcome));
}
