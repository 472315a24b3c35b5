//! Regenerates the golden fixture consumed by the `flamewave` test suite.
//!
//! Usage: pin-oracles [OUTPUT]   (default: crates/core/tests/fixtures/oracle_golden.csv)

use std::fs::File;
use std::io::BufWriter;
use std::process::ExitCode;

fn main() -> ExitCode {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "crates/core/tests/fixtures/oracle_golden.csv".into());
    let rows = match flamewave_oracle::pin_all() {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("oracle failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    let written = File::create(&path)
        .map(BufWriter::new)
        .and_then(|mut w| flamewave_oracle::write_fixture(&mut w, &rows));
    if let Err(e) = written {
        eprintln!("cannot write {path}: {e}");
        return ExitCode::FAILURE;
    }
    for r in &rows {
        eprintln!(
            "{:8} alpha={} lambda={} theta={} -> v0={:.12} c={:.12} R={:.8}",
            r.method, r.params.alpha, r.params.lambda, r.params.theta, r.v0, r.c, r.r
        );
    }
    ExitCode::SUCCESS
}
