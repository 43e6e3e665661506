//! End-to-end acceptance: every pinned invariant of the verify suite must
//! hold. Verdict lines are written straight to the process stdout — the test
//! harness only captures the `print!` macro family — so each criterion's
//! `[PASS]`/`[FAIL]` line appears live as it is decided, even in a plain
//! `cargo test` run. The suite solves ladders up to 128³ and takes tens of
//! minutes on one core; the live lines are the progress indicator.

use std::io::Write;

use curl_homog::config::Config;
use curl_homog::verify;

/// Write one line to the real stdout, bypassing harness capture.
fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.write_all(b"\n");
    let _ = out.flush();
}

#[test]
fn all_pinned_invariants_hold() {
    let cfg = Config::default();
    emit(""); // the harness leaves the cursor mid-line after "test ... "
    let out = verify::run_all_with_progress(&cfg, &mut |r| emit(&r.line()))
        .expect("verify suite must run to completion");
    assert_eq!(out.results.len(), 12, "the suite pins twelve invariants");
    let failed: Vec<String> = out
        .results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.line())
        .collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
    assert!(out.artifacts.passed);
}
