//! Run the verification suite on one curve and print the checks.

use minitwistor::lagrangian::TraceConfig;
use minitwistor::monopoles::charge3;
use minitwistor::verify::{verify_curve, VerifyOptions};

fn main() {
    let opts = VerifyOptions { trace: TraceConfig { grid_n: 256, ..TraceConfig::default() }, ..VerifyOptions::default() };
    let report = verify_curve("charge3", &charge3(), &opts);
    for c in &report.checks {
        println!("{} {:<50} {:.2e} / {:.2e}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.residual, c.tolerance);
    }
    println!("passed: {}", report.passed);
}
