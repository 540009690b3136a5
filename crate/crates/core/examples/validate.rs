//! Cross-checks every closed form against the truncated Fock-space oracle
//! and prints the discrepancy reports.
//!
//! cargo run --release --example validate

use paghz::oracle::{exit_code, validate, ValidationConfig, Verdict};
use paghz::state::StateParams;

fn main() -> paghz::Result<()> {
    let params = StateParams::from_alpha_sq(1.0, 0.0, 1, 1, 1)?;
    let config = ValidationConfig {
        wigner_points: 50,
        ..Default::default()
    };
    let reports = validate(&params, &config);
    for r in &reports {
        let fmt = |v: Option<f64>| {
            v.map(|x| format!("{x:+.10e}"))
                .unwrap_or_else(|| "-".into())
        };
        println!(
            "{:<14} {:>18} {:>18} rel {:>9} {:?}",
            r.quantity,
            fmt(r.analytic),
            fmt(r.oracle),
            r.rel_err
                .map(|e| format!("{e:.1e}"))
                .unwrap_or_else(|| "-".into()),
            r.verdict
        );
    }
    let flagged = reports
        .iter()
        .filter(|r| r.verdict == Verdict::PaperTypoSuspected)
        .count();
    println!(
        "\n{flagged} published forms flagged; exit code would be {}",
        exit_code(&reports)
    );
    Ok(())
}
