//! The three-mode correlation g3 in both the corrected and the published
//! form, and where the odd state is anti-bunched.
//!
//! cargo run --example correlation

use std::f64::consts::PI;

use paghz::state::StateParams;
use paghz::stats::{g3, is_antibunched, moments, Variant};

fn main() -> paghz::Result<()> {
    println!(
        "{:>6} {:>14} {:>14} {:>14}",
        "|α|²", "g3 even", "g3 odd", "g3 odd (pub.)"
    );
    for a2 in [0.1, 0.3, 0.5, 1.0, 2.0, 4.0] {
        let even = StateParams::from_alpha_sq(a2, 0.0, 0, 0, 0)?;
        let odd = StateParams::from_alpha_sq(a2, PI, 0, 0, 0)?;
        let g_odd = g3(&odd, Variant::Corrected)?;
        println!(
            "{a2:>6} {:>14.6} {:>14.6} {:>14.6} {}",
            g3(&even, Variant::Corrected)?,
            g_odd,
            g3(&odd, Variant::Paper)?,
            if is_antibunched(g_odd) {
                "anti-bunched"
            } else {
                ""
            }
        );
    }
    let p = StateParams::from_alpha_sq(1.0, 0.0, 1, 1, 1)?;
    let (c, pub_) = (
        moments(&p, Variant::Corrected)?,
        moments(&p, Variant::Paper)?,
    );
    println!(
        "\n(1,1,1), |α|² = 1: triple moment {:.6} corrected, {:.6} published",
        c.triple, pub_.triple
    );
    Ok(())
}
