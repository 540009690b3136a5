//! Mandel Q per mode as photons are added, for even and odd states.
//!
//! cargo run --example mandel

use std::f64::consts::PI;

use paghz::state::StateParams;
use paghz::stats::{mandel_q, PhotonStatistics};

fn main() -> paghz::Result<()> {
    for (label, phi) in [("even", 0.0), ("odd", PI)] {
        println!("{label} state, Q_1 for mode excitations r = 0, 1, 2 (s = 1, t = 2)");
        println!("{:>6} {:>12} {:>12} {:>12}", "|α|²", "r=0", "r=1", "r=2");
        for a2 in [0.05, 0.2, 0.4, 0.6, 1.0, 2.0, 3.0] {
            let q: Vec<f64> = (0..3)
                .map(|r| mandel_q(&StateParams::from_alpha_sq(a2, phi, r, 1, 2)?, 1))
                .collect::<paghz::Result<_>>()?;
            println!("{a2:>6} {:>12.6} {:>12.6} {:>12.6}", q[0], q[1], q[2]);
        }
        println!();
    }
    let q = mandel_q(&StateParams::from_alpha_sq(1.0, 0.0, 2, 2, 2)?, 1)?;
    println!(
        "(2,2,2) at |α|² = 1: Q = {q:.6} ({:?})",
        PhotonStatistics::classify(q)
    );
    Ok(())
}
