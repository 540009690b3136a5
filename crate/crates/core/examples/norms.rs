//! Squared norms of photon-added GHZ states, checked against a direct
//! Fock-space construction.
//!
//! cargo run --example norms

use std::f64::consts::PI;

use paghz::oracle::oracle_tensor;
use paghz::state::{ghz_norm, pa_norm, reduced_norms, StateParams};

fn main() -> paghz::Result<()> {
    println!(
        "{:>7} {:>5} {:>9} {:>24} {:>24} {:>9}",
        "|α|²", "φ", "(r,s,t)", "closed form", "Fock sum", "cutoff"
    );
    for (a2, phi, exc) in [
        (0.5, 0.0, [0, 0, 0]),
        (0.5, PI, [2, 1, 0]),
        (1.0, 0.0, [1, 1, 1]),
        (2.0, PI, [3, 0, 2]),
    ] {
        let p = StateParams::from_alpha_sq(a2, phi, exc[0], exc[1], exc[2])?;
        let tensor = oracle_tensor(&p)?;
        println!(
            "{a2:>7} {:>5} {:>9} {:>24.16e} {:>24.16e} {:>9}",
            if phi == 0.0 { "0" } else { "π" },
            format!("{exc:?}").replace(' ', ""),
            pa_norm(&p)?,
            tensor.raw_norm_sq,
            tensor.cutoff
        );
    }

    // with no photons added the norm is fixed by the GHZ normalization factor
    let alpha = num_complex::Complex64::new(0.7, 0.2);
    let p = StateParams::new(alpha, 1.0, 0, 0, 0)?;
    println!(
        "\nGHZ limit: {:.16e} vs {:.16e}",
        pa_norm(&p)?,
        ghz_norm(alpha, 1.0, 3)?.powi(-2)
    );

    for exc in [[2, 1, 0], [3, 0, 0]] {
        let p = StateParams::from_alpha_sq(1.0, 0.0, exc[0], exc[1], exc[2])?;
        let reduced = reduced_norms(&p);
        println!(
            "{exc:?}: general {:.16e}, two-mode form {:?}, one-mode form {:?}",
            pa_norm(&p)?,
            reduced.two_mode,
            reduced.one_mode
        );
    }
    Ok(())
}
