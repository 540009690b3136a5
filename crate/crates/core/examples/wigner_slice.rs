//! A Wigner-function slice in the η plane with γ = δ = 1, for the even and
//! odd (1,2,1) states at α = 0.3, written as CSV.
//!
//! cargo run --release --example wigner_slice [OUT_DIR]

use std::f64::consts::PI;

use paghz::state::StateParams;
use paghz::wigner::{wigner_grid, GridSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| std::env::temp_dir().to_string_lossy().into_owned());
    let spec = GridSpec::figure_default(121);
    for (name, phi) in [("even", 0.0), ("odd", PI)] {
        let params = StateParams::real(0.3, phi, 1, 2, 1)?;
        let grid = wigner_grid(&params, &spec)?;
        let min = grid.min();
        let path = std::path::Path::new(&out).join(format!("wigner_121_{name}.csv"));
        std::fs::write(&path, grid.to_csv())?;
        println!(
            "{name:>4}: min {:+.4e} at ({:+.2}, {:+.2}), max {:.4e}, {:.1}% negative -> {}",
            min.value,
            min.x,
            min.y,
            grid.max(),
            100.0 * grid.negative_fraction(),
            path.display()
        );
    }
    Ok(())
}
