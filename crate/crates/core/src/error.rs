use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid state parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate state: squared norm {value:e} is at or below the degeneracy threshold")]
    DegenerateState { value: f64 },

    #[error("reduction {requested} requires excitations {needs}, got (r,s,t)=({r},{s},{t})")]
    InvalidReduction {
        requested: &'static str,
        needs: &'static str,
        r: u32,
        s: u32,
        t: u32,
    },

    #[error("invalid Fock cutoff {cutoff}: need at least {minimum}")]
    InvalidCutoff { cutoff: usize, minimum: usize },

    #[error("Fock cutoff {cutoff} insufficient: tail mass {tail_mass:e}")]
    CutoffExceeded { cutoff: usize, tail_mass: f64 },

    #[error("non-real Wigner value: re={re:e} im={im:e}{}", fmt_cell(*.cell))]
    NonRealResult {
        re: f64,
        im: f64,
        cell: Option<(usize, usize)>,
    },

    #[error("invalid phase-space point: {0}")]
    InvalidPoint(String),

    #[error("invalid grid request: {0}")]
    InvalidGrid(String),

    #[error("Mandel Q undefined for mode {mode}: mean photon number {mean:e}")]
    UndefinedQ { mode: usize, mean: f64 },

    #[error("g3 undefined: mean photon numbers {means:?}")]
    UndefinedG3 { means: [f64; 3] },
}

fn fmt_cell(cell: Option<(usize, usize)>) -> String {
    match cell {
        Some((i, j)) => format!(" at grid cell ({i}, {j})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
