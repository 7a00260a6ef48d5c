//! Numerical tolerances used by the checks and the acceptance suite.

/// Gauss sums: closed or reduced form vs direct summation, times `n`.
pub const GAUSS_ORACLE_REL: f64 = 1e-6;

/// Fourier identities, relative to the natural scale of the inputs.
pub const FOURIER_REL: f64 = 1e-9;

/// Orthogonality: modulus of a nonzero-frequency character average.
pub const ORTHOGONALITY_ABS: f64 = 1e-10;

/// Entrywise agreement of the two sphere spectrum routes.
pub const SPECTRUM_AGREEMENT_ABS: f64 = 1e-8;

/// Maximum distance to an integer before a count computed in floating point
/// is accepted as that integer.
pub const COUNT_INTEGRALITY: f64 = 1e-6;

/// `|Im II_t|` must stay below this times `q^(d-1)`.
pub const IMAG_RESIDUE_REL: f64 = 1e-6;

/// Integrality slack for spectral pair counts is `NU_INTEGRALITY` up to
/// `|E|^2 = NU_SCALE`, growing linearly with `|E|^2` beyond that.
pub const NU_INTEGRALITY: f64 = 1e-6;
pub const NU_SCALE: f64 = 1e6;

/// Relative rounding allowance in floating-point `value <= bound` checks.
pub const RATIO_SLACK: f64 = 1e-12;

pub fn nu_integrality(size: usize) -> f64 {
    let pairs = (size as f64) * (size as f64);
    NU_INTEGRALITY * (pairs / NU_SCALE).max(1.0)
}
