//! Spheres `S_t = {x in Z_q^d : x_1^2 + ... + x_d^2 = t}`.
//!
//! Counts come from three independent routes: enumeration, the Gauss sum
//! identity `|S_t| = q^(d-1) + q^-1 sum_{s != 0} chi(-st) G(s, q)^d` evaluated
//! over `Z_q` directly, and the product over prime-power factors where each
//! factor's error term is split by the `p`-adic valuation of `s`.
//!
//! Fourier coefficients `S_t^(m)` come from a transform of the indicator and
//! from the closed expression `q^(-d-1) sum_s chi(-st) prod_i G(s, -m_i, q)`,
//! the latter also available grouped by divisor class `gcd(s, q)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{eps, gcd, inv_mod, jacobi, tau, val_p, Modulus, PrimePower, Residue};
use crate::error::{domain, Error, Result};
use crate::fourier::{forward, GridFunction, Spectrum};
use crate::gauss::{gauss_closed, gauss_general};
use crate::grid::{Shape, DEFAULT_GRID_BUDGET};
use crate::numeric::{coerce_integer, root_of_unity, CompensatedSum};
use crate::tolerances::{COUNT_INTEGRALITY, IMAG_RESIDUE_REL, RATIO_SLACK};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereSpec {
    modulus: Modulus,
    d: usize,
    t: Residue,
}

impl SphereSpec {
    pub fn new(q: u64, d: usize, t: i64) -> Result<Self> {
        let modulus = Modulus::new(q)?;
        Self::with_modulus(modulus, d, t)
    }

    pub fn with_modulus(modulus: Modulus, d: usize, t: i64) -> Result<Self> {
        if d == 0 {
            return domain("sphere dimension must be positive");
        }
        let t = modulus.residue(t);
        Ok(SphereSpec { modulus, d, t })
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn q(&self) -> u64 {
        self.modulus.q()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn t(&self) -> Residue {
        self.t
    }

    fn require_odd(&self, op: &str) -> Result<()> {
        if !self.modulus.is_odd() {
            return domain(format!(
                "{op} needs odd q, got q = {}; use the enumeration routes instead",
                self.q()
            ));
        }
        Ok(())
    }

    fn require_d_above_two(&self, op: &str) -> Result<()> {
        if self.d <= 2 {
            return domain(format!("{op} needs d > 2, got d = {}", self.d));
        }
        Ok(())
    }
}

/// All points of `S_t` in lexicographic order.
pub fn sphere_enumerate(spec: &SphereSpec, budget: u64) -> Result<Vec<Vec<u64>>> {
    let shape = Shape::with_budget(spec.q(), spec.d, budget)?;
    let norms = shape.norm_table();
    let t = spec.t.value();
    Ok((0..shape.len())
        .filter(|&i| norms[i] == t)
        .map(|i| shape.point_at(i))
        .collect())
}

/// `|S_t|` for every `t in Z_q` by enumeration, parallel over the leading coordinate.
pub fn sphere_counts_enumerate(q: u64, d: usize, budget: u64) -> Result<Vec<u64>> {
    let shape = Shape::with_budget(q, d, budget)?;
    let qs = q as usize;
    let tail = if d > 1 {
        Shape::new(q, d - 1)?.norm_table()
    } else {
        vec![0]
    };
    let counts = (0..q)
        .into_par_iter()
        .map(|x0| {
            let lead = x0 * x0 % q;
            let mut hist = vec![0u64; qs];
            for &n in &tail {
                hist[((lead + n) % q) as usize] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; qs],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    debug_assert_eq!(counts.iter().sum::<u64>() as usize, shape.len());
    Ok(counts)
}

/// Contribution to a prime-power error term from all `s` with `val_p(s) = k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValuationLayer {
    pub k: u32,
    /// `q^-1 p^(kd) sum_{u unit mod p^(l-k)} chi(-p^k u t) G(u, p^(l-k))^d`
    pub value: Complex64,
    /// The same with the inner unit sum replaced by its trivial bound `p^(l-k)`.
    pub trivial_bound: f64,
}

/// Error term `II_t = |S_t| - q^(d-1)` over `Z_{p^l}`, grouped by `val_p(s)`.
///
/// Uses `G(p^k u, p^l) = p^k G(u, p^(l-k))` and the closed form of the reduced sum.
pub fn error_term_by_valuation(pp: PrimePower, d: usize, t: u64) -> Result<Vec<ValuationLayer>> {
    if pp.p.is_multiple_of(2) {
        return domain("valuation split needs an odd prime");
    }
    let q = pp.value();
    let l = pp.exp;
    let t = t % q;
    let mut sums = vec![CompensatedSum::new(); l as usize];
    for s in 1..q {
        let k = val_p(s as i64, pp.p)?;
        let reduced = pp.p.pow(l - k);
        let u = (s / pp.p.pow(k)) % reduced;
        let chi = root_of_unity((reduced - (u * t) % reduced) % reduced, reduced);
        let g = gauss_closed(u as i64, reduced)?.pow_complex(d as u32);
        sums[k as usize].add(chi * g);
    }
    let qf = q as f64;
    let p = pp.p as f64;
    Ok(sums
        .into_iter()
        .enumerate()
        .map(|(k, acc)| {
            let pkd = p.powi((k * d) as i32);
            let reduced = p.powi(l as i32 - k as i32);
            ValuationLayer {
                k: k as u32,
                value: acc.value() * pkd / qf,
                trivial_bound: pkd * reduced.powf(d as f64 / 2.0) * reduced / qf,
            }
        })
        .collect())
}

/// `l p^(l(d-1)) p^(1 - d/2)`: the explicit bound on `|II_t|` over `Z_{p^l}`.
pub fn prime_power_error_bound(pp: PrimePower, d: usize) -> f64 {
    let p = pp.p as f64;
    let l = pp.exp as f64;
    l * p.powf(l * (d as f64 - 1.0)) * p.powf(1.0 - d as f64 / 2.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorCount {
    pub prime_power: PrimePower,
    pub t: u64,
    pub count: u64,
    pub main_term: u64,
    /// `count - main_term`, exact.
    pub error_term: i128,
    pub error_term_numeric: Complex64,
    pub error_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereCountReport {
    pub exact_count: u64,
    pub main_term: u64,
    /// `II_t` from the direct evaluation over `Z_q`.
    pub error_term: Complex64,
    /// `prod_i (main_i + bound_i) - prod_i main_i`.
    pub error_bound: f64,
    pub crt_count: u64,
    pub factors: Vec<FactorCount>,
}

fn pow_u64(b: u64, e: usize) -> Result<u64> {
    b.checked_pow(e as u32)
        .ok_or_else(|| Error::Domain(format!("{b}^{e} overflows u64")))
}

/// `q^-1 sum_{s != 0} chi(-st) G(s, q)^d`, directly over `Z_q`.
pub fn error_term_direct(q: u64, d: usize, t: u64) -> Result<Complex64> {
    let t = t % q;
    let mut acc = CompensatedSum::new();
    for s in 1..q {
        let g = gauss_general(s as i64, 0, q)?;
        let phase = (q - ((s as u128 * t as u128) % q as u128) as u64) % q;
        acc.add(root_of_unity(phase, q) * g.pow_complex(d as u32));
    }
    Ok(acc.value() / q as f64)
}

fn integral_count(main: u64, ii: Complex64, what: &str) -> Result<u64> {
    if ii.im.abs() >= IMAG_RESIDUE_REL * main as f64 {
        return Err(Error::Inconsistent(format!(
            "{what}: imaginary part {} of the error term does not vanish",
            ii.im
        )));
    }
    let c = coerce_integer(main as f64 + ii.re, COUNT_INTEGRALITY, what)?;
    u64::try_from(c).map_err(|_| Error::Inconsistent(format!("{what}: negative count {c}")))
}

/// `|S_t|` through the Gauss sum identity, with the CRT product as a cross-check.
pub fn sphere_count_formula(spec: &SphereSpec) -> Result<SphereCountReport> {
    spec.require_odd("sphere_count_formula")?;
    let (q, d, t) = (spec.q(), spec.d, spec.t.value());
    let main_term = pow_u64(q, d - 1)?;
    let error_term = error_term_direct(q, d, t)?;
    let exact_count = integral_count(main_term, error_term, "|S_t| over Z_q")?;

    let mut factors = Vec::with_capacity(spec.modulus.factors().len());
    for &pp in spec.modulus.factors() {
        let qi = pp.value();
        let ti = t % qi;
        let main_i = pow_u64(qi, d - 1)?;
        let layers = error_term_by_valuation(pp, d, ti)?;
        let ii: Complex64 = layers
            .iter()
            .map(|l| l.value)
            .fold(Complex64::new(0.0, 0.0), |a, b| a + b);
        let count = integral_count(main_i, ii, "|S_t| over a prime power")?;
        factors.push(FactorCount {
            prime_power: pp,
            t: ti,
            count,
            main_term: main_i,
            error_term: count as i128 - main_i as i128,
            error_term_numeric: ii,
            error_bound: prime_power_error_bound(pp, d),
        });
    }
    let crt_count = factors.iter().map(|f| f.count).product::<u64>();
    if crt_count != exact_count {
        return Err(Error::Inconsistent(format!(
            "CRT product {crt_count} disagrees with direct count {exact_count} for q={q} d={d} t={t}"
        )));
    }
    let upper: f64 = factors
        .iter()
        .map(|f| f.main_term as f64 + f.error_bound)
        .product();
    Ok(SphereCountReport {
        exact_count,
        main_term,
        error_term,
        error_bound: upper - main_term as f64,
        crt_count,
        factors,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorBound {
    pub prime_power: PrimePower,
    pub t: u64,
    pub error_term: i128,
    pub bound: f64,
    pub ratio: f64,
    /// Decided in exact integer arithmetic: `II^2 p^(d-2) <= l^2 p^(2l(d-1))`.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereBoundReport {
    pub count: SphereCountReport,
    pub factors: Vec<FactorBound>,
    pub max_ratio: f64,
    /// `|II_t| / error_bound` for the combined CRT bound.
    pub combined_ratio: f64,
    pub holds: bool,
}

fn exact_bound_holds(ii: i128, pp: PrimePower, d: usize) -> bool {
    let p = pp.p as u128;
    let l = pp.exp as u128;
    let lhs = (ii.unsigned_abs())
        .checked_mul(ii.unsigned_abs())
        .and_then(|x| x.checked_mul(p.checked_pow(d as u32 - 2)?));
    let rhs = p
        .checked_pow(2 * pp.exp * (d as u32 - 1))
        .and_then(|x| x.checked_mul(l * l));
    match (lhs, rhs) {
        (Some(lhs), Some(rhs)) => lhs <= rhs,
        _ => (ii.unsigned_abs() as f64) <= prime_power_error_bound(pp, d) * (1.0 + RATIO_SLACK),
    }
}

/// Checks `|II_t| <= l q_i^(d-1) q_i^((1/l)(1 - d/2))` for every factor `q_i = p^l`.
pub fn sphere_size_bound_check(spec: &SphereSpec) -> Result<SphereBoundReport> {
    spec.require_odd("sphere_size_bound_check")?;
    spec.require_d_above_two("sphere_size_bound_check")?;
    let count = sphere_count_formula(spec)?;
    let factors: Vec<FactorBound> = count
        .factors
        .iter()
        .map(|f| FactorBound {
            prime_power: f.prime_power,
            t: f.t,
            error_term: f.error_term,
            bound: f.error_bound,
            ratio: f.error_term.unsigned_abs() as f64 / f.error_bound,
            holds: exact_bound_holds(f.error_term, f.prime_power, spec.d),
        })
        .collect();
    let max_ratio = factors.iter().map(|f| f.ratio).fold(0.0, f64::max);
    let combined = count.exact_count as f64 - count.main_term as f64;
    let combined_ratio = combined.abs() / count.error_bound;
    let holds = factors.iter().all(|f| f.holds) && combined_ratio <= 1.0 + RATIO_SLACK;
    Ok(SphereBoundReport {
        count,
        factors,
        max_ratio,
        combined_ratio,
        holds,
    })
}

/// Indicator of `S_t` on the grid.
pub fn sphere_indicator(spec: &SphereSpec, budget: u64) -> Result<GridFunction> {
    let shape = Shape::with_budget(spec.q(), spec.d, budget)?;
    let norms = shape.norm_table();
    let t = spec.t.value();
    Ok(GridFunction::indicator(
        shape,
        (0..shape.len()).filter(|&i| norms[i] == t),
    ))
}

/// `S_t^` as the transform of the indicator of `S_t`.
pub fn sphere_fourier_direct(spec: &SphereSpec, budget: u64) -> Result<Spectrum> {
    Ok(forward(&sphere_indicator(spec, budget)?))
}

/// `S_t^` for every `t`, sharing one norm table.
pub fn sphere_fourier_direct_all(q: u64, d: usize, budget: u64) -> Result<Vec<Spectrum>> {
    let shape = Shape::with_budget(q, d, budget)?;
    let norms = shape.norm_table();
    Ok((0..q)
        .map(|t| {
            forward(&GridFunction::indicator(
                shape,
                (0..shape.len()).filter(|&i| norms[i] == t),
            ))
        })
        .collect())
}

fn check_frequency(spec: &SphereSpec, m: &[u64]) -> Result<()> {
    if m.len() != spec.d {
        return domain(format!(
            "frequency has {} coordinates, expected {}",
            m.len(),
            spec.d
        ));
    }
    Ok(())
}

/// `S_t^(m) = q^(-d-1) sum_{s in Z_q} chi(-st) prod_i G(s, -m_i, q)`.
///
/// The `s = 0` term is `q^d [m = 0]`, so the sum covers every `m`.
pub fn sphere_fourier_formula(spec: &SphereSpec, m: &[u64]) -> Result<Complex64> {
    spec.require_odd("sphere_fourier_formula")?;
    check_frequency(spec, m)?;
    let (q, t) = (spec.q(), spec.t.value());
    let mut acc = CompensatedSum::new();
    for s in 0..q {
        let mut prod = Complex64::new(1.0, 0.0);
        for &mi in m {
            let g = gauss_general(s as i64, -((mi % q) as i64), q)?;
            if g.is_zero() {
                prod = Complex64::new(0.0, 0.0);
                break;
            }
            prod *= g.complex();
        }
        let phase = (q - ((s as u128 * t as u128) % q as u128) as u64) % q;
        acc.add(root_of_unity(phase, q) * prod);
    }
    Ok(acc.value() * (q as f64).powi(-(spec.d as i32) - 1))
}

/// Contribution to `S_t^(m)` from all `s` with `gcd(s, q) = divisor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivisorClassTerm {
    /// `p_1^b_1 ... p_k^b_k = gcd(s, q)`.
    pub divisor: u64,
    /// False when `divisor` fails to divide some `m_i`; the class then vanishes.
    pub gate: bool,
    pub value: Complex64,
    /// Trivial bound `q^-1 prod_i p_i^(-e_i (d-2)/2)` with `p_i^e_i = q / divisor`.
    pub trivial_bound: f64,
}

/// `S_t^(m)` decomposed by `g = gcd(s, q)`. Writing `s = g u` with `u` a
/// unit mod `q' = q/g`, a class with `g | m_i` for all `i` contributes
///
/// ```text
/// q^(-d-1) g^d q'^(d/2) eps_q'^d sum_u (u/q')^d chi_q(-g u t) chi_q'(-||m/g|| / 4u)
/// ```
///
/// and every other class contributes zero.
pub fn sphere_fourier_by_divisor_class(
    spec: &SphereSpec,
    m: &[u64],
) -> Result<Vec<DivisorClassTerm>> {
    spec.require_odd("sphere_fourier_by_divisor_class")?;
    check_frequency(spec, m)?;
    let (q, d, t) = (spec.q(), spec.d, spec.t.value());
    let norm_scale = (q as f64).powi(-(d as i32) - 1);
    let mut terms = Vec::new();
    for g in spec.modulus.divisors() {
        let reduced = q / g;
        let trivial_bound = trivial_class_bound(&spec.modulus, reduced, d);
        let gate = m.iter().all(|&mi| (mi % q) % g == 0);
        if !gate {
            terms.push(DivisorClassTerm {
                divisor: g,
                gate,
                value: Complex64::new(0.0, 0.0),
                trivial_bound,
            });
            continue;
        }
        let mu_norm = m
            .iter()
            .map(|&mi| {
                let mu = ((mi % q) / g) % reduced;
                mu * mu % reduced
            })
            .fold(0u64, |a, b| (a + b) % reduced);
        let mut acc = CompensatedSum::new();
        for u in 0..reduced.max(1) {
            if gcd(u, reduced) != 1 {
                continue;
            }
            let symbol = jacobi(u as i64, reduced)?;
            let sign = if symbol < 0 && d % 2 == 1 { -1.0 } else { 1.0 };
            let inv4u = inv_mod(Residue::from_u64(4 * u, reduced))?.value();
            let shift = (u * t % reduced + mu_norm * inv4u % reduced) % reduced;
            acc.add(root_of_unity((reduced - shift) % reduced, reduced) * sign);
        }
        let unit = eps(reduced)?.pow(d as u64).to_complex();
        let magnitude = (g as f64).powi(d as i32) * (reduced as f64).powf(d as f64 / 2.0);
        terms.push(DivisorClassTerm {
            divisor: g,
            gate,
            value: acc.value() * unit * magnitude * norm_scale,
            trivial_bound,
        });
    }
    Ok(terms)
}

fn trivial_class_bound(modulus: &Modulus, reduced: u64, d: usize) -> f64 {
    let mut bound = 1.0 / modulus.q() as f64;
    for pp in modulus.factors() {
        let mut e = 0i32;
        let mut r = reduced;
        while r.is_multiple_of(pp.p) {
            r /= pp.p;
            e += 1;
        }
        bound *= (pp.p as f64).powf(-(e as f64) * (d as f64 - 2.0) / 2.0);
    }
    bound
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub max_nonzero_coeff: f64,
    pub argmax: Vec<u64>,
    pub bound: f64,
    pub ratio: f64,
    pub holds: bool,
}

/// `q^-1 tau(q) p_1^(-(d-2)/2)`.
pub fn decay_bound(modulus: &Modulus, d: usize) -> f64 {
    tau(modulus) as f64 / modulus.q() as f64
        * (modulus.smallest_prime() as f64).powf(-(d as f64 - 2.0) / 2.0)
}

/// Largest `|S_t^(m)|` over `m != 0` from a precomputed spectrum.
pub fn max_nonzero_coefficient(spectrum: &Spectrum) -> (f64, usize) {
    spectrum
        .values()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, z)| (z.norm(), i))
        .fold(
            (0.0, 0),
            |best, cur| if cur.0 > best.0 { cur } else { best },
        )
}

/// Compares `max_{m != 0} |S_t^(m)|` against `q^-1 tau(q) p_1^(-(d-2)/2)`.
pub fn decay_bound_check(spec: &SphereSpec) -> Result<DecayReport> {
    spec.require_odd("decay_bound_check")?;
    spec.require_d_above_two("decay_bound_check")?;
    let spectrum = sphere_fourier_direct(spec, DEFAULT_GRID_BUDGET)?;
    Ok(decay_report(spec, &spectrum))
}

pub fn decay_report(spec: &SphereSpec, spectrum: &Spectrum) -> DecayReport {
    let (max, idx) = max_nonzero_coefficient(spectrum);
    let bound = decay_bound(&spec.modulus, spec.d);
    let ratio = max / bound;
    DecayReport {
        max_nonzero_coeff: max,
        argmax: spectrum.shape().point_at(idx),
        bound,
        ratio,
        holds: ratio <= 1.0 + RATIO_SLACK,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_count(q: u64, d: usize, t: u64) -> u64 {
        let shape = Shape::new(q, d).unwrap();
        let mut n = 0;
        shape.for_each_point(|_, x| {
            if x.iter().map(|v| v * v).sum::<u64>() % q == t {
                n += 1;
            }
        });
        n
    }

    #[test]
    fn enumerate_z3_cubed() {
        let pts: Vec<usize> = (0..3)
            .map(|t| {
                sphere_enumerate(&SphereSpec::new(3, 3, t).unwrap(), 1000)
                    .unwrap()
                    .len()
            })
            .collect();
        assert_eq!(pts, vec![9, 6, 12]);
        let s1 = sphere_enumerate(&SphereSpec::new(3, 3, 1).unwrap(), 1000).unwrap();
        assert!(s1.windows(2).all(|w| w[0] < w[1]));
        assert!(s1
            .iter()
            .all(|x| x.iter().map(|v| v * v).sum::<u64>() % 3 == 1));
        assert_eq!(sphere_counts_enumerate(3, 3, 1000).unwrap(), vec![9, 6, 12]);
    }

    #[test]
    fn enumeration_budget() {
        let spec = SphereSpec::new(9, 5, 0).unwrap();
        assert!(matches!(
            sphere_enumerate(&spec, 1000),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn negative_t_is_normalized() {
        assert_eq!(SphereSpec::new(7, 3, -1).unwrap().t().value(), 6);
    }

    #[test]
    fn count_formula_examples() {
        let r = sphere_count_formula(&SphereSpec::new(3, 3, 1).unwrap()).unwrap();
        assert_eq!((r.exact_count, r.main_term), (6, 9));
        assert!((r.error_term - Complex64::new(-3.0, 0.0)).norm() < 1e-9);
        let r = sphere_count_formula(&SphereSpec::new(3, 3, 0).unwrap()).unwrap();
        assert_eq!(r.exact_count, 9);
        assert!(r.error_term.norm() < 1e-9);

        let r = sphere_count_formula(&SphereSpec::new(15, 3, 1).unwrap()).unwrap();
        assert_eq!(r.exact_count, brute_count(3, 3, 1) * brute_count(5, 3, 1));
        assert_eq!(r.exact_count, brute_count(15, 3, 1));
        assert!(sphere_count_formula(&SphereSpec::new(6, 3, 1).unwrap()).is_err());
    }

    #[test]
    fn formula_matches_enumeration_small() {
        for q in (3..=45u64).step_by(2) {
            for d in [1usize, 2, 3, 4] {
                if (q as u128).pow(d as u32) > 500_000 {
                    continue;
                }
                let counts = sphere_counts_enumerate(q, d, DEFAULT_GRID_BUDGET).unwrap();
                assert_eq!(counts.iter().sum::<u64>(), q.pow(d as u32));
                for t in 0..q {
                    let r =
                        sphere_count_formula(&SphereSpec::new(q, d, t as i64).unwrap()).unwrap();
                    assert_eq!(r.exact_count, counts[t as usize], "q={q} d={d} t={t}");
                    assert_eq!(r.crt_count, r.exact_count);
                }
            }
        }
    }

    #[test]
    fn valuation_layers_respect_trivial_bound() {
        for (p, l) in [(3u64, 1u32), (3, 2), (3, 3), (5, 2), (7, 1)] {
            let pp = PrimePower { p, exp: l };
            for d in [3usize, 4, 5] {
                for t in 0..pp.value() {
                    let layers = error_term_by_valuation(pp, d, t).unwrap();
                    assert_eq!(layers.len(), l as usize);
                    let total: f64 = layers.iter().map(|x| x.trivial_bound).sum();
                    for x in &layers {
                        assert!(x.value.norm() <= x.trivial_bound * (1.0 + 1e-12));
                    }
                    assert!(total <= prime_power_error_bound(pp, d) * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn valuation_layer_matches_jacobi_form() {
        // G(u, p^j)^d = eps_{p^j}^d (u/p)^(dj) p^(jd/2)
        let p = 5u64;
        for j in 1..=3u32 {
            let n = p.pow(j);
            for u in 1..n {
                if u % p == 0 {
                    continue;
                }
                for d in 1..6u32 {
                    let sym = (jacobi(u as i64, p).unwrap() as i32).pow(d * j) as f64;
                    let unit = eps(n).unwrap().pow(d as u64).to_complex();
                    let want = unit * sym * (n as f64).powf(d as f64 / 2.0);
                    let got = gauss_closed(u as i64, n).unwrap().pow_complex(d);
                    assert!((want - got).norm() < 1e-9 * want.norm());
                }
            }
        }
    }

    #[test]
    fn bound_check_examples() {
        let r = sphere_size_bound_check(&SphereSpec::new(3, 3, 1).unwrap()).unwrap();
        assert_eq!(r.factors[0].error_term, -3);
        assert!((r.factors[0].bound - 9.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(r.holds);
        let r = sphere_size_bound_check(&SphereSpec::new(3, 3, 0).unwrap()).unwrap();
        assert_eq!(r.max_ratio, 0.0);
        for t in 0..27 {
            let r = sphere_size_bound_check(&SphereSpec::new(27, 4, t).unwrap()).unwrap();
            assert!(r.holds && r.max_ratio <= 1.0, "t={t}");
        }
        assert!(sphere_size_bound_check(&SphereSpec::new(3, 2, 0).unwrap()).is_err());
        assert!(sphere_size_bound_check(&SphereSpec::new(4, 3, 0).unwrap()).is_err());
    }

    #[test]
    fn direct_spectrum_examples() {
        let spec = SphereSpec::new(3, 3, 1).unwrap();
        let s = sphere_fourier_direct(&spec, 1000).unwrap();
        assert!((s.values()[0] - Complex64::new(2.0 / 9.0, 0.0)).norm() < 1e-15);
        let energy: f64 = s.values().iter().map(|z| z.norm_sqr()).sum();
        assert!((energy - 6.0 / 27.0).abs() < 1e-14);
    }

    #[test]
    fn formula_spectrum_matches_direct() {
        for q in [3u64, 5, 7, 9, 15] {
            for t in 0..q {
                let spec = SphereSpec::new(q, 3, t as i64).unwrap();
                let direct = sphere_fourier_direct(&spec, DEFAULT_GRID_BUDGET).unwrap();
                direct.shape().for_each_point(|i, m| {
                    let f = sphere_fourier_formula(&spec, m).unwrap();
                    assert!(
                        (f - direct.values()[i]).norm() < 1e-8,
                        "q={q} t={t} m={m:?}"
                    );
                });
            }
        }
        let spec = SphereSpec::new(9, 3, 0).unwrap();
        let direct = sphere_fourier_direct(&spec, 1000).unwrap();
        let f = sphere_fourier_formula(&spec, &[1, 0, 0]).unwrap();
        assert!((f - direct.get(&[1, 0, 0])).norm() < 1e-8);
    }

    #[test]
    fn divisor_classes_sum_to_formula_and_gate_vanishes() {
        for q in [9u64, 15, 27, 45] {
            let modulus = Modulus::new(q).unwrap();
            let shape = Shape::new(q, 3).unwrap();
            for t in [0u64, 1, 3, q - 1] {
                let spec = SphereSpec::new(q, 3, t as i64).unwrap();
                for idx in (0..shape.len()).step_by(97) {
                    let m = shape.point_at(idx);
                    let terms = sphere_fourier_by_divisor_class(&spec, &m).unwrap();
                    assert_eq!(terms.len() as u64, tau(&modulus));
                    let total: Complex64 = terms.iter().map(|c| c.value).sum();
                    let plain = sphere_fourier_formula(&spec, &m).unwrap();
                    assert!((total - plain).norm() < 1e-10, "q={q} t={t} m={m:?}");
                    for c in &terms {
                        // the gated-off class really is zero in the plain sum
                        if !c.gate {
                            let mut acc = Complex64::new(0.0, 0.0);
                            for s in (0..q).filter(|&s| gcd(s, q) == c.divisor) {
                                let mut prod = Complex64::new(1.0, 0.0);
                                for &mi in &m {
                                    prod *= crate::gauss::gauss_brute(s as i64, -(mi as i64), q);
                                }
                                acc += prod;
                            }
                            assert!(acc.norm() < 1e-6 * (q as f64).powi(3));
                        }
                        if c.divisor != q {
                            assert!(c.value.norm() <= c.trivial_bound * (1.0 + 1e-9));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn decay_examples() {
        let r = decay_bound_check(&SphereSpec::new(3, 3, 1).unwrap()).unwrap();
        assert!((r.bound - 2.0 / 3.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(r.holds);
        for t in 0..15 {
            assert!(
                decay_bound_check(&SphereSpec::new(15, 3, t).unwrap())
                    .unwrap()
                    .holds
            );
        }
        let r = decay_bound_check(&SphereSpec::new(3, 4, 0).unwrap()).unwrap();
        assert!((r.bound - 2.0 / 9.0).abs() < 1e-15);
        assert!(r.holds);
        assert!(decay_bound_check(&SphereSpec::new(5, 2, 0).unwrap()).is_err());
    }

    #[test]
    fn sphere_is_invariant_under_signed_permutations() {
        let spec = SphereSpec::new(9, 3, 5).unwrap();
        let pts = sphere_enumerate(&spec, 1000).unwrap();
        let set: std::collections::HashSet<_> = pts.iter().cloned().collect();
        let perms = [
            [0, 1, 2],
            [1, 0, 2],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
            [0, 2, 1],
        ];
        for perm in perms {
            for signs in 0..8u32 {
                for x in &pts {
                    let y: Vec<u64> = perm
                        .iter()
                        .enumerate()
                        .map(|(i, &j)| {
                            if signs >> i & 1 == 1 {
                                (9 - x[j]) % 9
                            } else {
                                x[j]
                            }
                        })
                        .collect();
                    assert!(set.contains(&y));
                }
            }
        }
    }
}
