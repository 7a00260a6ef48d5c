//! Point sets `E` in `Z_q^d`, their distance sets, and pair counts
//! `nu(t) = #{(x, y) in E x E : ||x - y|| = t}`.
//!
//! Pair counts are available three ways:
//! - [`nu_brute_all`]: every ordered pair, the oracle.
//! - [`SpectralNu`]: `nu(t) = q^(2d) sum_m |E^(m)|^2 S_t^(m)`, split into the
//!   main term `M = q^-d |E|^2 |S_t|` and the remainder `R_t` over `m != 0`.
//! - [`nu_autocorrelation`]: difference counts `#{x - y = z}` recovered from
//!   `|E^|^2` by an inverse transform, exact after rounding. This one also
//!   works for even `q`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_pcg::Pcg32;
use rayon::prelude::*;

use crate::arith::{is_prime, tau, Modulus, Residue};
use crate::error::{check_budget, domain, Error, Result};
use crate::fourier::{forward, inverse, GridFunction, Spectrum};
use crate::grid::{Shape, DEFAULT_GRID_BUDGET};
use crate::numeric::{coerce_integer, CompensatedSum};
use crate::sphere::{
    max_nonzero_coefficient, sphere_counts_enumerate, sphere_enumerate, sphere_fourier_direct_all,
    sphere_fourier_formula, SphereSpec,
};
use crate::tolerances::{nu_integrality, RATIO_SLACK};

pub mod io;

/// Default cap on `|E|^2` for brute-force pair loops.
pub const DEFAULT_PAIR_BUDGET: u64 = 100_000_000;

/// A finite subset of `Z_q^d`: deduplicated, lexicographically sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    modulus: Modulus,
    d: usize,
    coords: Vec<u64>,
}

impl PointSet {
    /// Builds a set from arbitrary integer coordinates, reducing mod `q`.
    pub fn new<I, P>(q: u64, d: usize, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[i64]>,
    {
        let modulus = Modulus::new(q)?;
        let mut rows = Vec::new();
        for p in points {
            let p = p.as_ref();
            if p.len() != d {
                return domain(format!("point has {} coordinates, expected {d}", p.len()));
            }
            rows.push(
                p.iter()
                    .map(|&x| Residue::new(x, q).value())
                    .collect::<Vec<u64>>(),
            );
        }
        Self::from_rows(modulus, d, rows)
    }

    fn from_rows(modulus: Modulus, d: usize, mut rows: Vec<Vec<u64>>) -> Result<Self> {
        if d == 0 {
            return domain("dimension must be positive");
        }
        rows.par_sort_unstable();
        rows.dedup();
        Ok(PointSet {
            modulus,
            d,
            coords: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a set from grid indices (row-major, see [`Shape`]).
    pub fn from_indices(shape: Shape, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let modulus = Modulus::new(shape.q())?;
        let mut idx: Vec<usize> = indices.into_iter().collect();
        if let Some(&bad) = idx.iter().find(|&&i| i >= shape.len()) {
            return domain(format!("grid index {bad} out of range"));
        }
        idx.sort_unstable();
        idx.dedup();
        let mut coords = Vec::with_capacity(idx.len() * shape.d());
        for i in idx {
            coords.extend(shape.point_at(i));
        }
        Ok(PointSet {
            modulus,
            d: shape.d(),
            coords,
        })
    }

    /// The whole grid `Z_q^d`.
    pub fn full_grid(q: u64, d: usize) -> Result<Self> {
        let shape = Shape::new(q, d)?;
        Self::from_indices(shape, 0..shape.len())
    }

    /// `(step Z_q)^d` for a divisor `step` of `q`.
    pub fn sublattice(q: u64, d: usize, step: u64) -> Result<Self> {
        if step == 0 || !q.is_multiple_of(step) {
            return domain(format!("lattice step {step} does not divide {q}"));
        }
        let shape = Shape::new(q, d)?;
        let side: Vec<u64> = (0..q).step_by(step as usize).collect();
        let mut rows: Vec<Vec<u64>> = vec![Vec::new()];
        for _ in 0..d {
            rows = rows
                .into_iter()
                .flat_map(|r| {
                    side.iter().map(move |&x| {
                        let mut r = r.clone();
                        r.push(x);
                        r
                    })
                })
                .collect();
        }
        Self::from_rows(Modulus::new(shape.q())?, d, rows)
    }

    /// The points of a sphere `S_t` as a set.
    pub fn from_sphere(spec: &SphereSpec) -> Result<Self> {
        let rows = sphere_enumerate(spec, DEFAULT_GRID_BUDGET)?;
        Self::from_rows(spec.modulus().clone(), spec.d(), rows)
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

    pub fn len(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[u64]> + '_ {
        self.coords.chunks_exact(self.d)
    }

    pub fn contains(&self, point: &[u64]) -> bool {
        let pts: Vec<&[u64]> = self.points().collect();
        pts.binary_search(&point).is_ok()
    }

    /// `E + v`.
    pub fn translate(&self, v: &[i64]) -> Result<Self> {
        if v.len() != self.d {
            return domain("translation vector has the wrong dimension");
        }
        let q = self.q() as i64;
        let rows = self
            .points()
            .map(|p| {
                p.iter()
                    .zip(v)
                    .map(|(&x, &s)| (x as i64 + s).rem_euclid(q) as u64)
                    .collect()
            })
            .collect();
        Self::from_rows(self.modulus.clone(), self.d, rows)
    }

    pub fn shape(&self, budget: u64) -> Result<Shape> {
        Shape::with_budget(self.q(), self.d, budget)
    }

    /// 0/1 indicator on the grid, after checking the grid budget.
    pub fn indicator(&self, budget: u64) -> Result<GridFunction> {
        let shape = self.shape(budget)?;
        Ok(GridFunction::indicator(
            shape,
            self.points().map(|p| shape.index_of(p)),
        ))
    }
}

/// `||x - y|| = sum (x_i - y_i)^2 mod q`.
pub fn distance(x: &[u64], y: &[u64], q: u64) -> Result<Residue> {
    if x.len() != y.len() {
        return domain(format!("points of dimension {} and {}", x.len(), y.len()));
    }
    if q < 2 {
        return domain("modulus must be at least 2");
    }
    Ok(Residue::from_u64(raw_distance(x, y, q), q))
}

#[inline]
fn raw_distance(x: &[u64], y: &[u64], q: u64) -> u64 {
    let mut acc = 0u64;
    for (&a, &b) in x.iter().zip(y) {
        let diff = if a >= b { a - b } else { a + q - b };
        acc = (acc + diff * diff % q) % q;
    }
    acc
}

fn require_nonempty(e: &PointSet) -> Result<()> {
    if e.is_empty() {
        return domain("point set is empty");
    }
    Ok(())
}

/// `nu(t)` for every `t`, by looping over all ordered pairs.
pub fn nu_brute_all(e: &PointSet, pair_budget: u64) -> Result<Vec<u64>> {
    let n = e.len() as u128;
    check_budget("ordered pairs |E|^2", n * n, pair_budget as u128)?;
    let q = e.q();
    let d = e.d;
    let qs = q as usize;
    Ok(e.coords
        .par_chunks_exact(d)
        .fold(
            || vec![0u64; qs],
            |mut hist, x| {
                for y in e.coords.chunks_exact(d) {
                    hist[raw_distance(x, y, q) as usize] += 1;
                }
                hist
            },
        )
        .reduce(
            || vec![0u64; qs],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        ))
}

pub fn nu_brute(e: &PointSet, t: Residue, pair_budget: u64) -> Result<u64> {
    if t.modulus() != e.q() {
        return domain(format!("{t} is not in Z_{}", e.q()));
    }
    Ok(nu_brute_all(e, pair_budget)?[t.value() as usize])
}

/// Difference counts `A(z) = #{(x, y) in E^2 : x - y = z}` from
/// `A = q^d * inverse(|E^|^2)`.
pub fn difference_counts(e: &PointSet, grid_budget: u64) -> Result<Vec<u64>> {
    require_nonempty(e)?;
    let ind = e.indicator(grid_budget)?;
    let shape = ind.shape();
    let spectrum = forward(&ind);
    let power: Vec<Complex64> = spectrum
        .values()
        .iter()
        .map(|z| Complex64::new(z.norm_sqr(), 0.0))
        .collect();
    let auto = inverse(&Spectrum::new(shape, power)?);
    let scale = shape.len() as f64;
    let tol = nu_integrality(e.len());
    auto.values()
        .iter()
        .map(|z| {
            let c = coerce_integer(z.re * scale, tol, "difference count")?;
            u64::try_from(c)
                .map_err(|_| Error::Inconsistent(format!("negative difference count {c}")))
        })
        .collect()
}

/// `nu(t)` for every `t` from the difference counts.
pub fn nu_autocorrelation(e: &PointSet, grid_budget: u64) -> Result<Vec<u64>> {
    let counts = difference_counts(e, grid_budget)?;
    let shape = e.shape(grid_budget)?;
    let norms = shape.norm_table();
    let mut nu = vec![0u64; e.q() as usize];
    for (c, n) in counts.into_iter().zip(norms) {
        nu[n as usize] += c;
    }
    Ok(nu)
}

fn support(nu: &[u64]) -> BTreeSet<u64> {
    nu.iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(t, _)| t as u64)
        .collect()
}

/// `Delta(E)` from explicit pairs.
pub fn distance_set_brute(e: &PointSet, pair_budget: u64) -> Result<BTreeSet<u64>> {
    require_nonempty(e)?;
    Ok(support(&nu_brute_all(e, pair_budget)?))
}

/// `Delta(E)` from the difference counts.
pub fn distance_set_spectral(e: &PointSet, grid_budget: u64) -> Result<BTreeSet<u64>> {
    require_nonempty(e)?;
    Ok(support(&nu_autocorrelation(e, grid_budget)?))
}

/// `Delta(E) = {||x - y|| : x, y in E}`, always containing 0.
///
/// Loops over pairs when `|E|^2` fits the default pair budget and falls back
/// to the difference counts otherwise.
pub fn distance_set(e: &PointSet) -> Result<BTreeSet<u64>> {
    require_nonempty(e)?;
    let pairs = (e.len() as u128).pow(2);
    if pairs <= DEFAULT_PAIR_BUDGET as u128 {
        distance_set_brute(e, DEFAULT_PAIR_BUDGET)
    } else {
        distance_set_spectral(e, DEFAULT_GRID_BUDGET)
    }
}

/// Which route produces `S_t^` inside the spectral pair count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SphereRoute {
    /// Transform of the sphere indicator.
    #[default]
    Direct,
    /// Gauss sum expression, one frequency at a time.
    Formula,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NuReport {
    pub t: Residue,
    /// `round(M + R_t)`.
    pub nu: u64,
    /// `M = q^-d |E|^2 |S_t|`.
    pub main_term: f64,
    /// `R_t = q^(2d) sum_{m != 0} |E^(m)|^2 S_t^(m)`.
    pub remainder: f64,
    /// `|E| tau(q) q^(d-1) p_1^(-(d-2)/2)`.
    pub remainder_bound: f64,
    /// `q^d |E| max_{m != 0} |S_t^(m)|`.
    pub chain_bound: f64,
    /// `|R_t| <= chain_bound <= remainder_bound`.
    pub chain_holds: bool,
    /// `M - remainder_bound > 0`.
    pub certificate_positive: bool,
}

/// Precomputed sphere spectra for the spectral pair count on one `(q, d)`.
#[derive(Debug, Clone)]
pub struct SpectralNu {
    modulus: Modulus,
    shape: Shape,
    spectra: Vec<Spectrum>,
    max_nonzero: Vec<f64>,
    sphere_sizes: Vec<u64>,
}

impl SpectralNu {
    pub fn new(q: u64, d: usize, route: SphereRoute, grid_budget: u64) -> Result<Self> {
        let modulus = Modulus::new(q)?;
        if !modulus.is_odd() {
            return domain(format!(
                "spectral pair counts need odd q, got {q}; use nu_brute_all or nu_autocorrelation"
            ));
        }
        let shape = Shape::with_budget(q, d, grid_budget)?;
        let spectra = match route {
            SphereRoute::Direct => sphere_fourier_direct_all(q, d, grid_budget)?,
            SphereRoute::Formula => (0..q)
                .map(|t| {
                    let spec = SphereSpec::with_modulus(modulus.clone(), d, t as i64)?;
                    let mut values = Vec::with_capacity(shape.len());
                    for i in 0..shape.len() {
                        values.push(sphere_fourier_formula(&spec, &shape.point_at(i))?);
                    }
                    Spectrum::new(shape, values)
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let max_nonzero = spectra
            .iter()
            .map(|s| max_nonzero_coefficient(s).0)
            .collect();
        let sphere_sizes = sphere_counts_enumerate(q, d, grid_budget)?;
        Ok(SpectralNu {
            modulus,
            shape,
            spectra,
            max_nonzero,
            sphere_sizes,
        })
    }

    pub fn sphere_spectrum(&self, t: u64) -> &Spectrum {
        &self.spectra[t as usize]
    }

    pub fn sphere_size(&self, t: u64) -> u64 {
        self.sphere_sizes[t as usize]
    }

    /// `|E| tau(q) q^(d-1) p_1^(-(d-2)/2)`.
    pub fn remainder_bound(&self, size: usize) -> f64 {
        let d = self.shape.d() as f64;
        size as f64
            * tau(&self.modulus) as f64
            * (self.modulus.q() as f64).powf(d - 1.0)
            * (self.modulus.smallest_prime() as f64).powf(-(d - 2.0) / 2.0)
    }

    /// One report per `t in Z_q`.
    pub fn reports(&self, e: &PointSet) -> Result<Vec<NuReport>> {
        require_nonempty(e)?;
        if e.q() != self.modulus.q() || e.d() != self.shape.d() {
            return domain("point set lives on a different grid than the sphere spectra");
        }
        let e_hat = forward(&e.indicator(self.shape.len() as u64)?);
        let power: Vec<f64> = e_hat.values().iter().map(|z| z.norm_sqr()).collect();
        let n = e.len() as f64;
        let qd = self.shape.len() as f64;
        let q2d = qd * qd;
        let r_bound = self.remainder_bound(e.len());
        let tol = nu_integrality(e.len());
        (0..self.modulus.q())
            .map(|t| {
                let s_hat = self.sphere_spectrum(t).values();
                let mut acc = CompensatedSum::new();
                for (w, s) in power.iter().zip(s_hat).skip(1) {
                    acc.add(s * *w);
                }
                let rem = acc.value() * q2d;
                if rem.im.abs() > tol {
                    return Err(Error::Inconsistent(format!(
                        "R_t has imaginary part {} at t = {t}",
                        rem.im
                    )));
                }
                let main = n * n * self.sphere_size(t) as f64 / qd;
                let nu = coerce_integer(main + rem.re, tol, "M + R_t")?;
                let nu = u64::try_from(nu)
                    .map_err(|_| Error::Inconsistent(format!("negative nu({t}) = {nu}")))?;
                let chain_bound = qd * n * self.max_nonzero[t as usize];
                let slack = RATIO_SLACK * chain_bound.max(1.0);
                let chain_holds = rem.re.abs() <= chain_bound + slack
                    && chain_bound <= r_bound * (1.0 + RATIO_SLACK);
                Ok(NuReport {
                    t: Residue::from_u64(t, self.modulus.q()),
                    nu,
                    main_term: main,
                    remainder: rem.re,
                    remainder_bound: r_bound,
                    chain_bound,
                    chain_holds,
                    certificate_positive: main - r_bound > 0.0,
                })
            })
            .collect()
    }
}

/// Spectral pair count for one `t`.
pub fn nu_spectral(e: &PointSet, t: Residue, route: SphereRoute) -> Result<NuReport> {
    if t.modulus() != e.q() {
        return domain(format!("{t} is not in Z_{}", e.q()));
    }
    let engine = SpectralNu::new(e.q(), e.d(), route, DEFAULT_GRID_BUDGET)?;
    Ok(engine.reports(e)?.swap_remove(t.value() as usize))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    /// `C tau(q) q^d p_1^(-(d-2)/2)`.
    pub value: f64,
    /// Whether the threshold is below `q^d`, i.e. some set can reach it.
    pub non_vacuous: bool,
}

pub fn theorem_threshold(q: &Modulus, d: usize, c: f64) -> Result<Threshold> {
    if !q.is_odd() {
        return domain(format!("threshold needs odd q, got {q}"));
    }
    if d <= 2 {
        return domain(format!("threshold needs d > 2, got d = {d}"));
    }
    if !(c.is_finite() && c >= 0.0) {
        return domain(format!(
            "constant C must be finite and nonnegative, got {c}"
        ));
    }
    let qd = (q.q() as f64).powi(d as i32);
    let value = c * tau(q) as f64 * qd * (q.smallest_prime() as f64).powf(-(d as f64 - 2.0) / 2.0);
    Ok(Threshold {
        value,
        non_vacuous: value < qd,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateRow {
    pub report: NuReport,
    /// Exact pair count from pairs or difference counts.
    pub nu_exact: u64,
    /// `M - |R_t|`; a lower bound on `nu(t)`.
    pub margin: f64,
    /// `R_bound - |R_t|`.
    pub slack: f64,
    /// The certificate fired only where `nu(t) > 0`.
    pub sound: bool,
}

/// Runs the positivity certificate for every `t` and checks it against exact counts.
pub fn certificate_check(
    e: &PointSet,
    engine: &SpectralNu,
    pair_budget: u64,
) -> Result<Vec<CertificateRow>> {
    if e.d() <= 2 {
        return domain(format!("certificate needs d > 2, got d = {}", e.d()));
    }
    let reports = engine.reports(e)?;
    let pairs = (e.len() as u128).pow(2);
    let exact = if pairs <= pair_budget as u128 {
        nu_brute_all(e, pair_budget)?
    } else {
        nu_autocorrelation(e, engine.shape.len() as u64)?
    };
    Ok(reports
        .into_iter()
        .map(|r| {
            let nu_exact = exact[r.t.value() as usize];
            CertificateRow {
                margin: r.main_term - r.remainder.abs(),
                slack: r.remainder_bound - r.remainder.abs(),
                sound: !r.certificate_positive || nu_exact > 0,
                nu_exact,
                report: r,
            }
        })
        .collect())
}

/// Vectors in `Z_2^d` with an even number of nonzero coordinates.
pub fn construct_even_weight(d: usize) -> Result<PointSet> {
    if d == 0 {
        return domain("dimension must be positive");
    }
    let shape = Shape::new(2, d)?;
    PointSet::from_indices(shape, (0..shape.len()).filter(|i| i.count_ones() % 2 == 0))
}

/// `(p^ceil(l/2) Z_{p^l})^d`: every difference has all coordinates divisible by
/// `p^ceil(l/2)`, so every distance is divisible by `p^l`.
pub fn construct_zero_distance_lattice(p: u64, l: u32, d: usize) -> Result<PointSet> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return domain(format!("lattice construction needs an odd prime, got {p}"));
    }
    if l == 0 {
        return domain("exponent must be at least 1");
    }
    let q = p
        .checked_pow(l)
        .ok_or_else(|| Error::Domain(format!("{p}^{l} overflows")))?;
    let step = p.pow(l.div_ceil(2));
    let side = (q / step) as u128;
    check_budget(
        "lattice points",
        side.pow(d as u32),
        DEFAULT_GRID_BUDGET as u128,
    )?;
    PointSet::sublattice(q, d, step)
}

/// `size` distinct points chosen uniformly from `Z_q^d`.
///
/// Deterministic in `seed`: the generator is PCG-XSH-RR with 64-bit state
/// (`rand_pcg::Pcg32`) seeded through `seed_from_u64`.
pub fn sample_random_set(q: u64, d: usize, size: usize, seed: u64) -> Result<PointSet> {
    let shape = Shape::new(q, d)?;
    if size == 0 {
        return domain("sample size must be positive");
    }
    if size > shape.len() {
        return domain(format!(
            "cannot draw {size} distinct points from {} grid points",
            shape.len()
        ));
    }
    let mut rng = Pcg32::seed_from_u64(seed);
    let picked = rand::seq::index::sample(&mut rng, shape.len(), size);
    PointSet::from_indices(shape, picked)
}
