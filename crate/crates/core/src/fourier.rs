//! Normalized Fourier analysis on `Z_q^d`.
//!
//! ```text
//! f^(m) = q^-d sum_x f(x) chi(-x.m)        chi(x) = exp(2 pi i x / q)
//! f(x)  = sum_m chi(x.m) f^(m)
//! ```
//!
//! Both directions are computed separably: `d` passes of length-`q` direct
//! transforms along each axis, `O(d q^(d+1))` work in total. Lines within a
//! pass run in parallel; each line is summed sequentially with compensation,
//! so results do not depend on the thread schedule.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::Residue;
use crate::error::{domain, Result};
use crate::grid::Shape;
use crate::numeric::{character_table, root_of_unity, CompensatedSum};

/// `chi(x) = exp(2 pi i x / q)` for `x` in `Z_q`.
pub fn chi(x: Residue) -> Complex64 {
    root_of_unity(x.value(), x.modulus())
}

/// A complex function on `Z_q^d`, stored in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    shape: Shape,
    values: Vec<Complex64>,
}

/// Fourier coefficients indexed by frequency `m` in `Z_q^d`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    shape: Shape,
    values: Vec<Complex64>,
}

macro_rules! grid_common {
    ($t:ty) => {
        impl $t {
            pub fn new(shape: Shape, values: Vec<Complex64>) -> Result<Self> {
                if values.len() != shape.len() {
                    return domain(format!(
                        "expected {} values for Z_{}^{}, got {}",
                        shape.len(),
                        shape.q(),
                        shape.d(),
                        values.len()
                    ));
                }
                Ok(Self { shape, values })
            }

            pub fn zeros(shape: Shape) -> Self {
                Self {
                    shape,
                    values: vec![Complex64::new(0.0, 0.0); shape.len()],
                }
            }

            pub fn from_fn(shape: Shape, mut f: impl FnMut(&[u64]) -> Complex64) -> Self {
                let mut values = Vec::with_capacity(shape.len());
                shape.for_each_point(|_, p| values.push(f(p)));
                Self { shape, values }
            }

            pub fn shape(&self) -> Shape {
                self.shape
            }

            pub fn values(&self) -> &[Complex64] {
                &self.values
            }

            pub fn into_values(self) -> Vec<Complex64> {
                self.values
            }

            pub fn get(&self, point: &[u64]) -> Complex64 {
                self.values[self.shape.index_of(point)]
            }
        }
    };
}

grid_common!(GridFunction);
grid_common!(Spectrum);

impl GridFunction {
    /// 0/1 indicator of a set of grid indices.
    pub fn indicator(shape: Shape, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut f = Self::zeros(shape);
        for i in indices {
            f.values[i] = Complex64::new(1.0, 0.0);
        }
        f
    }
}

/// One separable pass per axis: `out[.., m, ..] = sum_k in[.., k, ..] w[k m mod q]`.
fn separable_transform(shape: Shape, mut data: Vec<Complex64>, sign: i8) -> Vec<Complex64> {
    let q = shape.q() as usize;
    let table = character_table(shape.q(), sign);
    let mut scratch = vec![Complex64::new(0.0, 0.0); data.len()];
    for axis in 0..shape.d() {
        let stride = q.pow((shape.d() - 1 - axis) as u32);
        let block = q * stride;
        scratch
            .par_chunks_mut(block)
            .zip(data.par_chunks(block))
            .for_each(|(out, inp)| {
                for r in 0..stride {
                    for m in 0..q {
                        let mut acc = CompensatedSum::new();
                        let mut phase = 0usize;
                        for k in 0..q {
                            acc.add(inp[k * stride + r] * table[phase]);
                            phase += m;
                            if phase >= q {
                                phase -= q;
                            }
                        }
                        out[m * stride + r] = acc.value();
                    }
                }
            });
        std::mem::swap(&mut data, &mut scratch);
    }
    data
}

pub fn forward(f: &GridFunction) -> Spectrum {
    let shape = f.shape;
    let scale = (shape.q() as f64).powi(-(shape.d() as i32));
    let mut values = separable_transform(shape, f.values.clone(), -1);
    values.par_iter_mut().for_each(|v| *v *= scale);
    Spectrum { shape, values }
}

pub fn inverse(spec: &Spectrum) -> GridFunction {
    let shape = spec.shape;
    GridFunction {
        shape,
        values: separable_transform(shape, spec.values.clone(), 1),
    }
}

/// `|q^-d sum_x f(x) conj(g(x)) - sum_m f^(m) conj(g^(m))|`.
pub fn plancherel_defect(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    if f.shape != g.shape {
        return domain("plancherel_defect needs functions on the same grid");
    }
    let scale = (f.shape.q() as f64).powi(-(f.shape.d() as i32));
    let lhs: CompensatedSum = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a * b.conj())
        .collect();
    let (fh, gh) = (forward(f), forward(g));
    let rhs: CompensatedSum = fh
        .values
        .iter()
        .zip(&gh.values)
        .map(|(a, b)| a * b.conj())
        .collect();
    Ok((lhs.value() * scale - rhs.value()).norm())
}

/// `q^-d sum_x |f(x)| |g(x)|`, the scale against which Plancherel defects are measured.
pub fn plancherel_scale(f: &GridFunction, g: &GridFunction) -> f64 {
    let scale = (f.shape.q() as f64).powi(-(f.shape.d() as i32));
    f.values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a.norm() * b.norm())
        .sum::<f64>()
        * scale
}

/// `q^-d sum_x chi(x.m)` by direct summation over the whole grid.
pub fn character_average(shape: Shape, m: &[u64]) -> Complex64 {
    let q = shape.q();
    let table = character_table(q, 1);
    let mut acc = CompensatedSum::new();
    shape.for_each_point(|_, x| {
        let dot = x.iter().zip(m).fold(0u64, |s, (a, b)| (s + a * b) % q);
        acc.add(table[dot as usize]);
    });
    acc.value() / shape.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_pcg::Pcg32;

    /// Definition-level double sum, `O(q^2d)`.
    fn forward_direct(f: &GridFunction) -> Spectrum {
        let shape = f.shape();
        let q = shape.q();
        let scale = (q as f64).powi(-(shape.d() as i32));
        Spectrum::from_fn(shape, |m| {
            let mut acc = CompensatedSum::new();
            shape.for_each_point(|i, x| {
                let dot = x.iter().zip(m).fold(0u64, |s, (a, b)| (s + a * b) % q);
                acc.add(f.values()[i] * root_of_unity((q - dot) % q, q));
            });
            acc.value() * scale
        })
    }

    fn random_grid(shape: Shape, rng: &mut Pcg32) -> GridFunction {
        GridFunction::from_fn(shape, |_| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(Residue::new(0, 9)), Complex64::new(1.0, 0.0));
        assert!((chi(Residue::new(3, 9)) - root_of_unity(1, 3)).norm() < 1e-15);
        for q in 2..30u64 {
            for a in 0..q {
                for b in 0..q {
                    let lhs = chi(Residue::from_u64(a, q)) * chi(Residue::from_u64(b, q));
                    assert!((lhs - chi(Residue::from_u64(a + b, q))).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn transform_of_delta_is_flat() {
        let shape = Shape::new(5, 3).unwrap();
        let delta = GridFunction::indicator(shape, [0]);
        let f = forward(&delta);
        let v = 1.0 / 125.0;
        assert!(f
            .values()
            .iter()
            .all(|z| (z - Complex64::new(v, 0.0)).norm() < 1e-15));
        let back = inverse(&f);
        assert!(back
            .values()
            .iter()
            .zip(delta.values())
            .all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn transform_of_constant_is_delta() {
        let shape = Shape::new(9, 2).unwrap();
        let one = GridFunction::from_fn(shape, |_| Complex64::new(1.0, 0.0));
        let f = forward(&one);
        for (i, z) in f.values().iter().enumerate() {
            let expected = if i == 0 { 1.0 } else { 0.0 };
            assert!((z - Complex64::new(expected, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn sphere_indicator_mean() {
        let shape = Shape::new(3, 3).unwrap();
        let norms = shape.norm_table();
        let ind = GridFunction::indicator(shape, (0..shape.len()).filter(|&i| norms[i] == 1));
        assert!((forward(&ind).values()[0] - Complex64::new(2.0 / 9.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_spectrum_inverts_to_zero() {
        let shape = Shape::new(4, 3).unwrap();
        assert!(inverse(&Spectrum::zeros(shape))
            .values()
            .iter()
            .all(|z| z.norm() == 0.0));
    }

    #[test]
    fn separable_matches_direct() {
        let mut rng = Pcg32::seed_from_u64(7);
        for q in 2..=7u64 {
            for d in 1..=2usize {
                let shape = Shape::new(q, d).unwrap();
                let f = random_grid(shape, &mut rng);
                let fast = forward(&f);
                let slow = forward_direct(&f);
                for (a, b) in fast.values().iter().zip(slow.values()) {
                    assert!((a - b).norm() < 1e-10, "q={q} d={d}");
                }
            }
        }
    }

    #[test]
    fn roundtrip_q9_d3() {
        let mut rng = Pcg32::seed_from_u64(2024);
        let shape = Shape::new(9, 3).unwrap();
        for _ in 0..100 {
            let f = random_grid(shape, &mut rng);
            let back = inverse(&forward(&f));
            let scale = f.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
            for (a, b) in back.values().iter().zip(f.values()) {
                assert!((a - b).norm() < 1e-9 * scale);
            }
        }
    }

    #[test]
    fn plancherel_examples() {
        let shape = Shape::new(15, 2).unwrap();
        let delta = GridFunction::indicator(shape, [0]);
        assert!(plancherel_defect(&delta, &delta).unwrap() < 1e-12);
        let one = GridFunction::from_fn(shape, |_| Complex64::new(1.0, 0.0));
        assert!(plancherel_defect(&one, &one).unwrap() < 1e-12);
        let mut rng = Pcg32::seed_from_u64(99);
        for _ in 0..20 {
            let f = random_grid(shape, &mut rng);
            let g = random_grid(shape, &mut rng);
            assert!(plancherel_defect(&f, &g).unwrap() < 1e-9 * plancherel_scale(&f, &g));
        }
        let other = GridFunction::zeros(Shape::new(15, 1).unwrap());
        assert!(plancherel_defect(&delta, &other).is_err());
    }

    #[test]
    fn orthogonality_exhaustive_small() {
        for q in [2u64, 3, 4, 5, 6, 7] {
            for d in 1..=3usize {
                let shape = Shape::new(q, d).unwrap();
                shape.for_each_point(|i, m| {
                    let z = character_average(shape, m);
                    if i == 0 {
                        assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-12);
                    } else {
                        assert!(z.norm() < 1e-10);
                    }
                });
            }
        }
    }

    #[test]
    fn grid_length_checked() {
        assert!(
            GridFunction::new(Shape::new(3, 2).unwrap(), vec![Complex64::new(0.0, 0.0); 8])
                .is_err()
        );
    }
}
