//! Floating-point helpers shared by the spectral code paths.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `exp(2 pi i k / n)`, with `k` reduced mod `n` before the angle is formed.
pub fn root_of_unity(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    // Exact values on the axes keep symbolic comparisons tight.
    if 4 * k == n {
        return Complex64::new(0.0, 1.0);
    }
    if 2 * k == n {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * k == 3 * n {
        return Complex64::new(0.0, -1.0);
    }
    let theta = TAU * (k as f64) / (n as f64);
    Complex64::new(theta.cos(), theta.sin())
}

/// Table `w[j] = exp(sign * 2 pi i j / n)` for `j in 0..n`.
pub fn character_table(n: u64, sign: i8) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            let w = root_of_unity(j, n);
            if sign < 0 {
                w.conj()
            } else {
                w
            }
        })
        .collect()
}

/// Neumaier-compensated complex accumulator. The error of a sum of `N`
/// terms is `O(eps)` relative to the sum of magnitudes, independent of `N`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

#[inline]
fn two_sum(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        two_sum(&mut self.re, &mut self.re_c, z.re);
        two_sum(&mut self.im, &mut self.im_c, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// Rounds `x` to the nearest integer if it lies within `tol` of it.
pub fn coerce_integer(x: f64, tol: f64, what: &str) -> Result<i128> {
    let r = x.round();
    if (x - r).abs() <= tol {
        Ok(r as i128)
    } else {
        Err(Error::Inconsistent(format!(
            "{what} = {x} is not within {tol:e} of an integer"
        )))
    }
}
