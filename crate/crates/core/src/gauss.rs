//! Quadratic Gauss sums `G(a, b, n) = sum_{x mod n} exp(2 pi i (a x^2 + b x) / n)`.
//!
//! [`gauss_brute`] is the direct sum and serves as the oracle. [`gauss_closed`]
//! evaluates the coprime `b = 0` case in closed form, and [`gauss_general`]
//! reduces any `(a, b, n)` to it by dividing out `gcd(a, n)` and completing
//! the square. Closed-form results are kept symbolic so callers can read off
//! exact magnitudes.

use std::fmt;

use num_complex::Complex64;

use crate::arith::{eps, gcd, inv_mod, jacobi, IPower, Residue};
use crate::error::{domain, Result};
use crate::numeric::{root_of_unity, CompensatedSum};

/// A root of unity `exp(2 pi i num / den)` with `0 <= num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Twist {
    pub num: u64,
    pub den: u64,
}

impl Twist {
    pub const NONE: Twist = Twist { num: 0, den: 1 };

    pub fn new(num: u64, den: u64) -> Self {
        Twist {
            num: num % den,
            den,
        }
    }
}

/// Symbolic value `multiplier * jacobi * unit * (1+i)^[one_plus_i] * sqrt(radicand) * twist`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExactGauss {
    pub multiplier: u64,
    pub radicand: u64,
    pub jacobi: i8,
    pub unit: IPower,
    pub one_plus_i: bool,
    pub twist: Twist,
}

impl ExactGauss {
    /// Squared modulus, an exact integer.
    pub fn magnitude_sq(&self) -> u128 {
        let m = self.multiplier as u128;
        m * m * self.radicand as u128 * if self.one_plus_i { 2 } else { 1 }
    }

    /// Phase of `self^d` as a fraction `k / (8 * twist.den)` of a full turn.
    fn phase_pow(&self, d: u64) -> (u64, u64) {
        let den = 8 * self.twist.den;
        let mut k = 2 * self.twist.den * self.unit.exponent() as u64;
        if self.jacobi < 0 {
            k += 4 * self.twist.den;
        }
        if self.one_plus_i {
            k += self.twist.den;
        }
        k += 8 * self.twist.num;
        let k = ((k as u128 * d as u128) % den as u128) as u64;
        (k, den)
    }

    fn pow_complex(&self, d: u32) -> Complex64 {
        let modulus = (self.magnitude_sq() as f64).powf(d as f64 / 2.0);
        let (k, den) = self.phase_pow(d as u64);
        root_of_unity(k, den) * modulus
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaussSumValue {
    Zero,
    Exact(ExactGauss),
    /// Numerically summed value; used where no closed form is implemented.
    Numeric(Complex64),
}

impl GaussSumValue {
    fn sqrt_unit(radicand: u64, jacobi: i8, unit: IPower, one_plus_i: bool) -> Self {
        GaussSumValue::Exact(ExactGauss {
            multiplier: 1,
            radicand,
            jacobi,
            unit,
            one_plus_i,
            twist: Twist::NONE,
        })
    }

    /// Exact squared modulus, when the value is symbolic.
    pub fn magnitude_sq(&self) -> Option<u128> {
        match self {
            GaussSumValue::Zero => Some(0),
            GaussSumValue::Exact(e) => Some(e.magnitude_sq()),
            GaussSumValue::Numeric(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, GaussSumValue::Zero)
    }

    pub fn complex(&self) -> Complex64 {
        self.pow_complex(1)
    }

    /// `self^d` rendered with the phase reduced exactly before evaluation.
    pub fn pow_complex(&self, d: u32) -> Complex64 {
        match self {
            GaussSumValue::Zero => {
                if d == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            GaussSumValue::Exact(e) => e.pow_complex(d),
            GaussSumValue::Numeric(z) => z.powu(d),
        }
    }

    fn scaled(self, factor: u64) -> Self {
        match self {
            GaussSumValue::Zero => GaussSumValue::Zero,
            GaussSumValue::Exact(mut e) => {
                e.multiplier *= factor;
                GaussSumValue::Exact(e)
            }
            GaussSumValue::Numeric(z) => GaussSumValue::Numeric(z * factor as f64),
        }
    }

    fn twisted(self, t: Twist) -> Self {
        match self {
            GaussSumValue::Exact(mut e) => {
                debug_assert_eq!(e.twist, Twist::NONE);
                e.twist = t;
                GaussSumValue::Exact(e)
            }
            GaussSumValue::Numeric(z) => GaussSumValue::Numeric(z * root_of_unity(t.num, t.den)),
            GaussSumValue::Zero => GaussSumValue::Zero,
        }
    }
}

impl fmt::Display for GaussSumValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaussSumValue::Zero => f.write_str("0"),
            GaussSumValue::Exact(e) => {
                let sign = if e.jacobi < 0 { "-" } else { "" };
                write!(f, "{sign}{}*{}", e.multiplier, e.unit)?;
                if e.one_plus_i {
                    f.write_str("*(1+i)")?;
                }
                write!(f, "*sqrt({})", e.radicand)?;
                if e.twist.num != 0 {
                    write!(f, "*e({}/{})", e.twist.num, e.twist.den)?;
                }
                Ok(())
            }
            GaussSumValue::Numeric(z) => write!(f, "{z}"),
        }
    }
}

/// Direct summation over `x in Z_n` in index order, compensated.
pub fn gauss_brute(a: i64, b: i64, n: u64) -> Complex64 {
    assert!(n >= 1, "gauss_brute needs n >= 1");
    let nn = n as i128;
    let a = (a as i128).rem_euclid(nn);
    let b = (b as i128).rem_euclid(nn);
    let mut acc = CompensatedSum::new();
    for x in 0..nn {
        let phase = (a * x % nn * x + b * x).rem_euclid(nn);
        acc.add(root_of_unity(phase as u64, n));
    }
    acc.value()
}

/// Closed form of `G(a, n)` for `gcd(a, n) = 1`.
pub fn gauss_closed(a: i64, n: u64) -> Result<GaussSumValue> {
    if n == 0 {
        return domain("Gauss sum modulus must be positive");
    }
    let a = Residue::new(a, n).value();
    if gcd(a, n) != 1 {
        return domain(format!(
            "gauss_closed needs gcd(a, n) = 1, got a = {a}, n = {n}; use gauss_general"
        ));
    }
    if n % 2 == 1 {
        let unit = eps(n)?;
        let sym = jacobi(a as i64, n)?;
        return Ok(GaussSumValue::sqrt_unit(n, sym, unit, false));
    }
    if n % 4 == 2 {
        return Ok(GaussSumValue::Zero);
    }
    // n = 0 mod 4; coprimality already forces a odd.
    if a.is_multiple_of(2) {
        return domain(format!("n = {n} is divisible by 4 but a = {a} is even"));
    }
    let unit = eps(a)?.inverse();
    let sym = jacobi(n as i64, a)?;
    Ok(GaussSumValue::sqrt_unit(n, sym, unit, true))
}

/// `G(a, b, n)` for arbitrary `a, b`.
///
/// With `g = gcd(a, n)`: the sum vanishes unless `g | b`, and otherwise equals
/// `g * G(a/g, b/g, n/g)`. For odd reduced modulus the linear term is removed
/// by completing the square; for even reduced modulus with a nonzero linear
/// term the reduced sum is evaluated directly.
pub fn gauss_general(a: i64, b: i64, n: u64) -> Result<GaussSumValue> {
    if n == 0 {
        return domain("Gauss sum modulus must be positive");
    }
    let a = Residue::new(a, n).value();
    let b = Residue::new(b, n).value();
    let g = gcd(a, n);
    if !b.is_multiple_of(g) {
        return Ok(GaussSumValue::Zero);
    }
    let (a1, b1, n1) = (a / g, b / g, n / g);
    if n1 == 1 {
        return Ok(GaussSumValue::sqrt_unit(1, 1, IPower::ONE, false).scaled(g));
    }
    if b1 == 0 {
        return Ok(gauss_closed(a1 as i64, n1)?.scaled(g));
    }
    if n1 % 2 == 1 {
        // a x^2 + b x = a (x + b/(2a))^2 - b^2/(4a)
        let inv4a = inv_mod(Residue::from_u64(4 * a1, n1))?;
        let bsq = Residue::from_u64(b1, n1) * Residue::from_u64(b1, n1);
        let shift = Residue::new(-((bsq * inv4a).value() as i64), n1);
        let twist = Twist::new(shift.value(), n1);
        return Ok(gauss_closed(a1 as i64, n1)?.twisted(twist).scaled(g));
    }
    let z = gauss_brute(a1 as i64, b1 as i64, n1);
    if z.norm() < 1e-9 * (n1 as f64).sqrt() {
        return Ok(GaussSumValue::Zero);
    }
    Ok(GaussSumValue::Numeric(z).scaled(g))
}
