//! Exact integer and modular arithmetic on `Z_q`.
//!
//! Everything here works on `u64` moduli with `u128` intermediates, which is
//! far beyond what the brute-force oracles elsewhere in the crate can afford.

use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{domain, Result};

/// A prime power `p^exp` appearing in the factorization of a modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub p: u64,
    pub exp: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.p.pow(self.exp)
    }
}

/// A modulus `q >= 2` together with its prime factorization
/// `p_1^a_1 ... p_k^a_k`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Modulus {
    q: u64,
    factors: Vec<PrimePower>,
}

impl Modulus {
    pub fn new(q: u64) -> Result<Self> {
        factorize(q)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn is_odd(&self) -> bool {
        self.q % 2 == 1
    }

    /// The smallest prime dividing `q`.
    pub fn smallest_prime(&self) -> u64 {
        self.factors[0].p
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn residue(&self, value: i64) -> Residue {
        Residue::new(value, self.q)
    }

    /// All positive divisors of `q`, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for pp in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (pp.exp as usize + 1));
            for &d in &divs {
                let mut pk = 1u64;
                for _ in 0..=pp.exp {
                    next.push(d * pk);
                    pk *= pp.p;
                }
            }
            divs = next;
        }
        divs.sort_unstable();
        divs
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

/// Canonical representative in `[0, q)` of a class in `Z_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Reduces `value` into `[0, q)`. Panics if `q == 0`.
    pub fn new(value: i64, q: u64) -> Self {
        assert!(q > 0, "modulus must be positive");
        Residue {
            value: value.rem_euclid(q as i64) as u64,
            modulus: q,
        }
    }

    pub fn from_u64(value: u64, q: u64) -> Self {
        assert!(q > 0, "modulus must be positive");
        Residue {
            value: value % q,
            modulus: q,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        assert_eq!(self.modulus, rhs.modulus, "residues over different moduli");
        Residue {
            value: ((self.value as u128 + rhs.value as u128) % self.modulus as u128) as u64,
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        assert_eq!(self.modulus, rhs.modulus, "residues over different moduli");
        Residue {
            value: mul_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

/// Powers of `i`: `IPower(k)` is `i^k`, with `k` taken mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IPower(u8);

impl IPower {
    pub const ONE: IPower = IPower(0);
    pub const I: IPower = IPower(1);
    pub const MINUS_ONE: IPower = IPower(2);
    pub const MINUS_I: IPower = IPower(3);

    pub fn new(k: i64) -> Self {
        IPower(k.rem_euclid(4) as u8)
    }

    pub fn exponent(&self) -> u8 {
        self.0
    }

    pub fn inverse(self) -> Self {
        IPower((4 - self.0) % 4)
    }

    pub fn pow(self, e: u64) -> Self {
        IPower(((self.0 as u64 * (e % 4)) % 4) as u8)
    }

    /// `1` or `-1` as `i^0` / `i^2`.
    pub fn from_sign(sign: i8) -> Self {
        if sign < 0 {
            IPower::MINUS_ONE
        } else {
            IPower::ONE
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for IPower {
    type Output = IPower;
    fn mul(self, rhs: IPower) -> IPower {
        IPower((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for IPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "1",
            1 => "i",
            2 => "-1",
            _ => "-i",
        })
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub fn pow_mod(mut base: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        e >>= 1;
    }
    acc
}

/// Factors `q` by trial division. Rejects `q < 2`.
pub fn factorize(q: u64) -> Result<Modulus> {
    if q < 2 {
        return domain(format!("modulus must be at least 2, got {q}"));
    }
    let mut factors = Vec::new();
    let mut n = q;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut exp = 0;
            while n.is_multiple_of(p) {
                n /= p;
                exp += 1;
            }
            factors.push(PrimePower { p, exp });
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push(PrimePower { p: n, exp: 1 });
    }
    Ok(Modulus { q, factors })
}

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && factorize(n)
            .map(|m| m.factors == [PrimePower { p: n, exp: 1 }])
            .unwrap_or(false)
}

/// Number of positive divisors, `prod (a_i + 1)`.
pub fn tau(q: &Modulus) -> u64 {
    q.factors.iter().map(|pp| pp.exp as u64 + 1).product()
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n == 0 || n.is_multiple_of(2) {
        return domain(format!("Jacobi symbol needs odd positive n, got {n}"));
    }
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            sign = -sign;
        }
        // reciprocity
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// `1` when `n = 1 (mod 4)`, `i` when `n = 3 (mod 4)`.
pub fn eps(n: u64) -> Result<IPower> {
    match n % 4 {
        1 => Ok(IPower::ONE),
        3 => Ok(IPower::I),
        _ => domain(format!("eps_n is defined for odd n only, got {n}")),
    }
}

/// Largest `k` with `p^k | s`.
pub fn val_p(s: i64, p: u64) -> Result<u32> {
    if s == 0 {
        return domain("valuation of 0 is infinite");
    }
    if p < 2 {
        return domain(format!("valuation base must be prime, got {p}"));
    }
    let mut s = s.unsigned_abs();
    let mut k = 0;
    while s.is_multiple_of(p) {
        s /= p;
        k += 1;
    }
    Ok(k)
}

/// Inverse of a unit of `Z_q`.
pub fn inv_mod(a: Residue) -> Result<Residue> {
    let q = a.modulus as i128;
    let (mut r0, mut r1) = (q, a.value as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let quo = r0 / r1;
        (r0, r1) = (r1, r0 - quo * r1);
        (s0, s1) = (s1, s0 - quo * s1);
    }
    if r0 != 1 {
        return domain(format!("{a} is not a unit"));
    }
    Ok(Residue {
        value: s0.rem_euclid(q) as u64,
        modulus: a.modulus,
    })
}

/// Splits `x mod q` into its images mod each `p_i^a_i`, in factor order.
pub fn crt_split(modulus: &Modulus, x: Residue) -> Result<Vec<Residue>> {
    if x.modulus != modulus.q {
        return domain(format!("{x} does not live in Z_{}", modulus.q));
    }
    Ok(modulus
        .factors
        .iter()
        .map(|pp| Residue::from_u64(x.value, pp.value()))
        .collect())
}

/// Inverse of [`crt_split`].
pub fn crt_combine(modulus: &Modulus, parts: &[Residue]) -> Result<Residue> {
    if parts.len() != modulus.factors.len() {
        return domain(format!(
            "expected {} CRT components, got {}",
            modulus.factors.len(),
            parts.len()
        ));
    }
    let q = modulus.q;
    let mut acc = 0u64;
    for (pp, part) in modulus.factors.iter().zip(parts) {
        let m = pp.value();
        if part.modulus != m {
            return domain(format!("component {part} should be mod {m}"));
        }
        let cofactor = q / m;
        let inv = inv_mod(Residue::from_u64(cofactor, m))?.value;
        let term = mul_mod(mul_mod(part.value, inv, q), cofactor, q);
        acc = (acc + term) % q;
    }
    Ok(Residue::from_u64(acc, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn legendre_euler(a: i64, p: u64) -> i8 {
        let r = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
        match r {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    /// Jacobi symbol as the product of Legendre symbols over the factorization.
    fn jacobi_oracle(a: i64, n: u64) -> i8 {
        if n == 1 {
            return 1;
        }
        factorize(n)
            .unwrap()
            .factors()
            .iter()
            .map(|pp| legendre_euler(a, pp.p).pow(pp.exp))
            .product()
    }

    #[test]
    fn factorize_examples() {
        let m = factorize(45).unwrap();
        assert_eq!(
            m.factors(),
            &[PrimePower { p: 3, exp: 2 }, PrimePower { p: 5, exp: 1 }]
        );
        assert_eq!(
            factorize(7).unwrap().factors(),
            &[PrimePower { p: 7, exp: 1 }]
        );
        assert!(factorize(1).is_err());
        assert!(factorize(0).is_err());
        assert!(!factorize(12).unwrap().is_odd());
    }

    #[test]
    fn factorization_multiplies_back() {
        for q in 2..5000u64 {
            let m = factorize(q).unwrap();
            assert_eq!(
                m.factors().iter().map(PrimePower::value).product::<u64>(),
                q
            );
            assert!(m.factors().windows(2).all(|w| w[0].p < w[1].p));
            assert!(m.factors().iter().all(|pp| pp.exp >= 1 && is_prime(pp.p)));
            assert_eq!(m.is_odd(), q % 2 == 1);
        }
    }

    #[test]
    fn tau_matches_divisor_count() {
        assert_eq!(tau(&factorize(9).unwrap()), 3);
        assert_eq!(tau(&factorize(45).unwrap()), 6);
        assert_eq!(tau(&factorize(7).unwrap()), 2);
        for q in 2..=10_000u64 {
            let direct = (1..=q).filter(|d| q % d == 0).count() as u64;
            let m = factorize(q).unwrap();
            assert_eq!(tau(&m), direct, "q = {q}");
            assert_eq!(m.divisors().len() as u64, direct);
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(2, 15).unwrap(), 1);
        assert_eq!(jacobi(0, 9).unwrap(), 0);
        for n in (1..200).step_by(2) {
            assert_eq!(jacobi(1, n).unwrap(), 1);
        }
        assert!(jacobi(3, 10).is_err());
        assert_eq!(jacobi(-1, 7).unwrap(), -1);
    }

    #[test]
    fn jacobi_matches_legendre_products() {
        for n in (1..400u64).step_by(2) {
            for a in -50..(n as i64 + 50) {
                assert_eq!(jacobi(a, n).unwrap(), jacobi_oracle(a, n), "({a}/{n})");
            }
        }
    }

    #[test]
    fn jacobi_is_multiplicative_up_to_999() {
        for n in (1..=999u64).step_by(2) {
            let vals: Vec<i8> = (0..n).map(|a| jacobi(a as i64, n).unwrap()).collect();
            for a in 0..n {
                for b in 0..n {
                    let ab = ((a * b) % n) as usize;
                    assert_eq!(vals[a as usize] * vals[b as usize], vals[ab]);
                }
            }
        }
    }

    #[test]
    fn eps_examples() {
        assert_eq!(eps(5).unwrap(), IPower::ONE);
        assert_eq!(eps(3).unwrap(), IPower::I);
        assert_eq!(eps(9).unwrap(), IPower::ONE);
        assert!(eps(4).is_err());
    }

    #[test]
    fn val_p_examples() {
        assert_eq!(val_p(18, 3).unwrap(), 2);
        assert_eq!(val_p(5, 3).unwrap(), 0);
        assert_eq!(val_p(-54, 3).unwrap(), 3);
        assert!(val_p(0, 3).is_err());
    }

    #[test]
    fn inv_mod_examples() {
        assert_eq!(inv_mod(Residue::new(4, 9)).unwrap().value(), 7);
        assert_eq!(inv_mod(Residue::new(1, 13)).unwrap().value(), 1);
        assert!(inv_mod(Residue::new(3, 9)).is_err());
        assert!(inv_mod(Residue::new(0, 9)).is_err());
    }

    #[test]
    fn crt_examples() {
        let m15 = factorize(15).unwrap();
        let parts = crt_split(&m15, Residue::new(7, 15)).unwrap();
        assert_eq!(parts, vec![Residue::new(1, 3), Residue::new(2, 5)]);
        assert_eq!(crt_combine(&m15, &parts).unwrap(), Residue::new(7, 15));
        let zeros = crt_split(&m15, Residue::new(0, 15)).unwrap();
        assert!(zeros.iter().all(|r| r.value() == 0));
        assert!(crt_split(&m15, Residue::new(1, 7)).is_err());
    }

    #[test]
    fn crt_is_a_ring_isomorphism_up_to_225() {
        for q in 2..=225u64 {
            let m = factorize(q).unwrap();
            let mut seen = vec![false; q as usize];
            for x in 0..q {
                let rx = Residue::from_u64(x, q);
                let sx = crt_split(&m, rx).unwrap();
                assert_eq!(crt_combine(&m, &sx).unwrap(), rx);
                seen[x as usize] = true;
                for y in 0..q {
                    let ry = Residue::from_u64(y, q);
                    let sy = crt_split(&m, ry).unwrap();
                    let sum: Vec<_> = sx.iter().zip(&sy).map(|(a, b)| *a + *b).collect();
                    let prod: Vec<_> = sx.iter().zip(&sy).map(|(a, b)| *a * *b).collect();
                    assert_eq!(crt_split(&m, rx + ry).unwrap(), sum);
                    assert_eq!(crt_split(&m, rx * ry).unwrap(), prod);
                }
            }
            assert!(seen.into_iter().all(|s| s));
        }
    }

    #[test]
    fn ipower_algebra() {
        assert_eq!(IPower::I * IPower::I, IPower::MINUS_ONE);
        assert_eq!(IPower::I.inverse(), IPower::MINUS_I);
        assert_eq!(IPower::MINUS_I.pow(3), IPower::I);
        assert_eq!(IPower::new(-1), IPower::MINUS_I);
    }

    proptest! {
        #[test]
        fn val_p_of_scaled_unit(k in 0u32..12, u in 1i64..100_000, pi in 0usize..5) {
            let p = [2u64, 3, 5, 7, 11][pi];
            prop_assume!(u % p as i64 != 0);
            let pk = (p as i64).checked_pow(k);
            prop_assume!(pk.and_then(|pk| pk.checked_mul(u)).is_some());
            prop_assert_eq!(val_p(pk.unwrap() * u, p).unwrap(), k);
        }

        #[test]
        fn inverse_times_unit_is_one(q in 2u64..1_000_000, a in 0u64..1_000_000) {
            let r = Residue::from_u64(a, q);
            match inv_mod(r) {
                Ok(b) => prop_assert_eq!((r * b).value(), 1 % q),
                Err(_) => prop_assert!(gcd(r.value(), q) > 1),
            }
        }

        #[test]
        fn crt_roundtrip_large(q in 2u64..1_000_000, x in 0u64..1_000_000) {
            let m = factorize(q).unwrap();
            let r = Residue::from_u64(x, q);
            prop_assert_eq!(crt_combine(&m, &crt_split(&m, r).unwrap()).unwrap(), r);
        }
    }
}
