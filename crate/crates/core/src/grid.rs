//! Indexing of `Z_q^d` in row-major order.
//!
//! A point `(x_0, ..., x_{d-1})` sits at index `sum_j x_j q^(d-1-j)`, so index
//! order is lexicographic order with `x_0` most significant.

use crate::error::{check_budget, domain, Result};

/// Default cap on `q^d` for anything that materializes a full grid.
pub const DEFAULT_GRID_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    q: u64,
    d: usize,
    len: usize,
}

impl Shape {
    pub fn new(q: u64, d: usize) -> Result<Self> {
        Self::with_budget(q, d, DEFAULT_GRID_BUDGET)
    }

    pub fn with_budget(q: u64, d: usize, budget: u64) -> Result<Self> {
        if q < 2 {
            return domain(format!("modulus must be at least 2, got {q}"));
        }
        if d == 0 {
            return domain("dimension must be positive");
        }
        let needed = (q as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        check_budget(&format!("grid Z_{q}^{d}"), needed, budget as u128)?;
        Ok(Shape {
            q,
            d,
            len: needed as usize,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `q^d`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index_of(&self, point: &[u64]) -> usize {
        debug_assert_eq!(point.len(), self.d);
        point.iter().fold(0usize, |acc, &x| {
            acc * self.q as usize + (x % self.q) as usize
        })
    }

    pub fn point_at(&self, mut index: usize) -> Vec<u64> {
        let mut p = vec![0u64; self.d];
        for slot in p.iter_mut().rev() {
            *slot = (index % self.q as usize) as u64;
            index /= self.q as usize;
        }
        p
    }

    /// Calls `f(index, point)` over the grid in index order, reusing one buffer.
    pub fn for_each_point(&self, mut f: impl FnMut(usize, &[u64])) {
        let mut p = vec![0u64; self.d];
        for idx in 0..self.len {
            f(idx, &p);
            for slot in p.iter_mut().rev() {
                *slot += 1;
                if *slot < self.q {
                    break;
                }
                *slot = 0;
            }
        }
    }

    /// `||x|| = sum x_i^2 mod q` at every grid point, in index order.
    pub fn norm_table(&self) -> Vec<u64> {
        let q = self.q;
        let squares: Vec<u64> = (0..q).map(|x| x * x % q).collect();
        let mut norms = vec![0u64];
        for _ in 0..self.d {
            let mut next = Vec::with_capacity(norms.len() * q as usize);
            for &n in &norms {
                next.extend(squares.iter().map(|&s| (n + s) % q));
            }
            norms = next;
        }
        norms
    }
}
