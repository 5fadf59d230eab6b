use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{ExtExp, Perm};
use crate::error::{Error, Result};

/// Function-side exponents `(p₀, p, q, q_{m+1})`, symbol-side exponents
/// `(r₀, r, s, s_{m+1})`, and the integration orders κ, ρ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentProfile {
    pub p0: ExtExp,
    pub p: Vec<ExtExp>,
    pub q: Vec<ExtExp>,
    pub q_last: ExtExp,
    pub r0: ExtExp,
    pub r: Vec<ExtExp>,
    pub s: Vec<ExtExp>,
    pub s_last: ExtExp,
    pub kappa: Perm,
    pub rho: Perm,
}

impl ExponentProfile {
    /// Every exponent equal to `e`, identity orders.
    pub fn uniform(m: usize, e: ExtExp) -> Self {
        ExponentProfile {
            p0: e,
            p: vec![e; m],
            q: vec![e; m],
            q_last: e,
            r0: e,
            r: vec![e; m],
            s: vec![e; m],
            s_last: e,
            kappa: Perm::identity(m + 1, 0),
            rho: Perm::identity(m + 1, 1),
        }
    }

    pub fn m(&self) -> usize {
        self.p.len()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.m();
        if m == 0 {
            return Err(Error::Shape("profile needs m >= 1".into()));
        }
        for (name, len) in [("q", self.q.len()), ("r", self.r.len()), ("s", self.s.len())] {
            if len != m {
                return Err(Error::Shape(format!("{name} has {len} entries, expected m={m}")));
            }
        }
        if self.kappa.len() != m + 1 || self.kappa.base() != 0 {
            return Err(Error::InvalidPerm(format!("kappa must permute 0..={m}")));
        }
        if self.rho.len() != m + 1 || self.rho.base() != 1 {
            return Err(Error::InvalidPerm(format!("rho must permute 1..={}", m + 1)));
        }
        Ok(())
    }

    /// `(p₀, p₁, …, p_m)`.
    pub fn p_full(&self) -> Vec<ExtExp> {
        let mut v = vec![self.p0];
        v.extend_from_slice(&self.p);
        v
    }

    /// `(r₀, r₁, …, r_m)`.
    pub fn r_full(&self) -> Vec<ExtExp> {
        let mut v = vec![self.r0];
        v.extend_from_slice(&self.r);
        v
    }

    /// `(q₁, …, q_m, q_{m+1})`.
    pub fn q_full(&self) -> Vec<ExtExp> {
        let mut v = self.q.clone();
        v.push(self.q_last);
        v
    }

    /// `(s₁, …, s_m, s_{m+1})`.
    pub fn s_full(&self) -> Vec<ExtExp> {
        let mut v = self.s.clone();
        v.push(self.s_last);
        v
    }

    /// Symbol-side exponents in axis order `(x, t₁..t_m, ξ₁..ξ_m, ν)`.
    pub fn symbol_exps(&self) -> Vec<ExtExp> {
        let mut v = self.r_full();
        v.extend(self.s_full());
        v
    }

    /// Axis integration order over `(x, t, ξ, ν)`: κ(0..m) first, then ρ(1..m+1).
    pub fn symbol_order(&self) -> Vec<usize> {
        let m = self.m();
        let mut v: Vec<usize> = self.kappa.images().to_vec();
        v.extend(self.rho.images().iter().map(|&j| m + j));
        v
    }
}
