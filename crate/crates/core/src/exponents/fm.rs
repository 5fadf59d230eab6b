//! Exact Fourier–Motzkin elimination for small systems `A x ≤ b` over ℚ.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};

use super::Q;

/// Affine form `coef · x + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinExpr {
    pub coef: Vec<Q>,
    pub c: Q,
}

impl LinExpr {
    pub fn constant(nvars: usize, c: Q) -> Self {
        LinExpr { coef: vec![Q::zero(); nvars], c }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = LinExpr::constant(nvars, Q::zero());
        e.coef[i] = Q::from_integer(1);
        e
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        self.coef.iter().zip(x).map(|(a, b)| a * b).sum::<Q>() + self.c
    }

    pub fn is_constant(&self) -> bool {
        self.coef.iter().all(Zero::is_zero)
    }
}

impl Add for &LinExpr {
    type Output = LinExpr;
    fn add(self, o: &LinExpr) -> LinExpr {
        LinExpr { coef: self.coef.iter().zip(&o.coef).map(|(a, b)| a + b).collect(), c: self.c + o.c }
    }
}

impl Sub for &LinExpr {
    type Output = LinExpr;
    fn sub(self, o: &LinExpr) -> LinExpr {
        LinExpr { coef: self.coef.iter().zip(&o.coef).map(|(a, b)| a - b).collect(), c: self.c - o.c }
    }
}

impl Neg for &LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        LinExpr { coef: self.coef.iter().map(|a| -a).collect(), c: -self.c }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    a: Vec<Q>,
    b: Q,
}

impl Row {
    /// Scale so the first non-zero coefficient has modulus one.
    fn normalized(mut self) -> Row {
        if let Some(lead) = self.a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
            for x in &mut self.a {
                *x /= lead;
            }
            self.b /= lead;
        }
        self
    }
}

/// A conjunction of linear inequalities in `n` unknowns.
#[derive(Debug, Clone)]
pub struct System {
    n: usize,
    rows: Vec<Row>,
    /// Set once a constant row is violated.
    contradiction: bool,
}

impl System {
    pub fn new(n: usize) -> Self {
        System { n, rows: Vec::new(), contradiction: false }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    /// `lhs ≤ rhs`.
    pub fn le(&mut self, lhs: &LinExpr, rhs: &LinExpr) {
        let d = lhs - rhs;
        if d.is_constant() {
            if d.c.is_positive() {
                self.contradiction = true;
            }
            return;
        }
        self.rows.push(Row { a: d.coef, b: -d.c });
    }

    pub fn ge(&mut self, lhs: &LinExpr, rhs: &LinExpr) {
        self.le(rhs, lhs);
    }

    pub fn eq(&mut self, lhs: &LinExpr, rhs: &LinExpr) {
        self.le(lhs, rhs);
        self.le(rhs, lhs);
    }

    /// Row sets after eliminating the trailing variables: `stages[k]` involves
    /// only `x_0..=x_k`. `None` when the system is infeasible.
    fn stages(&self) -> Option<Vec<Vec<Row>>> {
        if self.contradiction {
            return None;
        }
        let mut cur: Vec<Row> = self.rows.iter().cloned().map(Row::normalized).collect();
        cur.sort();
        cur.dedup();
        let mut stages = vec![Vec::new(); self.n];
        for k in (0..self.n).rev() {
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            let mut next = Vec::new();
            for row in &cur {
                if row.a[k].is_positive() {
                    pos.push(row);
                } else if row.a[k].is_negative() {
                    neg.push(row);
                } else {
                    next.push(row.clone());
                }
            }
            for p in &pos {
                for ng in &neg {
                    let (sp, sn) = (-ng.a[k], p.a[k]);
                    let a: Vec<Q> = p.a.iter().zip(&ng.a).map(|(x, y)| x * sp + y * sn).collect();
                    let b = p.b * sp + ng.b * sn;
                    if a.iter().all(Zero::is_zero) {
                        if b.is_negative() {
                            return None;
                        }
                    } else {
                        next.push(Row { a, b }.normalized());
                    }
                }
            }
            next.sort();
            next.dedup();
            stages[k] = core::mem::replace(&mut cur, next);
        }
        // Whatever is left has no variables at all.
        if cur.iter().any(|r| r.b.is_negative()) {
            return None;
        }
        Some(stages)
    }

    fn interval(rows: &[Row], k: usize, x: &[Q]) -> (Option<Q>, Option<Q>) {
        let (mut lo, mut hi): (Option<Q>, Option<Q>) = (None, None);
        for r in rows {
            let ak = r.a[k];
            if ak.is_zero() {
                continue;
            }
            let rest: Q = r.a[..k].iter().zip(x).map(|(a, v)| a * v).sum();
            let bound = (r.b - rest) / ak;
            if ak.is_positive() {
                hi = Some(hi.map_or(bound, |h| h.min(bound)));
            } else {
                lo = Some(lo.map_or(bound, |l| l.max(bound)));
            }
        }
        (lo, hi)
    }

    /// A feasible point chosen by back-substitution, taking the midpoint of
    /// each variable's admissible interval in turn.
    pub fn feasible_point(&self) -> Option<Vec<Q>> {
        let stages = self.stages()?;
        let mut x: Vec<Q> = Vec::with_capacity(self.n);
        for k in 0..self.n {
            let v = match Self::interval(&stages[k], k, &x) {
                (Some(l), Some(h)) if l > h => return None,
                (Some(l), Some(h)) => (l + h) / Q::from_integer(2),
                (Some(l), None) => l,
                (None, Some(h)) => h,
                (None, None) => Q::zero(),
            };
            x.push(v);
        }
        Some(x)
    }

    /// Projection of the feasible set onto `x_0`; `None` when empty, open ends unbounded.
    pub fn range_of_first(&self) -> Option<(Option<Q>, Option<Q>)> {
        if self.n == 0 {
            return None;
        }
        let stages = self.stages()?;
        let (lo, hi) = Self::interval(&stages[0], 0, &[]);
        if let (Some(l), Some(h)) = (lo, hi) {
            if l > h {
                return None;
            }
        }
        Some((lo, hi))
    }

    /// Exact membership test, independent of the elimination.
    pub fn satisfies(&self, x: &[Q]) -> bool {
        !self.contradiction
            && self.rows.iter().all(|r| r.a.iter().zip(x).map(|(a, v)| a * v).sum::<Q>() <= r.b)
    }
}
