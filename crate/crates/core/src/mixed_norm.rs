//! Weighted mixed norms with per-axis exponents and a free integration order.
//!
//! `order[0]` is integrated first (innermost) and `exps[a]` always belongs to
//! axis `a`, whatever its position in the order. Sums run over ascending
//! indices and are multiplied by the axis quadrature weight before the `1/p`
//! power; `p = ∞` is a plain maximum.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exponents::ExtExp;
use crate::lattice::{is_perm, CArray, Grid};
use crate::math;

/// A positive weight evaluated at lattice coordinates.
pub trait Weight: Sync {
    fn eval(&self, coords: &[f64]) -> f64;
}

#[derive(Clone, Copy)]
pub struct MixedNormSpec<'a> {
    pub exps: &'a [ExtExp],
    pub order: &'a [usize],
    pub weight: Option<&'a dyn Weight>,
}

impl<'a> MixedNormSpec<'a> {
    pub fn new(exps: &'a [ExtExp], order: &'a [usize]) -> Self {
        MixedNormSpec { exps, order, weight: None }
    }

    pub fn weighted(mut self, w: &'a dyn Weight) -> Self {
        self.weight = Some(w);
        self
    }

    fn validate(&self, rank: usize) -> Result<()> {
        if self.exps.len() != rank || self.order.len() != rank {
            return Err(Error::Shape(format!(
                "mixed norm spec has {} exponents and {} order entries for rank {rank}",
                self.exps.len(),
                self.order.len()
            )));
        }
        if !is_perm(self.order) {
            return Err(Error::InvalidPerm(format!("{:?} is not an axis order", self.order)));
        }
        Ok(())
    }
}

/// Exponent-specific accumulation of `Σ v^p` (or `max v`).
#[derive(Clone, Copy)]
enum Reducer {
    Max,
    One,
    Two,
    Pow(f64),
}

impl Reducer {
    fn of(e: &ExtExp) -> Self {
        if e.is_inf() {
            return Reducer::Max;
        }
        let p = e.to_f64();
        if p == 1.0 {
            Reducer::One
        } else if p == 2.0 {
            Reducer::Two
        } else {
            Reducer::Pow(p)
        }
    }

    #[inline]
    fn push(self, acc: f64, v: f64) -> f64 {
        match self {
            Reducer::Max => acc.max(v),
            Reducer::One => acc + v,
            Reducer::Two => acc + v * v,
            Reducer::Pow(p) => acc + math::powf(v, p),
        }
    }

    #[inline]
    fn finish(self, acc: f64, w: f64) -> f64 {
        match self {
            Reducer::Max => acc,
            Reducer::One => acc * w,
            Reducer::Two => math::sqrt(acc * w),
            Reducer::Pow(p) => math::powf(acc * w, 1.0 / p),
        }
    }
}

/// Nested reduction of a non-negative function of a multi-index.
///
/// `leaf` receives the full multi-index (axis order, not integration order).
pub fn nested_norm<F>(shape: &[usize], axis_w: &[f64], exps: &[ExtExp], order: &[usize], mut leaf: F) -> f64
where
    F: FnMut(&[usize]) -> f64,
{
    let reducers: Vec<Reducer> = order.iter().map(|&a| Reducer::of(&exps[a])).collect();
    let mut idx = vec![0usize; shape.len()];
    fn rec<F: FnMut(&[usize]) -> f64>(
        level: usize,
        shape: &[usize],
        axis_w: &[f64],
        order: &[usize],
        red: &[Reducer],
        idx: &mut [usize],
        leaf: &mut F,
    ) -> f64 {
        let axis = order[level];
        let r = red[level];
        let mut acc = 0.0;
        for i in 0..shape[axis] {
            idx[axis] = i;
            let v = if level == 0 { leaf(idx) } else { rec(level - 1, shape, axis_w, order, red, idx, leaf) };
            acc = r.push(acc, v);
        }
        r.finish(acc, axis_w[axis])
    }
    if shape.is_empty() {
        return leaf(&[]);
    }
    rec(shape.len() - 1, shape, axis_w, order, &reducers, &mut idx, &mut leaf)
}

/// Same reduction over a dense array of non-negative values, walking offsets
/// instead of multi-indices.
fn nested_dense(vals: &[f64], shape: &[usize], strides: &[usize], axis_w: &[f64], order: &[usize], red: &[Reducer]) -> f64 {
    fn rec(level: usize, off: usize, v: &[f64], sh: &[usize], st: &[usize], w: &[f64], ord: &[usize], red: &[Reducer]) -> f64 {
        let axis = ord[level];
        let r = red[level];
        let mut acc = 0.0;
        if level == 0 {
            for i in 0..sh[axis] {
                acc = r.push(acc, v[off + i * st[axis]]);
            }
        } else {
            for i in 0..sh[axis] {
                acc = r.push(acc, rec(level - 1, off + i * st[axis], v, sh, st, w, ord, red));
            }
        }
        r.finish(acc, w[axis])
    }
    rec(shape.len() - 1, 0, vals, shape, strides, axis_w, order, red)
}

fn axis_weights(grid: &Grid) -> Vec<f64> {
    (0..grid.rank()).map(|k| grid.axis_weight(k)).collect()
}

pub fn mixed_norm(f: &CArray, spec: &MixedNormSpec<'_>) -> Result<f64> {
    let grid = f.grid();
    spec.validate(grid.rank())?;
    let shape = grid.shape();
    let aw = axis_weights(grid);
    let out = match spec.weight {
        None => {
            let vals: Vec<f64> = f.data().iter().map(|z| z.norm()).collect();
            let red: Vec<Reducer> = spec.order.iter().map(|&a| Reducer::of(&spec.exps[a])).collect();
            nested_dense(&vals, &shape, &grid.strides(), &aw, spec.order, &red)
        }
        Some(w) => {
            let st = grid.strides();
            let mut x = vec![0.0; shape.len()];
            nested_norm(&shape, &aw, spec.exps, spec.order, |idx| {
                for (k, &i) in idx.iter().enumerate() {
                    x[k] = grid.axis(k).coord(i);
                }
                let off: usize = idx.iter().zip(&st).map(|(i, s)| i * s).sum();
                f.data()[off].norm() * w.eval(&x)
            })
        }
    };
    if !out.is_finite() {
        return Err(Error::NonFinite { index: 0 });
    }
    Ok(out)
}

/// Mixed norm of a lazily evaluated modulus on `grid`; weights, if any, must
/// already be folded into `leaf`.
pub fn mixed_norm_lazy<F>(grid: &Grid, exps: &[ExtExp], order: &[usize], leaf: F) -> Result<f64>
where
    F: FnMut(&[usize]) -> f64,
{
    MixedNormSpec::new(exps, order).validate(grid.rank())?;
    let out = nested_norm(&grid.shape(), &axis_weights(grid), exps, order, leaf);
    if !out.is_finite() {
        return Err(Error::NonFinite { index: 0 });
    }
    Ok(out)
}

/// Norms with the pair's first axis integrated innermost, then with the
/// second axis innermost; remaining axes follow in ascending order. Requires
/// `exps[pair.0] ≤ exps[pair.1]`, in which case the first value never exceeds
/// the second (Minkowski's integral inequality).
pub fn minkowski_gap(f: &CArray, exps: &[ExtExp], pair: (usize, usize)) -> Result<(f64, f64)> {
    let r = f.rank();
    let (a, b) = pair;
    if r < 2 || a >= r || b >= r || a == b {
        return Err(Error::Precondition(format!("axis pair {pair:?} invalid for rank {r}")));
    }
    if exps.len() != r {
        return Err(Error::Shape(format!("{} exponents for rank {r}", exps.len())));
    }
    if !exps[a].le(&exps[b]) {
        return Err(Error::Precondition(format!("need exps[{a}] <= exps[{b}], got {} and {}", exps[a], exps[b])));
    }
    let rest: Vec<usize> = (0..r).filter(|&k| k != a && k != b).collect();
    let mut o1 = vec![a, b];
    o1.extend(&rest);
    let mut o2 = vec![b, a];
    o2.extend(&rest);
    let n1 = mixed_norm(f, &MixedNormSpec::new(exps, &o1))?;
    let n2 = mixed_norm(f, &MixedNormSpec::new(exps, &o2))?;
    Ok((n1, n2))
}
