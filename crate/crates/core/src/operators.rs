//! Discrete multilinear pseudodifferential operators
//! `T_σf(x) = ∫ e^{2πi x·S(ξ)} σ(x, ξ) f̂₁(ξ₁)…f̂_m(ξ_m) dξ`, principal-value
//! Hilbert transforms, and the Rihaczek duality pairing.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lattice::{unravel, Axis, CArray, Grid, Measure};
use crate::math::{self, cis_turns};
use crate::symbols::SymbolSpec;
use crate::tfa::{add_index, fourier, inverse_fourier, rihaczek};
use crate::C64;

/// Default point budget for the dense quadrature path (`n^{m+1}` terms).
pub const DENSE_BUDGET: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpPath {
    MultiplierFast,
    DenseQuadrature,
    PvDirect,
}

impl OpPath {
    pub fn name(&self) -> &'static str {
        match self {
            OpPath::MultiplierFast => "multiplier-fast",
            OpPath::DenseQuadrature => "dense-quadrature",
            OpPath::PvDirect => "pv-direct",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorResult {
    pub output: CArray,
    pub path: OpPath,
    pub form: &'static str,
}

/// Symbol grid `(x, ξ₁..ξ_m)` for signals on `space`.
pub fn symbol_grid(space: &Grid, m: usize) -> Result<Grid> {
    if space.rank() != 1 {
        return Err(Error::Shape("operators act on one-axis signals".into()));
    }
    let a = *space.axis(0);
    let mut axes = vec![a];
    axes.extend(core::iter::repeat(a.dual()).take(m));
    Grid::from_axes(axes, space.measure())
}

/// Weight of one frequency variable: `1/L`, or `1/n` in counting mode.
fn freq_weight(a: &Axis, measure: Measure) -> f64 {
    match measure {
        Measure::Riemann => 1.0 / a.extent,
        Measure::Counting => 1.0 / a.n as f64,
    }
}

fn common_grid(fs: &[&CArray]) -> Result<Grid> {
    let first = fs.first().ok_or_else(|| Error::Shape("no input functions".into()))?;
    let g = first.grid().clone();
    if g.rank() != 1 {
        return Err(Error::Shape("operators act on one-axis signals".into()));
    }
    if fs.iter().any(|f| !f.grid().same_lattice(&g)) {
        return Err(Error::Shape("input functions live on different grids".into()));
    }
    Ok(g)
}

/// Applies `T_σ` with the default dense budget.
pub fn apply(sigma: &SymbolSpec, fs: &[CArray]) -> Result<OperatorResult> {
    apply_with_budget(sigma, fs, DENSE_BUDGET)
}

/// x-independent symbols on even grids go through the fast path: products
/// `τ(ξ) ∏f̂_k(ξ_k)` are binned by `S(ξ)` (cyclically, which is exact for
/// `x` on the lattice) and one inverse transform finishes. Everything else
/// is a direct sum, refused above `budget` terms.
pub fn apply_with_budget(sigma: &SymbolSpec, fs: &[CArray], budget: usize) -> Result<OperatorResult> {
    if fs.len() != sigma.m {
        return Err(Error::Shape(format!("symbol of degree {} applied to {} functions", sigma.m, fs.len())));
    }
    let refs: Vec<&CArray> = fs.iter().collect();
    let space = common_grid(&refs)?;
    let m = sigma.m;
    let a = *space.axis(0);
    let n = a.n;
    let wf = freq_weight(&a, space.measure());
    let hats: Vec<CArray> = fs.iter().map(fourier).collect::<Result<_>>()?;
    let sgrid = symbol_grid(&space, m)?;
    let fgrid = sgrid.select(&(1..=m).collect::<Vec<_>>());

    if sigma.is_x_independent() && n % 2 == 0 {
        let tau = sigma.multiplier(&fgrid)?.expect("x-independent symbols have a multiplier");
        let mut bins = vec![C64::new(0.0, 0.0); n];
        let shape = fgrid.shape();
        let mut idx = vec![0; m];
        for (o, t) in tau.data().iter().enumerate() {
            if *t == C64::new(0.0, 0.0) {
                continue;
            }
            unravel(o, &shape, &mut idx);
            let mut s = idx[0];
            let mut prod = hats[0].data()[idx[0]];
            for k in 1..m {
                s = add_index(s, idx[k], n);
                prod *= hats[k].data()[idx[k]];
            }
            bins[s] += t * prod;
        }
        let binned = CArray::new(Grid::from_axes(vec![a.dual()], space.measure())?, bins)?;
        let out = inverse_fourier(&binned, &space)?.scale(C64::new(math::powi(wf, m - 1), 0.0));
        return Ok(OperatorResult { output: out, path: OpPath::MultiplierFast, form: sigma.name() });
    }

    let needed = sgrid.len();
    if needed > budget {
        return Err(Error::Budget { needed, cap: budget });
    }
    let samples = sigma.sample(&sgrid)?;
    let fa = a.dual();
    let nf = fgrid.len();
    let shape = fgrid.shape();
    let mut idx = vec![0; m];
    let mut prods = Vec::with_capacity(nf);
    let mut sums = Vec::with_capacity(nf);
    for o in 0..nf {
        unravel(o, &shape, &mut idx);
        let mut p = C64::new(1.0, 0.0);
        let mut s = 0.0;
        for k in 0..m {
            p *= hats[k].data()[idx[k]];
            s += fa.coord(idx[k]);
        }
        prods.push(p);
        sums.push(s);
    }
    let scale = math::powi(wf, m);
    let out: Vec<C64> = (0..n)
        .map(|j| {
            let x = a.coord(j);
            let row = &samples.data()[j * nf..(j + 1) * nf];
            let mut acc = C64::new(0.0, 0.0);
            for o in 0..nf {
                acc += cis_turns(x * sums[o]) * row[o] * prods[o];
            }
            acc * scale
        })
        .collect();
    Ok(OperatorResult { output: CArray::new(space, out)?, path: OpPath::DenseQuadrature, form: sigma.name() })
}

fn pv_setup(fs: &[&CArray]) -> Result<(Grid, usize, Vec<f64>)> {
    let g = common_grid(fs)?;
    let a = *g.axis(0);
    if a.n % 2 != 0 || a.n < 4 {
        return Err(Error::InvalidGrid(format!(
            "principal values need a ±-symmetric grid (even n >= 4), got n={}",
            a.n
        )));
    }
    let w = g.axis_weight(0);
    let h = a.step();
    // kernel weight w / y_k for y_k = k h, k = 1 .. n/2 - 1 (0 and the antipode are skipped)
    let kern = (1..a.n / 2).map(|k| w / (k as f64 * h)).collect();
    Ok((g, a.n, kern))
}

#[inline]
fn shift(j: usize, k: isize, n: usize) -> usize {
    (j as isize + k).rem_euclid(n as isize) as usize
}

/// `BH(f, g)(x) = p.v. Σ_{y≠0} f(x+y) g(x-y) h/y`, cyclic.
pub fn bht_direct(f: &CArray, g: &CArray) -> Result<OperatorResult> {
    let (grid, n, kern) = pv_setup(&[f, g])?;
    let (fd, gd) = (f.data(), g.data());
    let out = (0..n)
        .map(|j| {
            let mut acc = C64::new(0.0, 0.0);
            for (i, w) in kern.iter().enumerate() {
                let k = (i + 1) as isize;
                let (p, q) = (shift(j, k, n), shift(j, -k, n));
                acc += (fd[p] * gd[q] - fd[q] * gd[p]) * *w;
            }
            acc
        })
        .collect();
    Ok(OperatorResult { output: CArray::new(grid, out)?, path: OpPath::PvDirect, form: "bht" })
}

/// `TH(f, g, h)(x) = p.v. Σ_{t≠0} f(x-t) g(x+t) h(x+2t) h/t`, cyclic.
pub fn tht_direct(f: &CArray, g: &CArray, h3: &CArray) -> Result<OperatorResult> {
    let (grid, n, kern) = pv_setup(&[f, g, h3])?;
    let (fd, gd, hd) = (f.data(), g.data(), h3.data());
    let out = (0..n)
        .map(|j| {
            let mut acc = C64::new(0.0, 0.0);
            for (i, w) in kern.iter().enumerate() {
                let k = (i + 1) as isize;
                let plus = fd[shift(j, -k, n)] * gd[shift(j, k, n)] * hd[shift(j, 2 * k, n)];
                let minus = fd[shift(j, k, n)] * gd[shift(j, -k, n)] * hd[shift(j, -2 * k, n)];
                acc += (plus - minus) * *w;
            }
            acc
        })
        .collect();
    Ok(OperatorResult { output: CArray::new(grid, out)?, path: OpPath::PvDirect, form: "tht" })
}

/// `(⟨T_σf, g⟩, ⟨σ, conj R(f, g)⟩)`, the left side through [`apply`] and an
/// inner product, the right side through the Rihaczek transform and a plain
/// weighted sum over the symbol grid.
pub fn duality_check(sigma: &SymbolSpec, fs: &[CArray], g: &CArray) -> Result<(C64, C64)> {
    let left = apply(sigma, fs)?.output.inner(g)?;
    let r = rihaczek(fs, g)?;
    let sgrid = r.grid();
    if sgrid.len() > DENSE_BUDGET {
        return Err(Error::Budget { needed: sgrid.len(), cap: DENSE_BUDGET });
    }
    let s = sigma.sample(sgrid)?;
    let a = *sgrid.axis(0);
    let w = sgrid.axis_weight(0) * math::powi(freq_weight(&a, sgrid.measure()), sigma.m);
    let right: C64 = s.data().iter().zip(r.data()).map(|(x, y)| x * y).sum::<C64>() * w;
    Ok((left, right))
}
