//! Fourier transform, STFT, symplectic transform, symbol STFT, Rihaczek
//! transform and the `T_A` change of variables, all on centred cyclic grids.
//!
//! Conventions: `𝓕f(ξ) = ∫ f(x) e^{-2πi xξ} dx`; frequency axes carry `n`
//! points at spacing `1/L`, centred so that index `n/2` is frequency 0.
//! Translations are cyclic, which needs even `n` so that `x - t` stays on the
//! lattice.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fft::{dft, for_each_line, Direction};
use crate::lattice::{ravel, unravel, wrap, Axis, CArray, Grid, Measure};
use crate::math::{self, cis_turns};
use crate::C64;

/// Default cap on dense symbol-STFT output.
pub const DENSE_CAP: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    Gaussian,
    Psi,
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub samples: CArray,
    pub kind: WindowKind,
}

impl Window {
    /// `e^{-|x|²}` sampled on `grid`.
    pub fn gaussian(grid: &Grid) -> Self {
        let samples = CArray::sample(grid, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            C64::new(math::exp(-r2), 0.0)
        })
        .expect("gaussian samples are finite");
        Window { samples, kind: WindowKind::Gaussian }
    }

    pub fn custom(samples: CArray) -> Self {
        Window { samples, kind: WindowKind::Custom }
    }

    /// Tensor product of 1-axis windows, first factor on the first axis.
    pub fn tensor(parts: &[&Window]) -> Result<Window> {
        let (first, rest) = parts.split_first().ok_or_else(|| Error::Shape("empty window product".into()))?;
        let mut acc = first.samples.clone();
        for w in rest {
            acc = acc.tensor(&w.samples)?;
        }
        let kind = if parts.iter().all(|w| w.kind == first.kind) { first.kind } else { WindowKind::Custom };
        Ok(Window { samples: acc, kind })
    }
}

fn require_even(grid: &Grid, what: &str) -> Result<()> {
    if let Some(a) = grid.axes().iter().find(|a| a.n % 2 != 0) {
        return Err(Error::InvalidGrid(format!("{what} needs even axis lengths (got n={})", a.n)));
    }
    Ok(())
}

/// `out_k = Σ_j a_j e^{s·2πi (j-c)(k-c)/n}` with `c = n/2`, i.e. the centred
/// kernel `e^{s·2πi x_j ξ_k}` up to the quadrature factor.
fn centred_line(line: &mut [C64], dir: Direction) {
    let n = line.len();
    let nf = n as f64;
    let c = nf / 2.0;
    let s = match dir {
        Direction::Forward => -1.0,
        Direction::Backward => 1.0,
    };
    for (j, v) in line.iter_mut().enumerate() {
        *v *= cis_turns(-s * (j as f64) * c / nf);
    }
    dft(line, dir);
    let tail = cis_turns(s * c * c / nf);
    for (k, v) in line.iter_mut().enumerate() {
        *v *= cis_turns(-s * (k as f64) * c / nf) * tail;
    }
}

/// Centred transforms along the axes with `Some(direction)`.
fn transform_axes(data: &mut [C64], shape: &[usize], dirs: &[Option<Direction>]) {
    for (axis, d) in dirs.iter().enumerate() {
        if let Some(dir) = *d {
            for_each_line(data, shape, axis, |l| centred_line(l, dir));
        }
    }
}

fn inverse_factor(grid: &Grid, axes: impl Iterator<Item = usize>) -> f64 {
    axes.map(|k| {
        let a = grid.axis(k);
        match grid.measure() {
            Measure::Riemann => 1.0 / a.extent,
            Measure::Counting => 1.0 / a.n as f64,
        }
    })
    .product()
}

/// Forward transform over every axis; output lives on `f.grid().dual()`.
pub fn fourier(f: &CArray) -> Result<CArray> {
    let grid = f.grid();
    let mut data = f.data().to_vec();
    transform_axes(&mut data, &grid.shape(), &vec![Some(Direction::Forward); grid.rank()]);
    let w = grid.quad_weight();
    for v in &mut data {
        *v *= w;
    }
    CArray::new(grid.dual(), data)
}

/// Inverse of [`fourier`]; `space` is the grid the result lives on.
pub fn inverse_fourier(fhat: &CArray, space: &Grid) -> Result<CArray> {
    if fhat.grid().shape() != space.shape() {
        return Err(Error::Shape("inverse transform must keep the shape".into()));
    }
    let mut data = fhat.data().to_vec();
    transform_axes(&mut data, &space.shape(), &vec![Some(Direction::Backward); space.rank()]);
    let w = inverse_factor(space, 0..space.rank());
    for v in &mut data {
        *v *= w;
    }
    CArray::new(space.clone(), data)
}

/// Direct O(N²) evaluation of [`fourier`], kept for cross-checks.
pub fn fourier_direct(f: &CArray) -> CArray {
    let grid = f.grid();
    let dual = grid.dual();
    let w = grid.quad_weight();
    let out = (0..grid.len())
        .map(|k| {
            let xi = dual.coords(k);
            let mut acc = C64::new(0.0, 0.0);
            for (j, v) in f.data().iter().enumerate() {
                let x = grid.coords(j);
                let ph: f64 = x.iter().zip(&xi).map(|(a, b)| a * b).sum();
                acc += v * cis_turns(-ph);
            }
            acc * w
        })
        .collect();
    CArray::from_parts(dual, out)
}

/// Index of `x_j - t_a` on an even axis.
#[inline]
fn diff_index(j: usize, a: usize, n: usize) -> usize {
    wrap(j as isize - a as isize + (n / 2) as isize, n)
}

/// Index of `x_j + t_a` on an even axis.
#[inline]
fn sum_index(j: usize, a: usize, n: usize) -> usize {
    wrap(j as isize + a as isize - (n / 2) as isize, n)
}

/// `V_φf(t, ν) = Σ_x f(x) e^{-2πi x·ν} φ(x - t) · dx`, axes `(t…, ν…)`.
pub fn stft(f: &CArray, phi: &Window) -> Result<CArray> {
    let grid = f.grid();
    if !grid.same_lattice(phi.samples.grid()) {
        return Err(Error::Shape("signal and window live on different lattices".into()));
    }
    require_even(grid, "stft")?;
    let shape = grid.shape();
    let d = shape.len();
    let n_pts = grid.len();
    let st = grid.strides();
    let w = grid.quad_weight();
    let out_grid = grid.concat(&grid.dual())?;
    let mut out = Vec::with_capacity(n_pts * n_pts);
    let mut ia = vec![0; d];
    let mut ij = vec![0; d];
    let mut iw = vec![0; d];
    let mut buf = vec![C64::new(0.0, 0.0); n_pts];
    for a in 0..n_pts {
        unravel(a, &shape, &mut ia);
        for (j, b) in buf.iter_mut().enumerate() {
            unravel(j, &shape, &mut ij);
            for k in 0..d {
                iw[k] = diff_index(ij[k], ia[k], shape[k]);
            }
            *b = f.data()[j] * phi.samples.data()[ravel(&iw, &st)];
        }
        transform_axes(&mut buf, &shape, &vec![Some(Direction::Forward); d]);
        out.extend(buf.iter().map(|v| v * w));
    }
    CArray::new(out_grid, out)
}

/// Direct evaluation of one STFT value, used as an oracle.
pub fn stft_point(f: &CArray, phi: &Window, t: &[usize], nu: &[usize]) -> C64 {
    let grid = f.grid();
    let shape = grid.shape();
    let dual = grid.dual();
    let mut acc = C64::new(0.0, 0.0);
    let mut ij = vec![0; shape.len()];
    let mut iw = vec![0; shape.len()];
    for j in 0..grid.len() {
        unravel(j, &shape, &mut ij);
        let mut ph = 0.0;
        for k in 0..shape.len() {
            iw[k] = diff_index(ij[k], t[k], shape[k]);
            ph += grid.axis(k).coord(ij[k]) * dual.axis(k).coord(nu[k]);
        }
        acc += f.data()[j] * phi.samples.at(&iw) * cis_turns(-ph);
    }
    acc * grid.quad_weight()
}

/// Grid of `(t₁..t_m, ν)` for a symbol grid `(x, ξ₁..ξ_m)`.
fn symplectic_grid(grid: &Grid) -> Result<Grid> {
    let r = grid.rank();
    let mut axes: Vec<Axis> = (1..r).map(|k| grid.axis(k).dual()).collect();
    axes.push(grid.axis(0).dual());
    Grid::from_axes(axes, grid.measure())
}

/// `𝓕_sF(t, ν) = ∬ F(x, ξ) e^{2πi(ξ·t - xν)} dξ dx` for `F` over `(x, ξ₁..ξ_m)`;
/// output axes `(t₁..t_m, ν)`.
pub fn symplectic_fourier(f: &CArray) -> Result<CArray> {
    let grid = f.grid();
    if grid.rank() < 2 {
        return Err(Error::Shape("symplectic transform needs an x axis and at least one ξ axis".into()));
    }
    let out_grid = symplectic_grid(grid)?;
    let data = symplectic_raw(f.data().to_vec(), &grid.shape(), grid.quad_weight());
    CArray::new(out_grid, data)
}

/// Transforms in place and moves the ν axis (input axis 0) to the end.
fn symplectic_raw(mut data: Vec<C64>, shape: &[usize], w: f64) -> Vec<C64> {
    let r = shape.len();
    let mut dirs = vec![Some(Direction::Backward); r];
    dirs[0] = Some(Direction::Forward);
    transform_axes(&mut data, shape, &dirs);
    let nx = shape[0];
    let rest: usize = shape[1..].iter().product();
    let mut out = vec![C64::new(0.0, 0.0); data.len()];
    for nu in 0..nx {
        for t in 0..rest {
            out[t * nx + nu] = data[nu * rest + t] * w;
        }
    }
    out
}

/// Direct-sum oracle for [`symplectic_fourier`].
pub fn symplectic_direct(f: &CArray) -> Result<CArray> {
    let grid = f.grid();
    let out_grid = symplectic_grid(grid)?;
    let r = grid.rank();
    let w = grid.quad_weight();
    let data = (0..out_grid.len())
        .map(|o| {
            let tv = out_grid.coords(o);
            let nu = tv[r - 1];
            let mut acc = C64::new(0.0, 0.0);
            for (j, v) in f.data().iter().enumerate() {
                let c = grid.coords(j);
                let ph: f64 = (1..r).map(|k| c[k] * tv[k - 1]).sum::<f64>() - c[0] * nu;
                acc += v * cis_turns(ph);
            }
            acc * w
        })
        .collect();
    CArray::new(out_grid, data)
}

fn check_symbol_window(f: &CArray, phi: &Window) -> Result<()> {
    if !f.grid().same_lattice(phi.samples.grid()) {
        return Err(Error::Shape("symbol and window live on different lattices".into()));
    }
    if f.rank() < 2 {
        return Err(Error::Shape("symbols need an x axis and at least one ξ axis".into()));
    }
    require_even(f.grid(), "symbol stft")
}

/// `𝓕_s(F · T_{(x,ξ)}Φ)` at one translate; axes `(t₁..t_m, ν)`.
pub fn symbol_stft_block(f: &CArray, phi: &Window, at: &[usize]) -> Result<CArray> {
    check_symbol_window(f, phi)?;
    let grid = f.grid();
    let shape = grid.shape();
    let st = grid.strides();
    let r = shape.len();
    let mut ij = vec![0; r];
    let mut iw = vec![0; r];
    let buf: Vec<C64> = (0..grid.len())
        .map(|j| {
            unravel(j, &shape, &mut ij);
            for k in 0..r {
                iw[k] = diff_index(ij[k], at[k], shape[k]);
            }
            f.data()[j] * phi.samples.data()[ravel(&iw, &st)]
        })
        .collect();
    CArray::new(symplectic_grid(grid)?, symplectic_raw(buf, &shape, grid.quad_weight()))
}

/// Output grid of [`symbol_stft`]: `(x, t₁..t_m, ξ₁..ξ_m, ν)`.
pub fn symbol_stft_grid(grid: &Grid) -> Result<Grid> {
    let r = grid.rank();
    let mut axes = vec![*grid.axis(0)];
    axes.extend((1..r).map(|k| grid.axis(k).dual()));
    axes.extend((1..r).map(|k| *grid.axis(k)));
    axes.push(grid.axis(0).dual());
    Grid::from_axes(axes, grid.measure())
}

/// Dense symbol STFT `𝒱_ΦF(x, t, ξ, ν)`; refuses outputs above `cap` points.
pub fn symbol_stft(f: &CArray, phi: &Window, cap: usize) -> Result<CArray> {
    check_symbol_window(f, phi)?;
    let grid = f.grid();
    let npts = grid.len();
    let needed = npts.saturating_mul(npts);
    if needed > cap {
        return Err(Error::Budget { needed, cap });
    }
    let out_grid = symbol_stft_grid(grid)?;
    let shape = grid.shape();
    let m = shape.len() - 1;
    let nx = shape[0];
    let n_xi: usize = shape[1..].iter().product();
    let n_t = n_xi;
    let mut out = vec![C64::new(0.0, 0.0); needed];
    let mut at = vec![0; m + 1];
    for a in 0..npts {
        unravel(a, &shape, &mut at);
        let block = symbol_stft_block(f, phi, &at)?;
        let x = at[0];
        let xi = a % n_xi;
        // block index: t * nx + ν ; output index: ((x * n_t + t) * n_xi + xi) * nx + ν
        for t in 0..n_t {
            let dst = ((x * n_t + t) * n_xi + xi) * nx;
            out[dst..dst + nx].copy_from_slice(&block.data()[t * nx..(t + 1) * nx]);
        }
    }
    CArray::new(out_grid, out)
}

/// Slice of the symbol STFT at fixed `(ξ, ν)`, as an array over `(x, t₁..t_m)`.
pub fn symbol_stft_slice(f: &CArray, phi: &Window, xi: &[usize], nu: usize) -> Result<CArray> {
    check_symbol_window(f, phi)?;
    let grid = f.grid();
    let r = grid.rank();
    let mut axes = vec![*grid.axis(0)];
    axes.extend((1..r).map(|k| grid.axis(k).dual()));
    let out_grid = Grid::from_axes(axes, grid.measure())?;
    let nx = grid.axis(0).n;
    let n_t = grid.len() / nx;
    let mut out = Vec::with_capacity(out_grid.len());
    let mut at = vec![0; r];
    at[1..].copy_from_slice(xi);
    for x in 0..nx {
        at[0] = x;
        let block = symbol_stft_block(f, phi, &at)?;
        out.extend((0..n_t).map(|t| block.data()[t * nx + nu]));
    }
    CArray::new(out_grid, out)
}

/// Rihaczek transform `R(f, g)(x, ξ) = e^{2πi x S(ξ)} ∏ f̂_k(ξ_k) · conj(g(x))`.
pub fn rihaczek(fs: &[CArray], g: &CArray) -> Result<CArray> {
    if fs.is_empty() {
        return Err(Error::Shape("rihaczek needs at least one f".into()));
    }
    let grid = g.grid();
    if grid.rank() != 1 || fs.iter().any(|f| !f.grid().same_lattice(grid)) {
        return Err(Error::Shape("rihaczek inputs must share one 1-axis grid".into()));
    }
    let hats: Vec<CArray> = fs.iter().map(fourier).collect::<Result<_>>()?;
    let xa = *grid.axis(0);
    let fa = xa.dual();
    let m = fs.len();
    let mut axes = vec![xa];
    axes.extend(core::iter::repeat(fa).take(m));
    let out_grid = Grid::from_axes(axes, grid.measure())?;
    let shape = out_grid.shape();
    let mut idx = vec![0; m + 1];
    let data = (0..out_grid.len())
        .map(|o| {
            unravel(o, &shape, &mut idx);
            let x = xa.coord(idx[0]);
            let mut s = 0.0;
            let mut prod = C64::new(1.0, 0.0);
            for k in 0..m {
                s += fa.coord(idx[k + 1]);
                prod *= hats[k].data()[idx[k + 1]];
            }
            cis_turns(x * s) * prod * g.data()[idx[0]].conj()
        })
        .collect();
    CArray::new(out_grid, data)
}

/// `(T_A H)(x, t₁..t_m) = H(x - t₁, …, x - t_m, x)` for `H` over `(s₁..s_m, x)`.
pub fn t_a(h: &CArray) -> Result<CArray> {
    let grid = h.grid();
    require_even(grid, "T_A")?;
    let r = grid.rank();
    let a0 = *grid.axis(0);
    if grid.axes().iter().any(|a| *a != a0) {
        return Err(Error::Shape("T_A needs identical axes".into()));
    }
    let n = a0.n;
    let shape = grid.shape();
    let st = grid.strides();
    let mut o = vec![0; r];
    let mut src = vec![0; r];
    let data = (0..grid.len())
        .map(|flat| {
            unravel(flat, &shape, &mut o);
            let x = o[0];
            for k in 0..r - 1 {
                src[k] = diff_index(x, o[k + 1], n);
            }
            src[r - 1] = x;
            h.data()[ravel(&src, &st)]
        })
        .collect();
    Ok(CArray::from_parts(grid.clone(), data))
}

/// Inverse of [`t_a`]: `H(s, x) = G(x, x - s₁, …, x - s_m)`.
pub fn t_a_inverse(g: &CArray) -> Result<CArray> {
    let grid = g.grid();
    require_even(grid, "T_A")?;
    let r = grid.rank();
    let n = grid.axis(0).n;
    let shape = grid.shape();
    let st = grid.strides();
    let mut o = vec![0; r];
    let mut src = vec![0; r];
    let data = (0..grid.len())
        .map(|flat| {
            unravel(flat, &shape, &mut o);
            let x = o[r - 1];
            src[0] = x;
            for k in 0..r - 1 {
                src[k + 1] = diff_index(x, o[k], n);
            }
            g.data()[ravel(&src, &st)]
        })
        .collect();
    Ok(CArray::from_parts(grid.clone(), data))
}

/// Index of `a + b` for two frequency (or two space) coordinates on the same even axis.
pub fn add_index(a: usize, b: usize, n: usize) -> usize {
    sum_index(a, b, n)
}

/// Index of `a - b` on the same even axis.
pub fn sub_index(a: usize, b: usize, n: usize) -> usize {
    diff_index(a, b, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{make_grid, neg_index};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(grid: &Grid, rng: &mut ChaCha8Rng) -> CArray {
        let data = (0..grid.len()).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        CArray::new(grid.clone(), data).unwrap()
    }

    fn max_diff(a: &CArray, b: &CArray) -> f64 {
        a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn gaussian_is_self_dual() {
        let g = make_grid(&[(256, 16.0)], Measure::Riemann).unwrap();
        let f = CArray::sample(&g, |x| C64::new((-core::f64::consts::PI * x[0] * x[0]).exp(), 0.0)).unwrap();
        let fh = fourier(&f).unwrap();
        let err = (0..256)
            .map(|k| {
                let xi = fh.grid().axis(0).coord(k);
                (fh.data()[k] - C64::new((-core::f64::consts::PI * xi * xi).exp(), 0.0)).norm()
            })
            .fold(0.0, f64::max);
        assert!(err <= 1e-6, "{err}");
    }

    #[test]
    fn fast_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (axes, mode) in [
            (vec![(16, 4.0)], Measure::Riemann),
            (vec![(6, 3.0)], Measure::Counting),
            (vec![(8, 2.0), (6, 1.5)], Measure::Riemann),
        ] {
            let g = make_grid(&axes, mode).unwrap();
            let f = random(&g, &mut rng);
            let a = fourier(&f).unwrap();
            let b = fourier_direct(&f);
            let scale = b.max_abs();
            assert!(max_diff(&a, &b) <= 1e-10 * scale);
            let back = inverse_fourier(&a, &g).unwrap();
            assert!(max_diff(&back, &f) <= 1e-10);
        }
    }

    #[test]
    fn parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for mode in [Measure::Riemann, Measure::Counting] {
            let g = make_grid(&[(32, 5.0)], mode).unwrap();
            let (f, h) = (random(&g, &mut rng), random(&g, &mut rng));
            let lhs = f.inner(&h).unwrap();
            let mut rhs = fourier(&f).unwrap().inner(&fourier(&h).unwrap()).unwrap();
            if mode == Measure::Counting {
                rhs /= 32.0;
            }
            assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn stft_against_point_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = make_grid(&[(16, 4.0)], Measure::Riemann).unwrap();
        let f = random(&g, &mut rng);
        let phi = Window::gaussian(&g);
        let v = stft(&f, &phi).unwrap();
        for t in 0..16 {
            for nu in 0..16 {
                let want = stft_point(&f, &phi, &[t], &[nu]);
                assert!((v.at(&[t, nu]) - want).norm() <= 1e-10 * (1.0 + want.norm()));
            }
        }
        assert!(stft(&CArray::zeros(g.clone()), &phi).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn stft_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = make_grid(&[(16, 8.0)], Measure::Riemann).unwrap();
        let f = random(&g, &mut rng);
        let phi = Window::gaussian(&g);
        let a = 5isize;
        let v = stft(&f, &phi).unwrap();
        let vt = stft(&f.translate(&[a]), &phi).unwrap();
        let h = g.axis(0).step();
        for t in 0..16 {
            for nu in 0..16 {
                let xi = vt.grid().axis(1).coord(nu);
                let want = cis_turns(-(a as f64) * h * xi) * v.at(&[wrap(t as isize - a, 16), nu]);
                assert!((vt.at(&[t, nu]) - want).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn stft_of_constant() {
        let g = make_grid(&[(16, 8.0)], Measure::Riemann).unwrap();
        let one = CArray::sample(&g, |_| C64::new(1.0, 0.0)).unwrap();
        let phi = Window::gaussian(&g);
        let v = stft(&one, &phi).unwrap();
        let phat = fourier(&phi.samples).unwrap();
        for t in 0..16 {
            for nu in 0..16 {
                assert!((v.at(&[t, nu]).norm() - phat.data()[nu].norm()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn symplectic_oracle_and_separable() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g = make_grid(&[(8, 4.0), (8, 2.0)], Measure::Riemann).unwrap();
        let f = random(&g, &mut rng);
        let a = symplectic_fourier(&f).unwrap();
        let b = symplectic_direct(&f).unwrap();
        assert!(max_diff(&a, &b) <= 1e-10 * b.max_abs());

        // F = u(x) v(ξ) ↦ û(ν) · v̌(t)
        let gx = make_grid(&[(8, 4.0)], Measure::Riemann).unwrap();
        let gxi = make_grid(&[(8, 2.0)], Measure::Riemann).unwrap();
        let u = random(&gx, &mut rng);
        let v = random(&gxi, &mut rng);
        let sep = symplectic_fourier(&u.tensor(&v).unwrap()).unwrap();
        let uh = fourier(&u).unwrap();
        let vc = fourier(&v.conj()).unwrap().conj();
        for t in 0..8 {
            for nu in 0..8 {
                let want = uh.data()[nu] * vc.data()[t];
                assert!((sep.at(&[t, nu]) - want).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn symbol_stft_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g = make_grid(&[(6, 3.0), (6, 2.0)], Measure::Riemann).unwrap();
        let f = random(&g, &mut rng);
        let ax = make_grid(&[(6, 3.0)], Measure::Riemann).unwrap();
        let axi = make_grid(&[(6, 2.0)], Measure::Riemann).unwrap();
        let phi = Window::tensor(&[&Window::gaussian(&ax), &Window::gaussian(&axi)]).unwrap();
        let sv = symbol_stft(&f, &phi, DENSE_CAP).unwrap();
        let v = stft(&f, &phi).unwrap();
        // 𝒱(x, t, ξ, ν) = V(x, ξ, ν, -t), and a direct-sum spot check.
        let w = g.quad_weight();
        for x in 0..6 {
            for t in 0..6 {
                for xi in 0..6 {
                    for nu in 0..6 {
                        let a = sv.at(&[x, t, xi, nu]);
                        let b = v.at(&[x, xi, nu, neg_index(t, 6)]);
                        assert!((a - b).norm() <= 1e-10, "{a} {b}");
                    }
                }
            }
        }
        let (x, t, xi, nu) = (2, 5, 1, 4);
        let tt = sv.grid().axis(1).coord(t);
        let nn = sv.grid().axis(3).coord(nu);
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..6 {
            for k in 0..6 {
                let (xv, kv) = (g.axis(0).coord(j), g.axis(1).coord(k));
                let win = phi.samples.at(&[diff_index(j, x, 6), diff_index(k, xi, 6)]);
                acc += f.at(&[j, k]) * win * cis_turns(kv * tt - xv * nn);
            }
        }
        assert!((sv.at(&[x, t, xi, nu]) - acc * w).norm() <= 1e-9);

        let slice = symbol_stft_slice(&f, &phi, &[xi], nu).unwrap();
        for x in 0..6 {
            for t in 0..6 {
                assert_eq!(slice.at(&[x, t]), sv.at(&[x, t, xi, nu]));
            }
        }
        assert!(matches!(symbol_stft(&f, &phi, 100), Err(Error::Budget { .. })));
    }

    #[test]
    fn symbol_stft_of_constant() {
        let g = make_grid(&[(6, 3.0), (6, 3.0), (6, 3.0)], Measure::Riemann).unwrap();
        let one = CArray::sample(&g, |_| C64::new(1.0, 0.0)).unwrap();
        let a1 = make_grid(&[(6, 3.0)], Measure::Riemann).unwrap();
        let gw = Window::gaussian(&a1);
        let phi = Window::tensor(&[&gw, &gw, &gw]).unwrap();
        let fs = symplectic_fourier(&phi.samples).unwrap();
        let sv = symbol_stft(&one, &phi, DENSE_CAP).unwrap();
        let sh = sv.grid().shape();
        let mut idx = vec![0; 6];
        for o in 0..sv.len() {
            unravel(o, &sh, &mut idx);
            let want = fs.at(&[idx[1], idx[2], idx[5]]).norm();
            assert!((sv.data()[o].norm() - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn t_a_roundtrip_and_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = make_grid(&[(8, 4.0), (8, 4.0), (8, 4.0)], Measure::Counting).unwrap();
        let h = random(&g, &mut rng);
        assert_eq!(t_a_inverse(&t_a(&h).unwrap()).unwrap(), h);
        let delta = CArray::sample(&g, |x| C64::new(if x.iter().all(|v| *v == 0.0) { 1.0 } else { 0.0 }, 0.0)).unwrap();
        let d = t_a(&delta).unwrap();
        assert_eq!(d.at(&[4, 4, 4]), C64::new(1.0, 0.0));
        assert_eq!(d.data().iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    #[test]
    fn rihaczek_alternate_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = make_grid(&[(8, 4.0)], Measure::Riemann).unwrap();
        let fs = [random(&g, &mut rng), random(&g, &mut rng)];
        let gg = random(&g, &mut rng);
        let r = rihaczek(&fs, &gg).unwrap();
        // 𝓕_{t→ξ}(f₁(t₁+x) f₂(t₂+x)) · conj(g(x))
        let g2 = make_grid(&[(8, 4.0), (8, 4.0)], Measure::Riemann).unwrap();
        for x in 0..8 {
            let shifted = CArray::sample(&g2, |_| C64::new(0.0, 0.0)).unwrap();
            let data: Vec<C64> = (0..64)
                .map(|o| fs[0].data()[sum_index(o / 8, x, 8)] * fs[1].data()[sum_index(o % 8, x, 8)])
                .collect();
            let ft = fourier(&CArray::new(shifted.grid().clone(), data).unwrap()).unwrap();
            for a in 0..8 {
                for b in 0..8 {
                    let want = ft.at(&[a, b]) * gg.data()[x].conj();
                    assert!((r.at(&[x, a, b]) - want).norm() <= 1e-9);
                }
            }
        }
        assert_eq!(rihaczek(&fs, &CArray::zeros(g)).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn odd_lengths_rejected_for_translations() {
        let g = make_grid(&[(5, 1.0)], Measure::Riemann).unwrap();
        assert!(stft(&CArray::zeros(g.clone()), &Window::gaussian(&g)).is_err());
    }
}
