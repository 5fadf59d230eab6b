//! Uniform periodic lattices and complex samples on them.
//!
//! Axis `j` of length `n` and extent `L` carries the points `x_j = -L/2 + j h`
//! with `h = L / n`. All translations wrap modulo `n`. Arrays are row-major:
//! the last axis varies fastest.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    /// Each point carries the cell volume; sums approximate integrals.
    Riemann,
    /// Each point carries weight one; sums are exact on the cyclic group.
    Counting,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub n: usize,
    pub extent: f64,
}

impl Axis {
    pub fn step(&self) -> f64 {
        self.extent / self.n as f64
    }

    pub fn coord(&self, j: usize) -> f64 {
        -0.5 * self.extent + j as f64 * self.step()
    }

    /// The dual axis: `n` frequencies at spacing `1/L`, centred at zero.
    pub fn dual(&self) -> Axis {
        Axis { n: self.n, extent: 1.0 / self.step() }
    }

    /// Index of the coordinate 0, which exists only for even `n`.
    pub fn origin(&self) -> Option<usize> {
        (self.n % 2 == 0).then_some(self.n / 2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
    measure: Measure,
}

impl Grid {
    pub fn new(axes: &[(usize, f64)], measure: Measure) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidGrid("a grid needs at least one axis".into()));
        }
        let mut out = Vec::with_capacity(axes.len());
        for (k, &(n, extent)) in axes.iter().enumerate() {
            if n < 2 {
                return Err(Error::InvalidGrid(format!("axis {k}: n_points={n} < 2")));
            }
            if !(extent > 0.0) || !extent.is_finite() {
                return Err(Error::InvalidGrid(format!("axis {k}: extent {extent} must be positive")));
            }
            out.push(Axis { n, extent });
        }
        Ok(Grid { axes: out, measure })
    }

    /// `rank` copies of the same axis.
    pub fn cube(rank: usize, n: usize, extent: f64, measure: Measure) -> Result<Self> {
        Grid::new(&vec![(n, extent); rank], measure)
    }

    pub fn from_axes(axes: Vec<Axis>, measure: Measure) -> Result<Self> {
        let raw: Vec<(usize, f64)> = axes.iter().map(|a| (a.n, a.extent)).collect();
        Grid::new(&raw, measure)
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, k: usize) -> &Axis {
        &self.axes[k]
    }

    pub fn rank(&self) -> usize {
        self.axes.len()
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.n).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn strides(&self) -> Vec<usize> {
        strides(&self.shape())
    }

    /// Scalar standing in for `dx` on every discrete sum over the whole grid.
    pub fn quad_weight(&self) -> f64 {
        match self.measure {
            Measure::Riemann => self.axes.iter().map(Axis::step).product(),
            Measure::Counting => 1.0,
        }
    }

    /// Quadrature weight of a single axis.
    pub fn axis_weight(&self, k: usize) -> f64 {
        match self.measure {
            Measure::Riemann => self.axes[k].step(),
            Measure::Counting => 1.0,
        }
    }

    pub fn volume(&self) -> f64 {
        self.axes.iter().map(|a| a.extent).product()
    }

    pub fn dual(&self) -> Grid {
        Grid { axes: self.axes.iter().map(Axis::dual).collect(), measure: self.measure }
    }

    /// Sub-grid made of the listed axes, in the given order.
    pub fn select(&self, which: &[usize]) -> Grid {
        Grid { axes: which.iter().map(|&k| self.axes[k]).collect(), measure: self.measure }
    }

    pub fn concat(&self, other: &Grid) -> Result<Grid> {
        if self.measure != other.measure {
            return Err(Error::InvalidGrid("measure modes differ".into()));
        }
        let mut axes = self.axes.clone();
        axes.extend_from_slice(&other.axes);
        Ok(Grid { axes, measure: self.measure })
    }

    pub fn coords(&self, flat: usize) -> Vec<f64> {
        let mut idx = vec![0; self.rank()];
        unravel(flat, &self.shape(), &mut idx);
        idx.iter().zip(&self.axes).map(|(&j, a)| a.coord(j)).collect()
    }

    pub fn same_lattice(&self, other: &Grid) -> bool {
        self.measure == other.measure
            && self.axes.len() == other.axes.len()
            && self.axes.iter().zip(&other.axes).all(|(a, b)| a.n == b.n && a.extent == b.extent)
    }
}

pub fn make_grid(axes: &[(usize, f64)], measure: Measure) -> Result<Grid> {
    Grid::new(axes, measure)
}

pub fn quad_weight(grid: &Grid) -> f64 {
    grid.quad_weight()
}

pub fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * shape[k + 1];
    }
    s
}

pub fn unravel(mut flat: usize, shape: &[usize], out: &mut [usize]) {
    for k in (0..shape.len()).rev() {
        out[k] = flat % shape[k];
        flat /= shape[k];
    }
}

pub fn ravel(idx: &[usize], strides: &[usize]) -> usize {
    idx.iter().zip(strides).map(|(i, s)| i * s).sum()
}

#[inline]
pub fn wrap(i: isize, n: usize) -> usize {
    i.rem_euclid(n as isize) as usize
}

/// Index of `-x_j` on an even axis (the antipode maps to itself).
#[inline]
pub fn neg_index(j: usize, n: usize) -> usize {
    (n - j) % n
}

#[derive(Debug, Clone, PartialEq)]
pub struct CArray {
    grid: Grid,
    data: Vec<C64>,
}

impl CArray {
    pub fn new(grid: Grid, data: Vec<C64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::Shape(format!("{} samples for a grid of {} points", data.len(), grid.len())));
        }
        if let Some(index) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(CArray { grid, data })
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        CArray { grid, data: vec![C64::new(0.0, 0.0); n] }
    }

    pub fn from_real(grid: Grid, data: &[f64]) -> Result<Self> {
        CArray::new(grid, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn sample<F: FnMut(&[f64]) -> C64>(grid: &Grid, mut f: F) -> Result<Self> {
        let shape = grid.shape();
        let mut idx = vec![0; shape.len()];
        let mut x = vec![0.0; shape.len()];
        let mut data = Vec::with_capacity(grid.len());
        for flat in 0..grid.len() {
            unravel(flat, &shape, &mut idx);
            for k in 0..shape.len() {
                x[k] = grid.axis(k).coord(idx[k]);
            }
            data.push(f(&x));
        }
        CArray::new(grid.clone(), data)
    }

    /// Trusted constructor for internal kernels that cannot produce NaN from finite input.
    pub(crate) fn from_parts(grid: Grid, data: Vec<C64>) -> Self {
        debug_assert_eq!(grid.len(), data.len());
        CArray { grid, data }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn rank(&self) -> usize {
        self.grid.rank()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn at(&self, idx: &[usize]) -> C64 {
        self.data[ravel(idx, &self.grid.strides())]
    }

    pub fn scale(&self, c: C64) -> CArray {
        CArray::from_parts(self.grid.clone(), self.data.iter().map(|&z| z * c).collect())
    }

    pub fn conj(&self) -> CArray {
        CArray::from_parts(self.grid.clone(), self.data.iter().map(|z| z.conj()).collect())
    }

    pub fn map<F: Fn(C64) -> C64>(&self, f: F) -> Result<CArray> {
        CArray::new(self.grid.clone(), self.data.iter().map(|&z| f(z)).collect())
    }

    /// Same samples, reinterpreted on another lattice of the same shape.
    pub fn with_grid(&self, grid: Grid) -> Result<CArray> {
        if grid.shape() != self.grid.shape() {
            return Err(Error::Shape("regridding must keep the shape".into()));
        }
        Ok(CArray::from_parts(grid, self.data.clone()))
    }

    /// Cyclic translation `(T_a f)(x) = f(x - a)` by integer index offsets.
    pub fn translate(&self, shift: &[isize]) -> CArray {
        let shape = self.grid.shape();
        let st = self.grid.strides();
        let mut idx = vec![0; shape.len()];
        let mut src = vec![0; shape.len()];
        let mut out = Vec::with_capacity(self.len());
        for flat in 0..self.len() {
            unravel(flat, &shape, &mut idx);
            for k in 0..shape.len() {
                src[k] = wrap(idx[k] as isize - shift[k], shape[k]);
            }
            out.push(self.data[ravel(&src, &st)]);
        }
        CArray::from_parts(self.grid.clone(), out)
    }

    /// Weighted inner product `<f, g> = Σ f conj(g) · quad_weight`.
    pub fn inner(&self, other: &CArray) -> Result<C64> {
        if !self.grid.same_lattice(&other.grid) {
            return Err(Error::Shape("inner product on different lattices".into()));
        }
        let s: C64 = self.data.iter().zip(&other.data).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.grid.quad_weight())
    }

    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.data.iter().map(|z| z.norm_sqr()).sum();
        crate::math::sqrt(s * self.grid.quad_weight())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Tensor product on the concatenated grid; the axes of `self` come first.
    pub fn tensor(&self, other: &CArray) -> Result<CArray> {
        let grid = self.grid.concat(&other.grid)?;
        let mut data = Vec::with_capacity(self.len() * other.len());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Ok(CArray::from_parts(grid, data))
    }

    /// Reorders axes so that output axis `k` is input axis `perm[k]`.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<CArray> {
        let r = self.rank();
        if perm.len() != r || !is_perm(perm) {
            return Err(Error::InvalidPerm(format!("{perm:?} is not an axis permutation of rank {r}")));
        }
        let grid = self.grid.select(perm);
        let shape = grid.shape();
        let src_st = self.grid.strides();
        let mut idx = vec![0; r];
        let mut src = vec![0; r];
        let mut out = Vec::with_capacity(self.len());
        for flat in 0..self.len() {
            unravel(flat, &shape, &mut idx);
            for k in 0..r {
                src[perm[k]] = idx[k];
            }
            out.push(self.data[ravel(&src, &src_st)]);
        }
        Ok(CArray::from_parts(grid, out))
    }
}

pub(crate) fn is_perm(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &i in p {
        if i >= p.len() || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_points() {
        let g = make_grid(&[(4, 4.0)], Measure::Riemann).unwrap();
        let pts: Vec<f64> = (0..4).map(|j| g.axis(0).coord(j)).collect();
        assert_eq!(pts, [-2.0, -1.0, 0.0, 1.0]);
        assert_eq!(g.axis(0).step(), 1.0);

        let c = make_grid(&[(2, 1.0)], Measure::Counting).unwrap();
        assert_eq!(c.axis(0).coord(0), -0.5);
        assert_eq!(c.axis(0).coord(1), 0.0);
        assert_eq!(c.quad_weight(), 1.0);
    }

    #[test]
    fn rejects_bad_axes() {
        assert!(make_grid(&[(0, 1.0)], Measure::Riemann).is_err());
        assert!(make_grid(&[(1, 1.0)], Measure::Riemann).is_err());
        assert!(make_grid(&[(4, 0.0)], Measure::Riemann).is_err());
        assert!(make_grid(&[(4, -2.0)], Measure::Counting).is_err());
    }

    #[test]
    fn quadrature_weights() {
        let g = make_grid(&[(4, 4.0), (8, 4.0)], Measure::Riemann).unwrap();
        assert_eq!(quad_weight(&g), 0.5);
        let g = make_grid(&[(4, 4.0), (8, 4.0)], Measure::Counting).unwrap();
        assert_eq!(quad_weight(&g), 1.0);
        let g = make_grid(&[(4, 2.0)], Measure::Riemann).unwrap();
        assert_eq!(quad_weight(&g), 0.5);
        assert_eq!(g.quad_weight() * g.len() as f64, g.volume());
    }

    #[test]
    fn sampling() {
        let g = make_grid(&[(4, 4.0)], Measure::Riemann).unwrap();
        let one = CArray::sample(&g, |_| C64::new(1.0, 0.0)).unwrap();
        assert!(one.data().iter().all(|z| *z == C64::new(1.0, 0.0)));

        let gauss = CArray::sample(&g, |x| C64::new(libm::exp(-core::f64::consts::PI * x[0] * x[0]), 0.0)).unwrap();
        for (j, z) in gauss.data().iter().enumerate() {
            let x = -2.0 + j as f64;
            assert_eq!(z.re, libm::exp(-core::f64::consts::PI * x * x));
        }

        let bad = CArray::sample(&g, |x| C64::new(1.0 / x[0], 0.0));
        assert!(matches!(bad, Err(Error::NonFinite { index: 2 })));
    }

    #[test]
    fn coords_roundtrip() {
        let g = make_grid(&[(8, 3.0), (4, 2.0)], Measure::Riemann).unwrap();
        let a = CArray::sample(&g, |x| C64::new(x[0], x[1])).unwrap();
        for flat in 0..g.len() {
            let c = g.coords(flat);
            assert_eq!(a.data()[flat], C64::new(c[0], c[1]));
        }
    }

    #[test]
    fn translation_wraps() {
        let g = make_grid(&[(4, 4.0)], Measure::Counting).unwrap();
        let a = CArray::from_real(g, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let t = a.translate(&[1]);
        let re: Vec<f64> = t.data().iter().map(|z| z.re).collect();
        assert_eq!(re, [4.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn permute_axes_transposes() {
        let g = make_grid(&[(2, 2.0), (3, 3.0)], Measure::Counting).unwrap();
        let a = CArray::from_real(g, &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let t = a.permute_axes(&[1, 0]).unwrap();
        assert_eq!(t.grid().shape(), [3, 2]);
        assert_eq!(t.at(&[2, 1]).re, a.at(&[1, 2]).re);
    }
}
