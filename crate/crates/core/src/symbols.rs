//! Built-in symbols, the odd bump window ψ, the windowed sign transform
//! `V_ψσ`, and the factored symbol STFTs of the bilinear and trilinear
//! Hilbert symbols.
//!
//! Frequency differences such as `ξ₁ - ξ₂` are taken cyclically on the
//! centred frequency axis, and the sign vanishes both at 0 and at the
//! antipode. With that convention the factorizations below are exact on the
//! lattice, not just in the limit.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exponents::ExtExp;
use crate::lattice::{neg_index, unravel, Axis, CArray, Grid, Measure};
use crate::math::{self, cis_turns, PI};
use crate::tfa::{add_index, stft, sub_index, Window, WindowKind};
use crate::C64;

/// `σ(y) = -πi·sign(y)`, zero at the origin.
pub fn sigma_sign(y: f64) -> C64 {
    if y > 0.0 {
        C64::new(0.0, -PI)
    } else if y < 0.0 {
        C64::new(0.0, PI)
    } else {
        C64::new(0.0, 0.0)
    }
}

/// `σ` at index `k` of a centred even axis; the antipode counts as 0 so the
/// sampled sign stays exactly odd.
pub fn sigma_sign_index(k: usize, n: usize) -> C64 {
    if k == 0 || 2 * k == n {
        C64::new(0.0, 0.0)
    } else if 2 * k > n {
        C64::new(0.0, -PI)
    } else {
        C64::new(0.0, PI)
    }
}

/// Analytic `χ̂_{[a,b]}(t) = (e^{-2πiat} - e^{-2πibt}) / (2πit)`, `b - a` at `t = 0`.
pub fn chi_hat(a: f64, b: f64, t: f64) -> C64 {
    if t == 0.0 {
        return C64::new(b - a, 0.0);
    }
    (cis_turns(-a * t) - cis_turns(-b * t)) / C64::new(0.0, 2.0 * PI * t)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; k];
    let mut w = vec![0.0; k];
    for i in 0..(k + 1) / 2 {
        let (_, c) = math::sin_cos(PI * (i as f64 + 0.75) / (k as f64 + 0.5));
        let mut z = c;
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=k {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = k as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if math::abs(dz) < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[k - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[k - 1 - i] = w[i];
    }
    (x, w)
}

const GL_NODES: usize = 16;
/// Panel width for the partial transforms before oscillation refinement.
const PANEL: f64 = 1.0 / 32.0;

/// The odd window `ψ(x) = ψ₁(x) - ψ₁(-x)` built from a smooth bump `ψ₁`
/// supported in `[δ, 1-δ]` with peak value 1.
#[derive(Debug, Clone)]
pub struct PsiWindow {
    delta: f64,
    gl: (Vec<f64>, Vec<f64>),
}

impl Default for PsiWindow {
    fn default() -> Self {
        PsiWindow::new(0.125).expect("default margin is valid")
    }
}

impl PsiWindow {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::Precondition(format!("bump margin must lie in (0, 1/2), got {delta}")));
        }
        Ok(PsiWindow { delta, gl: gauss_legendre(GL_NODES) })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn psi1(&self, x: f64) -> f64 {
        let s = (x - self.delta) / (1.0 - 2.0 * self.delta);
        if s <= 0.0 || s >= 1.0 {
            return 0.0;
        }
        math::exp(4.0 - 1.0 / (s * (1.0 - s)))
    }

    pub fn psi(&self, x: f64) -> f64 {
        self.psi1(x) - self.psi1(-x)
    }

    /// `ψ` sampled on an even axis, antipode forced to 0.
    pub fn samples(&self, axis: &Axis) -> Vec<f64> {
        let mut v: Vec<f64> = (0..axis.n).map(|j| self.psi(axis.coord(j))).collect();
        if axis.n % 2 == 0 {
            v[0] = 0.0;
        }
        v
    }

    pub fn window(&self, grid: &Grid) -> Result<Window> {
        if grid.rank() != 1 {
            return Err(Error::Shape("ψ window is one-dimensional".into()));
        }
        let data = self.samples(grid.axis(0));
        Ok(Window { samples: CArray::from_real(grid.clone(), &data)?, kind: WindowKind::Psi })
    }

    /// `∫_lo^hi g(u) e^{-2πiut} du` by composite Gauss–Legendre, panels
    /// refined so each holds at most one oscillation.
    fn integrate<G: Fn(f64) -> f64>(&self, g: G, lo: f64, hi: f64, t: f64) -> C64 {
        if hi <= lo {
            return C64::new(0.0, 0.0);
        }
        let width = PANEL.min(1.0 / (math::abs(t) + 1.0));
        let panels = libm::ceil((hi - lo) / width).max(1.0) as usize;
        let hw = (hi - lo) / panels as f64;
        let (xs, ws) = &self.gl;
        let mut acc = C64::new(0.0, 0.0);
        for p in 0..panels {
            let mid = lo + (p as f64 + 0.5) * hw;
            for (x, w) in xs.iter().zip(ws) {
                let u = mid + 0.5 * hw * x;
                let gu = g(u);
                if gu != 0.0 {
                    acc += cis_turns(-u * t) * (gu * w);
                }
            }
        }
        acc * (0.5 * hw)
    }

    pub fn psi1_hat(&self, t: f64) -> C64 {
        self.integrate(|u| self.psi1(u), self.delta, 1.0 - self.delta, t)
    }

    pub fn psi_hat(&self, t: f64) -> C64 {
        self.psi1_hat(t) - self.psi1_hat(-t)
    }

    /// `∫_{lo}^{hi} ψ(u) e^{-2πiut} du`, limits clipped to the support.
    pub fn partial_hat(&self, lo: f64, hi: f64, t: f64) -> C64 {
        self.integrate(|u| self.psi(u), lo.max(-1.0), hi.min(1.0), t)
    }
}

/// `V_ψσ(ξ, t) = ∫ σ(y) ψ(y - ξ) e^{-2πiyt} dy`
/// `= -πi e^{-2πiξt} [∫_{u>-ξ} - ∫_{u<-ξ}] ψ(u) e^{-2πiut} du`.
///
/// For `|ξ| ≥ 1` one side is empty and the value is `∓πi e^{-2πiξt} ψ̂(t)`.
pub fn bht_window_stft(xi: f64, t: f64, psi: &PsiWindow) -> C64 {
    let c = -xi;
    let upper = psi.partial_hat(c, 1.0, t);
    let lower = psi.partial_hat(-1.0, c, t);
    C64::new(0.0, -PI) * cis_turns(-xi * t) * (upper - lower)
}

/// `sup_ξ ‖V_ψσ(ξ, ·)‖_{L^r}` over `t ∈ [-T/2, T/2)` at spacing `step`, with
/// `ξ` running over `[-2, 2]` at spacing 1/32 (which covers every `|ξ| ≥ 1`
/// branch as well).
///
/// For each `t` the partial transforms at all breakpoints `-ξ` are built from
/// one cumulative pass over the panels between consecutive breakpoints.
pub fn sup_xi_norm(r: ExtExp, psi: &PsiWindow, extent: f64, step: f64) -> Result<f64> {
    if !ExtExp::ONE.le(&r) {
        return Err(Error::InvalidExponent(format!("sup_xi_norm needs r >= 1, got {r}")));
    }
    if !(extent > 0.0 && step > 0.0 && step < extent) {
        return Err(Error::Precondition("need 0 < step < extent".into()));
    }
    let n_t = libm::round(extent / step) as usize;
    let xis: Vec<f64> = (0..=128).map(|j| -2.0 + j as f64 / 32.0).collect();
    // breakpoints -ξ inside the support, ascending: -1, -1 + 1/32, …, 1
    let breaks: Vec<f64> = (0..=64).map(|j| -1.0 + j as f64 / 32.0).collect();
    let mut acc = vec![0.0f64; xis.len()];
    let mut cum = vec![C64::new(0.0, 0.0); breaks.len()];
    let red = |a: f64, v: f64| if r.is_inf() { a.max(v) } else { a + math::powf(v, r.to_f64()) };
    for j in 0..n_t {
        let t = -0.5 * extent + j as f64 * step;
        // cum[b] = ∫_{-1}^{breaks[b]} ψ e^{-2πiut}
        cum[0] = C64::new(0.0, 0.0);
        for b in 1..breaks.len() {
            cum[b] = cum[b - 1] + psi.partial_hat(breaks[b - 1], breaks[b], t);
        }
        let total = cum[breaks.len() - 1];
        for (k, &xi) in xis.iter().enumerate() {
            let c = -xi;
            let below = if c <= -1.0 {
                C64::new(0.0, 0.0)
            } else if c >= 1.0 {
                total
            } else {
                cum[libm::round((c + 1.0) * 32.0) as usize]
            };
            let v = C64::new(0.0, -PI) * cis_turns(-xi * t) * (total - below - below);
            acc[k] = red(acc[k], v.norm());
        }
    }
    let finish = |a: f64| if r.is_inf() { a } else { math::powf(a * step, 1.0 / r.to_f64()) };
    Ok(acc.into_iter().map(finish).fold(0.0, f64::max))
}

/// The ξ axes of a symbol grid, which the Hilbert symbols require to agree.
fn common_freq_axis(grid: &Grid, m: usize) -> Result<Axis> {
    if grid.rank() != m + 1 {
        return Err(Error::Shape(format!("expected a symbol grid of rank {}, got {}", m + 1, grid.rank())));
    }
    let a = *grid.axis(1);
    if grid.axes()[1..].iter().any(|b| *b != a) {
        return Err(Error::Shape("Hilbert symbols need identical ξ axes".into()));
    }
    if grid.axes().iter().any(|b| b.n % 2 != 0) {
        return Err(Error::InvalidGrid("Hilbert symbols need even axis lengths".into()));
    }
    Ok(a)
}

/// `η = ξ₁ - ξ₂ - 2ξ₃` (cyclic) as an index.
fn tht_eta(i1: usize, i2: usize, i3: usize, n: usize) -> usize {
    sub_index(sub_index(sub_index(i1, i2, n), i3, n), i3, n)
}

/// `Ψ(x, ξ₁, ξ₂) = ψ(x) ψ(ξ₂) ψ(ξ₁ - ξ₂)` on a symbol grid.
pub fn bht_window(grid: &Grid, psi: &PsiWindow) -> Result<Window> {
    let fa = common_freq_axis(grid, 2)?;
    let px = psi.samples(grid.axis(0));
    let pf = psi.samples(&fa);
    let n = fa.n;
    let mut idx = [0usize; 3];
    let data = (0..grid.len())
        .map(|o| {
            unravel(o, &grid.shape(), &mut idx);
            C64::new(px[idx[0]] * pf[idx[2]] * pf[sub_index(idx[1], idx[2], n)], 0.0)
        })
        .collect();
    Ok(Window { samples: CArray::new(grid.clone(), data)?, kind: WindowKind::Psi })
}

/// `Ψ(x, ξ₁, ξ₂, ξ₃) = ψ(x) ψ(ξ₂) ψ(ξ₃) ψ(ξ₁ - ξ₂ - 2ξ₃)`.
pub fn tht_window(grid: &Grid, psi: &PsiWindow) -> Result<Window> {
    let fa = common_freq_axis(grid, 3)?;
    let px = psi.samples(grid.axis(0));
    let pf = psi.samples(&fa);
    let n = fa.n;
    let mut idx = [0usize; 4];
    let data = (0..grid.len())
        .map(|o| {
            unravel(o, &grid.shape(), &mut idx);
            let v = px[idx[0]] * pf[idx[2]] * pf[idx[3]] * pf[tht_eta(idx[1], idx[2], idx[3], n)];
            C64::new(v, 0.0)
        })
        .collect();
    Ok(Window { samples: CArray::new(grid.clone(), data)?, kind: WindowKind::Psi })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactoredKind {
    Bht,
    Tht,
}

/// Symbol STFT of a Hilbert symbol as a product of one- and two-variable
/// factors, indexed like the dense output `(x, t₁..t_m, ξ₁..ξ_m, ν)`:
///
/// * bht: `V_ψ1(x,ν) · V_ψτ(ξ₁-ξ₂, -t₁) · V_ψ1(ξ₂, -(t₁+t₂))`, `τ(η) = σ(-η)`;
/// * tht: `V_ψ1(x,ν) · V_ψσ(η, -t₁) · V_ψ1(ξ₂, -(t₁+t₂)) · V_ψ1(ξ₃, -(2t₁+t₃))`,
///   `η = ξ₁ - ξ₂ - 2ξ₃`.
#[derive(Debug, Clone)]
pub struct Factored {
    pub kind: FactoredKind,
    /// `V_ψ1(x, ν)` over `(x, ν)`.
    pub space: CArray,
    /// Windowed sign over `(η, s)`.
    pub sign: CArray,
    /// `V_ψ1(ξ, s)` over `(ξ, s)`.
    pub bump: CArray,
    grid: Grid,
}

impl Factored {
    pub fn m(&self) -> usize {
        match self.kind {
            FactoredKind::Bht => 2,
            FactoredKind::Tht => 3,
        }
    }

    /// The symbol grid the factors were built on.
    pub fn symbol_grid(&self) -> &Grid {
        &self.grid
    }

    /// `|V_ψ1(x, ν)|`.
    pub fn space_factor(&self, x: usize, nu: usize) -> C64 {
        self.space.at(&[x, nu])
    }

    /// Product of the factors that depend on `(t, ξ)` only; `mid` holds
    /// `t₁..t_m, ξ₁..ξ_m`.
    pub fn mid_factor(&self, mid: &[usize]) -> C64 {
        let n = self.grid.axis(1).n;
        match self.kind {
            FactoredKind::Bht => {
                let (t1, t2, x1, x2) = (mid[0], mid[1], mid[2], mid[3]);
                self.sign.at(&[sub_index(x1, x2, n), neg_index(t1, n)])
                    * self.bump.at(&[x2, neg_index(add_index(t1, t2, n), n)])
            }
            FactoredKind::Tht => {
                let (t1, t2, t3, x1, x2, x3) = (mid[0], mid[1], mid[2], mid[3], mid[4], mid[5]);
                let two_t1 = add_index(t1, t1, n);
                self.sign.at(&[tht_eta(x1, x2, x3, n), neg_index(t1, n)])
                    * self.bump.at(&[x2, neg_index(add_index(t1, t2, n), n)])
                    * self.bump.at(&[x3, neg_index(add_index(two_t1, t3, n), n)])
            }
        }
    }

    /// Value at a full multi-index `(x, t…, ξ…, ν)`.
    pub fn value(&self, idx: &[usize]) -> C64 {
        let r = idx.len();
        self.space_factor(idx[0], idx[r - 1]) * self.mid_factor(&idx[1..r - 1])
    }
}

fn build_factored(grid: &Grid, psi: &PsiWindow, kind: FactoredKind) -> Result<Factored> {
    let m = match kind {
        FactoredKind::Bht => 2,
        FactoredKind::Tht => 3,
    };
    let fa = common_freq_axis(grid, m)?;
    let measure: Measure = grid.measure();
    let gx = Grid::from_axes(vec![*grid.axis(0)], measure)?;
    let gf = Grid::from_axes(vec![fa], measure)?;
    let ones = |g: &Grid| CArray::sample(g, |_| C64::new(1.0, 0.0));
    let space = stft(&ones(&gx)?, &psi.window(&gx)?)?;
    let wf = psi.window(&gf)?;
    let tau: Vec<C64> = (0..fa.n)
        .map(|k| match kind {
            FactoredKind::Bht => sigma_sign_index(neg_index(k, fa.n), fa.n),
            FactoredKind::Tht => sigma_sign_index(k, fa.n),
        })
        .collect();
    let sign = stft(&CArray::new(gf.clone(), tau)?, &wf)?;
    let bump = stft(&ones(&gf)?, &wf)?;
    Ok(Factored { kind, space, sign, bump, grid: grid.clone() })
}

/// Factored symbol STFT of the bilinear Hilbert symbol for the window [`bht_window`].
pub fn bht_factored_stft(grid: &Grid, psi: &PsiWindow) -> Result<Factored> {
    build_factored(grid, psi, FactoredKind::Bht)
}

/// Factored symbol STFT of the trilinear Hilbert symbol for the window [`tht_window`].
pub fn tht_factored_stft(grid: &Grid, psi: &PsiWindow) -> Result<Factored> {
    build_factored(grid, psi, FactoredKind::Tht)
}

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolForm {
    /// Samples over `(x, ξ₁..ξ_m)`.
    Dense(CArray),
    /// `τ(ξ)` sampled over `(ξ₁..ξ_m)`.
    Multiplier(CArray),
    /// `σ(ξ₂ - ξ₁)`, the symbol of `∫ f(x+y) g(x-y) dy/y`.
    Bht,
    /// `σ(ξ₁ - ξ₂ - 2ξ₃)`, the symbol of `∫ f(x-t) g(x+t) h(x+2t) dt/t`.
    Tht,
    Constant(C64),
    /// `e^{2πiξ₁²} (1 + |ξ₁|)^{-decay}`.
    Chirp { decay: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSpec {
    pub m: usize,
    pub form: SymbolForm,
}

impl SymbolSpec {
    pub fn new(m: usize, form: SymbolForm) -> Result<Self> {
        if m == 0 {
            return Err(Error::Shape("symbols need m >= 1".into()));
        }
        match &form {
            SymbolForm::Dense(a) if a.rank() != m + 1 => {
                return Err(Error::Shape(format!("dense symbol of rank {} for m={m}", a.rank())))
            }
            SymbolForm::Multiplier(a) if a.rank() != m => {
                return Err(Error::Shape(format!("multiplier of rank {} for m={m}", a.rank())))
            }
            SymbolForm::Bht if m != 2 => return Err(Error::Shape("the bilinear Hilbert symbol has m=2".into())),
            SymbolForm::Tht if m != 3 => return Err(Error::Shape("the trilinear Hilbert symbol has m=3".into())),
            SymbolForm::Chirp { decay } if !decay.is_finite() => {
                return Err(Error::Precondition("chirp decay must be finite".into()))
            }
            _ => {}
        }
        Ok(SymbolSpec { m, form })
    }

    pub fn bht() -> Self {
        SymbolSpec { m: 2, form: SymbolForm::Bht }
    }

    pub fn tht() -> Self {
        SymbolSpec { m: 3, form: SymbolForm::Tht }
    }

    pub fn constant(m: usize, c: C64) -> Result<Self> {
        SymbolSpec::new(m, SymbolForm::Constant(c))
    }

    pub fn is_x_independent(&self) -> bool {
        !matches!(self.form, SymbolForm::Dense(_))
    }

    pub fn name(&self) -> &'static str {
        match self.form {
            SymbolForm::Dense(_) => "dense",
            SymbolForm::Multiplier(_) => "multiplier",
            SymbolForm::Bht => "bht",
            SymbolForm::Tht => "tht",
            SymbolForm::Constant(_) => "constant",
            SymbolForm::Chirp { .. } => "chirp",
        }
    }

    /// `τ(ξ)` on the frequency grid `(ξ₁..ξ_m)`; `None` for dense symbols.
    pub fn multiplier(&self, freq: &Grid) -> Result<Option<CArray>> {
        if freq.rank() != self.m {
            return Err(Error::Shape(format!("frequency grid of rank {} for m={}", freq.rank(), self.m)));
        }
        let n = freq.axis(0).n;
        let sampled = |f: &dyn Fn(&[usize], &[f64]) -> C64| -> Result<CArray> {
            let shape = freq.shape();
            let mut idx = vec![0; shape.len()];
            let data = (0..freq.len())
                .map(|o| {
                    unravel(o, &shape, &mut idx);
                    f(&idx, &freq.coords(o))
                })
                .collect();
            CArray::new(freq.clone(), data)
        };
        let out = match &self.form {
            SymbolForm::Dense(_) => return Ok(None),
            SymbolForm::Multiplier(t) => {
                if !t.grid().same_lattice(freq) {
                    return Err(Error::Shape("multiplier samples live on a different frequency grid".into()));
                }
                t.clone()
            }
            SymbolForm::Bht => {
                common_freq_axis(&prepend(freq)?, 2)?;
                sampled(&|i, _| sigma_sign_index(sub_index(i[1], i[0], n), n))?
            }
            SymbolForm::Tht => {
                common_freq_axis(&prepend(freq)?, 3)?;
                sampled(&|i, _| sigma_sign_index(tht_eta(i[0], i[1], i[2], n), n))?
            }
            SymbolForm::Constant(c) => sampled(&|_, _| *c)?,
            SymbolForm::Chirp { decay } => {
                let d = *decay;
                sampled(&|_, x| cis_turns(x[0] * x[0]) * math::powf(1.0 + math::abs(x[0]), -d))?
            }
        };
        Ok(Some(out))
    }

    /// Dense samples over the symbol grid `(x, ξ₁..ξ_m)`.
    pub fn sample(&self, grid: &Grid) -> Result<CArray> {
        if grid.rank() != self.m + 1 {
            return Err(Error::Shape(format!("symbol grid of rank {} for m={}", grid.rank(), self.m)));
        }
        if let SymbolForm::Dense(a) = &self.form {
            if !a.grid().same_lattice(grid) {
                return Err(Error::Shape("dense symbol lives on a different grid".into()));
            }
            return Ok(a.clone());
        }
        let freq = grid.select(&(1..=self.m).collect::<Vec<_>>());
        let tau = self.multiplier(&freq)?.expect("non-dense symbols have a multiplier");
        let nx = grid.axis(0).n;
        let mut data = Vec::with_capacity(grid.len());
        for _ in 0..nx {
            data.extend_from_slice(tau.data());
        }
        CArray::new(grid.clone(), data)
    }
}

/// A dummy x axis in front of a frequency grid, for shape checks.
fn prepend(freq: &Grid) -> Result<Grid> {
    let mut axes = vec![Axis { n: 2, extent: 1.0 }];
    axes.extend_from_slice(freq.axes());
    Grid::from_axes(axes, freq.measure())
}
