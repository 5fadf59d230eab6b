//! Modulation-space norms of functions and permuted symbol modulation norms.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exponents::{ExponentProfile, ExtExp};
use crate::lattice::{CArray, Grid};
use crate::math;
use crate::mixed_norm::{mixed_norm, mixed_norm_lazy, nested_norm, MixedNormSpec, Weight};
use crate::symbols::{bht_factored_stft, bht_window, tht_factored_stft, tht_window, PsiWindow, SymbolForm, SymbolSpec};
use crate::tfa::{stft, symbol_stft, symbol_stft_grid, symplectic_fourier, Window, DENSE_CAP};

/// Polynomial weights `⟨z⟩^s = (1 + |z|²)^{s/2}`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    One,
    /// `⟨z⟩^s` in all coordinates at once.
    Polynomial(f64),
    /// `∏_k ⟨z_k⟩^{s_k}`: on an STFT `(t, ν)` only `s₀` is used, on a symbol
    /// STFT `(x, t, ξ, ν)` the pair `(x, ν)` carries `s₀` and `(ξ_k, t_k)`
    /// carries `s_k`.
    Product(Vec<f64>),
}

fn bracket(s: f64, r2: f64) -> f64 {
    math::powf(1.0 + r2, 0.5 * s)
}

impl Weight for WeightSpec {
    fn eval(&self, c: &[f64]) -> f64 {
        match self {
            WeightSpec::One => 1.0,
            WeightSpec::Polynomial(s) => bracket(*s, c.iter().map(|v| v * v).sum()),
            WeightSpec::Product(s) => {
                if c.len() == 2 {
                    return bracket(s[0], c[0] * c[0] + c[1] * c[1]);
                }
                let m = (c.len() - 2) / 2;
                let last = c[c.len() - 1];
                let mut w = bracket(s[0], c[0] * c[0] + last * last);
                for k in 1..=m {
                    let (t, xi) = (c[k], c[m + k]);
                    w *= bracket(s.get(k).copied().unwrap_or(0.0), t * t + xi * xi);
                }
                w
            }
        }
    }
}

impl WeightSpec {
    pub fn is_one(&self) -> bool {
        match self {
            WeightSpec::One => true,
            WeightSpec::Polynomial(s) => *s == 0.0,
            WeightSpec::Product(s) => s.iter().all(|v| *v == 0.0),
        }
    }

    fn check(&self, m: usize) -> Result<()> {
        match self {
            WeightSpec::Product(s) if s.len() != m + 1 => {
                Err(Error::Shape(format!("product weight needs {} exponents, got {}", m + 1, s.len())))
            }
            WeightSpec::Polynomial(s) if !s.is_finite() => Err(Error::Precondition("weight exponent must be finite".into())),
            WeightSpec::Product(s) if !s.iter().all(|v| v.is_finite()) => {
                Err(Error::Precondition("weight exponents must be finite".into()))
            }
            _ => Ok(()),
        }
    }
}

fn as_weight(w: &WeightSpec) -> Option<&dyn Weight> {
    (!w.is_one()).then_some(w as &dyn Weight)
}

/// `‖f‖_{M^{p,q}_w} = ‖V_φf · w‖_{L^{p,q}}`, `t` inner and `ν` outer.
pub fn modulation_norm(f: &CArray, p: ExtExp, q: ExtExp, w: &WeightSpec, phi: &Window) -> Result<f64> {
    if f.rank() != 1 {
        return Err(Error::Shape("modulation_norm takes one-axis signals".into()));
    }
    w.check(0)?;
    let v = stft(f, phi)?;
    let exps = [p, q];
    let spec = MixedNormSpec::new(&exps, &[0, 1]);
    match as_weight(w) {
        Some(wt) => mixed_norm(&v, &spec.weighted(wt)),
        None => mixed_norm(&v, &spec),
    }
}

/// Exponents and integration order over the symbol STFT axes `(x, t…, ξ…, ν)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolNormSpec {
    pub exps: Vec<ExtExp>,
    pub order: Vec<usize>,
}

impl SymbolNormSpec {
    /// `(r₀, r; s, s_{m+1})` integrated in the order `κ(0..m)`, then `ρ(1..m+1)`.
    pub fn from_profile(p: &ExponentProfile) -> Result<Self> {
        p.validate()?;
        Ok(SymbolNormSpec { exps: p.symbol_exps(), order: p.symbol_order() })
    }

    /// The unpermuted `M^{∞,1}` norm on `ℝ^{2(m+1)}`: sup over `(x, ξ)` first,
    /// then `L¹` over `(t, ν)`.
    pub fn m_inf_one(m: usize) -> Self {
        let mut exps = vec![ExtExp::INF];
        exps.extend(core::iter::repeat(ExtExp::ONE).take(m));
        exps.extend(core::iter::repeat(ExtExp::INF).take(m));
        exps.push(ExtExp::ONE);
        let mut order = vec![0];
        order.extend(m + 1..=2 * m);
        order.extend(1..=m);
        order.push(2 * m + 1);
        SymbolNormSpec { exps, order }
    }

    pub fn m(&self) -> usize {
        (self.exps.len() - 2) / 2
    }

    fn validate(&self, m: usize) -> Result<()> {
        if self.exps.len() != 2 * m + 2 {
            return Err(Error::Shape(format!("{} exponents for a degree-{m} symbol", self.exps.len())));
        }
        let mut seen = vec![false; self.order.len()];
        for &a in &self.order {
            if a >= seen.len() || core::mem::replace(&mut seen[a], true) {
                return Err(Error::InvalidPerm(format!("{:?} is not an axis order", self.order)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum SymbolWindow {
    /// Tensor Gaussian `e^{-|z|²}`.
    Gaussian,
    /// The `Ψ` product attached to the Hilbert symbols (`ψ` on each axis otherwise).
    Psi(PsiWindow),
    Custom(Window),
}

impl SymbolWindow {
    pub fn name(&self) -> &'static str {
        match self {
            SymbolWindow::Gaussian => "gaussian",
            SymbolWindow::Psi(_) => "psi",
            SymbolWindow::Custom(_) => "custom",
        }
    }

    /// The window sampled on `grid` for the symbol `sigma`.
    pub fn realize(&self, grid: &Grid, sigma: &SymbolSpec) -> Result<Window> {
        match self {
            SymbolWindow::Gaussian => Ok(Window::gaussian(grid)),
            SymbolWindow::Custom(w) => {
                if !w.samples.grid().same_lattice(grid) {
                    return Err(Error::Shape("custom window lives on a different grid".into()));
                }
                Ok(w.clone())
            }
            SymbolWindow::Psi(psi) => match sigma.form {
                SymbolForm::Bht => bht_window(grid, psi),
                SymbolForm::Tht => tht_window(grid, psi),
                _ => {
                    let parts: Vec<Window> =
                        (0..grid.rank()).map(|k| psi.window(&grid.select(&[k]))).collect::<Result<_>>()?;
                    let refs: Vec<&Window> = parts.iter().collect();
                    Window::tensor(&refs)
                }
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormPath {
    Dense,
    Factored,
}

impl NormPath {
    pub fn name(&self) -> &'static str {
        match self {
            NormPath::Dense => "dense",
            NormPath::Factored => "factored",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolNorm {
    pub value: f64,
    pub path: NormPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathChoice {
    Auto,
    Dense,
    Factored,
}

/// Symbol modulation norm of `sigma` sampled on the symbol grid `(x, ξ₁..ξ_m)`.
///
/// With `PathChoice::Auto` the factored path is taken whenever the symbol and
/// window allow it (constant symbols with any window; Hilbert symbols with the
/// `Ψ` window), and only for unweighted norms. Otherwise the dense symbol STFT
/// is formed, subject to `cap`.
pub fn symbol_mod_norm(
    sigma: &SymbolSpec,
    grid: &Grid,
    spec: &SymbolNormSpec,
    w: &WeightSpec,
    window: &SymbolWindow,
    choice: PathChoice,
    cap: usize,
) -> Result<SymbolNorm> {
    spec.validate(sigma.m)?;
    w.check(sigma.m)?;
    let factorable = w.is_one()
        && match (&sigma.form, window) {
            (SymbolForm::Constant(_), _) => true,
            (SymbolForm::Bht | SymbolForm::Tht, SymbolWindow::Psi(_)) => true,
            _ => false,
        };
    let use_factored = match choice {
        PathChoice::Factored if !factorable => {
            return Err(Error::Precondition(format!(
                "no factored form for a {} symbol with a {} window{}",
                sigma.name(),
                window.name(),
                if w.is_one() { "" } else { " and a weight" }
            )))
        }
        PathChoice::Factored => true,
        PathChoice::Dense => false,
        PathChoice::Auto => factorable,
    };
    if use_factored {
        let value = factored_norm(sigma, grid, spec, window)?;
        return Ok(SymbolNorm { value, path: NormPath::Factored });
    }
    let v = dense_stft(sigma, grid, window, cap)?;
    Ok(SymbolNorm { value: norm_of(&v, spec, w)?, path: NormPath::Dense })
}

fn dense_stft(sigma: &SymbolSpec, grid: &Grid, window: &SymbolWindow, cap: usize) -> Result<CArray> {
    let npts = grid.len();
    let needed = npts.saturating_mul(npts);
    if needed > cap {
        return Err(Error::Budget { needed, cap });
    }
    let f = sigma.sample(grid)?;
    let phi = window.realize(grid, sigma)?;
    symbol_stft(&f, &phi, cap)
}

fn norm_of(v: &CArray, spec: &SymbolNormSpec, w: &WeightSpec) -> Result<f64> {
    let ms = MixedNormSpec::new(&spec.exps, &spec.order);
    match as_weight(w) {
        Some(wt) => mixed_norm(v, &ms.weighted(wt)),
        None => mixed_norm(v, &ms),
    }
}

/// Factor-by-factor reduction. When `x` is integrated first and `ν` last,
/// the `(x, ν)` factor splits off:
/// `‖A(x,ν) G(t,ξ)‖ = ‖ν ↦ ‖A(·,ν)‖_{x}‖ · ‖G‖_{t,ξ}`.
/// Other orders reduce the lazily evaluated product over all axes.
fn factored_norm(sigma: &SymbolSpec, grid: &Grid, spec: &SymbolNormSpec, window: &SymbolWindow) -> Result<f64> {
    let m = sigma.m;
    let out_grid = symbol_stft_grid(grid)?;
    let last = 2 * m + 1;
    let aw: Vec<f64> = (0..out_grid.rank()).map(|k| out_grid.axis_weight(k)).collect();
    let split = spec.order[0] == 0 && spec.order[last] == last;

    // (space factor over (x, ν), middle factor over (t, ξ)) as modulus closures
    let (space, mid): (CArray, alloc::boxed::Box<dyn Fn(&[usize]) -> f64>) = match &sigma.form {
        SymbolForm::Constant(c) => {
            // 𝒱(x,t,ξ,ν) = c e^{2πi(ξ·t - xν)} 𝓕_sΦ(t,ν): here the (t, ν)
            // dependence does not separate, so reduce lazily.
            let phi = window.realize(grid, sigma)?;
            let fs = symplectic_fourier(&phi.samples)?;
            let c = c.norm();
            let st = fs.grid().strides();
            let leaf = |idx: &[usize]| {
                let mut off = 0;
                for k in 0..m {
                    off += idx[1 + k] * st[k];
                }
                off += idx[last] * st[m];
                c * fs.data()[off].norm()
            };
            return mixed_norm_lazy(&out_grid, &spec.exps, &spec.order, leaf);
        }
        SymbolForm::Bht | SymbolForm::Tht => {
            let psi = match window {
                SymbolWindow::Psi(p) => p,
                _ => return Err(Error::Precondition("Hilbert factorization needs the Ψ window".into())),
            };
            let fac = if sigma.form == SymbolForm::Bht {
                bht_factored_stft(grid, psi)?
            } else {
                tht_factored_stft(grid, psi)?
            };
            let space = fac.space.clone();
            (space, alloc::boxed::Box::new(move |mid: &[usize]| fac.mid_factor(mid).norm()))
        }
        _ => return Err(Error::Precondition(format!("no factored form for a {} symbol", sigma.name()))),
    };

    if !split {
        let nx = space.grid().axis(0).n;
        let sd = space.data();
        return mixed_norm_lazy(&out_grid, &spec.exps, &spec.order, |idx| {
            sd[idx[0] * nx + idx[last]].norm() * mid(&idx[1..last])
        });
    }
    let shape = out_grid.shape();
    let inner_exps = &spec.exps[1..last];
    let inner_order: Vec<usize> = spec.order[1..last].iter().map(|a| a - 1).collect();
    let g = nested_norm(&shape[1..last], &aw[1..last], inner_exps, &inner_order, |i| mid(i));
    let nx = shape[0];
    let nn = shape[last];
    let a = nested_norm(&[nx, nn], &[aw[0], aw[last]], &[spec.exps[0], spec.exps[last]], &[0, 1], |i| {
        space.data()[i[0] * nn + i[1]].norm()
    });
    let out = a * g;
    if !out.is_finite() {
        return Err(Error::NonFinite { index: 0 });
    }
    Ok(out)
}

/// Both norms of one symbol STFT, e.g. the permuted symbol norm against `M^{∞,1}`.
pub fn embedding_gap(
    sigma: &SymbolSpec,
    grid: &Grid,
    a: &SymbolNormSpec,
    b: &SymbolNormSpec,
    window: &SymbolWindow,
) -> Result<(f64, f64)> {
    a.validate(sigma.m)?;
    b.validate(sigma.m)?;
    let v = dense_stft(sigma, grid, window, DENSE_CAP)?;
    Ok((norm_of(&v, a, &WeightSpec::One)?, norm_of(&v, b, &WeightSpec::One)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Perm;
    use crate::lattice::{make_grid, Measure};
    use crate::C64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(s: &str) -> ExtExp {
        s.parse().unwrap()
    }

    #[test]
    fn gaussian_closed_form() {
        let g = make_grid(&[(128, 16.0)], Measure::Riemann).unwrap();
        let phi = Window::gaussian(&g);
        let f = phi.samples.clone();
        let pi = core::f64::consts::PI;
        let factor = |p: &ExtExp, c: f64| if p.is_inf() { 1.0 } else { (c / p.to_f64()).powf(0.5 / p.to_f64()) };
        for (p, q) in [("1", "1"), ("2", "2"), ("inf", "1"), ("3/2", "inf"), ("4", "3")] {
            let (p, q) = (e(p), e(q));
            let want = (pi / 2.0).sqrt() * factor(&p, 2.0 * pi) * factor(&q, 2.0 / pi);
            let got = modulation_norm(&f, p, q, &WeightSpec::One, &phi).unwrap();
            assert!((got - want).abs() <= 1e-6 * want, "{p} {q}: {got} vs {want}");
        }
        let z = CArray::zeros(g.clone());
        assert_eq!(modulation_norm(&z, e("2"), e("2"), &WeightSpec::One, &phi).unwrap(), 0.0);
    }

    #[test]
    fn counting_monotone_in_exponents() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = make_grid(&[(16, 16.0)], Measure::Counting).unwrap();
        let phi = Window::gaussian(&make_grid(&[(16, 4.0)], Measure::Counting).unwrap());
        let phi = Window::custom(phi.samples.with_grid(g.clone()).unwrap());
        for _ in 0..10 {
            let data: Vec<C64> = (0..16).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let f = CArray::new(g.clone(), data).unwrap();
            let lo = modulation_norm(&f, e("1"), e("3/2"), &WeightSpec::One, &phi).unwrap();
            let hi = modulation_norm(&f, e("2"), e("4"), &WeightSpec::One, &phi).unwrap();
            assert!(hi <= lo * (1.0 + 1e-12));
        }
    }

    #[test]
    fn weights() {
        assert_eq!(WeightSpec::Polynomial(2.0).eval(&[1.0, 2.0]), 6.0);
        let w = WeightSpec::Product(vec![2.0, 0.0, 2.0]);
        // (x, t1, t2, ξ1, ξ2, ν): ⟨(x,ν)⟩² ⟨(t2,ξ2)⟩²
        assert_eq!(w.eval(&[1.0, 9.0, 1.0, 9.0, 1.0, 0.0]), 2.0 * 3.0);
        assert!(WeightSpec::Product(vec![1.0]).check(2).is_err());
        assert!(WeightSpec::Polynomial(0.0).is_one());
    }

    fn random_dense(grid: &Grid, rng: &mut ChaCha8Rng) -> SymbolSpec {
        let data = (0..grid.len()).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        SymbolSpec::new(grid.rank() - 1, SymbolForm::Dense(CArray::new(grid.clone(), data).unwrap())).unwrap()
    }

    fn profile_1(r: [&str; 2], s: [&str; 2], kappa: &[usize], rho: &[usize]) -> ExponentProfile {
        let mut p = ExponentProfile::uniform(1, ExtExp::ONE);
        p.r0 = e(r[0]);
        p.r = vec![e(r[1])];
        p.s = vec![e(s[0])];
        p.s_last = e(s[1]);
        p.kappa = Perm::time(kappa).unwrap();
        p.rho = Perm::freq(rho).unwrap();
        p
    }

    #[test]
    fn dense_path_matches_nested_loops() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = make_grid(&[(8, 4.0), (8, 4.0)], Measure::Riemann).unwrap();
        for (r, s, k, rho) in [
            (["inf", "1"], ["inf", "1"], [0, 1], [1, 2]),
            (["2", "3/2"], ["1", "inf"], [1, 0], [2, 1]),
            (["1", "inf"], ["3", "2"], [0, 1], [2, 1]),
        ] {
            let sigma = random_dense(&g, &mut rng);
            let prof = profile_1(r, s, &k, &rho);
            let spec = SymbolNormSpec::from_profile(&prof).unwrap();
            let got = symbol_mod_norm(&sigma, &g, &spec, &WeightSpec::One, &SymbolWindow::Gaussian, PathChoice::Auto, DENSE_CAP)
                .unwrap();
            assert_eq!(got.path, NormPath::Dense);
            // oracle: explicit nested loops in the order κ(0), κ(1), ρ(1), ρ(2)
            let v = symbol_stft(&sigma.sample(&g).unwrap(), &Window::gaussian(&g), DENSE_CAP).unwrap();
            let vg = v.grid();
            let ax: Vec<usize> = spec.order.clone();
            let lp = |vals: &[f64], p: &ExtExp, w: f64| -> f64 {
                if p.is_inf() {
                    vals.iter().cloned().fold(0.0, f64::max)
                } else {
                    let pf = p.to_f64();
                    (vals.iter().map(|v| v.powf(pf)).sum::<f64>() * w).powf(1.0 / pf)
                }
            };
            let mut outer = Vec::new();
            for i3 in 0..8 {
                let mut l3 = Vec::new();
                for i2 in 0..8 {
                    let mut l2 = Vec::new();
                    for i1 in 0..8 {
                        let mut l1 = Vec::new();
                        for i0 in 0..8 {
                            let mut idx = [0; 4];
                            idx[ax[0]] = i0;
                            idx[ax[1]] = i1;
                            idx[ax[2]] = i2;
                            idx[ax[3]] = i3;
                            l1.push(v.at(&idx).norm());
                        }
                        l2.push(lp(&l1, &spec.exps[ax[0]], vg.axis_weight(ax[0])));
                    }
                    l3.push(lp(&l2, &spec.exps[ax[1]], vg.axis_weight(ax[1])));
                }
                outer.push(lp(&l3, &spec.exps[ax[2]], vg.axis_weight(ax[2])));
            }
            let want = lp(&outer, &spec.exps[ax[3]], vg.axis_weight(ax[3]));
            assert!((got.value - want).abs() <= 1e-9 * want, "{} vs {}", got.value, want);
        }
    }

    fn bht_profile(r: &str) -> SymbolNormSpec {
        let mut p = ExponentProfile::uniform(2, ExtExp::INF);
        p.r = vec![ExtExp::ONE, e(r)];
        p.s_last = ExtExp::ONE;
        SymbolNormSpec::from_profile(&p).unwrap()
    }

    #[test]
    fn factored_equals_dense() {
        let g = make_grid(&[(8, 4.0), (8, 3.0), (8, 3.0)], Measure::Riemann).unwrap();
        let win = SymbolWindow::Psi(PsiWindow::default());
        let sigma = SymbolSpec::bht();
        let mut specs = vec![bht_profile("3/2"), bht_profile("1")];
        specs.push(SymbolNormSpec { exps: vec![e("2"); 6], order: vec![3, 1, 0, 5, 2, 4] });
        for spec in &specs {
            let f = symbol_mod_norm(&sigma, &g, spec, &WeightSpec::One, &win, PathChoice::Factored, DENSE_CAP).unwrap();
            let d = symbol_mod_norm(&sigma, &g, spec, &WeightSpec::One, &win, PathChoice::Dense, DENSE_CAP).unwrap();
            assert!((f.value - d.value).abs() <= 1e-8 * d.value, "{} vs {}", f.value, d.value);
        }
        let c = SymbolSpec::constant(2, C64::new(0.0, 2.0)).unwrap();
        for w in [SymbolWindow::Gaussian, win.clone()] {
            let f = symbol_mod_norm(&c, &g, &specs[0], &WeightSpec::One, &w, PathChoice::Auto, DENSE_CAP).unwrap();
            let d = symbol_mod_norm(&c, &g, &specs[0], &WeightSpec::One, &w, PathChoice::Dense, DENSE_CAP).unwrap();
            assert_eq!(f.path, NormPath::Factored);
            assert!((f.value - d.value).abs() <= 1e-8 * d.value);
        }
        let gt = make_grid(&[(6, 3.0); 4], Measure::Riemann).unwrap();
        let mut p = ExponentProfile::uniform(3, ExtExp::INF);
        p.r = vec![ExtExp::ONE, e("5/4"), e("5/4")];
        p.s_last = ExtExp::ONE;
        let spec = SymbolNormSpec::from_profile(&p).unwrap();
        let f = symbol_mod_norm(&SymbolSpec::tht(), &gt, &spec, &WeightSpec::One, &win, PathChoice::Factored, DENSE_CAP).unwrap();
        let d = symbol_mod_norm(&SymbolSpec::tht(), &gt, &spec, &WeightSpec::One, &win, PathChoice::Dense, DENSE_CAP).unwrap();
        assert!((f.value - d.value).abs() <= 1e-8 * d.value);
    }

    #[test]
    fn budget_and_factored_availability() {
        let g = make_grid(&[(64, 4.0), (64, 3.0), (64, 3.0)], Measure::Riemann).unwrap();
        let spec = bht_profile("3/2");
        let gauss = symbol_mod_norm(&SymbolSpec::bht(), &g, &spec, &WeightSpec::One, &SymbolWindow::Gaussian, PathChoice::Auto, DENSE_CAP);
        assert!(matches!(gauss, Err(Error::Budget { .. })));
        let forced = symbol_mod_norm(&SymbolSpec::bht(), &g, &spec, &WeightSpec::One, &SymbolWindow::Gaussian, PathChoice::Factored, DENSE_CAP);
        assert!(matches!(forced, Err(Error::Precondition(_))));
    }

    #[test]
    fn bht_norm_finite_for_r_above_one() {
        let win = SymbolWindow::Psi(PsiWindow::default());
        let spec = bht_profile("3/2");
        let mut vals = vec![];
        for n in [16, 32] {
            let g = make_grid(&[(n, 4.0), (n, n as f64 / 8.0), (n, n as f64 / 8.0)], Measure::Riemann).unwrap();
            vals.push(symbol_mod_norm(&SymbolSpec::bht(), &g, &spec, &WeightSpec::One, &win, PathChoice::Auto, DENSE_CAP).unwrap().value);
        }
        assert!(vals.iter().all(|v| v.is_finite() && *v > 0.0));
    }

    #[test]
    fn embedding_chain_and_identical_profiles() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let g = make_grid(&[(6, 3.0), (6, 3.0), (6, 3.0)], Measure::Riemann).unwrap();
        let spec = bht_profile("1");
        let m1 = SymbolNormSpec::m_inf_one(2);
        for sigma in [random_dense(&g, &mut rng), SymbolSpec::constant(2, C64::new(1.0, 0.0)).unwrap()] {
            let (a, b) = embedding_gap(&sigma, &g, &spec, &m1, &SymbolWindow::Gaussian).unwrap();
            assert!(a <= b * (1.0 + 1e-9) && a > 0.0);
            let (c, d) = embedding_gap(&sigma, &g, &spec, &spec, &SymbolWindow::Gaussian).unwrap();
            assert_eq!(c, d);
        }
    }

    #[test]
    fn degenerate_symbol_reduces_to_modulation_norm() {
        // σ(x, ξ) = f(x): the ξ-block only contributes constant factors
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let gx = make_grid(&[(8, 8.0)], Measure::Counting).unwrap();
        let g1 = make_grid(&[(2, 2.0)], Measure::Counting).unwrap();
        let g = gx.concat(&g1).unwrap();
        let fx: Vec<C64> = (0..8).map(|_| C64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
        let f = CArray::new(gx.clone(), fx.clone()).unwrap();
        let data: Vec<C64> = fx.iter().flat_map(|v| [*v, *v]).collect();
        let sigma = SymbolSpec::new(1, SymbolForm::Dense(CArray::new(g.clone(), data).unwrap())).unwrap();
        let phi_x = Window::gaussian(&gx);
        let delta = Window::custom(CArray::new(g1.clone(), vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap());
        let phi = Window::tensor(&[&phi_x, &delta]).unwrap();
        // time block (x, t) with x innermost, then ξ, then ν
        let spec = SymbolNormSpec { exps: vec![e("2"), e("inf"), e("inf"), e("3")], order: vec![0, 2, 1, 3] };
        let got = symbol_mod_norm(&sigma, &g, &spec, &WeightSpec::One, &SymbolWindow::Custom(phi), PathChoice::Dense, DENSE_CAP)
            .unwrap()
            .value;
        let want = modulation_norm(&f, e("2"), e("3"), &WeightSpec::One, &phi_x).unwrap();
        assert!((got - want).abs() <= 1e-12 * want, "{got} vs {want}");
    }
}
