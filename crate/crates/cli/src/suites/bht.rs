//! The bilinear Hilbert transform: symbol-class witnesses from
//! `sup_ξ ‖V_ψσ(ξ, ·)‖_{L^r}`, the exponent engine's acceptance of the
//! boundedness hypotheses, and a grid-doubling shadow of the operator bound.

use rayon::prelude::*;
use tfsym_core::exponents::{check_bilinear_cases, feasible, ExponentProfile, ExtExp, Mode, SearchOptions};
use tfsym_core::lattice::{make_grid, CArray, Grid, Measure};
use tfsym_core::modspace::{modulation_norm, WeightSpec};
use tfsym_core::operators::apply;
use tfsym_core::symbols::{sup_xi_norm, PsiWindow, SymbolSpec};
use tfsym_core::tfa::Window;
use tfsym_core::{Result, C64};

use rand::Rng;

use super::{env, trial_rng, InputDigest};
use crate::report::{Check, Rule, SuiteReport, TrialRecord};

/// Relative change allowed for `r = 3/2` when `(T, step)` doubles.
pub const STABLE_TOL: f64 = 0.05;
/// Minimum increase of the `r = 1` value per doubling of `T`.
pub const DIVERGENCE_FLOOR: f64 = 0.05;
/// Allowed growth of the largest ratio from `n = 64` to `n = 128`.
pub const GROWTH_LIMIT: f64 = 2.0;
pub const EXTENT: f64 = 16.0;
pub const SIZES: [usize; 2] = [64, 128];
/// Fourier modes `k/L`, `|k| ≤ K`; with `K = 12` both inputs and the output
/// stay below the Nyquist frequency of the coarser grid.
const K: i64 = 12;

fn e(s: &str) -> ExtExp {
    s.parse().expect("literal exponent")
}

/// `Σ step · ψ_max / |t|` over the grid points `T/2 ≤ |t| < T` of `[-T, T)`:
/// the contribution of the `1/|t|` tail that a doubling of `T` adds.
pub fn tail_increment(psi_max: f64, t: f64, step: f64) -> f64 {
    let n = (2.0 * t / step).round() as i64;
    (0..n)
        .map(|j| -t + j as f64 * step)
        .filter(|x| x.abs() >= 0.5 * t)
        .map(|x| step * psi_max / x.abs())
        .sum()
}

/// Largest value of `ψ`, located on a fine grid.
pub fn psi_max(psi: &PsiWindow) -> f64 {
    (0..=200_000).map(|j| psi.psi(-1.0 + j as f64 * 1e-5)).fold(0.0, f64::max)
}

fn stabilization(psi: &PsiWindow, index: usize) -> TrialRecord {
    let mut r = TrialRecord::new(index, "fixture", "sup_xi norm, r = 3/2");
    r.digest = InputDigest::default().text("r=3/2;64,1/16;128,1/32").finish();
    let a = sup_xi_norm(e("3/2"), psi, 64.0, 1.0 / 16.0);
    let b = sup_xi_norm(e("3/2"), psi, 128.0, 1.0 / 32.0);
    match (a, b) {
        (Ok(a), Ok(b)) => {
            r.value("T=64,step=1/16", a).value("T=128,step=1/32", b);
            r.check(Check::new("relative change under doubling", (b - a).abs() / a, STABLE_TOL, Rule::Lt, 0.0));
        }
        (Err(e), _) | (_, Err(e)) => {
            r.error(e);
        }
    }
    r.finish()
}

fn divergence(psi: &PsiWindow, index: usize) -> TrialRecord {
    let mut r = TrialRecord::new(index, "fixture", "sup_xi norm, r = 1");
    r.digest = InputDigest::default().text("r=1;64,128,256,512;1/16").finish();
    let step = 1.0 / 16.0;
    let ts = [64.0, 128.0, 256.0, 512.0];
    let vals: Vec<f64> = match ts.iter().map(|&t| sup_xi_norm(ExtExp::ONE, psi, t, step)).collect::<Result<_>>() {
        Ok(v) => v,
        Err(e) => {
            r.error(e);
            return r.finish();
        }
    };
    let pm = psi_max(psi);
    r.value("psi_max", pm);
    for (t, v) in ts.iter().zip(&vals) {
        r.value(&format!("T={t}"), *v);
    }
    for k in 1..ts.len() {
        let inc = vals[k] - vals[k - 1];
        r.value(&format!("tail oracle T={}", ts[k]), tail_increment(pm, ts[k] / 2.0, step));
        r.check(Check::new(format!("increase from T={} to T={}", ts[k - 1], ts[k]), inc, DIVERGENCE_FLOOR, Rule::Ge, 0.0));
    }
    r.finish()
}

/// `(p₁,q₁) = (p₂,q₂) = (2,2)` into `(p₀,q₃) = (3/2,∞)` with the symbol
/// profile `(∞, 1, 5/4), (∞, ∞, 1)`.
pub fn boundedness_profile() -> ExponentProfile {
    let mut pr = ExponentProfile::uniform(2, ExtExp::TWO);
    pr.p0 = e("3/2");
    pr.q_last = ExtExp::INF;
    pr.r0 = ExtExp::INF;
    pr.r = vec![ExtExp::ONE, e("5/4")];
    pr.s = vec![ExtExp::INF, ExtExp::INF];
    pr.s_last = ExtExp::ONE;
    pr
}

fn feasibility(index: usize) -> TrialRecord {
    let pr = boundedness_profile();
    let mut r = TrialRecord::new(index, "fixture", "engine accepts (2,2)x(2,2) -> (3/2,inf)");
    r.digest = InputDigest::default().exps(&pr.symbol_exps()).exps(&pr.p_full()).exps(&pr.q_full()).finish();
    let u = |x: ExtExp| x.u();
    let strict = u(pr.p[0]) + u(pr.p[1]) > u(pr.p0);
    let freq = u(pr.q[0]) + u(pr.q[1]) >= ExtExp::ONE.u() + u(pr.q_last);
    r.check(Check::flag("1/p1 + 1/p2 > 1/p0", strict)).check(Check::flag("1/q1 + 1/q2 >= 1 + 1/q3", freq));
    match check_bilinear_cases(&pr) {
        Ok(c) => {
            r.param("time_cases", format!("{:?}", c.time)).param("freq_cases", format!("{:?}", c.freq));
            r.check(Check::flag("standing conditions", c.standing))
                .check(Check::flag("time case (4) holds", c.time.contains(&4)))
                .check(Check::flag("frequency case (4) holds", c.freq.contains(&4)));
        }
        Err(e) => {
            r.error(e);
        }
    }
    let general = feasible(&pr, &SearchOptions::new(Mode::Theorem)).map(|w| w.is_some()).unwrap_or(false);
    r.check(Check::flag("general theorem-mode engine agrees", general));
    r.finish()
}

fn band_limited(coeffs: &[C64], grid: &Grid) -> CArray {
    let l = grid.axis(0).extent;
    let f = CArray::sample(grid, |x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * C64::from_polar(1.0, std::f64::consts::TAU * (j as i64 - K) as f64 * x[0] / l))
            .sum()
    })
    .expect("finite");
    let norm = f.l2_norm();
    f.scale(C64::new(1.0 / norm, 0.0))
}

/// `‖BH(f, g)‖_{M^{3/2,∞}} / (‖f‖_{M^{2,2}} ‖g‖_{M^{2,2}})` on an `n`-point grid.
pub fn ratio(fc: &[C64], gc: &[C64], n: usize) -> Result<f64> {
    let grid = make_grid(&[(n, EXTENT)], Measure::Riemann)?;
    let f = band_limited(fc, &grid);
    let g = band_limited(gc, &grid);
    let phi = Window::gaussian(&grid);
    let one = WeightSpec::One;
    let out = apply(&SymbolSpec::bht(), &[f.clone(), g.clone()])?.output;
    let top = modulation_norm(&out, e("3/2"), ExtExp::INF, &one, &phi)?;
    let bottom = modulation_norm(&f, ExtExp::TWO, ExtExp::TWO, &one, &phi)?
        * modulation_norm(&g, ExtExp::TWO, ExtExp::TWO, &one, &phi)?;
    Ok(top / bottom)
}

fn coefficients<R: Rng>(rng: &mut R) -> Vec<C64> {
    (0..=2 * K).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// `pairs` random band-limited pairs; one record per pair plus the summary.
fn boundedness(seed: u64, pairs: usize, base: usize) -> Vec<TrialRecord> {
    let mut recs: Vec<TrialRecord> = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let fc = coefficients(&mut rng);
            let gc = coefficients(&mut rng);
            let mut r = TrialRecord::new(base + i, "random", format!("pair {i}"));
            r.digest = InputDigest::default().samples(&fc).samples(&gc).finish();
            for n in SIZES {
                match ratio(&fc, &gc, n) {
                    Ok(v) => {
                        r.value(&format!("ratio n={n}"), v);
                        r.check(Check::new(format!("ratio finite at n={n}"), v, f64::INFINITY, Rule::Lt, 0.0));
                    }
                    Err(e) => {
                        r.error(e);
                    }
                }
            }
            r.finish()
        })
        .collect();
    let max_at = |n: usize| {
        recs.iter()
            .filter_map(|r| r.values.get(&format!("ratio n={n}")).map(|v| v.0))
            .fold(0.0, f64::max)
    };
    let (lo, hi) = (max_at(SIZES[0]), max_at(SIZES[1]));
    let mut s = TrialRecord::new(base + pairs, "summary", "largest ratio under grid doubling");
    s.value(&format!("max ratio n={}", SIZES[0]), lo).value(&format!("max ratio n={}", SIZES[1]), hi);
    s.check(Check::new("growth factor of the largest ratio", hi / lo, GROWTH_LIMIT, Rule::Lt, 0.0));
    recs.push(s.finish());
    recs
}

pub fn verify_bht(seed: u64, pairs: usize) -> SuiteReport {
    let psi = PsiWindow::default();
    let mut records = vec![stabilization(&psi, 0), divergence(&psi, 1), feasibility(2)];
    records.extend(boundedness(seed, pairs, 3));
    SuiteReport::new(
        "bht",
        seed,
        env(&[
            ("psi_delta", psi.delta().to_string()),
            ("ratio_grids", format!("n={SIZES:?}, extent={EXTENT}, riemann")),
            ("ratio_inputs", format!("unit L2 norm, Fourier modes k/{EXTENT} with |k| <= {K}")),
            ("ratio_window", "gaussian".into()),
        ]),
        records,
    )
}
