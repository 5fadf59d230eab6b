//! Integration order in mixed norms. `F(x, t) = g(x - t)` with `L¹` in `x`
//! and `L^∞` in `t` is computed on grids of fixed step and growing extent:
//! with `x` integrated first the norm is `‖g‖₁` at every size, with `t` first
//! it is `L · max|g|` and grows without bound. Random arrays check the
//! Minkowski ordering `‖F‖_{(p,q);(0,1)} ≤ ‖F‖_{(p,q);(1,0)}` for `p ≤ q`.

use std::collections::BTreeMap;

use rand::Rng;
use tfsym_core::exponents::ExtExp;
use tfsym_core::lattice::{make_grid, unravel, CArray, Grid, Measure};
use tfsym_core::mixed_norm::{minkowski_gap, mixed_norm, MixedNormSpec};
use tfsym_core::tfa::sub_index;
use tfsym_core::C64;

use super::{env, random_exp, rough_samples, run_trials, trial_rng, InputDigest};
use crate::report::{Check, Rule, SuiteReport, TrialRecord};

pub const STEP: f64 = 1.0 / 8.0;
pub const EXTENTS: [f64; 4] = [8.0, 16.0, 32.0, 64.0];
pub const TOL: f64 = 1e-12;
/// Gaussian tails beyond `|x| = 4` are below this, relative.
const TAIL_TOL: f64 = 1e-6;

/// `F(x, t) = e^{-(x-t)²}` on the square grid of the given extent.
pub fn shifted_gaussian(extent: f64) -> CArray {
    let n = (extent / STEP).round() as usize;
    let grid = make_grid(&[(n, extent), (n, extent)], Measure::Riemann).expect("valid grid");
    let axis = *grid.axis(0);
    let mut idx = [0; 2];
    let data = (0..grid.len())
        .map(|o| {
            unravel(o, &[n, n], &mut idx);
            let y = axis.coord(sub_index(idx[0], idx[1], n));
            C64::new((-y * y).exp(), 0.0)
        })
        .collect();
    CArray::new(grid, data).expect("shape")
}

/// `(x first, t first)` with exponents `(1, ∞)` on `(x, t)`.
pub fn both_orders(f: &CArray, exps: &[ExtExp; 2]) -> (f64, f64) {
    let a = mixed_norm(f, &MixedNormSpec::new(exps, &[0, 1])).expect("finite");
    let b = mixed_norm(f, &MixedNormSpec::new(exps, &[1, 0])).expect("finite");
    (a, b)
}

fn extent_records() -> (Vec<TrialRecord>, Vec<(f64, f64)>) {
    let exps = [ExtExp::ONE, ExtExp::INF];
    let mut recs = Vec::new();
    let mut vals = Vec::new();
    for (i, &l) in EXTENTS.iter().enumerate() {
        let f = shifted_gaussian(l);
        let mut r = TrialRecord::new(i, "fixture", format!("g(x-t), extent {l}"));
        r.digest = InputDigest::default().text(&format!("gaussian;{l};{STEP}")).finish();
        let (x_first, t_first) = both_orders(&f, &exps);
        // Oracles straight from the one-dimensional samples.
        let n = f.grid().axis(0).n;
        let g: Vec<f64> = (0..n).map(|j| f.at(&[j, n / 2]).norm()).collect();
        let l1: f64 = g.iter().sum::<f64>() * STEP;
        let sup = g.iter().copied().fold(0.0, f64::max);
        r.value("x first", x_first).value("t first", t_first).value("sum |g| h", l1).value("L max|g|", l * sup);
        r.check(Check::new("x first equals ‖g‖₁", x_first, l1, Rule::RelDiff, TOL))
            .check(Check::new("t first equals L·max|g|", t_first, l * sup, Rule::RelDiff, TOL))
            .check(Check::new("x first <= t first", x_first, t_first, Rule::Le, TOL));
        recs.push(r.finish());
        vals.push((x_first, t_first));
    }
    let (first, last) = (vals[0], vals[vals.len() - 1]);
    let growth = EXTENTS[EXTENTS.len() - 1] / EXTENTS[0];
    let mut s = TrialRecord::new(recs.len(), "summary", "membership of g(x-t)");
    s.value("x first, smallest extent", first.0)
        .value("x first, largest extent", last.0)
        .value("t first, smallest extent", first.1)
        .value("t first, largest extent", last.1);
    s.check(Check::new("x first is independent of the extent", last.0, first.0, Rule::RelDiff, TAIL_TOL))
        .check(Check::new("t first grows linearly with the extent", last.1 / first.1, growth, Rule::RelDiff, TOL));
    recs.push(s.finish());
    (recs, vals)
}

fn random_record(seed: u64, i: usize, index: usize) -> TrialRecord {
    let mut rng = trial_rng(seed, i);
    let (n0, n1) = (rng.gen_range(2..=12), rng.gen_range(2..=12));
    let mut a = random_exp(&mut rng, 12);
    let mut b = random_exp(&mut rng, 12);
    if !a.le(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    let grid = Grid::new(&[(n0, n0 as f64), (n1, n1 as f64)], Measure::Counting).expect("valid grid");
    let f = CArray::new(grid, rough_samples(&mut rng, n0 * n1)).expect("shape");
    let mut r = TrialRecord::new(index, "random", format!("trial {i}"));
    r.digest = InputDigest::default().exps(&[a, b]).array(&f).finish();
    r.param("p", a).param("q", b).param("shape", format!("{n0}x{n1}"));
    let (x_first, t_first) = both_orders(&f, &[a, b]);
    r.value("x first", x_first).value("t first", t_first);
    r.check(Check::new("larger exponent outermost gives the smaller norm", x_first, t_first, Rule::Le, TOL));
    match minkowski_gap(&f, &[a, b], (0, 1)) {
        Ok((g0, g1)) => {
            r.check(Check::new("minkowski_gap, first value", g0, x_first, Rule::RelDiff, TOL))
                .check(Check::new("minkowski_gap, second value", g1, t_first, Rule::RelDiff, TOL));
        }
        Err(e) => {
            r.error(e);
        }
    }
    r.finish()
}

pub fn verify_minkowski(seed: u64, trials: usize) -> SuiteReport {
    let (mut records, vals) = extent_records();
    let base = records.len();
    records.extend(run_trials(trials, |i| random_record(seed, i, base + i)));
    let mut rep = SuiteReport::new(
        "minkowski",
        seed,
        env(&[
            ("step", STEP.to_string()),
            ("extents", format!("{EXTENTS:?}")),
            ("profile", "g(x) = exp(-x^2), exponents (1 on x, inf on t)".into()),
        ]),
        records,
    );
    let bounded = rep.records[base - 1].checks.iter().all(|c| c.pass);
    let mut findings = BTreeMap::new();
    findings.insert(
        "values".into(),
        vals.iter()
            .zip(EXTENTS)
            .map(|((a, b), l)| format!("L={l}: x first {a:.6}, t first {b:.6}"))
            .collect::<Vec<_>>()
            .join("; "),
    );
    if bounded {
        findings.insert(
            "membership".into(),
            "g(x-t) ∈ L^{(1,∞);(0,1)} ∖ L^{(1,∞);(1,0)}: integrating x first gives ‖g‖₁, integrating t first diverges"
                .into(),
        );
        findings.insert(
            "inclusion".into(),
            "for q ≥ p, ‖F‖_{(p,q);(0,1)} ≤ ‖F‖_{(p,q);(1,0)}, hence L^{(p,q);(1,0)} ⊆ L^{(p,q);(0,1)}; \
             integrating the larger exponent last gives the larger space"
                .into(),
        );
    }
    rep.findings = findings;
    rep
}
