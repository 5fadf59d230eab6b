//! Young-type inequalities on the cyclic group ℤ₁₆ with counting measure.
//!
//! Exponents are drawn from the grid `1/p ∈ {0, 1/12, …, 1}`; the free output
//! exponent (`p₀`, resp. `q_{m+1}`) is then enumerated over the same grid and
//! filtered through the exact condition checker. On a finite group the
//! inequalities hold with constant one, so any failure is a bug.

use rand::seq::SliceRandom;
use rand::Rng;
use tfsym_core::exponents::{check_young_freq_perm, check_young_time_perm, ExtExp, Perm, Reading};
use tfsym_core::lattice::{unravel, CArray, Grid, Measure};
use tfsym_core::mixed_norm::{mixed_norm, MixedNormSpec};
use tfsym_core::C64;

use super::{env, exp_grid, lp_counting, random_exp, random_perm, rough_samples, run_trials, trial_rng, InputDigest};
use crate::report::{Check, Rule, SuiteReport, TrialRecord};

pub const N: usize = 16;
pub const TOL: f64 = 1e-12;
const DEN: i128 = 12;
const MAX_ATTEMPTS: usize = 100_000;

fn e(s: &str) -> ExtExp {
    s.parse().expect("literal exponent")
}

/// A time-side instance: `F(x, t) = g(x) ∏ f_k(x - t_k)` against
/// `‖g‖_{p₀} ∏ ‖f_k‖_{p_k}` in `L^{(r₀, r)}` integrated in the order κ.
pub struct TimeCase {
    pub kappa: Perm,
    pub p0: ExtExp,
    pub p: Vec<ExtExp>,
    pub r0: ExtExp,
    pub r: Vec<ExtExp>,
}

/// A frequency-side instance: `G(t, x) = ∏ f_k(t_k) g(x + S(t))` against
/// `∏ ‖f_k‖_{q_k} ‖g‖_{q_{m+1}}` in `L^{(s, s_{m+1})}` in the order ρ.
pub struct FreqCase {
    pub rho: Perm,
    pub q: Vec<ExtExp>,
    pub q_last: ExtExp,
    pub s: Vec<ExtExp>,
    pub s_last: ExtExp,
}

fn sample_time_case<R: Rng>(rng: &mut R) -> Option<TimeCase> {
    let m = rng.gen_range(1..=3);
    let grid = exp_grid(DEN);
    for _ in 0..MAX_ATTEMPTS {
        let kappa = random_perm(rng, m + 1, 0);
        let p: Vec<ExtExp> = (0..m).map(|_| random_exp(rng, DEN)).collect();
        let r: Vec<ExtExp> = (0..m).map(|_| random_exp(rng, DEN)).collect();
        let r0 = random_exp(rng, DEN);
        let ok: Vec<ExtExp> = grid
            .iter()
            .copied()
            .filter(|&p0| check_young_time_perm(&kappa, p0, &p, r0, &r, Reading::default()).unwrap_or(false))
            .collect();
        if let Some(&p0) = ok.choose(rng) {
            return Some(TimeCase { kappa, p0, p, r0, r });
        }
    }
    None
}

fn sample_freq_case<R: Rng>(rng: &mut R) -> Option<FreqCase> {
    let m = rng.gen_range(1..=3);
    let grid = exp_grid(DEN);
    for _ in 0..MAX_ATTEMPTS {
        let rho = random_perm(rng, m + 1, 1);
        let q: Vec<ExtExp> = (0..m).map(|_| random_exp(rng, DEN)).collect();
        let s: Vec<ExtExp> = (0..m).map(|_| random_exp(rng, DEN)).collect();
        let s_last = random_exp(rng, DEN);
        let ok: Vec<ExtExp> = grid
            .iter()
            .copied()
            .filter(|&ql| check_young_freq_perm(&rho, &q, ql, &s, s_last, Reading::default()).unwrap_or(false))
            .collect();
        if let Some(&q_last) = ok.choose(rng) {
            return Some(FreqCase { rho, q, q_last, s, s_last });
        }
    }
    None
}

fn counting_cube(rank: usize) -> Grid {
    Grid::cube(rank, N, N as f64, Measure::Counting).expect("valid grid")
}

/// Evaluates both sides of the time-side inequality. `fs` has `m` entries.
pub fn time_sides(case: &TimeCase, fs: &[Vec<C64>], g: &[C64]) -> (f64, f64) {
    let m = case.p.len();
    let grid = counting_cube(m + 1);
    let shape = grid.shape();
    let mut idx = vec![0; m + 1];
    let data: Vec<C64> = (0..grid.len())
        .map(|o| {
            unravel(o, &shape, &mut idx);
            let x = idx[0];
            let mut v = g[x];
            for k in 0..m {
                v *= fs[k][(x + N - idx[k + 1]) % N];
            }
            v
        })
        .collect();
    let big = CArray::new(grid, data).expect("shape matches");
    let mut exps = vec![case.r0];
    exps.extend_from_slice(&case.r);
    let lhs = mixed_norm(&big, &MixedNormSpec::new(&exps, case.kappa.images())).expect("finite");
    let rhs = lp_counting(g, case.p0) * fs.iter().zip(&case.p).map(|(f, &p)| lp_counting(f, p)).product::<f64>();
    (lhs, rhs)
}

/// Evaluates both sides of the frequency-side inequality.
pub fn freq_sides(case: &FreqCase, fs: &[Vec<C64>], g: &[C64]) -> (f64, f64) {
    let m = case.q.len();
    let grid = counting_cube(m + 1);
    let shape = grid.shape();
    let mut idx = vec![0; m + 1];
    let data: Vec<C64> = (0..grid.len())
        .map(|o| {
            unravel(o, &shape, &mut idx);
            let mut v = C64::new(1.0, 0.0);
            let mut shift = 0;
            for k in 0..m {
                v *= fs[k][idx[k]];
                shift += idx[k];
            }
            v * g[(idx[m] + shift) % N]
        })
        .collect();
    let big = CArray::new(grid, data).expect("shape matches");
    let mut exps = case.s.clone();
    exps.push(case.s_last);
    let order: Vec<usize> = case.rho.images().iter().map(|j| j - 1).collect();
    let lhs = mixed_norm(&big, &MixedNormSpec::new(&exps, &order)).expect("finite");
    let rhs = fs.iter().zip(&case.q).map(|(f, &q)| lp_counting(f, q)).product::<f64>() * lp_counting(g, case.q_last);
    (lhs, rhs)
}

fn delta() -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); N];
    v[0] = C64::new(1.0, 0.0);
    v
}

fn time_record(index: usize, kind: &str, label: &str, case: &TimeCase, fs: &[Vec<C64>], g: &[C64]) -> TrialRecord {
    let mut rec = TrialRecord::new(index, kind, label);
    let mut d = InputDigest::default();
    d.text(&format!("{:?}", case.kappa.images())).exps(&[case.p0, case.r0]).exps(&case.p).exps(&case.r);
    for f in fs {
        d.samples(f);
    }
    rec.digest = d.samples(g).finish();
    let list = |v: &[ExtExp]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
    rec.param("m", case.p.len())
        .param("kappa", format!("{:?}", case.kappa.images()))
        .param("p0", case.p0)
        .param("p", list(&case.p))
        .param("r0", case.r0)
        .param("r", list(&case.r));
    let (lhs, rhs) = time_sides(case, fs, g);
    rec.check(Check::new("mixed norm <= product of norms", lhs, rhs, Rule::Le, TOL));
    rec.finish()
}

fn freq_record(index: usize, kind: &str, label: &str, case: &FreqCase, fs: &[Vec<C64>], g: &[C64]) -> TrialRecord {
    let mut rec = TrialRecord::new(index, kind, label);
    let mut d = InputDigest::default();
    d.text(&format!("{:?}", case.rho.images())).exps(&[case.q_last, case.s_last]).exps(&case.q).exps(&case.s);
    for f in fs {
        d.samples(f);
    }
    rec.digest = d.samples(g).finish();
    let list = |v: &[ExtExp]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
    rec.param("m", case.q.len())
        .param("rho", format!("{:?}", case.rho.images()))
        .param("q", list(&case.q))
        .param("q_last", case.q_last)
        .param("s", list(&case.s))
        .param("s_last", case.s_last);
    let (lhs, rhs) = freq_sides(case, fs, g);
    rec.check(Check::new("mixed norm <= product of norms", lhs, rhs, Rule::Le, TOL));
    rec.finish()
}

fn environment() -> std::collections::BTreeMap<String, String> {
    env(&[
        ("group", format!("Z_{N}")),
        ("measure", "counting".into()),
        ("exponent_grid", format!("1/p in {{k/{DEN}}}")),
        ("tolerance", format!("{TOL:e} relative")),
    ])
}

pub fn verify_young_time(seed: u64, trials: usize) -> SuiteReport {
    let mut records = Vec::new();
    // δ inputs: both sides equal one.
    let id = TimeCase {
        kappa: Perm::identity(2, 0),
        p0: ExtExp::ONE,
        p: vec![ExtExp::ONE],
        r0: ExtExp::ONE,
        r: vec![ExtExp::ONE],
    };
    records.push(time_record(0, "fixture", "delta inputs", &id, &[delta()], &delta()));
    // (r₀, p₀, r₁, p₁, p₂, r₂) = (1, 2, 1, 1, 1, 2).
    let stacked = TimeCase {
        kappa: Perm::identity(3, 0),
        p0: e("2"),
        p: vec![e("1"), e("1")],
        r0: e("1"),
        r: vec![e("1"), e("2")],
    };
    let mut rng = trial_rng(seed, usize::MAX >> 1);
    let fs = vec![rough_samples(&mut rng, N), rough_samples(&mut rng, N)];
    let g = rough_samples(&mut rng, N);
    records.push(time_record(1, "fixture", "stacking tuple (1,2,1,1,1,2)", &stacked, &fs, &g));

    let base = records.len();
    records.extend(run_trials(trials, |i| {
        let mut rng = trial_rng(seed, i);
        match sample_time_case(&mut rng) {
            Some(case) => {
                let fs: Vec<Vec<C64>> = (0..case.p.len()).map(|_| rough_samples(&mut rng, N)).collect();
                let g = rough_samples(&mut rng, N);
                time_record(base + i, "random", &format!("trial {i}"), &case, &fs, &g)
            }
            None => {
                let mut r = TrialRecord::new(base + i, "random", format!("trial {i}"));
                r.error("no admissible exponent tuple found");
                r.finish()
            }
        }
    }));
    SuiteReport::new("young-time", seed, environment(), records)
}

pub fn verify_young_freq(seed: u64, trials: usize) -> SuiteReport {
    let mut records = Vec::new();
    let id = FreqCase {
        rho: Perm::identity(2, 1),
        q: vec![ExtExp::ONE],
        q_last: ExtExp::ONE,
        s: vec![ExtExp::ONE],
        s_last: ExtExp::ONE,
    };
    records.push(freq_record(0, "fixture", "delta inputs", &id, &[delta()], &delta()));
    // A chain 1 ≤ s₁ ≤ q₁ ≤ s₂ ≤ q₂ ≤ s₃, with q₃ fixed by the equality condition.
    let chain = FreqCase {
        rho: Perm::identity(3, 1),
        q: vec![e("4/3"), e("2")],
        q_last: e("4/3"),
        s: vec![e("1"), e("3/2")],
        s_last: e("3"),
    };
    let mut rng = trial_rng(seed, usize::MAX >> 1);
    let fs = vec![rough_samples(&mut rng, N), rough_samples(&mut rng, N)];
    let g = rough_samples(&mut rng, N);
    let mut rec = freq_record(1, "fixture", "increasing chain", &chain, &fs, &g);
    let admissible = check_young_freq_perm(&chain.rho, &chain.q, chain.q_last, &chain.s, chain.s_last, Reading::default())
        .unwrap_or(false);
    rec.check(Check::flag("chain accepted by the condition checker", admissible));
    records.push(rec.finish());

    let base = records.len();
    records.extend(run_trials(trials, |i| {
        let mut rng = trial_rng(seed, i);
        match sample_freq_case(&mut rng) {
            Some(case) => {
                let fs: Vec<Vec<C64>> = (0..case.q.len()).map(|_| rough_samples(&mut rng, N)).collect();
                let g = rough_samples(&mut rng, N);
                freq_record(base + i, "random", &format!("trial {i}"), &case, &fs, &g)
            }
            None => {
                let mut r = TrialRecord::new(base + i, "random", format!("trial {i}"));
                r.error("no admissible exponent tuple found");
                r.finish()
            }
        }
    }));
    SuiteReport::new("young-freq", seed, environment(), records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        assert!(verify_young_time(1, 20).all_passed());
        assert!(verify_young_freq(1, 20).all_passed());
    }

    #[test]
    fn violating_exponents_are_caught() {
        // p₀ = ∞ with p = r = 1 breaks the equality condition, and the
        // inequality itself fails for flat inputs: N² against N.
        let bad = TimeCase {
            kappa: Perm::identity(2, 0),
            p0: ExtExp::INF,
            p: vec![ExtExp::ONE],
            r0: ExtExp::ONE,
            r: vec![ExtExp::ONE],
        };
        assert!(!check_young_time_perm(&bad.kappa, bad.p0, &bad.p, bad.r0, &bad.r, Reading::default()).unwrap());
        let flat = vec![C64::new(1.0, 0.0); N];
        let (lhs, rhs) = time_sides(&bad, &[flat.clone()], &flat);
        assert!(lhs > rhs);
    }
}
