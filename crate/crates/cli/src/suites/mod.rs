//! Verification suites. Each suite draws its inputs from a per-trial stream
//! of a seeded ChaCha generator, so trials can run in any order (and in
//! parallel) while the report stays byte-identical for a given seed.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest as _, Sha256};
use tfsym_core::exponents::{ExtExp, Perm, Q};
use tfsym_core::lattice::CArray;
use tfsym_core::C64;

use crate::report::{SuiteReport, TrialRecord};

pub mod bht;
pub mod lemma21;
pub mod minkowski;
pub mod proposition;
pub mod young;

pub use bht::verify_bht;
pub use lemma21::verify_lemma21;
pub use minkowski::verify_minkowski;
pub use proposition::verify_proposition;
pub use young::{verify_young_freq, verify_young_time};

pub const SUITES: [&str; 6] = ["young-time", "young-freq", "proposition", "lemma21", "bht", "minkowski"];

pub fn default_trials(suite: &str) -> usize {
    match suite {
        "young-time" | "young-freq" => 500,
        "proposition" | "lemma21" => 50,
        "bht" => 100,
        "minkowski" => 20,
        _ => 0,
    }
}

/// Runs one suite by name (`all` runs every suite), or `None` for an unknown name.
pub fn run_suite(name: &str, seed: u64, trials: Option<usize>) -> Option<Vec<SuiteReport>> {
    let one = |s: &str| {
        let n = trials.unwrap_or_else(|| default_trials(s));
        match s {
            "young-time" => verify_young_time(seed, n),
            "young-freq" => verify_young_freq(seed, n),
            "proposition" => verify_proposition(seed, n),
            "lemma21" => verify_lemma21(seed, n),
            "bht" => verify_bht(seed, n),
            "minkowski" => verify_minkowski(seed, n),
            _ => unreachable!(),
        }
    };
    if name == "all" {
        return Some(SUITES.iter().map(|s| one(s)).collect());
    }
    SUITES.contains(&name).then(|| vec![one(name)])
}

/// The generator for trial `index`: a fixed seed, one stream per trial.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Runs `f` over `0..n` in parallel; results come back in index order.
pub fn run_trials<F>(n: usize, f: F) -> Vec<TrialRecord>
where
    F: Fn(usize) -> TrialRecord + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

pub fn env(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Incremental sha256 over everything a trial consumed.
#[derive(Default)]
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn text(&mut self, s: &str) -> &mut Self {
        self.0.update((s.len() as u64).to_le_bytes());
        self.0.update(s.as_bytes());
        self
    }

    pub fn exps(&mut self, es: &[ExtExp]) -> &mut Self {
        for e in es {
            self.text(&e.to_string());
        }
        self
    }

    pub fn samples(&mut self, v: &[C64]) -> &mut Self {
        self.0.update((v.len() as u64).to_le_bytes());
        for z in v {
            self.0.update(z.re.to_le_bytes());
            self.0.update(z.im.to_le_bytes());
        }
        self
    }

    pub fn array(&mut self, a: &CArray) -> &mut Self {
        self.text(&format!("{:?}", a.grid().shape()));
        self.samples(a.data())
    }

    pub fn finish(&mut self) -> String {
        hex::encode(std::mem::take(&mut self.0).finalize())
    }
}

/// A uniformly random exponent with `1/p ∈ {0, 1/den, …, 1}`.
pub fn random_exp<R: Rng>(rng: &mut R, den: i128) -> ExtExp {
    ExtExp::from_recip(Q::new(rng.gen_range(0..=den), den)).expect("in [0,1]")
}

/// Every exponent with `1/p ∈ {0, 1/den, …, 1}`.
pub fn exp_grid(den: i128) -> Vec<ExtExp> {
    (0..=den).map(|k| ExtExp::from_recip(Q::new(k, den)).expect("in [0,1]")).collect()
}

pub fn random_perm<R: Rng>(rng: &mut R, len: usize, base: usize) -> Perm {
    let mut v: Vec<usize> = (base..base + len).collect();
    v.shuffle(rng);
    Perm::new(v, base).expect("a shuffle is a permutation")
}

/// Complex samples with real and imaginary parts uniform in `[-1, 1]`.
pub fn random_samples<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// Samples with log-uniform magnitudes over six decades, random phases, and
/// roughly a quarter of the entries zeroed. Stresses the exponent extremes.
pub fn rough_samples<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.25) {
                return C64::new(0.0, 0.0);
            }
            let mag = 10f64.powf(rng.gen_range(-3.0..3.0));
            C64::from_polar(mag, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

/// `(Σ|v|^p)^{1/p}` with counting measure, or the maximum for `p = ∞`.
pub fn lp_counting(v: &[C64], p: ExtExp) -> f64 {
    if p.is_inf() {
        return v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    let p = p.to_f64();
    v.iter().map(|z| z.norm().powf(p)).sum::<f64>().powf(1.0 / p)
}
