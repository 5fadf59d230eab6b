//! Closed-form sufficient conditions: the bilinear case tables and the
//! monotone-chain corollary.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{ExponentProfile, ExtExp, Perm, Q};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearCases {
    /// Time-side case numbers (1..=5) whose inequalities hold.
    pub time: Vec<u8>,
    /// Frequency-side case numbers (1..=5) whose inequalities hold.
    pub freq: Vec<u8>,
    /// `1/p₁ + 1/r₁ ≥ 1` and `1/p₂ + 1/r₂ ≥ 1`.
    pub standing: bool,
}

impl BilinearCases {
    pub fn applies(&self) -> bool {
        self.standing && !self.time.is_empty() && !self.freq.is_empty()
    }
}

/// Orders κ that each time case is derived from.
pub fn time_case_orders(case: u8) -> Vec<Perm> {
    let imgs: &[&[usize]] = match case {
        1 => &[&[1, 2, 0], &[2, 1, 0]],
        2 => &[&[2, 0, 1]],
        3 => &[&[1, 0, 2]],
        4 => &[&[0, 1, 2]],
        5 => &[&[0, 2, 1]],
        _ => &[],
    };
    imgs.iter().map(|i| Perm::time(i).unwrap()).collect()
}

/// Orders ρ that each frequency case is derived from. Case 5 is the mirror of
/// case 4 under `1 ↔ 2`, hence ρ = (2,1,3); the printed label (1,3,2) repeats
/// case 2 and does not yield case 5's inequalities.
pub fn freq_case_orders(case: u8) -> Vec<Perm> {
    let imgs: &[&[usize]] = match case {
        1 => &[&[3, 1, 2], &[3, 2, 1]],
        2 => &[&[1, 3, 2]],
        3 => &[&[2, 3, 1]],
        4 => &[&[1, 2, 3]],
        5 => &[&[2, 1, 3]],
        _ => &[],
    };
    imgs.iter().map(|i| Perm::freq(i).unwrap()).collect()
}

/// Evaluates both five-case tables literally for `m = 2`.
pub fn check_bilinear_cases(pr: &ExponentProfile) -> Result<BilinearCases> {
    pr.validate()?;
    if pr.m() != 2 {
        return Err(Error::Shape("the bilinear case tables need m = 2".into()));
    }
    let one = Q::one();
    let two = Q::from_integer(2);
    let u = |e: &ExtExp| e.u();
    let (p0, p1, p2) = (u(&pr.p0), u(&pr.p[0]), u(&pr.p[1]));
    let (r0, r1, r2) = (u(&pr.r0), u(&pr.r[0]), u(&pr.r[1]));
    let (q1, q2, q3) = (u(&pr.q[0]), u(&pr.q[1]), u(&pr.q_last));
    let (s1, s2, s3) = (u(&pr.s[0]), u(&pr.s[1]), u(&pr.s_last));
    // 1/max{a, b} = min{1/a, 1/b}; b′ has reciprocal 1 − 1/b.
    let inv_max = |a: Q, b: Q| a.min(b);

    let mut time = Vec::new();
    if p0 <= r0 {
        time.push(1);
    }
    if one + p0 <= r0 + r1 + p1 && r1 >= p0 && r1 >= r0 {
        time.push(2);
    }
    if one + p0 <= r0 + r2 + p2 && r2 >= p0 && r2 >= r0 {
        time.push(3);
    }
    if two + p0 <= r0 + r1 + r2 + inv_max(p1, one - r0) + p2 && r2 >= p0 && r1 >= r0 && r2 >= r0 {
        time.push(4);
    }
    if two + p0 <= r0 + r1 + r2 + inv_max(p2, one - r0) + p1 && r1 >= p0 && r1 >= r0 && r2 >= r0 {
        time.push(5);
    }

    let mut freq = Vec::new();
    if q3 <= s3 {
        freq.push(1);
    }
    if one + q3 <= q1 + s1 + s3 && s3 >= q3 && s3 >= s1 && s3 >= one - q1 {
        freq.push(2);
    }
    if one + q3 <= q2 + s2 + s3 && s3 >= q3 && s3 >= s2 && s3 >= one - q2 {
        freq.push(3);
    }
    let m1 = inv_max(q1, one - s1);
    let m2 = inv_max(q2, one - s2);
    let joint = two + q3 <= m1 + m2 + s1 + s2 + s3;
    if two <= m1 + m2 + s2 + s3 && s3 >= one - q2 && s3 >= s2 && joint {
        freq.push(4);
    }
    if two <= m1 + m2 + s1 + s3 && s3 >= one - q1 && s3 >= s1 && joint {
        freq.push(5);
    }

    let standing = p1 + r1 >= one && p2 + r2 >= one;
    Ok(BilinearCases { time, freq, standing })
}

/// The chains `1 ≤ r₀′ ≤ p₁ ≤ r₁′ ≤ … ≤ p_m ≤ r_m′` and
/// `1 ≤ s₁′ ≤ q₁ ≤ s₂′ ≤ … ≤ q_m ≤ s_{m+1}′`, plus the aggregate inequalities
/// `1/r₀ + Σ(1/p_k + 1/r_k) ≥ m + 1/p₀` and
/// `1/s_{m+1} + Σ(1/q_k + 1/s_k) ≥ m + 1/q_{m+1}`.
pub fn check_monotone_chain(pr: &ExponentProfile) -> Result<bool> {
    pr.validate()?;
    let m = pr.m();
    let one = Q::one();
    // Chains in reciprocals are non-increasing sequences.
    let mut time: Vec<Q> = alloc::vec![one, one - pr.r0.u()];
    for k in 0..m {
        time.push(pr.p[k].u());
        time.push(one - pr.r[k].u());
    }
    let mut freq: Vec<Q> = alloc::vec![one];
    for k in 0..m {
        freq.push(one - pr.s[k].u());
        freq.push(pr.q[k].u());
    }
    freq.push(one - pr.s_last.u());
    freq.push(Q::zero());
    let descending = |v: &[Q]| v.windows(2).all(|w| w[0] >= w[1]);
    if !descending(&time) || !descending(&freq) {
        return Ok(false);
    }
    let mq = Q::from_integer(m as i128);
    let t: Q = pr.r0.u() + (0..m).map(|k| pr.p[k].u() + pr.r[k].u()).sum::<Q>();
    let f: Q = pr.s_last.u() + (0..m).map(|k| pr.q[k].u() + pr.s[k].u()).sum::<Q>();
    Ok(t >= mq + pr.p0.u() && f >= mq + pr.q_last.u())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn e(s: &str) -> ExtExp {
        s.parse().unwrap()
    }

    fn model(p: [&str; 3], q: [&str; 3]) -> ExponentProfile {
        let mut pr = ExponentProfile::uniform(2, ExtExp::TWO);
        pr.r0 = ExtExp::INF;
        pr.r = vec![ExtExp::ONE, ExtExp::ONE];
        pr.s = vec![ExtExp::INF, ExtExp::INF];
        pr.s_last = ExtExp::ONE;
        pr.p0 = e(p[0]);
        pr.p = vec![e(p[1]), e(p[2])];
        pr.q = vec![e(q[0]), e(q[1])];
        pr.q_last = e(q[2]);
        pr
    }

    #[test]
    fn model_profile_hits_case_four_both_sides() {
        let c = check_bilinear_cases(&model(["1", "2", "2"], ["2", "2", "inf"])).unwrap();
        assert!(c.time.contains(&4) && c.freq.contains(&4) && c.applies());
    }

    #[test]
    fn hilbert_profile_case_four() {
        // r₀ = ∞, r₁ = 1, 1/r₂ = 1 − ε, p₁ = p₂ = 2: case (4) iff 1/p₀ ≤ 1 − ε.
        let eps = Q::new(1, 5);
        for p0 in ["1", "5/4", "4/3", "2", "inf"] {
            let mut pr = model([p0, "2", "2"], ["2", "2", "inf"]);
            pr.r[1] = ExtExp::from_recip(Q::one() - eps).unwrap();
            let c = check_bilinear_cases(&pr).unwrap();
            assert_eq!(c.time.contains(&4), e(p0).u() <= Q::one() - eps, "p0={p0}");
        }
    }

    #[test]
    fn freq_case_one() {
        let mut pr = ExponentProfile::uniform(2, e("3"));
        pr.q = vec![ExtExp::ONE, e("7")];
        pr.s_last = e("5");
        pr.q_last = e("5");
        assert!(check_bilinear_cases(&pr).unwrap().freq.contains(&1));
    }

    #[test]
    fn rejects_other_degrees() {
        assert!(check_bilinear_cases(&ExponentProfile::uniform(3, ExtExp::TWO)).is_err());
    }

    #[test]
    fn uniform_two_chain() {
        for m in 1..=4 {
            assert!(check_monotone_chain(&ExponentProfile::uniform(m, ExtExp::TWO)).unwrap());
        }
        let mut pr = ExponentProfile::uniform(2, ExtExp::TWO);
        pr.p0 = ExtExp::ONE;
        assert!(!check_monotone_chain(&pr).unwrap());
    }

    #[test]
    fn chain_breaks_when_p_exceeds_conjugate() {
        let mut pr = ExponentProfile::uniform(2, ExtExp::TWO);
        pr.p[0] = e("3");
        assert!(!check_monotone_chain(&pr).unwrap());
    }

    #[test]
    fn model_parameters_on_the_chain() {
        // r₁ = 1 forces p₂ = ∞ and s₁ = ∞, s₂ = ∞ force q₁ = 1 on the chain.
        assert!(check_monotone_chain(&model(["3", "3", "inf"], ["1", "2", "2"])).unwrap());
        assert!(!check_monotone_chain(&model(["2", "3", "inf"], ["1", "2", "2"])).unwrap());
        assert!(!check_monotone_chain(&model(["3", "3", "inf"], ["1", "2", "3/2"])).unwrap());
    }
}
