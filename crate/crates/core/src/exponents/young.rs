//! The Young-type conditions for the time side (A0)–(A3) and the frequency
//! side (B0)–(B3), plain and permuted.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{ExtExp, Perm, Q};
use crate::error::{Error, Result};

/// Switches that reproduce index ranges exactly as printed, where the printed
/// range is inconsistent with the unpermuted lemmas. The default is the
/// reading that reduces to the identity case.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Reading {
    /// (A1) over `ℓ = z..m` instead of `ℓ = z+1..m`.
    pub a1_from_z: bool,
    /// (B0) over positions `ℓ = w..m` instead of `ℓ = w+1..m+1`.
    pub b0_from_w: bool,
    /// Proposition condition (3) with `q̃_k` on the right instead of `q̃_{ρ(k)}`.
    pub prop3_unpermuted: bool,
}

fn u(e: &ExtExp) -> Q {
    e.u()
}

fn check_len(what: &str, a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Shape(format!("{what}: {a} vs {b} entries")));
    }
    if a == 0 {
        return Err(Error::Shape(format!("{what}: m must be at least 1")));
    }
    Ok(())
}

/// (A1)–(A3) with the identity order.
pub fn check_young_time(p0: ExtExp, p: &[ExtExp], r0: ExtExp, r: &[ExtExp]) -> Result<bool> {
    check_len("p/r", p.len(), r.len())?;
    let m = p.len();
    if (0..m).any(|k| u(&p[k]) < u(&r[k])) {
        return Ok(false);
    }
    let mut acc = Q::zero();
    for k in 0..m {
        // k terms summed so far; compare against the slot k+1.
        if acc > u(&r0) - u(&p[k]) {
            return Ok(false);
        }
        acc += u(&p[k]) - u(&r[k]);
    }
    Ok(acc == u(&r0) - u(&p0))
}

/// (B1)–(B3) with the identity order.
pub fn check_young_freq(q: &[ExtExp], q_last: ExtExp, s: &[ExtExp], s_last: ExtExp) -> Result<bool> {
    check_len("q/s", q.len(), s.len())?;
    let m = q.len();
    if (0..m).any(|k| u(&s[k]) < u(&q[k])) {
        return Ok(false);
    }
    // tail[k] = Σ_{ℓ>k} (u(q_ℓ) - u(s_ℓ)), zero-based.
    let mut tail = Q::zero();
    for k in (0..m).rev() {
        if tail < u(&s_last) - u(&q[k]) {
            return Ok(false);
        }
        tail += u(&q[k]) - u(&s[k]);
    }
    Ok(tail == u(&s_last) - u(&q_last))
}

/// (A0)–(A3) for the order κ on `(p₀, p₁..p_m)` against `(r₀, r₁..r_m)`.
pub fn check_young_time_perm(
    kappa: &Perm,
    p0: ExtExp,
    p: &[ExtExp],
    r0: ExtExp,
    r: &[ExtExp],
    reading: Reading,
) -> Result<bool> {
    check_len("p/r", p.len(), r.len())?;
    let m = p.len();
    if kappa.len() != m + 1 || kappa.base() != 0 {
        return Err(Error::InvalidPerm(format!("kappa {kappa:?} must permute 0..={m}")));
    }
    let pf: Vec<Q> = core::iter::once(p0).chain(p.iter().copied()).map(|e| e.u()).collect();
    let rf: Vec<Q> = core::iter::once(r0).chain(r.iter().copied()).map(|e| e.u()).collect();
    let z = kappa.preimage(0);
    let at = |l: usize| kappa.at(l);

    if (0..z).any(|l| pf[at(l)] != rf[at(l)]) {
        return Ok(false);
    }
    let a1_start = if reading.a1_from_z { z } else { z + 1 };
    if (a1_start..=m).any(|l| pf[at(l)] < rf[at(l)]) {
        return Ok(false);
    }
    let mut acc = Q::zero();
    for k in z..m {
        if k > z {
            acc += pf[at(k)] - rf[at(k)];
        }
        if acc > rf[0] - pf[at(k + 1)] {
            return Ok(false);
        }
    }
    let total: Q = (z + 1..=m).map(|l| pf[at(l)] - rf[at(l)]).sum();
    Ok(total == rf[0] - pf[0])
}

/// (B0)–(B3) for the order ρ on `(q₁..q_m, q_{m+1})` against `(s₁..s_m, s_{m+1})`.
pub fn check_young_freq_perm(
    rho: &Perm,
    q: &[ExtExp],
    q_last: ExtExp,
    s: &[ExtExp],
    s_last: ExtExp,
    reading: Reading,
) -> Result<bool> {
    check_len("q/s", q.len(), s.len())?;
    let m = q.len();
    if rho.len() != m + 1 || rho.base() != 1 {
        return Err(Error::InvalidPerm(format!("rho {rho:?} must permute 1..={}", m + 1)));
    }
    // One-based: qf[j] = u(q_j), j = 1..=m+1.
    let mut qf: Vec<Q> = alloc::vec![Q::zero()];
    qf.extend(q.iter().chain(core::iter::once(&q_last)).map(u));
    let mut sf: Vec<Q> = alloc::vec![Q::zero()];
    sf.extend(s.iter().chain(core::iter::once(&s_last)).map(u));
    let w = rho.preimage(m + 1);
    let at = |l: usize| rho.at(l);

    let b0 = if reading.b0_from_w { w..=m } else { w + 1..=m + 1 };
    if b0.into_iter().any(|l| qf[at(l)] != sf[at(l)]) {
        return Ok(false);
    }
    if (1..w).any(|k| sf[at(k)] < qf[at(k)]) {
        return Ok(false);
    }
    let mut tail = Q::zero();
    for k in (1..w).rev() {
        if tail < sf[m + 1] - qf[at(k)] {
            return Ok(false);
        }
        tail += qf[at(k)] - sf[at(k)];
    }
    Ok(tail == sf[m + 1] - qf[m + 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn e(s: &str) -> ExtExp {
        s.parse().unwrap()
    }

    #[test]
    fn stacking_order_matters() {
        let one = ExtExp::ONE;
        let two = ExtExp::TWO;
        // r₁ = p₁ = 1, p₂ = 1, r₂ = 2
        assert!(check_young_time(two, &[one, one], one, &[one, two]).unwrap());
        // r₂ = p₂ = 1, p₁ = 1, r₁ = 2
        assert!(!check_young_time(two, &[one, one], one, &[two, one]).unwrap());
    }

    #[test]
    fn diagonal_profiles_pass() {
        // p = r and p₀ = r₀ still needs p_k ≥ r₀ (and q_k ≤ s_{m+1}) for (A2)/(B2).
        let p = [e("3"), e("5/4")];
        assert!(check_young_time(e("2"), &p[..1], e("2"), &p[..1]).unwrap());
        assert!(!check_young_time(e("7"), &p[..1], e("7"), &p[..1]).unwrap());
        assert!(check_young_freq(&p, e("9/2"), &p, e("9/2")).unwrap());
        assert!(!check_young_freq(&p, e("2"), &p, e("2")).unwrap());
    }

    #[test]
    fn freq_chain_example() {
        // s = (1, 2, 2), q = (2, 2): (B3) gives u(q₃) = u(s₃) - Σ(u(q) - u(s)) = 1/2 - (-1/2) = 1.
        let q = [e("2"), e("2")];
        let s = [e("1"), e("2")];
        assert!(check_young_freq(&q, e("1"), &s, e("2")).unwrap());
        assert!(!check_young_freq(&q, e("2"), &s, e("2")).unwrap());
        // (B1) violated.
        assert!(!check_young_freq(&[e("1")], e("1"), &[e("2")], e("1")).unwrap());
    }

    #[test]
    fn length_mismatch_is_error() {
        assert!(check_young_time(ExtExp::ONE, &[ExtExp::ONE], ExtExp::ONE, &[]).is_err());
        assert!(check_young_freq(&[], ExtExp::ONE, &[], ExtExp::ONE).is_err());
    }

    #[test]
    fn kappa_with_zero_last_forces_equalities() {
        let k = Perm::time(&[1, 2, 0]).unwrap();
        let p = [e("3"), e("4")];
        let r = [e("3"), e("4")];
        assert!(check_young_time_perm(&k, e("2"), &p, e("2"), &r, Reading::default()).unwrap());
        assert!(!check_young_time_perm(&k, e("5"), &p, e("2"), &r, Reading::default()).unwrap());
        // (A0) violated in the first slot.
        let r2 = [e("5"), e("4")];
        assert!(!check_young_time_perm(&k, e("2"), &p, e("2"), &r2, Reading::default()).unwrap());
    }

    #[test]
    fn printed_a1_range_rejects_p0_above_r0() {
        let one = ExtExp::ONE;
        let two = ExtExp::TWO;
        let id = Perm::identity(3, 0);
        let (p, r) = (vec![one, one], vec![one, two]);
        assert!(check_young_time_perm(&id, two, &p, one, &r, Reading::default()).unwrap());
        let printed = Reading { a1_from_z: true, ..Reading::default() };
        assert!(!check_young_time_perm(&id, two, &p, one, &r, printed).unwrap());
    }

    #[test]
    fn rho_with_last_first() {
        let rho = Perm::freq(&[3, 1, 2]).unwrap();
        let q = [e("2"), e("3")];
        assert!(check_young_freq_perm(&rho, &q, e("4"), &q, e("4"), Reading::default()).unwrap());
        assert!(!check_young_freq_perm(&rho, &q, e("4"), &q, e("5"), Reading::default()).unwrap());
        // The printed (B0) range stops at position m, so slot ρ(3) = 2 escapes it.
        let s = [e("2"), e("5")];
        assert!(!check_young_freq_perm(&rho, &q, e("4"), &s, e("4"), Reading::default()).unwrap());
        let printed = Reading { b0_from_w: true, ..Reading::default() };
        assert!(check_young_freq_perm(&rho, &q, e("4"), &s, e("4"), printed).unwrap());
    }
}
