//! The interpolation conditions (1)–(4) relating function-side exponents to
//! symbol-side exponents, with search over orders κ, ρ and the auxiliary
//! exponents p̃, q̃.
//!
//! Theorem mode is reduced to proposition mode by conjugating
//! `r₀, r, s, s_{m+1}` and the two output slots `p₀, q_{m+1}`; with that
//! substitution the two sets of printed conditions coincide term by term.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::fm::{LinExpr, System};
use super::{ExponentProfile, ExtExp, Perm, Reading, Q};
use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Symbol-STFT of the Rihaczek-type tensor against function norms.
    Proposition,
    /// Boundedness of `T_σ` for symbols in the symbol modulation space.
    Theorem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityWitness {
    pub kappa: Perm,
    pub rho: Perm,
    pub tilde_p: Vec<ExtExp>,
    pub tilde_q: Vec<ExtExp>,
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermSearch {
    /// Use the κ, ρ stored in the profile.
    Fixed,
    /// Try every κ, then every ρ, lexicographically.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub mode: Mode,
    pub perms: PermSearch,
    /// Solve for p̃, q̃; otherwise p̃ = p and q̃ = q.
    pub tilde: bool,
    pub reading: Reading,
}

impl SearchOptions {
    pub fn new(mode: Mode) -> Self {
        SearchOptions { mode, perms: PermSearch::All, tilde: true, reading: Reading::default() }
    }

    pub fn fixed(mut self) -> Self {
        self.perms = PermSearch::Fixed;
        self
    }

    pub fn without_tilde(mut self) -> Self {
        self.tilde = false;
        self
    }
}

/// Reciprocals as seen by the proposition-mode conditions.
struct Sides {
    m: usize,
    r0: Q,
    r: Vec<Q>,
    p: Vec<Q>,
    p0: Q,
    s: Vec<Q>,
    s_last: Q,
    q: Vec<Q>,
    q_last: Q,
}

impl Sides {
    fn new(pr: &ExponentProfile, mode: Mode) -> Self {
        let f = |e: &ExtExp| match mode {
            Mode::Proposition => e.u(),
            Mode::Theorem => Q::one() - e.u(),
        };
        Sides {
            m: pr.m(),
            r0: f(&pr.r0),
            r: pr.r.iter().map(f).collect(),
            p: pr.p.iter().map(ExtExp::u).collect(),
            p0: f(&pr.p0),
            s: pr.s.iter().map(f).collect(),
            s_last: f(&pr.s_last),
            q: pr.q.iter().map(ExtExp::u).collect(),
            q_last: f(&pr.q_last),
        }
    }
}

/// How the unknowns of one side are laid out in the elimination.
#[derive(Clone, Copy)]
struct Layout {
    /// Variable index of the output slot (p₀ or q_{m+1}), if free.
    slot: Option<usize>,
    /// First variable index of the tildes, if searched.
    tilde: Option<usize>,
    nvars: usize,
}

impl Layout {
    fn new(free_slot: bool, tilde: bool, m: usize) -> Self {
        let slot = free_slot.then_some(0);
        let off = usize::from(free_slot);
        Layout { slot, tilde: tilde.then_some(off), nvars: off + if tilde { m } else { 0 } }
    }
}

fn konst(n: usize, v: Q) -> LinExpr {
    LinExpr::constant(n, v)
}

/// Conditions (1), (2) and the box `r ≤ p̃ ≤ p` (in reciprocals) for order κ.
/// `fixed_tilde` supplies p̃ when it is not a variable.
fn time_system(sd: &Sides, kappa: &Perm, lay: Layout, fixed_tilde: &[Q]) -> System {
    let n = lay.nvars;
    let m = sd.m;
    let mut sys = System::new(n);
    let pt = |k: usize| -> LinExpr {
        match lay.tilde {
            Some(off) => LinExpr::var(n, off + k - 1),
            None => konst(n, fixed_tilde[k - 1]),
        }
    };
    let rk = |k: usize| konst(n, sd.r[k - 1]);
    let slot = match lay.slot {
        Some(i) => {
            let x = LinExpr::var(n, i);
            sys.ge(&x, &konst(n, Q::zero()));
            sys.le(&x, &konst(n, Q::one()));
            x
        }
        None => konst(n, sd.p0),
    };
    for k in 1..=m {
        sys.le(&rk(k), &pt(k));
        sys.le(&pt(k), &konst(n, sd.p[k - 1]));
    }
    let z = kappa.preimage(0);
    let r0 = konst(n, sd.r0);
    let mut acc = konst(n, Q::zero());
    for k in z..m {
        if k > z {
            let j = kappa.at(k);
            acc = &acc + &(&pt(j) - &rk(j));
        }
        sys.le(&acc, &(&r0 - &pt(kappa.at(k + 1))));
    }
    if z < m {
        let j = kappa.at(m);
        acc = &acc + &(&pt(j) - &rk(j));
    }
    sys.ge(&acc, &(&r0 - &slot));
    sys
}

/// Conditions (3), (4) and the box `q̃ ≤ q, s` (in reciprocals) for order ρ.
fn freq_system(sd: &Sides, rho: &Perm, lay: Layout, fixed_tilde: &[Q], reading: Reading) -> System {
    let n = lay.nvars;
    let m = sd.m;
    let mut sys = System::new(n);
    let qt = |k: usize| -> LinExpr {
        match lay.tilde {
            Some(off) => LinExpr::var(n, off + k - 1),
            None => konst(n, fixed_tilde[k - 1]),
        }
    };
    let sk = |k: usize| konst(n, sd.s[k - 1]);
    let slot = match lay.slot {
        Some(i) => {
            let y = LinExpr::var(n, i);
            sys.ge(&y, &konst(n, Q::zero()));
            sys.le(&y, &konst(n, Q::one()));
            y
        }
        None => konst(n, sd.q_last),
    };
    for k in 1..=m {
        sys.ge(&qt(k), &konst(n, Q::zero()));
        sys.le(&qt(k), &konst(n, sd.q[k - 1]));
        sys.le(&qt(k), &sk(k));
    }
    let w = rho.preimage(m + 1);
    let s_last = konst(n, sd.s_last);
    let mut tail = konst(n, Q::zero());
    for k in (1..w).rev() {
        let rhs_idx = if reading.prop3_unpermuted { k } else { rho.at(k) };
        sys.ge(&tail, &(&s_last - &qt(rhs_idx)));
        let j = rho.at(k);
        tail = &tail + &(&qt(j) - &sk(j));
    }
    sys.ge(&tail, &(&s_last - &slot));
    sys
}

fn check_degree(pr: &ExponentProfile) -> Result<()> {
    pr.validate()?;
    if pr.m() > MAX_DEGREE {
        return Err(Error::DegreeTooLarge { m: pr.m(), max: MAX_DEGREE });
    }
    Ok(())
}

fn to_exps(v: &[Q]) -> Vec<ExtExp> {
    v.iter().map(|&u| ExtExp::from_recip(u).expect("box keeps tildes in [0,1]")).collect()
}

/// Whether `witness` certifies `profile` (box constraints included).
pub fn check_conditions(profile: &ExponentProfile, witness: &FeasibilityWitness, reading: Reading) -> Result<bool> {
    profile.validate()?;
    let m = profile.m();
    if witness.tilde_p.len() != m || witness.tilde_q.len() != m {
        return Err(Error::Shape("witness tildes must have m entries".into()));
    }
    if witness.kappa.len() != m + 1 || witness.rho.len() != m + 1 {
        return Err(Error::InvalidPerm("witness orders must have m+1 entries".into()));
    }
    let sd = Sides::new(profile, witness.mode);
    let pt: Vec<Q> = witness.tilde_p.iter().map(ExtExp::u).collect();
    let qt: Vec<Q> = witness.tilde_q.iter().map(ExtExp::u).collect();
    let lay = Layout::new(false, false, m);
    let t = time_system(&sd, &witness.kappa, lay, &pt);
    let f = freq_system(&sd, &witness.rho, lay, &qt, reading);
    Ok(t.feasible_point().is_some() && f.feasible_point().is_some())
}

fn kappas(pr: &ExponentProfile, opts: &SearchOptions) -> Vec<Perm> {
    match opts.perms {
        PermSearch::Fixed => alloc::vec![pr.kappa.clone()],
        PermSearch::All => Perm::all(pr.m() + 1, 0),
    }
}

fn rhos(pr: &ExponentProfile, opts: &SearchOptions) -> Vec<Perm> {
    match opts.perms {
        PermSearch::Fixed => alloc::vec![pr.rho.clone()],
        PermSearch::All => Perm::all(pr.m() + 1, 1),
    }
}

/// First κ (in search order) for which the time-side conditions hold, with p̃.
pub fn feasible_time(profile: &ExponentProfile, opts: &SearchOptions) -> Result<Option<(Perm, Vec<ExtExp>)>> {
    check_degree(profile)?;
    let sd = Sides::new(profile, opts.mode);
    let lay = Layout::new(false, opts.tilde, sd.m);
    for kappa in kappas(profile, opts) {
        if let Some(x) = time_system(&sd, &kappa, lay, &sd.p).feasible_point() {
            let pt = if opts.tilde { x } else { sd.p.clone() };
            return Ok(Some((kappa, to_exps(&pt))));
        }
    }
    Ok(None)
}

/// First ρ (in search order) for which the frequency-side conditions hold, with q̃.
pub fn feasible_freq(profile: &ExponentProfile, opts: &SearchOptions) -> Result<Option<(Perm, Vec<ExtExp>)>> {
    check_degree(profile)?;
    let sd = Sides::new(profile, opts.mode);
    let lay = Layout::new(false, opts.tilde, sd.m);
    for rho in rhos(profile, opts) {
        if let Some(x) = freq_system(&sd, &rho, lay, &sd.q, opts.reading).feasible_point() {
            let qt = if opts.tilde { x } else { sd.q.clone() };
            return Ok(Some((rho, to_exps(&qt))));
        }
    }
    Ok(None)
}

/// A witness for the conditions, or `None`. The two sides are independent, so
/// the first feasible κ paired with the first feasible ρ is the
/// lexicographically smallest feasible pair.
pub fn feasible(profile: &ExponentProfile, opts: &SearchOptions) -> Result<Option<FeasibilityWitness>> {
    let Some((kappa, tilde_p)) = feasible_time(profile, opts)? else {
        return Ok(None);
    };
    let Some((rho, tilde_q)) = feasible_freq(profile, opts)? else {
        return Ok(None);
    };
    Ok(Some(FeasibilityWitness { kappa, rho, tilde_p, tilde_q, mode: opts.mode }))
}

/// Largest `p₀` (smallest `1/p₀`) for which [`feasible`] succeeds, ignoring
/// the profile's own `p₀`. `None` when no `p₀ ∈ [1, ∞]` works.
///
/// In theorem mode a larger `p₀` only weakens the target space, so the answer
/// there is `∞` whenever anything works; [`p0_range`] gives both ends.
pub fn max_p0(profile: &ExponentProfile, opts: &SearchOptions) -> Result<Option<ExtExp>> {
    Ok(p0_range(profile, opts)?.map(|(_, hi)| hi))
}

/// `(smallest, largest)` admissible `p₀` over all searched orders. For a fixed
/// order the admissible set is an interval; across orders the union may have
/// gaps, which this hull ignores.
pub fn p0_range(profile: &ExponentProfile, opts: &SearchOptions) -> Result<Option<(ExtExp, ExtExp)>> {
    if feasible_freq(profile, opts)?.is_none() {
        return Ok(None);
    }
    let sd = Sides::new(profile, opts.mode);
    let lay = Layout::new(true, opts.tilde, sd.m);
    // Hull of admissible 1/p₀ values.
    let mut hull: Option<(Q, Q)> = None;
    for kappa in kappas(profile, opts) {
        let Some((lo, hi)) = time_system(&sd, &kappa, lay, &sd.p).range_of_first() else {
            continue;
        };
        // The slot is boxed in [0,1], so both ends exist.
        let (lo, hi) = (lo.unwrap_or_else(Q::zero), hi.unwrap_or_else(Q::one));
        let (ulo, uhi) = match opts.mode {
            Mode::Proposition => (lo, hi),
            Mode::Theorem => (Q::one() - hi, Q::one() - lo),
        };
        hull = Some(hull.map_or((ulo, uhi), |(a, b): (Q, Q)| (a.min(ulo), b.max(uhi))));
    }
    let exp = |u: Q| ExtExp::from_recip(u).expect("slot boxed in [0,1]");
    Ok(hull.map(|(ulo, uhi)| (exp(uhi), exp(ulo))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn e(s: &str) -> ExtExp {
        s.parse().unwrap()
    }

    /// r₀ = 1, p₁ = p₂ = 10/9, r₁ = r₂ = 2, frequency side diagonal.
    fn auxiliary(p0: &str) -> ExponentProfile {
        let mut pr = ExponentProfile::uniform(2, ExtExp::TWO);
        pr.r0 = ExtExp::ONE;
        pr.p0 = e(p0);
        pr.p = vec![e("10/9"); 2];
        pr.r = vec![ExtExp::TWO; 2];
        pr
    }

    #[test]
    fn no_order_for_large_p0() {
        let pr = auxiliary("5");
        let o = SearchOptions::new(Mode::Proposition);
        assert!(feasible(&pr, &o.without_tilde()).unwrap().is_none());
        assert!(feasible(&pr, &o).unwrap().is_none());
    }

    #[test]
    fn swapped_order_reaches_five_thirds() {
        let mut pr = auxiliary("1");
        pr.kappa = Perm::time(&[1, 0, 2]).unwrap();
        let o = SearchOptions::new(Mode::Proposition).fixed().without_tilde();
        assert_eq!(max_p0(&pr, &o).unwrap(), Some(e("5/3")));
    }

    #[test]
    fn auxiliary_exponent_reaches_two() {
        let pr = auxiliary("1");
        let o = SearchOptions::new(Mode::Proposition).fixed();
        assert_eq!(max_p0(&pr, &o).unwrap(), Some(e("2")));
        let w = feasible(&auxiliary("2"), &o).unwrap().unwrap();
        assert!(w.kappa.is_identity());
        let p2 = w.tilde_p[1];
        assert!(e("10/9").le(&p2) && p2.le(&e("5/3")), "{p2}");
        assert!(check_conditions(&auxiliary("2"), &w, Reading::default()).unwrap());
        // The hand-picked p̃ = (10/9, 15/9).
        let hand = FeasibilityWitness { tilde_p: vec![e("10/9"), e("15/9")], ..w };
        assert!(check_conditions(&auxiliary("2"), &hand, Reading::default()).unwrap());
        assert!(!check_conditions(&auxiliary("5/2"), &hand, Reading::default()).unwrap());
    }

    #[test]
    fn identity_without_tilde_never_works_here() {
        let pr = auxiliary("1");
        let o = SearchOptions::new(Mode::Proposition).fixed().without_tilde();
        assert_eq!(max_p0(&pr, &o).unwrap(), None);
    }

    #[test]
    fn diagonal_profile_witness() {
        let mut pr = ExponentProfile::uniform(3, e("2"));
        pr.s_last = e("7");
        pr.q_last = e("7");
        pr.p = vec![e("2"), e("5"), e("4")];
        pr.r = pr.p.clone();
        pr.q = vec![e("7/2"), e("3"), e("6")];
        pr.s = pr.q.clone();
        let w = feasible(&pr, &SearchOptions::new(Mode::Proposition)).unwrap().unwrap();
        assert!(w.kappa.is_identity() && w.rho.is_identity());
        assert_eq!(w.tilde_p, pr.p);
        assert_eq!(w.tilde_q, pr.q);
        assert_eq!(max_p0(&pr, &SearchOptions::new(Mode::Proposition).fixed()).unwrap(), Some(pr.r0));
    }

    #[test]
    fn model_bilinear_conditions() {
        // r = (∞,1,1), s = (∞,∞,1): theorem mode reduces to
        // 1/p₀ ≤ 1/p₁ + 1/p₂ and 1 + 1/q₃ ≤ 1/q₁ + 1/q₂.
        let mut pr = ExponentProfile::uniform(2, ExtExp::TWO);
        pr.r0 = ExtExp::INF;
        pr.r = vec![ExtExp::ONE; 2];
        pr.s = vec![ExtExp::INF; 2];
        pr.s_last = ExtExp::ONE;
        pr.p = vec![e("4"), e("4")];
        pr.q = vec![e("3/2"), e("3/2")];
        let o = SearchOptions::new(Mode::Theorem).fixed();
        pr.p0 = e("2");
        pr.q_last = e("3");
        assert!(feasible(&pr, &o).unwrap().is_some());
        pr.p0 = e("3/2");
        assert!(feasible(&pr, &o).unwrap().is_none());
        pr.p0 = e("2");
        pr.q_last = e("2");
        assert!(feasible(&pr, &o).unwrap().is_none());
        assert_eq!(max_p0(&pr, &SearchOptions::new(Mode::Theorem).fixed()).unwrap(), None);
        pr.q_last = e("3");
        assert_eq!(p0_range(&pr, &o).unwrap(), Some((e("2"), ExtExp::INF)));
        assert_eq!(max_p0(&pr, &o).unwrap(), Some(ExtExp::INF));
    }

    #[test]
    fn printed_prop3_index_is_switchable() {
        // ρ = (2,3,1): w = 2, condition (3) at k = 1 reads with q̃_{ρ(1)} = q̃₂ or q̃₁.
        let mut pr = ExponentProfile::uniform(2, ExtExp::INF);
        pr.rho = Perm::freq(&[2, 3, 1]).unwrap();
        pr.s_last = ExtExp::TWO;
        pr.q_last = ExtExp::TWO;
        pr.q = vec![ExtExp::TWO, ExtExp::INF];
        pr.s = vec![ExtExp::ONE, ExtExp::INF];
        let mut o = SearchOptions::new(Mode::Proposition).fixed().without_tilde();
        assert!(feasible_freq(&pr, &o).unwrap().is_none());
        o.reading.prop3_unpermuted = true;
        assert!(feasible_freq(&pr, &o).unwrap().is_some());
    }

    #[test]
    fn degree_guard() {
        let pr = ExponentProfile::uniform(5, ExtExp::TWO);
        assert!(matches!(
            feasible(&pr, &SearchOptions::new(Mode::Proposition)),
            Err(Error::DegreeTooLarge { m: 5, .. })
        ));
    }
}
