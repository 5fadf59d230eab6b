//! CONVENTIONS.md, assembled from fixed conventions of the implementation
//! plus the resolutions found by the `lemma21` and `minkowski` suites.

use std::fmt::Write;

use crate::report::SuiteReport;

const FIXED: &str = r#"## Lattices and transforms

- An axis with `n` points and extent `L` carries `x_j = -L/2 + j·L/n`; every
  shift wraps modulo `n`. Frequency axes have `n` points at spacing `1/L` with
  zero at index `n/2`.
- `riemann` measure weighs a point by its cell (`h = L/n` in space, `1/L` in
  frequency); `counting` measure weighs every point by one.
- `f̂(ξ) = Σ_x f(x) e^{-2πi xξ} h`, and `V_φf(t, ν) = Σ_x f(x) φ(x-t) e^{-2πi xν} h`.
  STFT outputs list positions first, then frequencies.
- The symbol STFT of `σ(x, ξ₁..ξ_m)` has axes `(x, t₁..t_m, ξ₁..ξ_m, ν)` and
  equals the ordinary STFT of `σ` at position `(x, ξ)` and frequency `(ν, -t)`.
- STFTs, `T_A` and the Hilbert symbols need even `n`, so that zero is a
  lattice point.

## Mixed norms

- An integration order lists axes innermost first. Symbol norms integrate
  `κ(0), …, κ(m)` over `(x, t₁..t_m)` and then `ρ(1), …, ρ(m+1)` over
  `(ξ₁..ξ_m, ν)`.

## Hilbert symbols

- Bilinear: `σ(ξ₂ - ξ₁)`, the symbol of `p.v.∫ f(x+y) g(x-y) dy/y`.
- Trilinear: `σ(ξ₁ - ξ₂ - 2ξ₃)`, the symbol of `p.v.∫ f(x-t) g(x+t) h(x+2t) dt/t`.
- On the lattice, frequency differences are taken cyclically and the sign
  function is zero at `0` and at the antipode `±n/2`.
- `ψ(x) = ψ₁(x) - ψ₁(-x)` with `ψ₁(x) = exp(4 - 1/(s(1-s)))`,
  `s = (x-δ)/(1-2δ)`, supported in `[δ, 1-δ]` with peak one; `δ = 1/8`.
  For `|ξ| ≥ 1`, `|V_ψσ(ξ, t)| = π |ψ̂(t)|`.
"#;

pub fn render(lemma21: Option<&SuiteReport>, minkowski: Option<&SuiteReport>) -> String {
    let mut out = String::from("# Conventions\n\nGenerated by `tfsym report`; do not edit by hand.\n\n");
    out.push_str(FIXED);

    out.push_str("\n## Factorization of the symbol STFT of T_A(f̄ ⊗ g)\n\n");
    match lemma21 {
        Some(r) => {
            let _ = writeln!(out, "Resolved by `verify lemma21` (seed {}, {} records, {} passed).\n", r.seed, r.trials, r.passed);
            for key in ["sign", "identity", "argument_order", "rejected"] {
                if let Some(v) = r.findings.get(key) {
                    let _ = writeln!(out, "- {}: {}", key.replace('_', " "), v);
                }
            }
        }
        None => out.push_str("Not run.\n"),
    }

    out.push_str("\n## Integration order and inclusions\n\n");
    match minkowski {
        Some(r) => {
            let _ = writeln!(out, "Computed by `verify minkowski` (seed {}, {} records, {} passed).\n", r.seed, r.trials, r.passed);
            for key in ["membership", "inclusion", "values"] {
                if let Some(v) = r.findings.get(key) {
                    let _ = writeln!(out, "- {key}: {v}");
                }
            }
        }
        None => out.push_str("Not run.\n"),
    }
    out
}
