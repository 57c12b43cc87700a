//! Divergence/convergence of `∑ φ(bʲ)⁻¹` and `∫ (tφ(t))⁻¹ dt`.
//!
//! A finite computation cannot decide either question, so a verdict is only
//! issued with a certificate: the terms are compared against the Bertrand
//! family `c / (jᵖ (log j)^q)` whose exponents are read off from `φ` far out
//! (`j ≈ 10¹⁵⁰ … 10²⁵⁰`, evaluated in log space), and the comparison constant
//! is checked on a log-spaced sample of the whole range. Divergent verdicts
//! additionally need the partial sums to pass a threshold. The sum and the
//! integral are certified independently; disagreement yields `Inconclusive`.

use std::f64::consts::LN_10;

use serde::Serialize;

use super::quad::log_integral;
use crate::rate::RateFunction;

pub const DEFAULT_TERMS: u64 = 100_000;
/// Partial sums (and partial integrals) must reach this before a
/// divergent verdict is issued.
pub const DIVERGENCE_THRESHOLD: f64 = 2.0;
/// `|p − 1|` beyond this decides by the power alone.
const P_BAND: f64 = 0.05;
const Q_DIVERGENT: f64 = 1.05;
const Q_CONVERGENT: f64 = 1.5;
/// `ln j` at the two far sample points.
const FAR_LN: [f64; 2] = [150.0 * LN_10, 250.0 * LN_10];
/// Certificates are checked on this many log-spaced points.
const CERT_SAMPLES: usize = 2000;
/// Smallest index the certificate covers (so that `log log j > 0`).
const CERT_J0: f64 = 3.0;
const QUAD_NODES: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Divergent,
    Convergent,
    Inconclusive,
}

/// Terms are bounded above (convergent) or below (divergent) by
/// `c / (jᵖ (log j)^q)` for `j ≥ j0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub p: f64,
    pub q: f64,
    pub c: f64,
    pub j0: f64,
    /// Bound on the remainder beyond the computed range (convergent only).
    pub tail_bound: Option<f64>,
}

/// One of the two tests.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestOutcome {
    pub verdict: Verdict,
    /// Partial sum over `j ≤ N`, or the integral up to `t = b^N`.
    pub value: f64,
    pub p_eff: f64,
    pub q_eff: f64,
    pub certificate: Option<Certificate>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesVerdict {
    pub verdict: Verdict,
    pub phi: String,
    pub base: f64,
    pub terms: u64,
    pub threshold: f64,
    pub sum: TestOutcome,
    pub integral: TestOutcome,
}

impl SeriesVerdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdicts serialize")
    }
}

impl std::fmt::Display for SeriesVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Decides `∑ φ(bʲ)⁻¹` over `terms` terms and cross-checks with the integral.
pub fn condensation_dichotomy(phi: &RateFunction, b: f64, terms: u64) -> SeriesVerdict {
    let terms = terms.max(1);
    let ln_b = b.ln();
    let valid = b > 1.0 && b.is_finite();
    let (sum, integral) = if valid {
        // ln of the j-th term's reciprocal, given ln j
        let sum_ln_phi = |ln_j: f64| phi.ln_eval_at_ln(ln_j.exp() * ln_b);
        let partial: f64 = (1..=terms).map(|j| (-phi.ln_eval_at_ln(j as f64 * ln_b)).exp()).sum();
        let sum = certify(sum_ln_phi, partial, terms as f64);
        let upper_u = terms as f64 * ln_b;
        let integral_value = log_integral(|u| phi.ln_eval_at_ln(u), upper_u, QUAD_NODES);
        let int_ln_phi = |ln_u: f64| phi.ln_eval_at_ln(ln_u.exp());
        let integral = certify(int_ln_phi, integral_value, upper_u);
        (sum, integral)
    } else {
        let bad = TestOutcome {
            verdict: Verdict::Inconclusive,
            value: f64::NAN,
            p_eff: f64::NAN,
            q_eff: f64::NAN,
            certificate: None,
            note: format!("base {b} must exceed 1"),
        };
        (bad.clone(), bad)
    };
    let verdict = if sum.verdict == integral.verdict { sum.verdict } else { Verdict::Inconclusive };
    SeriesVerdict {
        verdict,
        phi: phi.source().to_string(),
        base: b,
        terms,
        threshold: DIVERGENCE_THRESHOLD,
        sum,
        integral,
    }
}

/// The dichotomy for `φ = ψ²`.
pub fn psi_squared_dichotomy(psi: &RateFunction, b: f64, terms: u64) -> SeriesVerdict {
    condensation_dichotomy(&psi.squared(), b, terms)
}

/// Local exponents of `x ↦ φ(x)` in the Bertrand scale from two far samples,
/// where `ln_phi(λ)` is `ln φ` at `ln x = λ`.
fn local_exponents(ln_phi: &impl Fn(f64) -> f64) -> (f64, f64) {
    let [l1, l2] = FAR_LN;
    let (f1, f2) = (ln_phi(l1), ln_phi(l2));
    let p = (f2 - f1) / (l2 - l1);
    let q = ((f2 - l2) - (f1 - l1)) / (l2.ln() - l1.ln());
    (p, q)
}

/// Certifies one test. `ln_phi(λ)` is `ln φ` of the `x`-th term at
/// `λ = ln x`; `value` is the partial sum/integral up to `x = upper`.
fn certify(ln_phi: impl Fn(f64) -> f64, value: f64, upper: f64) -> TestOutcome {
    let (p_eff, q_eff) = local_exponents(&ln_phi);
    let mut out = TestOutcome {
        verdict: Verdict::Inconclusive,
        value,
        p_eff,
        q_eff,
        certificate: None,
        note: String::new(),
    };
    if !(p_eff.is_finite() && q_eff.is_finite() && value.is_finite()) {
        out.note = "non-finite local exponents or partial value".into();
        return out;
    }
    let candidate = if p_eff > 1.0 + P_BAND {
        Some((Verdict::Convergent, (1.0 + (p_eff - 1.0) / 2.0).min(2.0), 0.0))
    } else if p_eff < 1.0 - P_BAND {
        Some((Verdict::Divergent, 1.0, 0.0))
    } else if q_eff <= Q_DIVERGENT {
        Some((Verdict::Divergent, 1.0, 1.0))
    } else if q_eff >= Q_CONVERGENT {
        Some((Verdict::Convergent, 1.0, (1.0 + (q_eff - 1.0) / 2.0).min(2.0)))
    } else {
        None
    };
    let Some((verdict, p, q)) = candidate else {
        out.note = format!("q_eff = {q_eff:.4} lies between the certified bands");
        return out;
    };
    // log of (term · jᵖ (log j)^q) on the sample
    let lo = CERT_J0.ln();
    let hi = FAR_LN[1];
    let ratios: Vec<f64> = (0..CERT_SAMPLES)
        .map(|i| {
            let lam = lo + (hi - lo) * i as f64 / (CERT_SAMPLES - 1) as f64;
            -ln_phi(lam) + p * lam + q * lam.ln()
        })
        .collect();
    if ratios.iter().any(|r| !r.is_finite()) {
        out.note = "comparison ratio not finite on the sample".into();
        return out;
    }
    match verdict {
        Verdict::Convergent => {
            let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let last = ratios[CERT_SAMPLES - 1];
            let mid = ratios[CERT_SAMPLES / 2];
            if last > mid + 1e-9 * (1.0 + mid.abs()) {
                out.note = "comparison ratio still growing at the far end".into();
                return out;
            }
            let c = max.exp();
            let n = upper.max(CERT_J0);
            let tail = if q == 0.0 {
                c * n.powf(1.0 - p) / (p - 1.0)
            } else {
                c / ((q - 1.0) * n.ln().powf(q - 1.0))
            };
            out.certificate = Some(Certificate { p, q, c, j0: CERT_J0, tail_bound: Some(tail) });
            out.verdict = Verdict::Convergent;
            out.note = format!("value + tail ≤ {}", value + tail);
        }
        Verdict::Divergent => {
            let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
            let c = min.exp();
            if !(c > 0.0) {
                out.note = "comparison constant vanishes".into();
                return out;
            }
            out.certificate = Some(Certificate { p, q, c, j0: CERT_J0, tail_bound: None });
            if value < DIVERGENCE_THRESHOLD {
                out.note = format!("partial value {value} below threshold {DIVERGENCE_THRESHOLD}");
                return out;
            }
            out.verdict = Verdict::Divergent;
        }
        Verdict::Inconclusive => unreachable!("candidates are certified verdicts"),
    }
    out
}
