//! Thinning a rate function with `∫ dt/(tψ²) < ∞` into `ψ₀ ≤ ψ` with
//! `ψ/ψ₀ → ∞`: `ψ₀ = ψ/j` on `[n_j, n_{j+1})`, where the breakpoints halve
//! the remaining tail mass, `∫_{n_j}^∞ dt/(tψ²) = 2^{1−j} ∫_1^∞ dt/(tψ²)`
//! (so `n_1 = 1`).
//!
//! Everything runs in `u = ln t`; the integral is accumulated on a grid in
//! `s`, with `u = s` on `[0, 1]` and `u = e^{s−1}` beyond, so breakpoints far
//! outside the double range are still resolved (they are stored as `ln n_j`).

use serde::Serialize;

use super::series::{psi_squared_dichotomy, Verdict, DEFAULT_TERMS};
use crate::rate::RateFunction;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Psi0Config {
    /// Number of pieces to resolve.
    pub pieces: usize,
    /// Quadrature panels over the whole range.
    pub panels: usize,
    /// Largest `u = ln t` integrated numerically; the rest is bounded by the
    /// convergence certificate.
    pub u_max: f64,
}

impl Default for Psi0Config {
    fn default() -> Self {
        Self { pieces: 24, panels: 200_000, u_max: 1e300 }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Psi0Error {
    #[error("∫ dt/(tψ²) is not certified convergent (verdict {verdict:?})")]
    DivergentInput { verdict: Verdict },
    #[error("only {resolved} of {requested} breakpoints resolvable within the integration budget")]
    IntegralBudgetExceeded { resolved: usize, requested: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Psi0 {
    psi: RateFunction,
    /// `ln n_j` for `j = 1..=pieces + 1` (`ln n_1 = 0`).
    ln_breaks: Vec<f64>,
    /// `∫_1^∞ dt/(tψ²)` (numerical part plus certified tail).
    total: f64,
    /// Upper bound on the part of `total` beyond `u_max`.
    tail_bound: f64,
    /// `∫_{n_j}^{n_{j+1}} dt/(tψ²)` for each piece.
    piece_mass: Vec<f64>,
}

impl Psi0 {
    pub fn psi(&self) -> &RateFunction {
        &self.psi
    }

    pub fn pieces(&self) -> usize {
        self.piece_mass.len()
    }

    /// `ln n_j`, `j = 1..=pieces + 1`.
    pub fn ln_breakpoints(&self) -> &[f64] {
        &self.ln_breaks
    }

    /// `n_j` (infinite when beyond the double range).
    pub fn breakpoints(&self) -> Vec<f64> {
        self.ln_breaks.iter().map(|u| u.exp()).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn piece_mass(&self) -> &[f64] {
        &self.piece_mass
    }

    /// The piece index `j` with `n_j ≤ t < n_{j+1}` given `ln t`; the last
    /// piece extends to infinity. `None` for `t < 1`.
    pub fn piece_index_at_ln(&self, ln_t: f64) -> Option<usize> {
        if ln_t < 0.0 {
            return None;
        }
        let k = self.ln_breaks.partition_point(|&b| b <= ln_t);
        Some(k.clamp(1, self.pieces()))
    }

    pub fn piece_index(&self, t: f64) -> Option<usize> {
        self.piece_index_at_ln(t.ln())
    }

    /// `ψ₀(t) = ψ̂(t)/j`.
    pub fn eval(&self, t: f64) -> Option<f64> {
        self.piece_index(t).map(|j| self.psi.eval(t) / j as f64)
    }

    /// `ln ψ₀` at `ln t`.
    pub fn ln_eval_at_ln(&self, ln_t: f64) -> Option<f64> {
        self.piece_index_at_ln(ln_t).map(|j| self.psi.ln_eval_at_ln(ln_t) - (j as f64).ln())
    }

    /// `∫_1^{n_{P+1}} dt/(tψ₀²) = ∑ j² · mass_j`.
    pub fn weighted_mass(&self) -> f64 {
        self.piece_mass.iter().enumerate().map(|(i, m)| ((i + 1) as f64).powi(2) * m).sum()
    }

    /// `2 · ∫ dt/(tψ²) · ∑ j² 2^{−j}` over the resolved pieces.
    pub fn mass_bound(&self) -> f64 {
        let s: f64 = (1..=self.pieces()).map(|j| (j as f64).powi(2) * 0.5f64.powi(j as i32)).sum();
        2.0 * self.total * s
    }
}

/// Grid coordinate `s ↦ u`.
fn u_of(s: f64) -> f64 {
    if s <= 1.0 {
        s
    } else {
        (s - 1.0).exp()
    }
}

fn s_of(u: f64) -> f64 {
    if u <= 1.0 {
        u
    } else {
        1.0 + u.ln()
    }
}

/// The integrand `du/ds / ψ̂(eᵘ)²` in the `s` coordinate.
fn density(psi: &RateFunction, s: f64) -> f64 {
    let u = u_of(s);
    let jac_ln = if s <= 1.0 { 0.0 } else { s - 1.0 };
    (jac_ln - 2.0 * psi.ln_eval_at_ln(u)).exp()
}

fn panel(psi: &RateFunction, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (density(psi, a) + 4.0 * density(psi, 0.5 * (a + b)) + density(psi, b))
}

/// Builds `ψ₀` for `ψ` whose `∫ dt/(tψ²)` is certified convergent.
pub fn psi0_construct(psi: &RateFunction, cfg: &Psi0Config) -> Result<Psi0, Psi0Error> {
    if cfg.pieces == 0 || cfg.panels < 16 || !(cfg.u_max > 1.0 && cfg.u_max.is_finite()) {
        return Err(Psi0Error::InvalidConfig(format!("{cfg:?}")));
    }
    let verdict = psi_squared_dichotomy(psi, std::f64::consts::E, DEFAULT_TERMS);
    if verdict.verdict != Verdict::Convergent {
        return Err(Psi0Error::DivergentInput { verdict: verdict.verdict });
    }
    let cert = verdict.integral.certificate.as_ref().expect("convergent verdicts carry certificates");
    let tail_bound = if cert.q == 0.0 {
        cert.c * cfg.u_max.powf(1.0 - cert.p) / (cert.p - 1.0)
    } else {
        cert.c / ((cert.q - 1.0) * cfg.u_max.ln().powf(cert.q - 1.0))
    };
    // panel nodes in s, with s = 1 (the change of variable) as a node
    let s_max = s_of(cfg.u_max);
    let head = ((cfg.panels as f64 / s_max).ceil() as usize).max(8);
    let rest = cfg.panels.saturating_sub(head).max(8);
    let nodes: Vec<f64> = (0..=head)
        .map(|i| i as f64 / head as f64)
        .chain((1..=rest).map(|i| 1.0 + (s_max - 1.0) * i as f64 / rest as f64))
        .collect();
    let mut cum = Vec::with_capacity(nodes.len());
    cum.push(0.0);
    for w in nodes.windows(2) {
        let last = *cum.last().expect("non-empty");
        cum.push(last + panel(psi, w[0], w[1]));
    }
    let numeric = *cum.last().expect("non-empty");
    // the tail is only bounded above; use its midpoint as the estimate
    let total = numeric + tail_bound / 2.0;
    let mut ln_breaks = vec![0.0];
    for j in 2..=cfg.pieces + 1 {
        let remaining = total * 0.5f64.powi(j as i32 - 1);
        if remaining < 10.0 * tail_bound {
            return Err(Psi0Error::IntegralBudgetExceeded { resolved: ln_breaks.len() - 1, requested: cfg.pieces });
        }
        let target = total - remaining;
        let k = cum.partition_point(|&c| c < target);
        if k == 0 || k >= nodes.len() {
            return Err(Psi0Error::IntegralBudgetExceeded { resolved: ln_breaks.len() - 1, requested: cfg.pieces });
        }
        // bisection inside panel k−1
        let (mut lo, mut hi) = (nodes[k - 1], nodes[k]);
        let base = cum[k - 1];
        let a0 = lo;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if base + panel(psi, a0, mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let u = u_of(0.5 * (lo + hi));
        ln_breaks.push(u);
    }
    let piece_mass = (1..=cfg.pieces).map(|j| total * 0.5f64.powi(j as i32)).collect();
    Ok(Psi0 { psi: psi.clone(), ln_breaks, total, tail_bound, piece_mass })
}
