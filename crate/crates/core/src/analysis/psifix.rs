//! The corrected sequence `c_j = min{1/j, max{a_j, 1/j²}}` and the guard
//! constant `C`, with on-horizon verification of the properties the
//! construction promises.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsifixParams {
    pub rho: f64,
    pub k: f64,
    pub tau: f64,
    pub horizon: usize,
}

pub const DEFAULT_HORIZON: usize = 100_000;

/// First failing pair of a guard scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GuardViolation {
    pub i: usize,
    pub j: usize,
}

/// Result of scanning every `(i, j)` with `3 ≤ i`, `max{i − C log c_i, 9} < j ≤ N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GuardScan {
    pub holds: bool,
    pub pairs: u64,
    pub first_violation: Option<GuardViolation>,
    /// Smallest `log(rhs) − log(lhs)` over all pairs.
    pub min_log_margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsifixReport {
    pub params: PsifixParams,
    /// `c_1..c_N`.
    pub c: Vec<f64>,
    /// The smallest integer strictly above `4(k̃/ρ)(1/τ̃ + 1)`.
    pub big_c: u64,
    /// Indices where `c_j = 1/j` (cap) and `c_j = 1/j²` (floor) with `a_j`
    /// strictly outside.
    pub cap_active: usize,
    pub floor_active: usize,
    pub non_increasing: bool,
    /// `∑_{c_j > a_j} a_j` and the bound `∑ 1/j²` on the horizon.
    pub raised_mass: f64,
    pub raised_mass_bound: f64,
    /// Every full dyadic block obeys `∑_{2^m ≤ j < 2^{m+1}} c_j ≥ min{1/2, 2^m a_{2^{m+1}}}`.
    pub dyadic_blocks_hold: bool,
    /// `e^{−ρ(j−i)} < τ c_j^k`.
    pub guard_statement: GuardScan,
    /// `e^{−ρ(j−i)} < τ / j^{2k}`.
    pub guard_proof: GuardScan,
    /// Hypothesis violations seen on the horizon (not errors: the
    /// divergence hypothesis is asymptotic).
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum PsifixError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("a_{index} = {value} is not positive and finite")]
    BadTerm { index: usize, value: f64 },
}

/// `⌊4(k̃/ρ)(1/τ̃ + 1)⌋ + 1` with `k̃ = max{1/2, k}`, `τ̃ = min{τ, 1}`.
pub fn guard_constant(rho: f64, k: f64, tau: f64) -> u64 {
    let kt = k.max(0.5);
    let tt = tau.min(1.0);
    (4.0 * (kt / rho) * (1.0 / tt + 1.0)).floor() as u64 + 1
}

/// Builds `c_j` from `a` (1-based) on the horizon and verifies it.
pub fn psifix_sequence(a: impl Fn(usize) -> f64, params: &PsifixParams) -> Result<PsifixReport, PsifixError> {
    let PsifixParams { rho, k, tau, horizon } = *params;
    if !(rho > 0.0 && k > 0.0 && tau > 0.0 && tau < 1.0) {
        return Err(PsifixError::InvalidParameter(format!("need ρ, k > 0 and 0 < τ < 1 (got ρ={rho}, k={k}, τ={tau})")));
    }
    if horizon < 10 {
        return Err(PsifixError::InvalidParameter(format!("horizon {horizon} is too short")));
    }
    // one extra term for the last dyadic block's a_{2^{m+1}}
    let a_vals: Vec<f64> = (1..=horizon + 1).map(&a).collect();
    if let Some((i, &v)) = a_vals.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
        return Err(PsifixError::BadTerm { index: i + 1, value: v });
    }
    let mut warnings = Vec::new();
    if let Some(i) = (1..horizon).find(|&i| a_vals[i] > a_vals[i - 1]) {
        warnings.push(format!("a is increasing at j = {}", i + 1));
    }
    if visibly_convergent(&a_vals[..horizon]) {
        warnings.push("∑ a_j looks convergent on the horizon".into());
    }

    let mut c = Vec::with_capacity(horizon);
    let (mut cap_active, mut floor_active) = (0, 0);
    let mut raised_mass = 0.0;
    let mut raised_mass_bound = 0.0;
    for j in 1..=horizon {
        let jf = j as f64;
        let (cap, floor) = (1.0 / jf, 1.0 / (jf * jf));
        let aj = a_vals[j - 1];
        let cj = cap.min(aj.max(floor));
        if aj > cap {
            cap_active += 1;
        }
        if aj < floor {
            floor_active += 1;
        }
        if cj > aj {
            raised_mass += aj;
        }
        raised_mass_bound += floor;
        c.push(cj);
    }
    let non_increasing = c.windows(2).all(|w| w[1] <= w[0]);
    let dyadic_blocks_hold = (0..)
        .map(|m| 1usize << m)
        .take_while(|&lo| 2 * lo - 1 <= horizon && 2 * lo <= horizon + 1)
        .all(|lo| {
            let block: f64 = c[lo - 1..2 * lo - 1].iter().sum();
            block >= 0.5f64.min(lo as f64 * a_vals[2 * lo - 1])
        });

    let big_c = guard_constant(rho, k, tau);
    let ln_tau = tau.ln();
    let guard_statement = guard_scan(&c, big_c, rho, |j| ln_tau + k * c[j - 1].ln());
    let guard_proof = guard_scan(&c, big_c, rho, |j| ln_tau - 2.0 * k * (j as f64).ln());

    Ok(PsifixReport {
        params: params.clone(),
        c,
        big_c,
        cap_active,
        floor_active,
        non_increasing,
        raised_mass,
        raised_mass_bound,
        dyadic_blocks_hold,
        guard_statement,
        guard_proof,
        warnings,
    })
}

/// The last three dyadic block sums each shrink by a factor ≤ 0.6.
fn visibly_convergent(a: &[f64]) -> bool {
    let blocks: Vec<f64> = (0..)
        .map(|m| 1usize << m)
        .take_while(|&lo| 2 * lo - 1 <= a.len())
        .map(|lo| a[lo - 1..2 * lo - 1].iter().sum())
        .collect();
    blocks.len() >= 4 && blocks[blocks.len() - 4..].windows(2).all(|w| w[1] <= 0.6 * w[0])
}

/// Exhaustive scan of `e^{−ρ(j−i)} < rhs_j` over all admissible pairs.
///
/// In logs the condition reads `ρj + ln rhs_j > ρi`, so each `i` needs only
/// the minimum of `f(j) = ρj + ln rhs_j` over its admissible `j` — a suffix
/// minimum. This covers every pair in `O(N)`.
fn guard_scan(c: &[f64], big_c: u64, rho: f64, ln_rhs: impl Fn(usize) -> f64) -> GuardScan {
    let n = c.len();
    // f and suffix argmin over j = 1..=n (index j)
    let f: Vec<f64> = (0..=n).map(|j| if j == 0 { f64::INFINITY } else { rho * j as f64 + ln_rhs(j) }).collect();
    let mut suf = vec![n + 1; n + 2];
    for j in (1..=n).rev() {
        let next = suf[j + 1];
        suf[j] = if next <= n && f[next] < f[j] { next } else { j };
    }
    let mut pairs = 0u64;
    let mut min_margin = f64::INFINITY;
    let mut first: Option<GuardViolation> = None;
    for i in 3..=n {
        let bound = (i as f64 - big_c as f64 * c[i - 1].ln()).max(9.0);
        // smallest j strictly above the bound
        let j0 = (bound.floor() as usize).saturating_add(1);
        if j0 > n {
            continue;
        }
        pairs += (n - j0 + 1) as u64;
        let jm = suf[j0];
        let margin = f[jm] - rho * i as f64;
        min_margin = min_margin.min(margin);
        if margin <= 0.0 && first.is_none() {
            // first violating j for this i, in increasing order
            let j = (j0..=n).find(|&j| f[j] - rho * i as f64 <= 0.0).unwrap_or(jm);
            first = Some(GuardViolation { i, j });
        }
    }
    GuardScan { holds: first.is_none(), pairs, first_violation: first, min_log_margin: min_margin }
}
