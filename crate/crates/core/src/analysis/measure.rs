//! Finite measure data `μ(A_k)`, `μ(A_j ∩ A_k)` and the checks built on it:
//! the Chung–Erdős lower bound and the assumptions of the exponential-decay
//! Borel–Cantelli criterion. Sets are indexed from 1, as `A_1, …, A_n`.

use serde::Serialize;

/// Slack for rounding in validity checks.
const TOL: f64 = 1e-12;
/// Assumption (1) is judged by the partial sum reaching this.
pub const DIVERGENCE_THRESHOLD: f64 = 2.0;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum MeasureError {
    #[error("invalid measure matrix: {0}")]
    InvalidMatrix(String),
    #[error("the second-moment sum is zero")]
    ZeroDenominator,
    #[error("bound {bound} exceeds 1: no measure space realizes this matrix")]
    InconsistentMatrix { bound: f64 },
}

/// `singles[k] = μ(A_{k+1})`, `pairs[j][k] = μ(A_{j+1} ∩ A_{k+1})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureMatrix {
    singles: Vec<f64>,
    pairs: Vec<Vec<f64>>,
}

impl MeasureMatrix {
    pub fn new(singles: Vec<f64>, pairs: Vec<Vec<f64>>) -> Result<Self, MeasureError> {
        let n = singles.len();
        let bad = |m: String| Err(MeasureError::InvalidMatrix(m));
        if pairs.len() != n || pairs.iter().any(|r| r.len() != n) {
            return bad(format!("pairs must be {n}×{n}"));
        }
        for (k, &m) in singles.iter().enumerate() {
            if !(0.0..=1.0 + TOL).contains(&m) {
                return bad(format!("μ(A_{}) = {m} outside [0, 1]", k + 1));
            }
        }
        for j in 0..n {
            if pairs[j][j] != singles[j] {
                return bad(format!("diagonal entry {} differs from μ(A_{})", j + 1, j + 1));
            }
            for k in 0..n {
                let v = pairs[j][k];
                if v != pairs[k][j] {
                    return bad(format!("not symmetric at ({}, {})", j + 1, k + 1));
                }
                if !(v >= 0.0 && v <= singles[j].min(singles[k]) + TOL) {
                    return bad(format!("μ(A_{} ∩ A_{}) = {v} outside [0, min]", j + 1, k + 1));
                }
            }
        }
        Ok(Self { singles, pairs })
    }

    /// Pairwise independent sets: `μ(A_j ∩ A_k) = μ(A_j)μ(A_k)` off the diagonal.
    pub fn independent(singles: Vec<f64>) -> Result<Self, MeasureError> {
        let n = singles.len();
        let pairs = (0..n)
            .map(|j| (0..n).map(|k| if j == k { singles[j] } else { singles[j] * singles[k] }).collect())
            .collect();
        Self::new(singles, pairs)
    }

    pub fn len(&self) -> usize {
        self.singles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singles.is_empty()
    }

    /// `μ(A_k)`, 1-based.
    pub fn single(&self, k: usize) -> f64 {
        self.singles[k - 1]
    }

    /// `μ(A_j ∩ A_k)`, 1-based.
    pub fn pair(&self, j: usize, k: usize) -> f64 {
        self.pairs[j - 1][k - 1]
    }

    pub fn singles(&self) -> &[f64] {
        &self.singles
    }
}

/// `(∑ μ(A_k))² / ∑_{j,k} μ(A_j ∩ A_k)`.
pub fn chung_erdos_bound(m: &MeasureMatrix) -> Result<f64, MeasureError> {
    let num: f64 = m.singles.iter().sum();
    let den: f64 = m.pairs.iter().flatten().sum();
    if den <= 0.0 {
        return Err(MeasureError::ZeroDenominator);
    }
    let bound = num * num / den;
    if bound > 1.0 + TOL {
        return Err(MeasureError::InconsistentMatrix { bound });
    }
    Ok(bound)
}

/// Per-pair outcome on the `(i, j)` grid; `None` where the assumption does
/// not constrain the pair.
pub type PassGrid = Vec<Vec<Option<bool>>>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssumptionOutcome {
    pub holds: bool,
    /// First failing pair (1-based) in row-major order.
    pub first_violation: Option<(usize, usize)>,
}

/// Measures of the auxiliary sets `B_i ⊂ A_i`, `C_j ⊃ A_j` for assumption (4):
/// `b[i]`, `c[j]` and `bc[i][j] = μ(B_i ∩ C_j)`, 1-based via accessors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuxMeasures {
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub bc: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EbcReport {
    pub partial_sum: f64,
    /// (1) the partial sum reaches [`DIVERGENCE_THRESHOLD`].
    pub assumption1: bool,
    /// (2) `μ(A_i) ≥ μ(A_j)` for `i ≤ j`.
    pub assumption2: AssumptionOutcome,
    /// (3) on pairs beyond the threshold index.
    pub assumption3: AssumptionOutcome,
    /// (4) on pairs up to the threshold index; `None` without auxiliary data.
    pub assumption4: Option<AssumptionOutcome>,
    /// `i + C log(1/μ(A_i))` for each `i` (infinite when `μ(A_i) = 0`).
    pub thresholds: Vec<f64>,
    pub grid3: PassGrid,
    pub grid4: Option<PassGrid>,
}

impl EbcReport {
    pub fn all_hold(&self) -> bool {
        self.assumption1
            && self.assumption2.holds
            && self.assumption3.holds
            && self.assumption4.as_ref().is_none_or(|a| a.holds)
    }
}

fn outcome(grid: &PassGrid) -> AssumptionOutcome {
    let first = grid
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (i + 1, j + 1, *v)))
        .find(|&(_, _, v)| v == Some(false))
        .map(|(i, j, _)| (i, j));
    AssumptionOutcome { holds: first.is_none(), first_violation: first }
}

/// Checks assumptions (1)–(4) with constants `C ≥ 1`, `0 < δ < 1`.
pub fn ebc_assumption_check(
    m: &MeasureMatrix,
    big_c: f64,
    delta: f64,
    aux: Option<&AuxMeasures>,
) -> Result<EbcReport, MeasureError> {
    if !(big_c >= 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(MeasureError::InvalidMatrix(format!("need C ≥ 1 and 0 < δ < 1 (got C={big_c}, δ={delta})")));
    }
    let n = m.len();
    if let Some(a) = aux {
        if a.b.len() != n || a.c.len() != n || a.bc.len() != n || a.bc.iter().any(|r| r.len() != n) {
            return Err(MeasureError::InvalidMatrix("auxiliary data must match the matrix size".into()));
        }
    }
    let partial_sum: f64 = m.singles.iter().sum();
    let first2 = (1..n).find(|&k| m.singles[k] > m.singles[k - 1]).map(|k| (k, k + 1));
    let thresholds: Vec<f64> = m.singles.iter().enumerate().map(|(i, &mu)| (i + 1) as f64 + big_c * (1.0 / mu).ln()).collect();

    let mut grid3 = vec![vec![None; n]; n];
    let mut grid4 = aux.map(|_| vec![vec![None; n]; n]);
    for i in 1..=n {
        let th = thresholds[i - 1];
        for j in i + 1..=n {
            if j as f64 > th {
                let rhs = big_c * m.single(i) * (m.single(j) + (-(delta / 4.0) * (j - i) as f64).exp());
                grid3[i - 1][j - 1] = Some(m.pair(i, j) <= rhs * (1.0 + TOL));
            } else if let (Some(a), Some(g)) = (aux, grid4.as_mut()) {
                let (bi, cj, bcij) = (a.b[i - 1], a.c[j - 1], a.bc[i - 1][j - 1]);
                let contain = bi <= m.single(i) + TOL && m.single(j) <= cj + TOL;
                let big_b = bi > m.single(i) / big_c;
                let small_c = cj < big_c * m.single(j).sqrt();
                let decay = bcij
                    < big_c * bi * (2f64.powf(-((j - i) as f64) * (1.0 - delta)) + cj.powf((1.0 + delta) / 2.0));
                g[i - 1][j - 1] = Some(contain && big_b && small_c && decay);
            }
        }
    }
    Ok(EbcReport {
        partial_sum,
        assumption1: partial_sum >= DIVERGENCE_THRESHOLD,
        assumption2: AssumptionOutcome { holds: first2.is_none(), first_violation: first2 },
        assumption3: outcome(&grid3),
        assumption4: grid4.as_ref().map(outcome),
        thresholds,
        grid3,
        grid4,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SumBound {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Both sides of `∑_{i,j=n}^N μ(B_i∩B_j) ≤ C̃[D∑_{k=n}^N μ(B_k) + D′ + (∑_{k=n}^N μ(B_k))²]`
/// (1-based, inclusive).
pub fn ebc_sum_bound(
    m: &MeasureMatrix,
    c_tilde: f64,
    d: f64,
    d_prime: f64,
    n: usize,
    big_n: usize,
) -> Result<SumBound, MeasureError> {
    if n == 0 || n > big_n || big_n > m.len() {
        return Err(MeasureError::InvalidMatrix(format!("range {n}..={big_n} outside 1..={}", m.len())));
    }
    let lhs: f64 = (n..=big_n).flat_map(|i| (n..=big_n).map(move |j| (i, j))).map(|(i, j)| m.pair(i, j)).sum();
    let s: f64 = (n..=big_n).map(|k| m.single(k)).sum();
    let rhs = c_tilde * (d * s + d_prime + s * s);
    Ok(SumBound { lhs, rhs, holds: lhs <= rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chung_erdos_equality_cases() {
        let one = MeasureMatrix::new(vec![0.3], vec![vec![0.3]]).unwrap();
        assert_eq!(chung_erdos_bound(&one).unwrap(), 0.3);
        let same = MeasureMatrix::new(vec![0.3, 0.3], vec![vec![0.3, 0.3], vec![0.3, 0.3]]).unwrap();
        assert_eq!(chung_erdos_bound(&same).unwrap(), 0.3);
        let disjoint = MeasureMatrix::new(vec![0.25, 0.25], vec![vec![0.25, 0.0], vec![0.0, 0.25]]).unwrap();
        assert_eq!(chung_erdos_bound(&disjoint).unwrap(), 0.5);
    }

    #[test]
    fn matrix_errors() {
        let zero = MeasureMatrix::new(vec![0.0], vec![vec![0.0]]).unwrap();
        assert_eq!(chung_erdos_bound(&zero), Err(MeasureError::ZeroDenominator));
        let too_big = MeasureMatrix::new(vec![0.9, 0.9], vec![vec![0.9, 0.0], vec![0.0, 0.9]]).unwrap();
        assert!(matches!(chung_erdos_bound(&too_big), Err(MeasureError::InconsistentMatrix { .. })));
        assert!(MeasureMatrix::new(vec![0.3], vec![vec![0.2]]).is_err());
        assert!(MeasureMatrix::new(vec![0.3, 0.1], vec![vec![0.3, 0.2], vec![0.2, 0.1]]).is_err());
    }

    #[test]
    fn independent_sets_pass_assumption_three() {
        let singles: Vec<f64> = (1..=300).map(|i| (1.0 / (i as f64 * ((i + 1) as f64).ln())).min(0.5)).collect();
        let m = MeasureMatrix::independent(singles).unwrap();
        let r = ebc_assumption_check(&m, 1.0, 0.5, None).unwrap();
        assert!(r.assumption1 && r.assumption2.holds && r.assumption3.holds, "{}", r.partial_sum);
    }

    #[test]
    fn nested_sets_fail_assumption_three() {
        let singles: Vec<f64> = (1..=60).map(|i| 0.5 / i as f64).collect();
        let n = singles.len();
        let pairs = (0..n).map(|j| (0..n).map(|k| singles[j].min(singles[k])).collect()).collect();
        let m = MeasureMatrix::new(singles, pairs).unwrap();
        let r = ebc_assumption_check(&m, 1.0, 0.5, None).unwrap();
        assert!(!r.assumption3.holds);
        assert!(r.assumption3.first_violation.is_some());
    }

    #[test]
    fn sum_bound_trivial_case() {
        let m = MeasureMatrix::independent(vec![0.0; 5]).unwrap();
        let b = ebc_sum_bound(&m, 1.0, 1.0, 0.5, 1, 5).unwrap();
        assert_eq!((b.lhs, b.rhs, b.holds), (0.0, 0.5, true));
    }
}
