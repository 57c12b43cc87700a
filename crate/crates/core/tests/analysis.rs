mod common;

use flatgap::analysis::measure::{ebc_sum_bound, AuxMeasures};
use flatgap::analysis::psifix::{guard_constant, psifix_sequence, PsifixParams};
use flatgap::analysis::{
    chung_erdos_bound, condensation_dichotomy, ebc_assumption_check, psi0_construct, psi_squared_dichotomy,
    MeasureMatrix, Psi0Config, Psi0Error, Verdict,
};
use flatgap::rate::RateFunction;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::AtomSpace;

fn rate(s: &str) -> RateFunction {
    RateFunction::parse(s).unwrap()
}

#[test]
fn verdicts_do_not_depend_on_the_base() {
    let cases = [
        ("1", Verdict::Divergent),
        ("log(t)", Verdict::Divergent),
        ("log(t)^2", Verdict::Convergent),
        ("log(t+16)*loglog(t+16)^2", Verdict::Convergent),
        ("t^0.1", Verdict::Convergent),
    ];
    for b in [1.5, 2.0, std::f64::consts::E, 10.0] {
        for (expr, want) in cases {
            let v = condensation_dichotomy(&rate(expr), b, 50_000);
            assert_eq!(v.verdict, want, "{expr} at b = {b}");
            assert_eq!(v.sum.verdict, v.integral.verdict, "{expr} at b = {b}");
        }
    }
}

#[test]
fn borderline_divergence_is_never_called_convergent() {
    // Σ 1/(j log j) passes the divergence threshold only for small bases
    for b in [1.5, 2.0, 10.0] {
        let v = condensation_dichotomy(&rate("log(t)*loglog(t+16)"), b, 50_000);
        assert_ne!(v.verdict, Verdict::Convergent, "b = {b}");
        assert!(v.verdict == Verdict::Divergent || v.sum.value < 2.0);
    }
}

#[test]
fn squared_series_uses_psi_squared() {
    assert_eq!(psi_squared_dichotomy(&rate("log(t+3)"), 2.0, 50_000).verdict, Verdict::Convergent);
    assert_eq!(psi_squared_dichotomy(&rate("sqrt(log(t+4)*loglog(t+4))"), 2.0, 50_000).verdict, Verdict::Divergent);
    let v = psi_squared_dichotomy(&rate("log(t+3)"), 2.0, 1000);
    let json: serde_json::Value = serde_json::from_str(&v.to_json()).unwrap();
    assert_eq!(json["verdict"], "Convergent");
}

#[test]
fn square_root_rate_thins_at_powers_of_two() {
    // ∫_n^∞ dt/(t·t) = 1/n, so halving the tail doubles the breakpoint
    let p = psi0_construct(&rate("sqrt(t)"), &Psi0Config::default()).unwrap();
    assert!((p.total_mass() - 1.0).abs() < 1e-9);
    for (i, n) in p.breakpoints().iter().enumerate() {
        let want = 2f64.powi(i as i32);
        assert!((n - want).abs() < 1e-7 * want, "n_{} = {n}", i + 1);
    }
    for t in [1.0, 3.0, 100.0, 1e6] {
        let j = p.piece_index(t).unwrap() as f64;
        assert!((p.eval(t).unwrap() - t.sqrt() / j).abs() < 1e-9 * t.sqrt());
    }
    assert!(p.weighted_mass() <= p.mass_bound());
}

#[test]
fn slowly_convergent_rate_resolves_deep_breakpoints() {
    let p = psi0_construct(&rate("log(t+3)"), &Psi0Config::default()).unwrap();
    let ln_breaks = p.ln_breakpoints();
    assert!(ln_breaks.windows(2).all(|w| w[1] > w[0]));
    // ψ₀ stays below ψ and the ratio grows with the piece index
    for w in ln_breaks.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let j = p.piece_index_at_ln(mid).unwrap() as f64;
        assert!((p.psi().ln_eval_at_ln(mid) - p.ln_eval_at_ln(mid).unwrap() - j.ln()).abs() < 1e-9);
    }
    assert!(matches!(
        psi0_construct(&rate("sqrt(log(t+4)*loglog(t+4))"), &Psi0Config::default()),
        Err(Psi0Error::DivergentInput { .. })
    ));
    let tiny = Psi0Config { u_max: 50.0, ..Psi0Config::default() };
    assert!(matches!(psi0_construct(&rate("log(t+3)"), &tiny), Err(Psi0Error::IntegralBudgetExceeded { .. })));
}

#[test]
fn psifix_caps_floors_and_guards() {
    let params = PsifixParams { rho: 0.5, k: 1.0, tau: 0.5, horizon: 5000 };
    assert_eq!(guard_constant(0.5, 1.0, 0.5), 25);
    let slow = psifix_sequence(|j| 1.0 / (j as f64).sqrt(), &params).unwrap();
    assert!(slow.c.iter().enumerate().all(|(i, &c)| c == 1.0 / (i + 1) as f64));
    assert!(slow.non_increasing && slow.guard_statement.holds && slow.guard_proof.holds);
    let fast = psifix_sequence(|j| (j as f64).powi(-3), &params).unwrap();
    assert_eq!(fast.floor_active, 4999);
    assert!(fast.raised_mass <= fast.raised_mass_bound);
    assert!(psifix_sequence(|_| -1.0, &params).is_err());
    assert!(psifix_sequence(|j| 1.0 / j as f64, &PsifixParams { tau: 1.5, ..params }).is_err());
}

#[test]
fn chung_erdos_never_exceeds_the_union() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..300 {
        let space = AtomSpace::random(&mut rng, 12, 6);
        let m = MeasureMatrix::new(space.singles(), space.pairs()).unwrap();
        assert!(chung_erdos_bound(&m).unwrap() <= space.union() + 1e-12);
    }
}

#[test]
fn assumption_three_matches_a_direct_scan() {
    let singles: Vec<f64> = (1..=80).map(|i| 0.4 / (i as f64).sqrt()).collect();
    let n = singles.len();
    // correlated at short range, independent beyond
    let pairs: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { singles[i] } else if i.abs_diff(j) < 5 { singles[i].min(singles[j]) * 0.5 } else { singles[i] * singles[j] }).collect())
        .collect();
    let m = MeasureMatrix::new(singles.clone(), pairs.clone()).unwrap();
    let (c, delta) = (2.0, 0.5);
    let r = ebc_assumption_check(&m, c, delta, None).unwrap();
    let mut direct = true;
    for i in 1..=n {
        for j in i + 1..=n {
            if j as f64 > i as f64 + c * (1.0 / singles[i - 1]).ln() {
                let rhs = c * singles[i - 1] * (singles[j - 1] + (-(delta / 4.0) * (j - i) as f64).exp());
                direct &= pairs[i - 1][j - 1] <= rhs;
            }
        }
    }
    assert_eq!(r.assumption3.holds, direct);
    assert!(r.assumption2.holds);
    assert!(r.assumption1);

    let aux = AuxMeasures { b: singles.iter().map(|s| s * 0.9).collect(), c: singles.clone(), bc: pairs.clone() };
    let with_aux = ebc_assumption_check(&m, c, delta, Some(&aux)).unwrap();
    assert!(with_aux.assumption4.is_some());
    let bad_aux = AuxMeasures { b: vec![0.0; 3], c: vec![0.0; 3], bc: vec![vec![0.0; 3]; 3] };
    assert!(ebc_assumption_check(&m, c, delta, Some(&bad_aux)).is_err());

    let bound = ebc_sum_bound(&m, 1.0, 1.0, 0.0, 1, n).unwrap();
    let s: f64 = singles.iter().sum();
    assert!((bound.rhs - (s + s * s)).abs() < 1e-12);
    assert!(ebc_sum_bound(&m, 1.0, 1.0, 0.0, 0, n).is_err());
}
