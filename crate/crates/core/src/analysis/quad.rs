//! Composite Simpson quadrature.

/// `∫_a^b f` with `n` (rounded up to even) Simpson panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = (n.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

/// `∫_0^U du / φ̂(eᵘ)` — the integral `∫_1^{e^U} dt / (t φ̂(t))` after
/// `u = ln t`; `[1, U]` is integrated in `w = ln u` to resolve huge `U`.
pub fn log_integral<G: Fn(f64) -> f64>(ln_phi_at_ln: G, upper_u: f64, nodes: usize) -> f64 {
    let g = |u: f64| (-ln_phi_at_ln(u)).exp();
    let head = simpson(g, 0.0, upper_u.min(1.0), nodes / 10);
    if upper_u <= 1.0 {
        return head;
    }
    head + simpson(|w: f64| (w - ln_phi_at_ln(w.exp())).exp(), 0.0, upper_u.ln(), nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_on_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 4);
        assert!((v - 0.0).abs() < 1e-12);
        let v = simpson(|x| x * x, 0.0, 3.0, 2);
        assert!((v - 9.0).abs() < 1e-12);
    }

    #[test]
    fn log_integral_of_harmonic_weight() {
        // φ(t) = t²: ∫_1^{e^U} t^{-3} dt = (1 - e^{-2U}) / 2
        let v = log_integral(|u| 2.0 * u, 5.0, 20_000);
        assert!((v - 0.5 * (1.0 - (-10f64).exp())).abs() < 1e-9);
    }
}
