//! Brute-force integral oracles: the contour integrals in their smooth
//! simplex form, the truncated oscillatory line integral, and the defining
//! simplex integrals of the spectral families.
//!
//! Nothing here calls a hypergeometric evaluator, so each function is an
//! independent check on the closed forms in [`crate::spectral`].

use crate::error::{Error, Result};
use crate::gamma::{gamma, gamma_quotient, ln_gamma_signed};
use crate::quad::{self, QuadConfig};

fn check_pos(vals: &[f64]) -> Result<()> {
    if vals.iter().all(|v| v.is_finite() && *v > 0.0) {
        Ok(())
    } else {
        Err(Error::ParamDomain(format!("expected positive arguments, got {vals:?}")))
    }
}

/// (1/Γ(a)Γ(b)) ∫₀¹ (1−t)^{a−1} t^{b−1} e^{−(A−(A−B)t)} dt.
pub fn contour_ab_rhs(big_a: f64, big_b: f64, a: f64, b: f64, cfg: &QuadConfig) -> Result<f64> {
    check_pos(&[big_a, big_b, a, b])?;
    let q = quad::unit(
        |t, tc| tc.powf(a - 1.0) * t.powf(b - 1.0) * (-(big_a * tc + big_b * t)).exp(),
        cfg,
    )?;
    Ok(q.value / (gamma(a) * gamma(b)))
}

/// (1/Γ(a)Γ(b)Γ(c)) ∬ (1−t−u)^{a−1} t^{b−1} u^{c−1} e^{−(A−(A−B)t−(A−C)u)} du dt.
pub fn contour_abc_rhs(
    big_a: f64,
    big_b: f64,
    big_c: f64,
    a: f64,
    b: f64,
    c: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    check_pos(&[big_a, big_b, big_c, a, b, c])?;
    let f = |u: &[f64], r: f64| {
        r.powf(a - 1.0) * u[0].powf(b - 1.0) * u[1].powf(c - 1.0)
            * (-(big_a * r + big_b * u[0] + big_c * u[1])).exp()
    };
    let q = quad::simplex(2, &f, cfg)?;
    Ok(q.value / (gamma(a) * gamma(b) * gamma(c)))
}

/// Real part of (2π)⁻¹ ∫_{−R}^{R} e^{−ix} (A−ix)^{−a} (B−ix)^{−b} dx.
///
/// The integrand is conjugate-symmetric, so this is (1/π) times the integral
/// over [0, R]. Truncation error is O(R^{1−(a+b)}); use only as a loose check.
pub fn oscillatory_lhs_ab(big_a: f64, big_b: f64, a: u32, b: u32, radius: f64) -> Result<f64> {
    check_pos(&[big_a, big_b, radius])?;
    if a + b < 2 {
        return Err(Error::ParamDomain("need a + b >= 2 for an integrable tail".into()));
    }
    let (af, bf) = (a as f64, b as f64);
    let integrand = |x: f64| {
        // (A − ix)^{−a} = ρ^{−a} e^{i a atan(x/A)}
        let (ra, pa) = ((big_a * big_a + x * x).sqrt(), (x / big_a).atan());
        let (rb, pb) = ((big_b * big_b + x * x).sqrt(), (x / big_b).atan());
        ra.powf(-af) * rb.powf(-bf) * (af * pa + bf * pb - x).cos()
    };
    let panels = (radius / 1.0).ceil() as usize;
    Ok(quad::composite_gl(integrand, 0.0, radius, panels, 16) / std::f64::consts::PI)
}

/// (1/Γ(a)) ∫₀^∞ s^{a−1} e^{−sA} ds, which should equal A^{−a}.
pub fn mellin_lhs(big_a: f64, a: f64, cfg: &QuadConfig) -> Result<f64> {
    check_pos(&[big_a, a])?;
    let q = quad::half_line(|s| s.powf(a - 1.0) * (-s * big_a).exp(), cfg)?;
    Ok(q.value / gamma(a))
}

fn degree(indices: &[u32], m: f64) -> f64 {
    indices.iter().sum::<u32>() as f64 - 2.0 + (m - 2.0) / 2.0
}

/// Γ(d+1)/(Γ(a)Γ(b)) ∫₀¹ (1−t)^{a−1} t^{b−1} (1−t(1−y))^{−(d+1)} dt,
/// d = a + b − 2 + (m−2)/2: the scalar-spectrum value of K_{a,b}(y;m).
pub fn spectral_k_oracle(a: u32, b: u32, y: f64, m: f64, cfg: &QuadConfig) -> Result<f64> {
    if a == 0 || b == 0 {
        return Err(Error::ParamDomain("indices must be positive".into()));
    }
    check_pos(&[y, m])?;
    let d = degree(&[a, b], m);
    if d + 1.0 <= 0.0 {
        return Err(Error::ParamDomain(format!("d_m + 1 = {} must be positive", d + 1.0)));
    }
    let (af, bf, e) = (a as f64, b as f64, d + 1.0);
    let f = |t: f64, tc: f64| tc.powf(af - 1.0) * t.powf(bf - 1.0) * (tc + t * y).powf(-e);
    let value = if d > 20.0 && y != 1.0 {
        // The integrand concentrates within ~1/d of one endpoint; split there.
        let s = if y < 1.0 { 1.0 - 1.0 / e } else { 1.0 / e };
        let lo = quad::tanh_sinh(|x, _, _| f(x, 1.0 - x), 0.0, s, cfg)?;
        let hi = quad::tanh_sinh(|x, _, r| f(x, r), s, 1.0, cfg)?;
        lo.value + hi.value
    } else {
        quad::unit(f, cfg)?.value
    };
    Ok(gamma_quotient(&[e], &[af, bf]) * value)
}

/// Γ(d+1)/(Γ(a)Γ(b)Γ(c)) ∬ (1−t−u)^{a−1} t^{b−1} u^{c−1}
/// (1 − t(1−y₁) − u(1−y₁y₂))^{−(d+1)} du dt, d = a+b+c−2+(m−2)/2.
pub fn spectral_h_oracle(a: u32, b: u32, c: u32, y1: f64, y2: f64, m: f64, cfg: &QuadConfig) -> Result<f64> {
    spectral_n_oracle(&[a, b, c], &[y1, y2], m, cfg)
}

/// The n-simplex integral
/// Γ(d+1) Π Γ(α_j)⁻¹ ∫ (1−Σu)^{α₀−1} Π u_j^{α_j−1} (1 − Σ z_j u_j)^{−(d+1)},
/// with z_j = 1 − y₁⋯y_j and d = Σα − 2 + (m−2)/2.
pub fn spectral_n_oracle(alphas: &[u32], ys: &[f64], m: f64, cfg: &QuadConfig) -> Result<f64> {
    let n = ys.len();
    if n == 0 || alphas.len() != n + 1 {
        return Err(Error::ParamDomain("need n >= 1 arguments and n + 1 indices".into()));
    }
    if alphas.iter().any(|&al| al == 0) {
        return Err(Error::ParamDomain("indices must be positive".into()));
    }
    check_pos(ys)?;
    check_pos(&[m])?;
    let d = degree(alphas, m);
    let e = d + 1.0;
    if e <= 0.0 {
        return Err(Error::ParamDomain(format!("d_m + 1 = {e} must be positive")));
    }
    if n == 1 {
        return spectral_k_oracle(alphas[0], alphas[1], ys[0], m, cfg);
    }
    let mut prods = Vec::with_capacity(n);
    let mut p = 1.0;
    for &y in ys {
        p *= y;
        prods.push(p);
    }
    let al: Vec<f64> = alphas.iter().map(|&v| v as f64).collect();
    let f = |u: &[f64], r: f64| {
        // 1 − Σ z_j u_j = r + Σ (y₁⋯y_j) u_j, free of cancellation
        let mut lin = r;
        let mut v = r.powf(al[0] - 1.0);
        for j in 0..n {
            lin += prods[j] * u[j];
            v *= u[j].powf(al[j + 1] - 1.0);
        }
        v * lin.powf(-e)
    };
    let q = quad::simplex(n, &f, cfg)?;
    let den: Vec<f64> = al.clone();
    let (lg, sg) = ln_gamma_signed(e);
    let norm = sg * lg.exp() / den.iter().map(|&v| gamma(v)).product::<f64>();
    Ok(norm * q.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeo::{f21, kummer_1f1};

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn contour_two_factor_examples() {
        let v = contour_ab_rhs(1.3, 1.3, 2.0, 1.5, &cfg()).unwrap();
        assert!((v - (-1.3f64).exp() / gamma(3.5)).abs() < 1e-14);
        let v = contour_ab_rhs(1.0, 2.0, 1.0, 1.0, &cfg()).unwrap();
        // ∫₀¹ e^{−(1+t)} dt
        assert!((v - (-1f64).exp() * (1.0 - (-1f64).exp())).abs() < 1e-14);
        // The right side is e^{−B}/Γ(a+b) ₁F₁(a;a+b;B−A) = e^{−A}/Γ(a+b) ₁F₁(b;a+b;A−B).
        let v = contour_ab_rhs(0.5, 1.5, 2.0, 1.0, &cfg()).unwrap();
        let k = (-1.5f64).exp() / gamma(3.0) * kummer_1f1(2.0, 3.0, 1.0).unwrap().value;
        assert!((v - k).abs() < 1e-10);
        let k2 = (-0.5f64).exp() / gamma(3.0) * kummer_1f1(1.0, 3.0, -1.0).unwrap().value;
        assert!((v - k2).abs() < 1e-10);
        // With e^{−A} in front of ₁F₁(a;a+b;B−A) the two sides differ.
        let swapped = (-0.5f64).exp() / gamma(3.0) * kummer_1f1(2.0, 3.0, 1.0).unwrap().value;
        assert!((v - swapped).abs() > 0.1);
    }

    #[test]
    fn kummer_swapped_prefactor_disagrees() {
        // Standard Euler form Γ(b)/(Γ(a)Γ(b−a)) ∫ t^{a−1}(1−t)^{b−a−1}e^{zt} reproduces the series.
        let (a, b, z) = (2.0, 3.0, 0.7);
        let q = quad::unit(|t, tc| t.powf(a - 1.0) * tc.powf(b - a - 1.0) * (z * t).exp(), &cfg()).unwrap();
        let series = kummer_1f1(a, b, z).unwrap().value;
        assert!((gamma(b) / (gamma(a) * gamma(b - a)) * q.value - series).abs() < 1e-13);
        // Γ(a−b)Γ(b)/Γ(a) sits on a pole of Γ here.
        assert!(!(gamma(a - b) * gamma(b) / gamma(a)).is_finite());
    }

    #[test]
    fn contour_three_factor_examples() {
        let v = contour_abc_rhs(0.8, 0.8, 0.8, 1.0, 2.0, 1.5, &cfg()).unwrap();
        assert!((v - (-0.8f64).exp() / gamma(4.5)).abs() < 1e-13);
        let v = contour_abc_rhs(1.0, 2.0, 2.0, 1.5, 1.0, 2.0, &cfg()).unwrap();
        let w = contour_ab_rhs(1.0, 2.0, 1.5, 3.0, &cfg()).unwrap();
        assert!((v - w).abs() < 1e-13);
    }

    #[test]
    fn contour_three_factor_monte_carlo() {
        use rand::{Rng, SeedableRng};
        let v = contour_abc_rhs(1.0, 2.0, 3.0, 1.0, 1.0, 1.0, &cfg()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 4_000_000;
        let mut s = 0.0;
        for _ in 0..n {
            let (mut t, mut u): (f64, f64) = (rng.gen(), rng.gen());
            if t + u > 1.0 {
                t = 1.0 - t;
                u = 1.0 - u;
            }
            s += (-(1.0 * (1.0 - t - u) + 2.0 * t + 3.0 * u)).exp();
        }
        let mc = 0.5 * s / n as f64;
        assert!((v - mc).abs() < 1e-4, "{v} vs {mc}");
    }

    #[test]
    fn oscillatory_against_smooth_side() {
        let v = oscillatory_lhs_ab(1.0, 1.0, 1, 1, 1.0e4).unwrap();
        assert!((v - (-1f64).exp()).abs() < 1e-3);
        let v = oscillatory_lhs_ab(1.0, 2.0, 1, 2, 1.0e4).unwrap();
        assert!((v - contour_ab_rhs(1.0, 2.0, 1.0, 2.0, &cfg()).unwrap()).abs() < 1e-3);
        let w = oscillatory_lhs_ab(2.0, 1.0, 2, 1, 1.0e4).unwrap();
        assert!((v - w).abs() < 1e-14);
    }

    #[test]
    fn mellin_identity() {
        for &big_a in &[0.5, 1.0, 3.0] {
            for &a in &[1.0, 2.0, 3.5] {
                let v = mellin_lhs(big_a, a, &cfg()).unwrap();
                assert!((v - big_a.powf(-a)).abs() < 1e-11 * big_a.powf(-a));
            }
        }
    }

    #[test]
    fn k_oracle_examples() {
        let v = spectral_k_oracle(2, 1, 1.0, 3.0, &cfg()).unwrap();
        assert!((v - gamma(2.5) / gamma(3.0)).abs() < 1e-14);
        let v = spectral_k_oracle(2, 1, 4.0, 3.0, &cfg()).unwrap();
        assert!((v - std::f64::consts::PI.sqrt() / 9.0).abs() < 1e-13);
        let d = 3.0 + 1.0 - 2.0 + 1.5;
        let v = spectral_k_oracle(3, 1, 0.7, 5.0, &cfg()).unwrap();
        let h = gamma(d + 1.0) / gamma(4.0) * f21(d + 1.0, 1.0, 4.0, 0.3).unwrap();
        assert!((v - h).abs() < 1e-12 * h);
    }

    #[test]
    fn k_oracle_large_degree() {
        for &y in &[0.5, 3.0] {
            let v = spectral_k_oracle(2, 1, y, 60.0, &cfg()).unwrap();
            let d: f64 = 1.0 + 29.0;
            let h = crate::gamma::gamma_ratio(d + 1.0, 3.0) * f21(d + 1.0, 1.0, 3.0, 1.0 - y).unwrap();
            assert!((v / h - 1.0).abs() < 1e-10, "y={y}: {v} vs {h}");
        }
    }

    #[test]
    fn h_oracle_reductions() {
        let v = spectral_h_oracle(1, 2, 1, 1.0, 1.0, 3.0, &cfg()).unwrap();
        assert!((v - gamma(3.5) / gamma(4.0)).abs() < 1e-13);
        let y = 1.7;
        let v = spectral_h_oracle(1, 1, 1, y, 1.0 / y, 3.0, &cfg()).unwrap();
        let w = spectral_k_oracle(2, 1, y, 3.0, &cfg()).unwrap();
        assert!((v - w).abs() < 1e-12);
    }
}
