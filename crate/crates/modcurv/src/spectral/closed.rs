//! Elementary closed forms of K_Δk, H_Δk and T_Δ together with the
//! hypergeometric combinations they are checked against.
//!
//! The closed forms have removable poles on s = 1, t = 1 and st = 1 (up to
//! order 7 at s = t = 1). Near those loci the value is taken as the mean of
//! the complexified formula over a circle that encloses the pole, which is
//! exact for analytic functions and keeps every denominator of order one.

use super::{h_family, k_family, SpectralIndex};
use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::hypergeo::{f1_c2_reduction, f1_divided_difference};
use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic needed to evaluate a closed form at real or complex points.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn lift(x: f64) -> Self;
    /// Principal power.
    fn pow(self, e: f64) -> Self;
}

impl Scalar for f64 {
    fn lift(x: f64) -> Self {
        x
    }
    fn pow(self, e: f64) -> Self {
        self.powf(e)
    }
}

impl Scalar for Complex64 {
    fn lift(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn pow(self, e: f64) -> Self {
        self.powf(e)
    }
}

/// Distance to a pole locus below which the circle mean replaces the formula.
const NEAR: f64 = 0.15;
const NODES: usize = 128;
const RADII: [f64; 7] = [0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6];

fn check_m(m: f64) -> Result<()> {
    if !(m.is_finite() && m > 2.0) {
        return Err(Error::ParamDomain(format!("closed forms need m > 2, got {m}")));
    }
    Ok(())
}

fn check_args(vals: &[f64]) -> Result<()> {
    if vals.iter().all(|v| v.is_finite() && *v > 0.0) {
        Ok(())
    } else {
        Err(Error::ArgDomain(format!("arguments must be positive, got {vals:?}")))
    }
}

/// K_Δk(s;m), with s^{−m/2}·s^{m/2} cancelled.
pub fn k_delta_formula<S: Scalar>(s: S, m: f64) -> S {
    let c = S::lift;
    let pre = -8.0 * gamma(m / 2.0 + 2.0) / ((m - 2.0) * m * m * (m + 2.0));
    let d = s - c(1.0);
    let num = (c(m) * d - c(4.0) * s) + s.pow(1.0 - m / 2.0) * (c(m) * d + c(4.0));
    c(pre) * num / (d * d * d)
}

/// H_Δk(s,t;m) with the prefactor 8Γ(m/2+1)/(m²(m−2)).
pub fn h_delta_formula<S: Scalar>(s: S, t: S, m: f64) -> S {
    let c = S::lift;
    let half = m / 2.0;
    let pre = 8.0 * gamma(half + 1.0) / (m * m * (m - 2.0));
    let (ds, dt, w) = (s - c(1.0), t - c(1.0), s * t - c(1.0));
    let br = c(2.0) * s.pow(-half) * w * w * w
        + c(2.0) * dt * dt * (c(half) * ds * w + s * (c(1.0) - c(2.0) * s) * t + c(1.0))
        - c(2.0) * ds * ds * t * (s * t).pow(-half) * (c(half) * dt * w + s * t * t + t - c(2.0));
    c(pre) * br / (ds * ds * dt * dt * w * w * w)
}

fn t_bracket<S: Scalar>(s: S, a: f64) -> (S, S) {
    let c = S::lift;
    let d = s - c(1.0);
    let sa = s.pow(a);
    let dsa = c(a) * sa / s;
    let q = s * s + c(7.0) * s - c(2.0);
    let d2 = d * d;
    let d3 = d2 * d;
    let br = -c(3.0 * a * a) * d2 * (d + sa * (c(1.0) + s))
        + c(2.0 * a) * (d3 + d * sa * q)
        + c(a * a * a) * d3 * (sa + c(1.0))
        - c(12.0) * s * s * (sa - c(1.0));
    let dbr = -c(3.0 * a * a) * (c(2.0) * d * (d + sa * (c(1.0) + s)) + d2 * (c(1.0) + dsa * (c(1.0) + s) + sa))
        + c(2.0 * a) * (c(3.0) * d2 + sa * q + d * dsa * q + d * sa * (c(2.0) * s + c(7.0)))
        + c(a * a * a) * (c(3.0) * d2 * (sa + c(1.0)) + d3 * dsa)
        - c(12.0) * (c(2.0) * s * (sa - c(1.0)) + s * s * dsa);
    (br, dbr)
}

/// T_Δ(s;m), a = m/2, with prefactor Γ(a−1)/(6a) and a plus sign on the a³ term.
pub fn t_delta_formula<S: Scalar>(s: S, m: f64) -> S {
    let c = S::lift;
    let a = m / 2.0;
    let d = s - c(1.0);
    let (br, _) = t_bracket(s, a);
    c(gamma(a - 1.0) / (6.0 * a)) * s.pow(-a) * br / (d * d * d * d)
}

/// d/ds of [`t_delta_formula`], differentiated by hand.
pub fn t_delta_deriv_formula<S: Scalar>(s: S, m: f64) -> S {
    let c = S::lift;
    let a = m / 2.0;
    let d = s - c(1.0);
    let (br, dbr) = t_bracket(s, a);
    let lead = c(gamma(a - 1.0) / (6.0 * a)) * s.pow(-a) / (d * d * d * d);
    lead * (dbr - (c(a) / s + c(4.0) / d) * br)
}

/// Mean of f over |ζ| = r (order 0) or the Cauchy derivative estimate (order 1).
fn circle<F: Fn(Complex64) -> Complex64>(f: F, r: f64, order: u32) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..NODES {
        let phi = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / NODES as f64;
        let e = Complex64::from_polar(1.0, phi);
        let v = f(e * r);
        acc += if order == 0 { v } else { v / (e * r) };
    }
    (acc / NODES as f64).re
}

/// Radius among `RADII` that stays farthest from the given pole locations.
fn pick_radius(roots: &[Complex64]) -> f64 {
    let margin = |r: f64| roots.iter().map(|z| (z.norm() - r).abs()).fold(f64::INFINITY, f64::min);
    RADII.iter().copied().fold(RADII[0], |best, r| if margin(r) > margin(best) { r } else { best })
}

fn one_var<F: Fn(Complex64) -> Complex64>(f: F, s: f64, order: u32) -> f64 {
    let r = pick_radius(&[Complex64::new(1.0 - s, 0.0)]);
    circle(|z| f(z + s), r, order)
}

/// K_Δk(s;m) from the closed form, without the hypergeometric cross-check.
pub fn k_delta_closed(s: f64, m: f64) -> f64 {
    if (s - 1.0).abs() < NEAR {
        one_var(|z| k_delta_formula(z, m), s, 0)
    } else {
        k_delta_formula(s, m)
    }
}

/// T_Δ(s;m) from the closed form.
pub fn t_delta_closed(s: f64, m: f64) -> f64 {
    if (s - 1.0).abs() < NEAR {
        one_var(|z| t_delta_formula(z, m), s, 0)
    } else {
        t_delta_formula(s, m)
    }
}

/// T′_Δ(s;m) from the hand-derived derivative, or a Cauchy estimate near s = 1.
pub fn t_delta_deriv_closed(s: f64, m: f64) -> f64 {
    if (s - 1.0).abs() < NEAR {
        one_var(|z| t_delta_formula(z, m), s, 1)
    } else {
        t_delta_deriv_formula(s, m)
    }
}

/// H_Δk(s,t;m) from the closed form.
pub fn h_delta_closed(s: f64, t: f64, m: f64) -> f64 {
    let near_s = (s - 1.0).abs() < NEAR;
    let near_t = (t - 1.0).abs() < NEAR;
    let near_w = (s * t - 1.0).abs() < NEAR;
    let (ds, dt) = match (near_s as u8 + near_t as u8 + near_w as u8, near_s, near_t) {
        (0, _, _) => return h_delta_formula(s, t, m),
        (1, true, _) => (1.0, 0.0),
        (1, _, true) => (0.0, 1.0),
        (1, _, _) => (0.0, t),
        _ => (1.0, 0.7),
    };
    // poles of the path ζ ↦ (s + ζ ds, t + ζ dt) on the three loci
    let mut roots = Vec::new();
    if ds != 0.0 {
        roots.push(Complex64::new((1.0 - s) / ds, 0.0));
    }
    if dt != 0.0 {
        roots.push(Complex64::new((1.0 - t) / dt, 0.0));
    }
    let (qa, qb, qc) = (ds * dt, s * dt + t * ds, s * t - 1.0);
    if qa == 0.0 {
        roots.push(Complex64::new(-qc / qb, 0.0));
    } else {
        let disc = Complex64::new(qb * qb - 4.0 * qa * qc, 0.0).sqrt();
        roots.push((-qb + disc) / (2.0 * qa));
        roots.push((-qb - disc) / (2.0 * qa));
    }
    let r = pick_radius(&roots);
    circle(|z| h_delta_formula(z * ds + s, z * dt + t, m), r, 0)
}

/// (s^j − 1)/(s − 1), continuous at s = 1.
pub fn power_quotient(j: f64, s: f64) -> f64 {
    let h = s - 1.0;
    if h.abs() < 1e-8 {
        j + 0.5 * j * (j - 1.0) * h
    } else {
        (j * h.ln_1p()).exp_m1() / h
    }
}

fn k_idx(a: u32, b: u32, m: f64) -> Result<SpectralIndex> {
    SpectralIndex::k(a, b, m)
}

/// (4/m) K₃,₁(s;m) − K₂,₁(s;m).
pub fn k_delta_hyper(s: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    Ok(4.0 / m * k_family(&k_idx(3, 1, m)?, s)? - k_family(&k_idx(2, 1, m)?, s)?)
}

/// (4/m+2) H₂,₁,₁ − (4s/m) H₂,₂,₁ − (8/m) H₃,₁,₁ with the F₁ values reduced
/// to divided differences of ₂F₁.
pub fn h_delta_hyper(s: f64, t: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    check_args(&[s, t])?;
    let (x, y) = (1.0 - s * t, 1.0 - s);
    let half = m / 2.0;
    let h211 = gamma(half + 2.0) / 6.0 * f1_divided_difference(half + 2.0, 4.0, x, y)?;
    let h311 = gamma(half + 3.0) / 24.0 * f1_divided_difference(half + 3.0, 5.0, x, y)?;
    let h221 = gamma(half + 3.0) / 24.0 * f1_c2_reduction(half + 3.0, 5.0, x, y)?;
    Ok((4.0 / m + 2.0) * h211 - 4.0 * s / m * h221 - 8.0 / m * h311)
}

/// −K_Δk(1)(s^{−m/2}−1)/(s−1) + H_Δk(s, 1/s), with H(s,1/s) = K_{a+c,b}(s).
pub fn t_delta_hyper(s: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    check_args(&[s])?;
    let k1 = k_delta_hyper(1.0, m)?;
    let h = (4.0 / m + 2.0) * k_family(&k_idx(3, 1, m)?, s)?
        - 4.0 * s / m * k_family(&k_idx(3, 2, m)?, s)?
        - 8.0 / m * k_family(&k_idx(4, 1, m)?, s)?;
    Ok(-k1 * power_quotient(-m / 2.0, s) + h)
}

/// The defining combination of T from the two other closed forms.
pub fn t_delta_from_parts(s: f64, m: f64) -> f64 {
    -k_delta_closed(1.0, m) * power_quotient(-m / 2.0, s) + h_delta_closed(s, 1.0 / s, m)
}

fn agree(what: &str, closed: f64, hyper: f64) -> Result<f64> {
    if (closed - hyper).abs() > 1e-6 * hyper.abs().max(1.0) || !closed.is_finite() {
        return Err(Error::InternalMismatch(format!("{what}: closed form {closed} vs combination {hyper}")));
    }
    Ok(closed)
}

/// K_Δk(s;m), closed form checked against (4/m)K₃,₁ − K₂,₁.
pub fn k_delta(s: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    check_args(&[s])?;
    agree("K_Δk", k_delta_closed(s, m), k_delta_hyper(s, m)?)
}

/// H_Δk(s,t;m), closed form checked against the F₁ combination.
pub fn h_delta(s: f64, t: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    check_args(&[s, t])?;
    agree("H_Δk", h_delta_closed(s, t, m), h_delta_hyper(s, t, m)?)
}

/// T_Δ(s;m), closed form checked against the ₂F₁ combination.
pub fn t_delta(s: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    check_args(&[s])?;
    agree("T_Δ", t_delta_closed(s, m), t_delta_hyper(s, m)?)
}

/// K_Δφ(s) = √s K_Δk(s).
pub fn k_phi(s: f64, m: f64) -> Result<f64> {
    Ok(s.sqrt() * k_delta(s, m)?)
}

/// H_Δφ(s,t) = √(st) H_Δk(s,t).
pub fn h_phi(s: f64, t: f64, m: f64) -> Result<f64> {
    Ok((s * t).sqrt() * h_delta(s, t, m)?)
}

/// H_{a,b,c}(y₁,y₂;m) for the three families entering H_Δk, by general F₁.
pub fn h_delta_general(s: f64, t: f64, m: f64) -> Result<f64> {
    let h = |a, b, c| -> Result<f64> { h_family(&SpectralIndex::h(a, b, c, m)?, s, t) };
    Ok((4.0 / m + 2.0) * h(2, 1, 1)? - 4.0 * s / m * h(2, 2, 1)? - 8.0 / m * h(3, 1, 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1.0)
    }

    const MS: [f64; 7] = [2.5, 3.0, 3.7, 4.0, 5.0, 6.25, 8.0];

    #[test]
    fn k_delta_at_one() {
        for m in MS {
            let want = 2.0 * gamma(m / 2.0 + 2.0) / (3.0 * m) - gamma(m / 2.0 + 1.0) / 2.0;
            assert!(rel(k_delta(1.0, m).unwrap(), want) < 1e-12, "m={m}");
        }
        assert!(k_delta(1.0, 4.0).unwrap().abs() < 1e-13);
    }

    #[test]
    fn closed_forms_match_combinations() {
        let args = [0.25, 0.5, 0.8, 1.0, 1.25, 2.0, 4.0];
        for m in MS {
            for s in args {
                assert!(rel(k_delta_closed(s, m), k_delta_hyper(s, m).unwrap()) < 1e-10, "K {s} {m}");
                assert!(rel(t_delta_closed(s, m), t_delta_hyper(s, m).unwrap()) < 1e-10, "T {s} {m}");
                for t in args {
                    let hc = h_delta_closed(s, t, m);
                    assert!(rel(hc, h_delta_hyper(s, t, m).unwrap()) < 1e-9, "H {s} {t} {m}");
                }
            }
        }
    }

    #[test]
    fn h_combination_agrees_with_general_f1() {
        for (s, t, m) in [(2.0, 3.0, 4.0), (0.5, 1.7, 3.0), (1.3, 0.6, 5.5)] {
            assert!(rel(h_delta_hyper(s, t, m).unwrap(), h_delta_general(s, t, m).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn short_h_prefactor_is_off() {
        // (2/m)Γ(m/2+1) alone would miss a factor 4/(m(m−2))
        let (s, t, m) = (2.0, 3.0, 3.0);
        let ratio = h_delta_closed(s, t, m) / h_delta_hyper(s, t, m).unwrap();
        assert!((ratio - 1.0).abs() < 1e-10);
        assert!((4.0 / (m * (m - 2.0)) - 1.0).abs() > 0.1);
    }

    #[test]
    fn limits_near_pole_loci() {
        let m = 3.7;
        let corner = h_delta_hyper(1.0, 1.0, m).unwrap();
        assert!(rel(h_delta_closed(1.0, 1.0, m), corner) < 1e-11);
        for (s, t) in [(1.0 + 1e-9, 1.0), (1.0, 1.0 - 1e-7), (1.0 + 3e-5, 1.0 - 2e-5), (1.1, 0.95)] {
            assert!(rel(h_delta_closed(s, t, m), h_delta_hyper(s, t, m).unwrap()) < 1e-10, "{s} {t}");
        }
        for s in [0.3, 2.0, 7.0] {
            assert!(rel(h_delta_closed(s, 1.0 / s, m), h_delta_hyper(s, 1.0 / s, m).unwrap()) < 1e-10);
        }
        for s in [1.0, 1.0 + 1e-10, 0.9999, 1.14, 1.16] {
            assert!(rel(t_delta_closed(s, m), t_delta_hyper(s, m).unwrap()) < 1e-11, "T {s}");
            assert!(rel(k_delta_closed(s, m), k_delta_hyper(s, m).unwrap()) < 1e-11, "K {s}");
        }
    }

    #[test]
    fn t_from_parts() {
        let v = t_delta(1.5, 5.0).unwrap();
        assert!(rel(t_delta_from_parts(1.5, 5.0), v) < 1e-10);
        for s in [0.4, 1.0, 3.0] {
            assert!(rel(t_delta_from_parts(s, 3.0), t_delta(s, 3.0).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn dimension_four_vanishes() {
        for s in [0.3, 1.0, 2.5] {
            assert!(k_delta_closed(s, 4.0).abs() < 1e-13);
            assert!(t_delta_closed(s, 4.0).abs() < 1e-12);
            assert!(h_delta_closed(s, 0.7, 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn t_derivative_matches_difference_quotient() {
        for m in [3.0, 5.5] {
            for s in [0.4, 0.9, 1.0, 1.2, 3.0] {
                let h = 1e-5;
                let fd = (t_delta_closed(s + h, m) - t_delta_closed(s - h, m)) / (2.0 * h);
                assert!(rel(t_delta_deriv_closed(s, m), fd) < 1e-7, "{s} {m}");
            }
        }
    }

    #[test]
    fn phi_variants() {
        assert_eq!(k_phi(1.0, 3.0).unwrap(), k_delta(1.0, 3.0).unwrap());
        assert!(rel(k_phi(4.0, 3.0).unwrap(), 2.0 * k_delta(4.0, 3.0).unwrap()) < 1e-15);
        assert!(rel(h_phi(2.0, 0.5, 3.0).unwrap(), h_delta(2.0, 0.5, 3.0).unwrap()) < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(k_delta(1.0, 2.0).is_err());
        assert!(h_delta(-1.0, 1.0, 3.0).is_err());
        assert!(t_delta(0.0, 3.0).is_err());
    }
}
