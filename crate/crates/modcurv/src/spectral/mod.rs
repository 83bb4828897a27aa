//! The K and H spectral families, their dimension-shift and contiguous
//! relations, and the jet formulas for even dimension.
//!
//! `K_{a,b}(y;m)` and `H_{a,b,c}(y₁,y₂;m)` take modular-operator arguments
//! (positive reals here). The tilde variants take `u = 1 − y` style
//! arguments and are what the relations are stated in.

mod closed;

pub use closed::*;

use crate::error::{Error, Result};
use crate::gamma::{gamma_ratio, poch_int};
use crate::hypergeo::{appell_f1, f21, gauss_cf_ratio, AppellF1Params, GaussParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralIndex {
    pub a: u32,
    pub b: u32,
    pub c: Option<u32>,
    pub m: f64,
}

impl SpectralIndex {
    pub fn k(a: u32, b: u32, m: f64) -> Result<Self> {
        Self { a, b, c: None, m }.validated()
    }

    pub fn h(a: u32, b: u32, c: u32, m: f64) -> Result<Self> {
        Self { a, b, c: Some(c), m }.validated()
    }

    fn validated(self) -> Result<Self> {
        if self.a == 0 || self.b == 0 || self.c == Some(0) {
            return Err(Error::ParamDomain(format!("indices must be positive: {self:?}")));
        }
        if !(self.m.is_finite() && self.m > 0.0) {
            return Err(Error::ParamDomain(format!("dimension must be positive, got {}", self.m)));
        }
        if self.degree() <= 0.0 {
            return Err(Error::ParamDomain(format!("d̃ = {} must be positive", self.degree())));
        }
        Ok(self)
    }

    /// Sum of the indices.
    pub fn weight(&self) -> f64 {
        (self.a + self.b + self.c.unwrap_or(0)) as f64
    }

    /// d̃_m = a + b (+ c) + m/2 − 2.
    pub fn degree(&self) -> f64 {
        self.weight() + self.m / 2.0 - 2.0
    }

    /// Same indices in dimension m + 2.
    pub fn lifted(&self) -> Self {
        Self { m: self.m + 2.0, ..*self }
    }

    fn shift(&self, da: u32, db: u32, dc: u32) -> Self {
        Self { a: self.a + da, b: self.b + db, c: self.c.map(|c| c + dc), m: self.m }
    }

    fn c_or_err(&self) -> Result<u32> {
        self.c.ok_or_else(|| Error::ParamDomain("H family needs a third index".into()))
    }

    fn no_c(&self) -> Result<()> {
        match self.c {
            None => Ok(()),
            Some(_) => Err(Error::ParamDomain("K family takes two indices".into())),
        }
    }
}

fn check_pos(vals: &[f64]) -> Result<()> {
    if vals.iter().all(|v| v.is_finite() && *v > 0.0) {
        Ok(())
    } else {
        Err(Error::ArgDomain(format!("modular arguments must be positive, got {vals:?}")))
    }
}

fn check_below_one(vals: &[f64]) -> Result<()> {
    if vals.iter().all(|v| v.is_finite() && *v < 1.0) {
        Ok(())
    } else {
        Err(Error::ArgDomain(format!("tilde arguments must be < 1, got {vals:?}")))
    }
}

/// K̃_{a,b}(u;m) = Γ(d̃)/Γ(a+b) ₂F₁(d̃, b; a+b; u).
pub fn k_tilde(idx: &SpectralIndex, u: f64) -> Result<f64> {
    idx.no_c()?;
    check_below_one(&[u])?;
    let d = idx.degree();
    let w = idx.weight();
    Ok(gamma_ratio(d, w) * f21(d, idx.b as f64, w, u)?)
}

/// H̃_{a,b,c}(u,v;m) = Γ(d̃)/Γ(a+b+c) F₁(d̃; c, b; a+b+c; u, v).
pub fn h_tilde(idx: &SpectralIndex, u: f64, v: f64) -> Result<f64> {
    let c = idx.c_or_err()?;
    check_below_one(&[u, v])?;
    let d = idx.degree();
    let w = idx.weight();
    let p = AppellF1Params::new(d, c as f64, idx.b as f64, w)?;
    Ok(gamma_ratio(d, w) * appell_f1(&p, u, v)?.value)
}

/// K_{a,b}(y;m) = K̃_{a,b}(1−y;m).
pub fn k_family(idx: &SpectralIndex, y: f64) -> Result<f64> {
    check_pos(&[y])?;
    k_tilde(idx, 1.0 - y)
}

/// H_{a,b,c}(y₁,y₂;m) = H̃_{a,b,c}(1−y₁y₂, 1−y₁;m).
pub fn h_family(idx: &SpectralIndex, y1: f64, y2: f64) -> Result<f64> {
    check_pos(&[y1, y2])?;
    h_tilde(idx, 1.0 - y1 * y2, 1.0 - y1)
}

/// d/du K̃_{a,b}(u;m) from the ₂F₁ derivative, ∂F = (αβ/γ) F(α+1,β+1;γ+1).
fn k_tilde_du(idx: &SpectralIndex, u: f64) -> Result<f64> {
    let (d, w, b) = (idx.degree(), idx.weight(), idx.b as f64);
    Ok(gamma_ratio(d, w) * d * b / w * f21(d + 1.0, b + 1.0, w + 1.0, u)?)
}

/// (∂_u H̃, ∂_v H̃) from the F₁ partials with their ab/c factors.
fn h_tilde_grad(idx: &SpectralIndex, u: f64, v: f64) -> Result<(f64, f64)> {
    let c = idx.c_or_err()? as f64;
    let (d, w, b) = (idx.degree(), idx.weight(), idx.b as f64);
    let pre = gamma_ratio(d, w) * d / w;
    let pu = AppellF1Params::new(d + 1.0, c + 1.0, b, w + 1.0)?;
    let pv = AppellF1Params::new(d + 1.0, c, b + 1.0, w + 1.0)?;
    Ok((pre * c * appell_f1(&pu, u, v)?.value, pre * b * appell_f1(&pv, u, v)?.value))
}

fn scaled(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0)
}

/// Residuals of the K̃ relations at `u`, each scaled by max(1, |value|):
///
/// 0. K̃(u;m+2) = (d̃ + u d/du) K̃(u;m)
/// 1. K̃_{a,b+1} = b⁻¹ d/du K̃_{a,b}
/// 2. K̃_{a,b+1} = (1 + b⁻¹ u d/du) K̃_{a+1,b}
/// 3. K̃(u;m+2) = a K̃_{a+1,b} + b K̃_{a,b+1}
pub fn k_relation_residuals(idx: &SpectralIndex, u: f64) -> Result<[f64; 4]> {
    idx.no_c()?;
    check_below_one(&[u])?;
    let b = idx.b as f64;
    let k = k_tilde(idx, u)?;
    let dk = k_tilde_du(idx, u)?;
    let lifted = k_tilde(&idx.lifted(), u)?;
    let ka1 = k_tilde(&idx.shift(1, 0, 0), u)?;
    let kb1 = k_tilde(&idx.shift(0, 1, 0), u)?;
    let dka1 = k_tilde_du(&idx.shift(1, 0, 0), u)?;
    Ok([
        scaled(lifted, idx.degree() * k + u * dk),
        scaled(kb1, dk / b),
        scaled(kb1, ka1 + u * dka1 / b),
        scaled(lifted, idx.a as f64 * ka1 + b * kb1),
    ])
}

/// Residuals of the H̃ relations at `(u, v)`:
///
/// 0. H̃(m+2) = (d̃ + u∂_u + v∂_v) H̃(m)
/// 1. H̃_{a,b+1,c} = b⁻¹ ∂_v H̃
/// 2. H̃_{a,b,c+1} = c⁻¹ ∂_u H̃
/// 3. H̃(m+2) = a H̃_{a+1,b,c} + b H̃_{a,b+1,c} + c H̃_{a,b,c+1}
pub fn h_relation_residuals(idx: &SpectralIndex, u: f64, v: f64) -> Result<[f64; 4]> {
    let c = idx.c_or_err()? as f64;
    check_below_one(&[u, v])?;
    let b = idx.b as f64;
    let h = h_tilde(idx, u, v)?;
    let (hu, hv) = h_tilde_grad(idx, u, v)?;
    let lifted = h_tilde(&idx.lifted(), u, v)?;
    let ha1 = h_tilde(&idx.shift(1, 0, 0), u, v)?;
    let hb1 = h_tilde(&idx.shift(0, 1, 0), u, v)?;
    let hc1 = h_tilde(&idx.shift(0, 0, 1), u, v)?;
    Ok([
        scaled(lifted, idx.degree() * h + u * hu + v * hv),
        scaled(hb1, hv / b),
        scaled(hc1, hu / c),
        scaled(lifted, idx.a as f64 * ha1 + b * hb1 + c * hc1),
    ])
}

/// |(a+b)/d̃ · K̃_{a+1,b}/K̃_{a,b} − continued fraction for ₂F₁(d̃+1,b;a+b+1)/₂F₁(d̃,b;a+b)|.
pub fn gauss_cf_residual(idx: &SpectralIndex, u: f64, depth: usize) -> Result<f64> {
    idx.no_c()?;
    let lhs = idx.weight() / idx.degree() * k_tilde(&idx.shift(1, 0, 0), u)? / k_tilde(idx, u)?;
    let p = GaussParams::new(idx.degree(), idx.b as f64, idx.weight())?;
    Ok((lhs - gauss_cf_ratio(&p, u, depth)?).abs())
}

/// j-th derivative at z = 0 of Π (1 − w_i − z)^{−α_i}, by the Leibniz rule.
pub fn jet_product(alphas: &[u32], ws: &[f64], j: u32) -> f64 {
    // Taylor coefficient of z^n in the product of the remaining factors
    fn rec(alphas: &[u32], ws: &[f64], n: u32) -> f64 {
        let coef = |k: u32| {
            let al = alphas[0] as f64;
            poch_int(al, k) / poch_int(1.0, k) * (1.0 - ws[0]).powf(-al - k as f64)
        };
        if alphas.len() == 1 {
            return coef(n);
        }
        (0..=n).map(|k| coef(k) * rec(&alphas[1..], &ws[1..], n - k)).sum()
    }
    poch_int(1.0, j) * rec(alphas, ws, j)
}

fn jet_order(m: f64) -> Result<u32> {
    let j = (m - 4.0) / 2.0;
    if m < 4.0 || j.fract() != 0.0 {
        return Err(Error::ParamDomain(format!("jet formulas need even m >= 4, got {m}")));
    }
    Ok(j as u32)
}

/// K̃_{a,b}(u;m) for even m ≥ 4 as the ((m−4)/2)-jet of (1−z)^{−a}(1−u−z)^{−b}.
pub fn k_jet(idx: &SpectralIndex, u: f64) -> Result<f64> {
    idx.no_c()?;
    check_below_one(&[u])?;
    Ok(jet_product(&[idx.a, idx.b], &[0.0, u], jet_order(idx.m)?))
}

/// H̃_{a,b,c}(u,v;m) for even m ≥ 4 as the ((m−4)/2)-jet of
/// (1−z)^{−a}(1−u−z)^{−c}(1−v−z)^{−b}; u pairs with c as in the F₁ slots.
pub fn h_jet(idx: &SpectralIndex, u: f64, v: f64) -> Result<f64> {
    let c = idx.c_or_err()?;
    check_below_one(&[u, v])?;
    Ok(jet_product(&[idx.a, c, idx.b], &[0.0, u, v], jet_order(idx.m)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{spectral_h_oracle, spectral_k_oracle};
    use crate::quad::QuadConfig;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol * b.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn index_validation() {
        assert!(SpectralIndex::k(0, 1, 3.0).is_err());
        assert!(SpectralIndex::h(1, 1, 0, 3.0).is_err());
        assert!(SpectralIndex::k(1, 1, -1.0).is_err());
        // d̃ = 1 + 1 + 0.5 − 2 = 0.5
        assert!(SpectralIndex::k(1, 1, 1.0).is_ok());
        assert_eq!(SpectralIndex::h(2, 1, 1, 3.0).unwrap().degree(), 3.5);
    }

    #[test]
    fn k_at_one_is_gamma_ratio() {
        let idx = SpectralIndex::k(2, 3, 5.0).unwrap();
        close(k_family(&idx, 1.0).unwrap(), gamma_ratio(5.5, 5.0), 1e-14);
    }

    #[test]
    fn k21_dimension_three() {
        let idx = SpectralIndex::k(2, 1, 3.0).unwrap();
        for z in [0.3f64, 1.0, 4.0, 9.5] {
            let r = z.sqrt();
            let want = PI.sqrt() * (r + 2.0) / (2.0 * (r + 1.0).powi(2) * r);
            close(k_family(&idx, z).unwrap(), want, 1e-13);
        }
        close(k_family(&idx, 4.0).unwrap(), PI.sqrt() / 9.0, 1e-14);
    }

    #[test]
    fn families_match_oracles() {
        let cfg = QuadConfig::default();
        let idx = SpectralIndex::k(3, 1, 4.0).unwrap();
        let o = spectral_k_oracle(3, 1, 0.6, 4.0, &cfg).unwrap();
        close(k_family(&idx, 0.6).unwrap(), o, 1e-10);
        let idx = SpectralIndex::h(2, 1, 2, 3.0).unwrap();
        let o = spectral_h_oracle(2, 1, 2, 0.5, 2.5, 3.0, &cfg).unwrap();
        close(h_family(&idx, 0.5, 2.5).unwrap(), o, 1e-9);
    }

    #[test]
    fn h_reduces_to_k_on_inverse_pair() {
        for (a, b, c) in [(1, 1, 1), (2, 1, 3), (3, 2, 1)] {
            let h = SpectralIndex::h(a, b, c, 3.5).unwrap();
            let k = SpectralIndex::k(a + c, b, 3.5).unwrap();
            for y in [0.3, 2.0] {
                close(h_family(&h, y, 1.0 / y).unwrap(), k_family(&k, y).unwrap(), 1e-12);
            }
        }
    }

    #[test]
    fn h_dimension_two_displays() {
        let idx = SpectralIndex::h(2, 1, 1, 2.0).unwrap();
        let (s, t): (f64, f64) = (2.0, 3.0);
        let want = ((t - 1.0).powi(2) * s.ln() + (s - 1.0) * ((t - 1.0) * (s - t) - (s - 1.0) * t.ln()))
            / ((s - 1.0).powi(2) * (t - 1.0).powi(2) * (s - t));
        close(h_tilde(&idx, 1.0 - s, 1.0 - t).unwrap(), want, 1e-12);
    }

    #[test]
    fn h111_dimension_three() {
        let idx = SpectralIndex::h(1, 1, 1, 3.0).unwrap();
        let (x, y): (f64, f64) = (0.4, 2.5);
        let (rx, ry) = (x.sqrt(), y.sqrt());
        let want = PI.sqrt() * (rx + ry + 1.0) / ((rx + 1.0) * rx * (ry + 1.0) * ry * (rx + ry));
        close(h_tilde(&idx, 1.0 - x, 1.0 - y).unwrap(), want, 1e-12);
    }

    #[test]
    fn k_relations() {
        let idx = SpectralIndex::k(2, 1, 3.0).unwrap();
        for r in k_relation_residuals(&idx, 0.3).unwrap() {
            assert!(r < 1e-12, "{r}");
        }
        // u = 0: Γ(d̃+1)/Γ(a+b) = (a+b) Γ(d̃+1)/Γ(a+b+1)
        for r in k_relation_residuals(&idx, 0.0).unwrap() {
            assert!(r < 1e-14, "{r}");
        }
        let idx = SpectralIndex::k(1, 3, 2.5).unwrap();
        for r in k_relation_residuals(&idx, -2.0).unwrap() {
            assert!(r < 1e-11, "{r}");
        }
    }

    #[test]
    fn h_relations() {
        let idx = SpectralIndex::h(1, 1, 1, 4.0).unwrap();
        for r in h_relation_residuals(&idx, 0.2, -0.1).unwrap() {
            assert!(r < 1e-11, "{r}");
        }
        let idx = SpectralIndex::h(2, 1, 3, 3.7).unwrap();
        for r in h_relation_residuals(&idx, -3.0, 0.5).unwrap() {
            assert!(r < 1e-10, "{r}");
        }
    }

    #[test]
    fn continued_fraction_ratio() {
        let idx = SpectralIndex::k(2, 1, 3.0).unwrap();
        assert!(gauss_cf_residual(&idx, 0.3, 40).unwrap() < 1e-10);
        let idx = SpectralIndex::k(3, 1, 4.0).unwrap();
        assert!(gauss_cf_residual(&idx, -0.5, 40).unwrap() < 1e-10);
        assert!(gauss_cf_residual(&idx, 0.0, 5).unwrap() < 1e-15);
    }

    #[test]
    fn jets_match_definitions() {
        let idx = SpectralIndex::k(2, 1, 4.0).unwrap();
        close(k_jet(&idx, 0.3).unwrap(), 0.7f64.powi(-1), 1e-15);
        close(k_tilde(&idx, 0.3).unwrap(), 0.7f64.powi(-1), 1e-14);
        let idx = SpectralIndex::k(2, 1, 6.0).unwrap();
        close(k_jet(&idx, 0.3).unwrap(), k_tilde(&idx, 0.3).unwrap(), 1e-11);
        let idx = SpectralIndex::h(1, 1, 1, 6.0).unwrap();
        close(h_jet(&idx, 0.2, 0.4).unwrap(), h_tilde(&idx, 0.2, 0.4).unwrap(), 1e-10);
        // b ≠ c separates the two possible slot pairings
        let idx = SpectralIndex::h(1, 3, 2, 8.0).unwrap();
        close(h_jet(&idx, 0.2, -0.6).unwrap(), h_tilde(&idx, 0.2, -0.6).unwrap(), 1e-10);
        assert!(k_jet(&SpectralIndex::k(1, 1, 5.0).unwrap(), 0.1).is_err());
        assert!(k_jet(&SpectralIndex::k(1, 1, 2.0).unwrap(), 0.1).is_err());
    }
}
