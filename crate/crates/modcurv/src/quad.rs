//! Double-exponential quadrature on finite intervals, the half line and
//! simplices, plus a composite Gauss-Legendre rule for smooth oscillatory
//! integrands.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_levels: u32,
    pub truncation_radius: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { abs_tol: 1e-12, rel_tol: 1e-12, max_levels: 10, truncation_radius: 1.0e4 }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::ParamDomain("quadrature tolerances must be positive".into()));
        }
        if !(3..=14).contains(&self.max_levels) {
            return Err(Error::ParamDomain(format!("max_levels {} not in [3, 14]", self.max_levels)));
        }
        if !(self.truncation_radius > 0.0) {
            return Err(Error::ParamDomain("truncation radius must be positive".into()));
        }
        Ok(())
    }

    /// Same config with looser tolerances, used for inner integrals of
    /// iterated rules where the outer sum averages the error.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self.rel_tol = tol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub est_error: f64,
    pub nodes_used: usize,
}

const T_MAX: f64 = 4.5;

/// Integrates `f` over `[a, b]`. The callback receives `(x, x - a, b - x)`
/// with both distances computed without cancellation, so endpoint
/// singularities like `(x-a)^(-1/2)` can be written directly.
pub fn tanh_sinh<F>(mut f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64, f64, f64) -> f64,
{
    let len = b - a;
    if len == 0.0 {
        return Ok(QuadResult { value: 0.0, est_error: 0.0, nodes_used: 0 });
    }
    let mut nodes = 0usize;
    let mut eval = |t: f64, nodes: &mut usize| -> Result<f64> {
        let u = FRAC_PI_2 * t.sinh();
        // s = 1/(1+e^{-2u}) and its complement, both without cancellation.
        let s_c = 1.0 / (1.0 + (2.0 * u).exp());
        let s = 1.0 / (1.0 + (-2.0 * u).exp());
        let left = len * s;
        let right = len * s_c;
        let w = std::f64::consts::PI * t.cosh() * s * s_c * len;
        if w == 0.0 || left == 0.0 || right == 0.0 {
            return Ok(0.0);
        }
        *nodes += 1;
        let x = if s <= 0.5 { a + left } else { b - right };
        let v = f(x, left, right);
        if !v.is_finite() {
            return Err(Error::QuadFail(format!("non-finite integrand at x = {x}")));
        }
        Ok(w * v)
    };

    let mut h = 1.0;
    let mut sum = eval(0.0, &mut nodes)?;
    let mut k = 1;
    while k as f64 * h <= T_MAX {
        let t = k as f64 * h;
        sum += eval(t, &mut nodes)? + eval(-t, &mut nodes)?;
        k += 1;
    }
    let mut prev = h * sum;
    for level in 1..=cfg.max_levels {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= T_MAX {
            let t = k as f64 * h;
            sum += eval(t, &mut nodes)? + eval(-t, &mut nodes)?;
            k += 2;
        }
        let cur = h * sum;
        let diff = (cur - prev).abs();
        if level >= 3 && diff <= cfg.abs_tol.max(cfg.rel_tol * cur.abs()) {
            return Ok(QuadResult { value: cur, est_error: diff, nodes_used: nodes });
        }
        prev = cur;
    }
    Err(Error::QuadFail(format!(
        "tanh-sinh did not reach tolerance after {} levels",
        cfg.max_levels
    )))
}

/// Integrates over `[0, 1]`; callback receives `(t, 1 - t)`.
pub fn unit<F>(mut f: F, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64, f64) -> f64,
{
    tanh_sinh(|_, l, r| f(l, r), 0.0, 1.0, cfg)
}

/// Integrates over `[0, ∞)` with the exp-sinh map `x = exp(π/2 sinh t)`.
pub fn half_line<F>(mut f: F, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    let mut nodes = 0usize;
    let mut eval = |t: f64, nodes: &mut usize| -> Result<f64> {
        let x = (FRAC_PI_2 * t.sinh()).exp();
        let w = x * FRAC_PI_2 * t.cosh();
        if x == 0.0 || !w.is_finite() {
            return Ok(0.0);
        }
        *nodes += 1;
        let v = f(x);
        if v == 0.0 {
            return Ok(0.0);
        }
        if !v.is_finite() {
            return Err(Error::QuadFail(format!("non-finite integrand at x = {x}")));
        }
        Ok(w * v)
    };
    let tmax = 4.0;
    let mut h = 1.0;
    let mut sum = eval(0.0, &mut nodes)?;
    let mut k = 1;
    while k as f64 * h <= tmax {
        let t = k as f64 * h;
        sum += eval(t, &mut nodes)? + eval(-t, &mut nodes)?;
        k += 1;
    }
    let mut prev = h * sum;
    for level in 1..=cfg.max_levels {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= tmax {
            let t = k as f64 * h;
            sum += eval(t, &mut nodes)? + eval(-t, &mut nodes)?;
            k += 2;
        }
        let cur = h * sum;
        let diff = (cur - prev).abs();
        if level >= 3 && diff <= cfg.abs_tol.max(cfg.rel_tol * cur.abs()) {
            return Ok(QuadResult { value: cur, est_error: diff, nodes_used: nodes });
        }
        prev = cur;
    }
    Err(Error::QuadFail("exp-sinh did not converge".into()))
}

/// Integrates over the standard n-simplex `{u_i ≥ 0, Σ u_i ≤ 1}` by iterated
/// tanh-sinh. The callback gets the point `u` and the remainder `1 - Σ u`,
/// both free of cancellation.
pub fn simplex<F>(n: usize, f: &F, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(&[f64], f64) -> f64,
{
    if n == 0 {
        return Err(Error::ParamDomain("simplex dimension must be positive".into()));
    }
    let mut point = vec![0.0; n];
    let inner = cfg.with_tol((cfg.abs_tol * 0.1).max(1e-15));
    simplex_rec(0, 1.0, &mut point, f, cfg, &inner)
}

fn simplex_rec<F>(
    k: usize,
    rem: f64,
    point: &mut Vec<f64>,
    f: &F,
    outer: &QuadConfig,
    inner: &QuadConfig,
) -> Result<QuadResult>
where
    F: Fn(&[f64], f64) -> f64,
{
    let n = point.len();
    let cfg = if k == 0 { outer } else { inner };
    let mut nodes = 0usize;
    let mut err: Option<Error> = None;
    let res = unit(
        |s, sc| {
            if err.is_some() {
                return 0.0;
            }
            point[k] = rem * s;
            let r = rem * sc;
            if k + 1 == n {
                nodes += 1;
                rem * f(point, r)
            } else {
                let mut p = point.clone();
                match simplex_rec(k + 1, r, &mut p, f, outer, inner) {
                    Ok(q) => {
                        nodes += q.nodes_used;
                        rem * q.value
                    }
                    Err(e) => {
                        err = Some(e);
                        0.0
                    }
                }
            }
        },
        cfg,
    );
    if let Some(e) = err {
        return Err(e);
    }
    let mut q = res?;
    q.nodes_used = nodes;
    Ok(q)
}

/// Integrates over the unit square by iterated tanh-sinh; callback receives
/// `(s, 1 - s, t, 1 - t)`.
pub fn square<F>(f: &F, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(f64, f64, f64, f64) -> f64,
{
    let inner = cfg.with_tol((cfg.abs_tol * 0.1).max(1e-15));
    let mut nodes = 0usize;
    let mut err: Option<Error> = None;
    let res = unit(
        |s, sc| {
            if err.is_some() {
                return 0.0;
            }
            match unit(|t, tc| f(s, sc, t, tc), &inner) {
                Ok(q) => {
                    nodes += q.nodes_used;
                    q.value
                }
                Err(e) => {
                    err = Some(e);
                    0.0
                }
            }
        },
        cfg,
    );
    if let Some(e) = err {
        return Err(e);
    }
    let mut q = res?;
    q.nodes_used = nodes;
    Ok(q)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Composite Gauss-Legendre over `[a, b]` split into `panels` equal pieces.
pub fn composite_gl<F>(mut f: F, a: f64, b: f64, panels: usize, order: usize) -> f64
where
    F: FnMut(f64) -> f64,
{
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let mut s = 0.0;
        for (xi, wi) in x.iter().zip(&w) {
            s += wi * f(mid + 0.5 * h * xi);
        }
        sum += 0.5 * h * s;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::gamma;

    #[test]
    fn beta_integral_with_endpoint_singularities() {
        let cfg = QuadConfig::default();
        let (a, b) = (0.3, 0.6);
        let q = unit(|t, tc| t.powf(a - 1.0) * tc.powf(b - 1.0), &cfg).unwrap();
        let exact = gamma(a) * gamma(b) / gamma(a + b);
        assert!((q.value - exact).abs() < 1e-11 * exact);
    }

    #[test]
    fn shifted_interval() {
        let cfg = QuadConfig::default();
        let q = tanh_sinh(|x, _, _| x.ln(), 1.0, 3.0, &cfg).unwrap();
        let exact = 3.0 * 3f64.ln() - 2.0;
        assert!((q.value - exact).abs() < 1e-13);
    }

    #[test]
    fn half_line_gamma() {
        let cfg = QuadConfig::default();
        let q = half_line(|s| s.powf(1.5) * (-s).exp(), &cfg).unwrap();
        assert!((q.value - gamma(2.5)).abs() < 1e-12);
    }

    #[test]
    fn simplex_volumes() {
        let cfg = QuadConfig::default();
        let v2 = simplex(2, &|_: &[f64], _| 1.0, &cfg).unwrap();
        assert!((v2.value - 0.5).abs() < 1e-13);
        let v3 = simplex(3, &|u: &[f64], r| u[0] * r, &cfg).unwrap();
        // Dirichlet integral Γ(2)Γ(1)Γ(1)Γ(2)/Γ(6)
        assert!((v3.value - 1.0 / 120.0).abs() < 1e-13);
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        let c = composite_gl(|x| x.cos(), 0.0, 10.0, 7, 12);
        assert!((c - 10f64.sin()).abs() < 1e-13);
    }

    #[test]
    fn config_validation() {
        let mut c = QuadConfig::default();
        c.max_levels = 2;
        assert!(c.validate().is_err());
        c.max_levels = 14;
        assert!(c.validate().is_ok());
    }
}
