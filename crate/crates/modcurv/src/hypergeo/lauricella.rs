use super::*;
use crate::gamma::gamma_quotient;
use crate::quad::{self, QuadConfig};

/// Nested series of F_D: sums over the first variable, recursing on the rest
/// with a and c shifted by the running index.
pub fn fd_series(p: &LauricellaParams, xs: &[f64]) -> Result<EvalResult> {
    if xs.len() != p.alphas.len() {
        return Err(Error::ParamDomain("one argument per alpha expected".into()));
    }
    let (v, e, t) = fd_rec(p.a, &p.alphas, p.c, xs)?;
    EvalResult { value: v, est_error: e, work: Work::Terms(t), method: Method::Series }.checked()
}

fn fd_rec(a: f64, alphas: &[f64], c: f64, xs: &[f64]) -> Result<(f64, f64, usize)> {
    let (al, x) = (alphas[0], xs[0]);
    let mut s = SeriesSum::new();
    let mut coef: f64 = 1.0;
    let mut err = 0.0;
    let mut terms = 0;
    for n in 0..MAX_TERMS_PER_INDEX {
        let nf = n as f64;
        let (inner, ie, it) =
            if alphas.len() == 1 { (1.0, 0.0, 1) } else { fd_rec(a + nf, &alphas[1..], c + nf, &xs[1..])? };
        terms += it;
        err += coef.abs() * ie;
        if s.push(coef * inner) {
            return Ok((s.sum, err + s.rounding_error() + (coef * inner).abs(), terms));
        }
        coef *= (a + nf) * (al + nf) / ((c + nf) * (nf + 1.0)) * x;
    }
    Err(Error::NoConvergence("F_D series hit the per-index cap".into()))
}

/// F_D from its integral over the n-simplex; needs every α_j > 0 and c − Σα > 0.
pub fn fd_simplex_quad(p: &LauricellaParams, xs: &[f64], cfg: &QuadConfig) -> Result<EvalResult> {
    let n = p.alphas.len();
    let g = p.c - p.alphas.iter().sum::<f64>();
    if p.alphas.iter().any(|&al| al <= 0.0) || g <= 0.0 {
        return Err(Error::ParamDomain("simplex integral needs alpha_j > 0 and c - sum(alpha) > 0".into()));
    }
    let (a, alphas) = (p.a, &p.alphas);
    let f = |u: &[f64], r: f64| {
        let mut v = r.powf(g - 1.0);
        let mut lin = 1.0;
        for j in 0..n {
            v *= u[j].powf(alphas[j] - 1.0);
            lin -= xs[j] * u[j];
        }
        v * lin.powf(-a)
    };
    let q = quad::simplex(n, &f, cfg)?;
    let mut den = alphas.clone();
    den.push(g);
    let norm = gamma_quotient(&[p.c], &den);
    Ok(EvalResult {
        value: norm * q.value,
        est_error: norm.abs() * q.est_error,
        work: Work::Nodes(q.nodes_used),
        method: Method::Quadrature,
    })
}

/// F_D from the one-dimensional Euler integral; needs c > a > 0.
pub fn fd_euler_quad(p: &LauricellaParams, xs: &[f64], cfg: &QuadConfig) -> Result<EvalResult> {
    let (a, c) = (p.a, p.c);
    if !(a > 0.0 && c - a > 0.0) {
        return Err(Error::ParamDomain("Euler integral needs c > a > 0".into()));
    }
    let q = quad::unit(
        |t, tc| {
            let mut v = t.powf(a - 1.0) * tc.powf(c - a - 1.0);
            for (al, x) in p.alphas.iter().zip(xs) {
                v *= (1.0 - x * t).powf(-al);
            }
            v
        },
        cfg,
    )?;
    let norm = gamma_quotient(&[c], &[a, c - a]);
    Ok(EvalResult {
        value: norm * q.value,
        est_error: norm.abs() * q.est_error,
        work: Work::Nodes(q.nodes_used),
        method: Method::Quadrature,
    })
}

/// Lauricella F_D^{(n)}(a; α₁..αₙ; c; x₁..xₙ), n ≤ 4, real x_j < 1.
///
/// Series when Σ|x_j| < 0.98. Otherwise n = 1, 2 go through the Gauss and
/// Appell evaluators; n ≥ 3 use the simplex integral, or the Euler integral
/// when the simplex one is not available.
pub fn lauricella_fd(p: &LauricellaParams, xs: &[f64]) -> Result<EvalResult> {
    check_finite(&[p.a, p.c])?;
    check_finite(&p.alphas)?;
    check_lower("c", p.c)?;
    if xs.len() != p.alphas.len() || xs.is_empty() || xs.len() > 4 {
        return Err(Error::ParamDomain("F_D needs between 1 and 4 arguments, one per alpha".into()));
    }
    if xs.iter().any(|x| !x.is_finite() || *x >= 1.0) {
        return Err(Error::ArgDomain("F_D needs every x_j < 1".into()));
    }
    if xs.iter().map(|x| x.abs()).sum::<f64>() < 0.98 {
        return fd_series(p, xs);
    }
    match xs.len() {
        1 => gauss_2f1(&GaussParams { a: p.a, b: p.alphas[0], c: p.c }, xs[0]),
        2 => appell_f1(&AppellF1Params { a: p.a, b: p.alphas[0], bp: p.alphas[1], c: p.c }, xs[0], xs[1]),
        _ => {
            let cfg = QuadConfig::default();
            fd_simplex_quad(p, xs, &cfg).or_else(|_| fd_euler_quad(p, xs, &cfg))
        }
    }
}
