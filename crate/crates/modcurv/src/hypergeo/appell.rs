use super::*;
use crate::gamma::{gamma_quotient, poch_int};
#[cfg(test)]
use crate::gamma::gamma;
use crate::quad::{self, QuadConfig};

fn check_xy(x: f64, y: f64) -> Result<()> {
    if !(x.is_finite() && y.is_finite()) || x >= 1.0 || y >= 1.0 {
        return Err(Error::ArgDomain(format!("need x, y < 1, got ({x}, {y})")));
    }
    Ok(())
}

/// Double series of F₁, organised as Σ_m [(a)_m (b)_m/((c)_m m!)] x^m ₂F₁(a+m,b';c+m;y).
pub fn f1_series(p: &AppellF1Params, x: f64, y: f64) -> Result<EvalResult> {
    let AppellF1Params { a, b, bp, c } = *p;
    let mut outer = SeriesSum::new();
    let mut coef: f64 = 1.0;
    let mut terms = 0usize;
    let mut err = 0.0;
    for m in 0..MAX_TERMS_PER_INDEX {
        let mf = m as f64;
        let mut inner = SeriesSum::new();
        let mut t = 1.0;
        let mut done = false;
        for n in 0..MAX_TERMS_PER_INDEX {
            if inner.push(t) {
                done = true;
                break;
            }
            let nf = n as f64;
            t *= (a + mf + nf) * (bp + nf) / ((c + mf + nf) * (nf + 1.0)) * y;
        }
        if !done {
            return Err(Error::NoConvergence("F1 inner series hit the per-index cap".into()));
        }
        terms += inner.terms;
        err += coef.abs() * inner.rounding_error();
        if outer.push(coef * inner.sum) {
            return EvalResult {
                value: outer.sum,
                est_error: err + outer.rounding_error() + (coef * inner.sum).abs(),
                work: Work::Terms(terms),
                method: Method::Series,
            }
            .checked();
        }
        coef *= (a + mf) * (b + mf) / ((c + mf) * (mf + 1.0)) * x;
    }
    Err(Error::NoConvergence("F1 outer series hit the per-index cap".into()))
}

/// Single sum over the second variable with closed ₂F₁ in the first:
/// F₁ = Σ_n (a)_n (b')_n / ((c)_n n!) yⁿ ₂F₁(a+n, b; c+n; x), valid for |y| < 1, x < 1.
pub fn f1_single_sum(p: &AppellF1Params, x: f64, y: f64) -> Result<EvalResult> {
    let AppellF1Params { a, b, bp, c } = *p;
    if y.abs() >= 1.0 {
        return Err(Error::ArgDomain(format!("single-sum form needs |y| < 1, got {y}")));
    }
    let mut s = SeriesSum::new();
    let mut coef: f64 = 1.0;
    let mut err = 0.0;
    let mut work = 0usize;
    for n in 0..MAX_TERMS_PER_INDEX {
        let nf = n as f64;
        let inner = gauss_2f1(&GaussParams { a: a + nf, b, c: c + nf }, x)?;
        if let Work::Terms(k) = inner.work {
            work += k;
        }
        err += coef.abs() * inner.est_error;
        let t = coef * inner.value;
        if s.push(t) {
            return EvalResult {
                value: s.sum,
                est_error: err + s.rounding_error() + t.abs(),
                work: Work::Terms(work),
                method: Method::SingleSum,
            }
            .checked();
        }
        coef *= (a + nf) * (bp + nf) / ((c + nf) * (nf + 1.0)) * y;
    }
    Err(Error::NoConvergence("F1 single sum hit the per-index cap".into()))
}

/// One of the linear-fractional rewritings of F₁: `pre · F₁(params; x', y')`.
#[derive(Debug, Clone, Copy)]
struct F1Form {
    pre: f64,
    p: AppellF1Params,
    x: f64,
    y: f64,
}

fn f1_forms(p: &AppellF1Params, x: f64, y: f64) -> [F1Form; 6] {
    let AppellF1Params { a, b, bp, c } = *p;
    let (ox, oy) = (1.0 - x, 1.0 - y);
    let g = c - b - bp;
    let mk = |a, b, bp| AppellF1Params { a, b, bp, c };
    [
        F1Form { pre: 1.0, p: *p, x, y },
        F1Form { pre: ox.powf(-b) * oy.powf(-bp), p: mk(c - a, b, bp), x: x / (x - 1.0), y: y / (y - 1.0) },
        F1Form { pre: ox.powf(-a), p: mk(a, g, bp), x: x / (x - 1.0), y: (y - x) / ox },
        F1Form { pre: oy.powf(-a), p: mk(a, b, g), x: (x - y) / oy, y: y / (y - 1.0) },
        F1Form { pre: ox.powf(c - a - b) * oy.powf(-bp), p: mk(c - a, g, bp), x, y: (x - y) / oy },
        F1Form { pre: ox.powf(-b) * oy.powf(c - a - bp), p: mk(c - a, b, g), x: (y - x) / ox, y },
    ]
}

/// Rough convergence rate of evaluating ₂F₁ at z with `gauss_2f1`.
fn gauss_rate(z: f64) -> f64 {
    if z < -0.5 {
        (z / (z - 1.0)).abs()
    } else {
        z.abs()
    }
}

/// Appell F₁(a; b, b'; c; x, y) for real x, y < 1.
///
/// Inside |x|+|y| < 0.98 the double series is summed directly. Elsewhere one
/// of six equivalent linear-fractional forms is picked so that a single sum
/// over one variable (with ₂F₁ in the other) converges fastest.
pub fn appell_f1(p: &AppellF1Params, x: f64, y: f64) -> Result<EvalResult> {
    check_finite(&[p.a, p.b, p.bp, p.c])?;
    check_lower("c", p.c)?;
    check_xy(x, y)?;
    if x == 0.0 {
        return gauss_2f1(&GaussParams { a: p.a, b: p.bp, c: p.c }, y);
    }
    if y == 0.0 {
        return gauss_2f1(&GaussParams { a: p.a, b: p.b, c: p.c }, x);
    }
    if x.abs() + y.abs() < 0.98 {
        return f1_series(p, x, y);
    }
    let mut best: Option<(f64, F1Form, bool)> = None;
    for f in f1_forms(p, x, y) {
        for swap in [false, true] {
            let (inner, outer) = if swap { (f.y, f.x) } else { (f.x, f.y) };
            if outer.abs() >= 1.0 || inner >= 1.0 {
                continue;
            }
            let score = outer.abs().max(gauss_rate(inner));
            if best.map_or(true, |(s, _, _)| score < s) {
                best = Some((score, f, swap));
            }
        }
    }
    let (_, f, swap) = best.ok_or_else(|| Error::NoConvergence("no convergent F1 form".into()))?;
    let r = if swap {
        let q = AppellF1Params { a: f.p.a, b: f.p.bp, bp: f.p.b, c: f.p.c };
        f1_single_sum(&q, f.y, f.x)?
    } else {
        f1_single_sum(&f.p, f.x, f.y)?
    };
    EvalResult {
        value: f.pre * r.value,
        est_error: f.pre.abs() * r.est_error + 4.0 * f64::EPSILON * (f.pre * r.value).abs(),
        work: r.work,
        method: r.method,
    }
    .checked()
}

/// F₁ from its double integral over the 2-simplex. Needs b, b' > 0 and c - b - b' > 0.
pub fn appell_f1_quad(p: &AppellF1Params, x: f64, y: f64, cfg: &QuadConfig) -> Result<EvalResult> {
    let AppellF1Params { a, b, bp, c } = *p;
    check_xy(x, y)?;
    let g = c - b - bp;
    if !(b > 0.0 && bp > 0.0 && g > 0.0) {
        return Err(Error::ParamDomain("simplex integral needs b, b' > 0 and c - b - b' > 0".into()));
    }
    let f = |u: &[f64], r: f64| {
        u[0].powf(b - 1.0) * u[1].powf(bp - 1.0) * r.powf(g - 1.0) * (1.0 - x * u[0] - y * u[1]).powf(-a)
    };
    let q = quad::simplex(2, &f, cfg)?;
    let norm = gamma_quotient(&[c], &[b, bp, g]);
    Ok(EvalResult {
        value: norm * q.value,
        est_error: norm.abs() * q.est_error,
        work: Work::Nodes(q.nodes_used),
        method: Method::Quadrature,
    })
}

/// Appell F₂(a; b, b'; c, c'; x, y). Series for |x|+|y| < 1, otherwise the
/// integral over the unit square (b, b' > 0, c > b, c' > b').
pub fn appell_f2(p: &AppellF2Params, x: f64, y: f64) -> Result<EvalResult> {
    let AppellF2Params { a, b, bp, c, cp } = *p;
    check_finite(&[a, b, bp, c, cp, x, y])?;
    check_lower("c", c)?;
    check_lower("c'", cp)?;
    if x.abs() + y.abs() < 1.0 {
        return f2_series(p, x, y);
    }
    appell_f2_quad(p, x, y, &QuadConfig::default())
}

pub fn f2_series(p: &AppellF2Params, x: f64, y: f64) -> Result<EvalResult> {
    let AppellF2Params { a, b, bp, c, cp } = *p;
    if x.abs() + y.abs() >= 1.0 {
        return Err(Error::ArgDomain("F2 series needs |x|+|y| < 1".into()));
    }
    let mut outer = SeriesSum::new();
    let mut coef: f64 = 1.0;
    let mut terms = 0usize;
    let mut err = 0.0;
    for m in 0..MAX_TERMS_PER_INDEX {
        let mf = m as f64;
        let mut inner = SeriesSum::new();
        let mut t = 1.0;
        let mut done = false;
        for n in 0..MAX_TERMS_PER_INDEX {
            if inner.push(t) {
                done = true;
                break;
            }
            let nf = n as f64;
            t *= (a + mf + nf) * (bp + nf) / ((cp + nf) * (nf + 1.0)) * y;
        }
        if !done {
            return Err(Error::NoConvergence("F2 inner series hit the per-index cap".into()));
        }
        terms += inner.terms;
        err += coef.abs() * inner.rounding_error();
        if outer.push(coef * inner.sum) {
            return EvalResult {
                value: outer.sum,
                est_error: err + outer.rounding_error() + (coef * inner.sum).abs(),
                work: Work::Terms(terms),
                method: Method::Series,
            }
            .checked();
        }
        coef *= (a + mf) * (b + mf) / ((c + mf) * (mf + 1.0)) * x;
    }
    Err(Error::NoConvergence("F2 outer series hit the per-index cap".into()))
}

pub fn appell_f2_quad(p: &AppellF2Params, x: f64, y: f64, cfg: &QuadConfig) -> Result<EvalResult> {
    let AppellF2Params { a, b, bp, c, cp } = *p;
    if !(b > 0.0 && bp > 0.0 && c - b > 0.0 && cp - bp > 0.0) {
        return Err(Error::ParamDomain("square integral needs b, b' > 0, c > b, c' > b'".into()));
    }
    if 1.0 - x.max(0.0) - y.max(0.0) <= 0.0 {
        return Err(Error::ArgDomain(format!("1 - xu - yv vanishes on the square at ({x}, {y})")));
    }
    let f = |u: f64, uc: f64, v: f64, vc: f64| {
        u.powf(b - 1.0) * uc.powf(c - b - 1.0) * v.powf(bp - 1.0) * vc.powf(cp - bp - 1.0)
            * (1.0 - x * u - y * v).powf(-a)
    };
    let q = quad::square(&f, cfg)?;
    let norm = gamma_quotient(&[c, cp], &[b, c - b, bp, cp - bp]);
    Ok(EvalResult {
        value: norm * q.value,
        est_error: norm.abs() * q.est_error,
        work: Work::Nodes(q.nodes_used),
        method: Method::Quadrature,
    })
}

/// F₁(a;1,1;c;x,y) as the divided difference of z ₂F₁(a,1;c;z).
///
/// Close to the diagonal the difference quotient is replaced by its Taylor
/// expansion about the midpoint, which tends to d/dz[z ₂F₁] as x - y → 0.
pub fn f1_divided_difference(a: f64, c: f64, x: f64, y: f64) -> Result<f64> {
    check_finite(&[a, c])?;
    check_lower("c", c)?;
    check_xy(x, y)?;
    let g = |z: f64| -> Result<f64> { Ok(z * f21(a, 1.0, c, z)?) };
    let h = 0.5 * (x - y);
    if h.abs() > 1e-3 * (1.0 + x.abs().max(y.abs())) {
        return Ok((g(x)? - g(y)?) / (x - y));
    }
    let mu = 0.5 * (x + y);
    // g^{(k)}(μ) = μ F^{(k)}(μ) + k F^{(k-1)}(μ),  F^{(k)} = (a)_k k!/(c)_k ₂F₁(a+k,1+k;c+k;μ)
    let fk = |k: u32| -> Result<f64> {
        let kf = k as f64;
        Ok(poch_int(a, k) * poch_int(1.0, k) / poch_int(c, k) * f21(a + kf, 1.0 + kf, c + kf, mu)?)
    };
    let mut sum = 0.0;
    let mut fact = 1.0;
    let mut hp = 1.0;
    for k in 1..=7u32 {
        fact *= k as f64;
        if k % 2 == 1 {
            let gk = mu * fk(k)? + k as f64 * fk(k - 1)?;
            sum += gk * hp / fact;
            hp *= h * h;
        }
    }
    Ok(sum)
}

/// F₁(a;1,2;b;x,y) from the closed ₂F₁ combination; near x = y the general
/// evaluator is used since the combination has a double pole there.
pub fn f1_c2_reduction(a: f64, b: f64, x: f64, y: f64) -> Result<f64> {
    check_finite(&[a, b])?;
    check_lower("b", b)?;
    check_xy(x, y)?;
    if (x - y).abs() <= 1e-2 * (1.0 + x.abs().max(y.abs())) {
        return Ok(appell_f1(&AppellF1Params::new(a, 1.0, 2.0, b)?, x, y)?.value);
    }
    let br = b * x * x * f21(a, 1.0, b, x)? + b * y * y * f21(a, 2.0, b, y)?
        + x * (-a * y * y * f21(a + 1.0, 2.0, b + 1.0, y)? - 2.0 * b * y * f21(a, 1.0, b, y)?);
    Ok(br / (b * (x - y).powi(2)))
}

/// F₂(q+1; a, p+1; b, p+2; x, y) as a finite combination of ₂F₁ values,
/// for integers 0 ≤ p < q and |x|+|y| < 1, y ≠ 0.
pub fn f2_to_2f1(q: u32, a: f64, p: u32, b: f64, x: f64, y: f64) -> Result<f64> {
    check_finite(&[a, b, x, y])?;
    check_lower("b", b)?;
    if p >= q {
        return Err(Error::ParamDomain(format!("need p < q, got p={p}, q={q}")));
    }
    if x.abs() + y.abs() >= 1.0 || y == 0.0 {
        return Err(Error::ArgDomain(format!("need |x|+|y| < 1 and y != 0, got ({x}, {y})")));
    }
    let (qf, pf) = (q as f64, p as f64);
    let pre = (pf + 1.0) / y.powi(p as i32 + 1);
    let mut s = -poch_int(1.0, p) / (qf * poch_int(1.0 - qf, p)) * pre * f21(a, qf - pf, b, x)?;
    let w = x / (1.0 - y);
    for k in 0..=p {
        let kf = k as f64;
        let outer = pre * if k % 2 == 0 { 1.0 } else { -1.0 } / ((qf - kf) * (1.0 - y).powi((q - k) as i32))
            * crate::gamma::binomial(p, k);
        for m in 0..=(p - k) {
            let mf = m as f64;
            s += outer * (-x).powi(m as i32) * crate::gamma::binomial(p - k, m) * poch_int(a, m)
                / poch_int(b, m)
                * f21(a + mf, qf - kf, b + mf, w)?;
        }
    }
    Ok(s)
}

/// |F₁(a;b,b';c;x,y) − (x/y)^{b'} F₂(b+b'; a, b'; c, b+b'; x, 1 − x/y)|.
pub fn f2_f1_reduction_residual(p: &AppellF1Params, x: f64, y: f64) -> Result<f64> {
    let AppellF1Params { a, b, bp, c } = *p;
    if !(x / y > 0.0) || x.abs() + (1.0 - x / y).abs() >= 1.0 {
        return Err(Error::ArgDomain("reduction needs x/y > 0 and |x| + |1 - x/y| < 1".into()));
    }
    let lhs = appell_f1(p, x, y)?.value;
    let rhs = (x / y).powf(bp) * f2_series(&AppellF2Params::new(b + bp, a, bp, c, b + bp)?, x, 1.0 - x / y)?.value;
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f1(a: f64, b: f64, bp: f64, c: f64, x: f64, y: f64) -> f64 {
        appell_f1(&AppellF1Params::new(a, b, bp, c).unwrap(), x, y).unwrap().value
    }

    /// Euler-type single integral, an independent route valid for c > a > 0.
    fn f1_euler(a: f64, b: f64, bp: f64, c: f64, x: f64, y: f64) -> f64 {
        let q = quad::unit(
            |t, tc| t.powf(a - 1.0) * tc.powf(c - a - 1.0) * (1.0 - x * t).powf(-b) * (1.0 - y * t).powf(-bp),
            &QuadConfig::default().with_tol(1e-14),
        )
        .unwrap();
        gamma(c) / (gamma(a) * gamma(c - a)) * q.value
    }

    #[test]
    fn reduces_to_gauss_on_axes() {
        let v = f1(1.7, 0.4, 2.2, 3.1, 0.0, -0.6);
        assert!((v - f21(1.7, 2.2, 3.1, -0.6).unwrap()).abs() < 1e-15);
        assert_eq!(f1(1.7, 0.4, 2.2, 3.1, 0.0, 0.0), 1.0);
    }

    #[test]
    fn transformed_forms_match_euler_integral() {
        let (a, b, bp, c) = (1.3, 0.7, 1.1, 3.2);
        for &(x, y) in &[(-3.0, -5.0), (0.6, -2.0), (-0.9, 0.8), (0.5, 0.7), (-15.0, 0.75), (0.9375, -3.0)] {
            let v = f1(a, b, bp, c, x, y);
            let r = f1_euler(a, b, bp, c, x, y);
            assert!((v - r).abs() < 1e-12 * r.abs(), "({x},{y}): {v} vs {r}");
        }
    }

    #[test]
    fn series_matches_euler_integral() {
        let v = f1(3.5, 1.0, 1.0, 4.0, 0.3, 0.2);
        let r = f1_euler(3.5, 1.0, 1.0, 4.0, 0.3, 0.2);
        assert!((v - r).abs() < 1e-13 * r);
    }

    #[test]
    fn equal_arguments_collapse() {
        // F₁(a;b,b';c;x,x) = ₂F₁(a,b+b';c;x)
        for &x in &[-2.0, -0.4, 0.45, 0.8] {
            let v = f1(1.2, 0.5, 1.5, 2.7, x, x);
            let r = f21(1.2, 2.0, 2.7, x).unwrap();
            assert!((v - r).abs() < 1e-12 * r.abs(), "x={x}");
        }
        // F₁(a;b,b';b+b';x,y) = (1-y)^{-a} ₂F₁(a,b;b+b';(x-y)/(1-y))
        let (a, b, bp, x, y): (f64, f64, f64, f64, f64) = (0.8, 1.3, 0.9, 0.4, -0.7);
        let r = (1.0 - y).powf(-a) * f21(a, b, b + bp, (x - y) / (1.0 - y)).unwrap();
        assert!((f1(a, b, bp, b + bp, x, y) - r).abs() < 1e-13);
    }

    #[test]
    fn divided_difference_examples() {
        let (a, c) = (2.0, 3.0);
        assert!((f1_divided_difference(a, c, 0.4, 0.0).unwrap() - f21(a, 1.0, c, 0.4).unwrap()).abs() < 1e-14);
        let dd = f1_divided_difference(a, c, 0.3, 0.5).unwrap();
        assert!((dd - f1(a, 1.0, 1.0, c, 0.3, 0.5)).abs() < 1e-11);
        // confluent limit against a finite difference of z ₂F₁
        let g = |z: f64| z * f21(3.5, 1.0, 4.0, z).unwrap();
        let h = 1e-5;
        let fd = (g(0.4 + h) - g(0.4 - h)) / (2.0 * h);
        for eps in [0.0, 1e-12, 1e-9] {
            let v = f1_divided_difference(3.5, 4.0, 0.4 + eps, 0.4 - eps).unwrap();
            assert!((v - fd).abs() < 1e-8, "eps={eps}: {v} vs {fd}");
        }
        // just inside the expansion radius, against the plain quotient
        let eps = 4e-4;
        let v = f1_divided_difference(3.5, 4.0, 0.4 + eps, 0.4 - eps).unwrap();
        let q = (g(0.4 + eps) - g(0.4 - eps)) / (2.0 * eps);
        assert!((v - q).abs() < 1e-11);
    }

    #[test]
    fn c2_reduction_examples() {
        for &(a, b, x, y) in &[(3.0, 4.0, 0.2, 0.3), (2.5, 5.0, 0.1, 0.6), (1.5, 3.0, 0.4, 0.0), (2.0, 4.5, -3.0, 0.5)] {
            let v = f1_c2_reduction(a, b, x, y).unwrap();
            let r = f1(a, 1.0, 2.0, b, x, y);
            assert!((v - r).abs() < 1e-10 * r.abs(), "({a},{b},{x},{y})");
        }
    }

    #[test]
    fn f2_series_and_reductions() {
        let p = AppellF2Params::new(1.3, 0.6, 1.4, 2.5, 3.5).unwrap();
        assert_eq!(appell_f2(&p, 0.0, 0.0).unwrap().value, 1.0);
        let v = appell_f2(&p, 0.4, 0.0).unwrap().value;
        assert!((v - f21(1.3, 0.6, 2.5, 0.4).unwrap()).abs() < 1e-15);
        for &(q, a, pp, b, x, y) in &[(2, 1.5, 0, 3.0, 0.2, 0.3), (2, 2.0, 1, 4.0, 0.1, 0.25), (3, 0.7, 1, 2.5, -0.2, 0.4)] {
            let lhs = f2_to_2f1(q, a, pp, b, x, y).unwrap();
            let rhs = f2_series(
                &AppellF2Params::new(q as f64 + 1.0, a, pp as f64 + 1.0, b, pp as f64 + 2.0).unwrap(),
                x,
                y,
            )
            .unwrap()
            .value;
            assert!((lhs - rhs).abs() < 1e-11 * rhs.abs(), "q={q} p={pp}");
        }
        let p1 = AppellF1Params::new(1.3, 0.7, 1.1, 3.2).unwrap();
        assert!(f2_f1_reduction_residual(&p1, 0.3, 0.4).unwrap() < 1e-13);
    }

    #[test]
    fn quadrature_forms() {
        let cfg = QuadConfig::default();
        let p = AppellF1Params::new(3.5, 1.0, 1.0, 4.0).unwrap();
        let q = appell_f1_quad(&p, 0.3, 0.2, &cfg).unwrap();
        assert!((q.value - f1(3.5, 1.0, 1.0, 4.0, 0.3, 0.2)).abs() < 1e-11);
        let p2 = AppellF2Params::new(2.0, 1.0, 1.0, 3.0, 2.0).unwrap();
        let q2 = appell_f2_quad(&p2, 0.2, 0.3, &cfg).unwrap();
        let s2 = f2_series(&p2, 0.2, 0.3).unwrap();
        assert!((q2.value - s2.value).abs() < 1e-11);
    }
}
