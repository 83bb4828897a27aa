use super::*;

/// Raw Gauss series Σ (a)_n (b)_n / ((c)_n n!) zⁿ, no transformations.
/// Requires |z| < 1 unless the series terminates.
pub fn series_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<EvalResult> {
    check_finite(&[a, b, c, z])?;
    check_lower("c", c)?;
    let mut s = SeriesSum::new();
    let mut t = 1.0;
    let mut last_ratio = 0.0;
    for n in 0..MAX_TERMS {
        if s.push(t) {
            let tail = if last_ratio < 1.0 { t.abs() * last_ratio / (1.0 - last_ratio) } else { t.abs() };
            return EvalResult {
                value: s.sum,
                est_error: s.rounding_error() + tail,
                work: Work::Terms(s.terms),
                method: Method::Series,
            }
            .checked();
        }
        let nf = n as f64;
        let r = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        last_ratio = r.abs();
        t *= r;
    }
    Err(Error::NoConvergence(format!("2F1({a},{b};{c};{z}) series exceeded {MAX_TERMS} terms")))
}

/// ₂F₁(a,b;c;z) for real z < 1.
///
/// Direct series on |z| ≤ 0.5 and on (0.5, 1); for z < -0.5 the Pfaff
/// transformation maps the argument into (1/3, 1).
pub fn gauss_2f1(p: &GaussParams, z: f64) -> Result<EvalResult> {
    let GaussParams { a, b, c } = *p;
    check_finite(&[a, b, c])?;
    check_lower("c", c)?;
    if !z.is_finite() || z >= 1.0 {
        return Err(Error::ArgDomain(format!("2F1 needs z < 1, got {z}")));
    }
    if z == 0.0 {
        return Ok(EvalResult { value: 1.0, est_error: 0.0, work: Work::Terms(1), method: Method::Series });
    }
    if z >= -0.5 {
        return series_2f1(a, b, c, z);
    }
    let w = z / (z - 1.0);
    // Either Pfaff form works; take the one whose series terminates if any.
    let use_b = is_nonpositive_integer(c - a, 0.0) && !is_nonpositive_integer(c - b, 0.0);
    let (pre, inner) = if use_b {
        ((1.0 - z).powf(-b), series_2f1(c - a, b, c, w)?)
    } else {
        ((1.0 - z).powf(-a), series_2f1(a, c - b, c, w)?)
    };
    EvalResult {
        value: pre * inner.value,
        est_error: pre.abs() * inner.est_error + 2.0 * f64::EPSILON * (pre * inner.value).abs(),
        work: inner.work,
        method: Method::Pfaff,
    }
    .checked()
}

/// Convenience wrapper returning only the value.
pub fn f21(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    Ok(gauss_2f1(&GaussParams::new(a, b, c)?, z)?.value)
}

/// d/dz ₂F₁(a,b;c;z) = (ab/c) ₂F₁(a+1,b+1;c+1;z).
pub fn f21_dz(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    Ok(a * b / c * f21(a + 1.0, b + 1.0, c + 1.0, z)?)
}

/// Kummer's confluent function ₁F₁(a;b;z) by its everywhere-convergent series.
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<EvalResult> {
    check_finite(&[a, b, z])?;
    check_lower("b", b)?;
    let mut s = SeriesSum::new();
    let mut t = 1.0;
    for n in 0..MAX_TERMS {
        // Terms may still grow while n < |z|; only stop once past that hump.
        if s.push(t) && (n as f64) > z.abs() {
            return EvalResult {
                value: s.sum,
                est_error: s.rounding_error() + t.abs(),
                work: Work::Terms(s.terms),
                method: Method::Series,
            }
            .checked();
        }
        let nf = n as f64;
        t *= (a + nf) / ((b + nf) * (nf + 1.0)) * z;
    }
    Err(Error::NoConvergence(format!("1F1({a};{b};{z}) series exceeded {MAX_TERMS} terms")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: f64, b: f64, c: f64, z: f64) -> f64 {
        f21(a, b, c, z).unwrap()
    }

    #[test]
    fn logarithm_value() {
        let v = f(1.0, 1.0, 2.0, -1.0);
        assert!((v - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn trivial_values() {
        assert_eq!(f(2.3, -1.7, 0.4, 0.0), 1.0);
        assert!((f(3.0, 1.0, 1.0, 0.5) - 8.0).abs() < 1e-13);
        // ₂F₁(a,b;b;z) = (1-z)^{-a} through the Pfaff branch
        assert!((f(1.5, 2.0, 2.0, -3.0) - 4f64.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn elementary_closed_forms() {
        // ₂F₁(1/2,1;3/2;-z²) = atan(z)/z and ₂F₁(1,1;2;z) = -ln(1-z)/z
        for &x in &[0.3, 0.9, 2.0, 7.5] {
            let v = f(0.5, 1.0, 1.5, -x * x);
            assert!((v - x.atan() / x).abs() < 1e-14, "x={x}");
        }
        for &z in &[-40.0, -0.7, 0.2, 0.6, 0.93] {
            let v = f(1.0, 1.0, 2.0, z);
            assert!((v + (-z).ln_1p() / z).abs() < 1e-13 * v.abs(), "z={z}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(GaussParams::new(1.0, 1.0, -2.0), Err(Error::ParamDomain(_))));
        assert!(matches!(f21(1.0, 1.0, 1e-13, 0.1), Err(Error::ParamDomain(_))));
        assert!(matches!(f21(1.0, 1.0, 2.0, 1.0), Err(Error::ArgDomain(_))));
    }

    #[test]
    fn terminating_series() {
        // ₂F₁(-2,b;c;z) = 1 - 2bz/c + b(b+1)z²/(c(c+1))
        let (b, c, z) = (1.3, 2.2, -7.0);
        let exact = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        assert!((f(-2.0, b, c, z) - exact).abs() < 1e-13 * exact.abs());
    }

    #[test]
    fn kummer_values() {
        assert_eq!(kummer_1f1(0.3, 1.7, 0.0).unwrap().value, 1.0);
        let v = kummer_1f1(1.0, 2.0, 1.0).unwrap().value;
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-15);
        // ₁F₁(a;a;z) = e^z
        let v = kummer_1f1(2.5, 2.5, 12.0).unwrap().value;
        assert!((v / 12f64.exp() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn derivative_by_parameter_shift() {
        let (a, b, c, z) = (1.2, 0.7, 2.9, 0.35);
        let h = 1e-5;
        let fd = (f(a, b, c, z + h) - f(a, b, c, z - h)) / (2.0 * h);
        assert!((f21_dz(a, b, c, z).unwrap() - fd).abs() < 1e-9);
    }
}
