use super::*;

/// The six right-hand expressions for z dF/dz built from contiguous functions:
/// a(F(a+)−F), b(F(b+)−F), (c−1)(F(c−)−F), and the three rational forms in
/// F(a−), F(b−), F(c+).
pub fn contiguous_lines(p: &GaussParams, z: f64) -> Result<[f64; 6]> {
    let GaussParams { a, b, c } = *p;
    check_lower("c", c)?;
    check_lower("c - 1", c - 1.0)?;
    if !(z > -1.0 && z < 1.0) {
        return Err(Error::ArgDomain(format!("contiguous relations checked on (-1, 1), got {z}")));
    }
    let f = |a: f64, b: f64, c: f64| -> Result<f64> { Ok(series_2f1(a, b, c, z)?.value) };
    let f0 = f(a, b, c)?;
    Ok([
        a * (f(a + 1.0, b, c)? - f0),
        b * (f(a, b + 1.0, c)? - f0),
        (c - 1.0) * (f(a, b, c - 1.0)? - f0),
        ((c - a) * f(a - 1.0, b, c)? + (a - c + b * z) * f0) / (1.0 - z),
        ((c - b) * f(a, b - 1.0, c)? + (b - c + a * z) * f0) / (1.0 - z),
        z * ((c - a) * (c - b) * f(a, b, c + 1.0)? + c * (a + b - c) * f0) / (c * (1.0 - z)),
    ])
}

/// Absolute differences between every pair of the six contiguous lines (15 values).
pub fn contiguous_residuals(p: &GaussParams, z: f64) -> Result<Vec<f64>> {
    let l = contiguous_lines(p, z)?;
    let mut out = Vec::with_capacity(15);
    for i in 0..6 {
        for j in i + 1..6 {
            out.push((l[i] - l[j]).abs());
        }
    }
    Ok(out)
}

/// Residuals of the parameter-raising relations F(a+) = F + z F'/a,
/// F(b+) = F + z F'/b and F(c−) = F + z F'/(c−1), with F' = (ab/c) F(a+,b+,c+).
pub fn differential_residuals(p: &GaussParams, z: f64) -> Result<[f64; 3]> {
    let GaussParams { a, b, c } = *p;
    check_lower("c - 1", c - 1.0)?;
    let f0 = f21(a, b, c, z)?;
    let zd = z * f21_dz(a, b, c, z)?;
    Ok([
        (f21(a + 1.0, b, c, z)? - (f0 + zd / a)).abs(),
        (f21(a, b + 1.0, c, z)? - (f0 + zd / b)).abs(),
        (f21(a, b, c - 1.0, z)? - (f0 + zd / (c - 1.0))).abs(),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Transform {
    PfaffA,
    PfaffB,
    Euler,
}

/// |LHS − RHS| of a Pfaff or Euler transformation. Each side is summed by
/// its own raw series when its argument lies in the unit disc.
pub fn pfaff_euler_residual(p: &GaussParams, z: f64, which: Transform) -> Result<f64> {
    let GaussParams { a, b, c } = *p;
    check_lower("c", c)?;
    if !z.is_finite() || z >= 1.0 {
        return Err(Error::ArgDomain(format!("need z < 1, got {z}")));
    }
    let eval = |a: f64, b: f64, z: f64| -> Result<f64> {
        if z.abs() < 1.0 {
            Ok(series_2f1(a, b, c, z)?.value)
        } else {
            f21(a, b, c, z)
        }
    };
    let lhs = eval(a, b, z)?;
    let w = z / (z - 1.0);
    let rhs = match which {
        Transform::PfaffA => (1.0 - z).powf(-a) * eval(a, c - b, w)?,
        Transform::PfaffB => (1.0 - z).powf(-b) * eval(c - a, b, w)?,
        Transform::Euler => (1.0 - z).powf(c - a - b) * eval(c - a, c - b, z)?,
    };
    Ok((lhs - rhs).abs())
}

/// ₂F₁(a,1;c;z) for integer c ≥ 1 by lowering c to the closed case
/// ₂F₁(a,1;1;z) = (1−z)^{−a}:
///
/// ₂F₁(a,1;c;z) = (1−c)_p/(a−c+1)_p ((z−1)/z)^p ₂F₁(a,1;c−p;z)
///              + z⁻¹ Σ_{k=1}^{p} (1−c)_k/(a−c+1)_k ((z−1)/z)^{k−1},  p = c − 1.
///
/// Cancellation grows like |z|^{1−c} for small |z|.
pub fn symbolic_2f1_a1c(a: f64, c: u32, z: f64) -> Result<f64> {
    if c == 0 {
        return Err(Error::ParamDomain("c must be a positive integer".into()));
    }
    if !a.is_finite() {
        return Err(Error::ParamDomain("a must be finite".into()));
    }
    if !(z > -1.0 && z < 1.0) {
        return Err(Error::ArgDomain(format!("need z in (-1, 1), got {z}")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let p = c - 1;
    let cf = c as f64;
    for k in 1..=p {
        if a - cf + k as f64 == 0.0 {
            return Err(Error::ParamDomain(format!("a = {a} hits a Pochhammer zero for c = {c}")));
        }
    }
    let r = (z - 1.0) / z;
    let base = (1.0 - z).powf(-a);
    let mut sum = 0.0;
    let mut ratio = 1.0;
    let mut rp = 1.0;
    for k in 1..=p {
        let kf = k as f64;
        ratio *= (1.0 - cf + kf - 1.0) / (a - cf + kf);
        sum += ratio * rp;
        rp *= r;
    }
    // after the loop ratio = (1-c)_p/(a-c+1)_p and rp = r^p
    Ok(ratio * rp * base + sum / z)
}

/// F(a+1,b;c+1;z)/F(a,b;c;z) from Gauss's continued fraction
/// 1/(1 − k₁z/(1 − k₂z/(1 − …))), evaluated backwards from depth `depth`.
///
/// Fails with `NoConvergence` when depth and depth+1 disagree by more than 1e-10.
pub fn gauss_cf_ratio(p: &GaussParams, z: f64, depth: usize) -> Result<f64> {
    let GaussParams { a, b, c } = *p;
    check_lower("c", c)?;
    if depth == 0 {
        return Err(Error::ParamDomain("depth must be at least 1".into()));
    }
    if !(z > -1.0 && z < 1.0) {
        return Err(Error::ArgDomain(format!("need z in (-1, 1), got {z}")));
    }
    let k = |n: usize| -> f64 {
        let i = ((n - 1) / 2) as f64;
        if n % 2 == 1 {
            (b + i) * (c - a + i) / ((c + 2.0 * i) * (c + 2.0 * i + 1.0))
        } else {
            (a + i + 1.0) * (c - b + i + 1.0) / ((c + 2.0 * i + 1.0) * (c + 2.0 * i + 2.0))
        }
    };
    let eval = |d: usize| -> f64 {
        let mut t = 1.0;
        for n in (1..=d).rev() {
            t = 1.0 - k(n) * z / t;
        }
        1.0 / t
    };
    let (r1, r2) = (eval(depth), eval(depth + 1));
    if !r1.is_finite() || (r1 - r2).abs() > 1e-10 * r2.abs() {
        return Err(Error::NoConvergence(format!("continued fraction not settled at depth {depth}")));
    }
    Ok(r2)
}

/// Residuals of the F₁ raising relations with partials from parameter shifts,
/// ∂ₓF₁ = (ab/c) F₁(a+1;b+1,b';c+1) and ∂ᵧF₁ = (ab'/c) F₁(a+1;b,b'+1;c+1).
pub fn f1_differential_residuals(p: &AppellF1Params, x: f64, y: f64) -> Result<[f64; 4]> {
    let AppellF1Params { a, b, bp, c } = *p;
    let f = |a: f64, b: f64, bp: f64, c: f64| -> Result<f64> {
        Ok(appell_f1(&AppellF1Params::new(a, b, bp, c)?, x, y)?.value)
    };
    let dx = |a: f64, b: f64, bp: f64, c: f64| -> Result<f64> { Ok(a * b / c * f(a + 1.0, b + 1.0, bp, c + 1.0)?) };
    let dy = |a: f64, b: f64, bp: f64, c: f64| -> Result<f64> { Ok(a * bp / c * f(a + 1.0, b, bp + 1.0, c + 1.0)?) };
    let f0 = f(a, b, bp, c)?;
    let (xd, yd) = (x * dx(a, b, bp, c)?, y * dy(a, b, bp, c)?);
    let fc = f(a, b, bp, c + 1.0)?;
    let euler_c = x * dx(a, b, bp, c + 1.0)? + y * dy(a, b, bp, c + 1.0)?;
    Ok([
        (f(a + 1.0, b, bp, c)? - (f0 + (xd + yd) / a)).abs(),
        (f(a, b + 1.0, bp, c)? - (f0 + xd / b)).abs(),
        (f(a, b, bp + 1.0, c)? - (f0 + yd / bp)).abs(),
        (f0 - (fc + euler_c / c)).abs(),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contiguous_examples() {
        let r = contiguous_residuals(&GaussParams::new(2.0, 1.0, 3.0).unwrap(), 0.4).unwrap();
        assert_eq!(r.len(), 15);
        assert!(r.iter().all(|v| *v < 1e-10), "{r:?}");
        let r = contiguous_residuals(&GaussParams::new(1.5, 2.5, 3.2).unwrap(), -0.6).unwrap();
        assert!(r.iter().all(|v| *v < 1e-9));
        let l = contiguous_lines(&GaussParams::new(0.7, 1.1, 2.6).unwrap(), 0.0).unwrap();
        assert!(l.iter().all(|v| v.abs() < 1e-15), "{l:?}");
        assert!(contiguous_lines(&GaussParams::new(1.0, 1.0, 1.0).unwrap(), 0.2).is_err());
    }

    #[test]
    fn transform_examples() {
        let p = GaussParams::new(2.0, 1.0, 3.0).unwrap();
        assert!(pfaff_euler_residual(&p, 0.5, Transform::Euler).unwrap() < 1e-12);
        let p = GaussParams::new(1.2, 0.7, 2.4).unwrap();
        assert!(pfaff_euler_residual(&p, -0.8, Transform::PfaffA).unwrap() < 1e-12);
        assert_eq!(pfaff_euler_residual(&p, 0.0, Transform::PfaffB).unwrap(), 0.0);
    }

    #[test]
    fn differential_relations() {
        let r = differential_residuals(&GaussParams::new(1.3, 0.4, 2.7).unwrap(), 0.55).unwrap();
        assert!(r.iter().all(|v| *v < 1e-12), "{r:?}");
    }

    #[test]
    fn lowering_c_reaches_series_values() {
        assert!((symbolic_2f1_a1c(1.7, 1, 0.3).unwrap() - 0.7f64.powf(-1.7)).abs() < 1e-15);
        let v = symbolic_2f1_a1c(3.0, 2, 0.5).unwrap();
        assert!((v - f21(3.0, 1.0, 2.0, 0.5).unwrap()).abs() < 1e-12);
        let v = symbolic_2f1_a1c(2.5, 4, -0.4).unwrap();
        assert!((v - f21(2.5, 1.0, 4.0, -0.4).unwrap()).abs() < 1e-12);
        assert_eq!(symbolic_2f1_a1c(2.5, 4, 0.0).unwrap(), 1.0);
        assert!(matches!(symbolic_2f1_a1c(2.0, 4, 0.3), Err(Error::ParamDomain(_))));
    }

    #[test]
    fn continued_fraction_examples() {
        let p = GaussParams::new(2.5, 1.0, 3.0).unwrap();
        let direct = f21(3.5, 1.0, 4.0, 0.3).unwrap() / f21(2.5, 1.0, 3.0, 0.3).unwrap();
        assert!((gauss_cf_ratio(&p, 0.3, 40).unwrap() - direct).abs() < 1e-10);
        assert_eq!(gauss_cf_ratio(&p, 0.0, 3).unwrap(), 1.0);
        assert!(matches!(gauss_cf_ratio(&p, 0.9, 1), Err(Error::NoConvergence(_))));
    }

    #[test]
    fn f1_raising_relations() {
        let p = AppellF1Params::new(1.4, 0.6, 1.2, 2.9).unwrap();
        for &(x, y) in &[(0.2, -0.3), (-2.0, 0.5), (0.7, 0.6)] {
            let r = f1_differential_residuals(&p, x, y).unwrap();
            assert!(r.iter().all(|v| *v < 1e-10), "({x},{y}) {r:?}");
        }
    }

    #[test]
    fn f1_partial_needs_ab_over_c() {
        // The plain shift F₁(a+1;b+1,b';c+1) differs from ∂ₓF₁ unless ab = c.
        let p = AppellF1Params::new(1.4, 0.6, 1.2, 2.9).unwrap();
        let g = |x: f64| appell_f1(&p, x, 0.1).unwrap().value;
        let h = 1e-5;
        let fd = (g(0.2 + h) - g(0.2 - h)) / (2.0 * h);
        let shifted = appell_f1(&AppellF1Params::new(2.4, 1.6, 1.2, 3.9).unwrap(), 0.2, 0.1).unwrap().value;
        assert!((fd - 1.4 * 0.6 / 2.9 * shifted).abs() < 1e-9);
        assert!((fd - shifted).abs() > 0.1);
    }
}
