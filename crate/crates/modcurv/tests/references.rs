//! Frozen reference values (computed once at 40 digits) and a small
//! oracle written here, independent of the library's evaluators.

use modcurv::hypergeo::*;
use modcurv::spectral::{h_family, k_family, SpectralIndex};

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}

#[track_caller]
fn close(got: f64, want: f64, tol: f64) {
    assert!(rel(got, want) < tol, "got {got}, want {want}, rel {:e}", rel(got, want));
}

#[test]
fn gauss_frozen() {
    let cases = [
        (0.5, 1.5, 2.5, 0.9, 1.6673034691845802148),
        (1.3, -0.7, 2.2, -5.0, 2.5804049194965791811),
        (2.0, 3.0, 4.5, -0.95, 0.39258406998851667896),
        (0.25, 0.75, 1.5, 0.999, 1.3923696132624300258),
        (3.5, 1.0, 2.0, -20.0, 0.019990103497041451593),
        (1.0, 1.0, 2.0, 0.5, 1.3862943611198906188),
    ];
    for (a, b, c, z, want) in cases {
        close(f21(a, b, c, z).unwrap(), want, 1e-12);
    }
}

#[test]
fn kummer_frozen() {
    for (a, b, z, want) in
        [(1.5, 2.5, -7.0, 0.071569109188072450015), (0.3, 1.7, 4.2, 4.2387571202895844027), (2.0, 3.0, -0.7, 0.63593870838613807891)]
    {
        close(kummer_1f1(a, b, z).unwrap().value, want, 1e-12);
    }
}

#[test]
fn appell_frozen() {
    let f1 = [
        ([1.5, 0.7, 1.3, 3.2], 0.3, -0.4, 0.89649645460397769963),
        ([2.5, 1.0, 2.0, 4.0], -3.0, 0.7, 1.2823858747962164298),
        ([3.25, 1.0, 1.0, 4.0], -1.5, -0.8, 0.28395159087916328556),
        ([1.2, 0.5, 0.5, 2.7], 0.95, 0.9, 2.2312852774653341998),
    ];
    for (p, x, y, want) in f1 {
        let ap = AppellF1Params::new(p[0], p[1], p[2], p[3]).unwrap();
        close(appell_f1(&ap, x, y).unwrap().value, want, 1e-11);
    }
    let f2 = [
        ([1.5, 0.7, 1.3, 2.2, 2.9], 0.3, -0.2, 1.0265210565972673948),
        ([2.0, 1.0, 1.0, 3.0, 4.0], 0.45, 0.4, 1.9990076481639806201),
    ];
    for (p, x, y, want) in f2 {
        let ap = AppellF2Params::new(p[0], p[1], p[2], p[3], p[4]).unwrap();
        close(appell_f2(&ap, x, y).unwrap().value, want, 1e-11);
    }
}

#[test]
fn spectral_frozen() {
    let k = [
        (1, 1, 0.25, 2.5, 2.0023690611463824453),
        (2, 1, 4.0, 3.7, 0.22963964741004620359),
        (3, 2, 12.0, 6.25, 0.02590454652282441614),
        (1, 3, 0.05, 8.0, 39375999.999999989126),
    ];
    for (a, b, y, m, want) in k {
        close(k_family(&SpectralIndex::k(a, b, m).unwrap(), y).unwrap(), want, 1e-12);
    }
    let h = [
        (1, 1, 1, 0.5, 3.5, 2.5, 0.59267571129308749764),
        (2, 1, 1, 4.0, 0.3, 3.0, 0.13335317241750391606),
        (1, 2, 3, 2.0, 1.6, 5.0, 0.012753268762141866178),
        (3, 1, 1, 0.25, 0.7, 6.25, 407.58337568281180777),
    ];
    for (a, b, c, y1, y2, m, want) in h {
        close(h_family(&SpectralIndex::h(a, b, c, m).unwrap(), y1, y2).unwrap(), want, 1e-11);
    }
}

/// 20-point Gauss–Legendre nodes on [0, 1] by Newton iteration on P_20.
fn gl20() -> Vec<(f64, f64)> {
    let n = 20;
    (1..=n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            ((1.0 - x) / 2.0, 1.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// ∫₀¹ f by composite 20-point Gauss–Legendre on `panels` equal pieces.
fn integrate(f: impl Fn(f64) -> f64, panels: usize) -> f64 {
    let nodes = gl20();
    let h = 1.0 / panels as f64;
    (0..panels).map(|k| nodes.iter().map(|&(x, w)| w * f(h * (k as f64 + x))).sum::<f64>() * h).sum()
}

fn ln_gamma(x: f64) -> f64 {
    // Stirling with shift, accurate to ~1e-15 for x > 0
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= x.ln();
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    acc + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + (1.0 / 12.0 - x2 * (1.0 / 360.0 - x2 * (1.0 / 1260.0 - x2 / 1680.0))) / x
}

/// Euler integral for ₂F₁ with positive integers b and c − b, so the integrand is smooth.
fn euler_2f1(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let pre = (ln_gamma(c) - ln_gamma(b) - ln_gamma(c - b)).exp();
    pre * integrate(|t| t.powf(b - 1.0) * (1.0 - t).powf(c - b - 1.0) * (1.0 - z * t).powf(-a), 40)
}

#[test]
fn gauss_against_local_euler_integral() {
    for (a, b, c) in [(0.5, 1.0, 3.0), (2.5, 2.0, 4.0), (-1.3, 1.0, 2.0), (3.7, 3.0, 5.0)] {
        for z in [-30.0, -3.0, -0.7, 0.2, 0.6, 0.93] {
            close(f21(a, b, c, z).unwrap(), euler_2f1(a, b, c, z), 1e-12);
        }
    }
}

/// F₁ as a one-dimensional Euler integral; a and c − a are positive integers
/// so the weight is a polynomial.
fn euler_f1(a: f64, b: f64, bp: f64, c: f64, x: f64, y: f64) -> f64 {
    let pre = (ln_gamma(c) - ln_gamma(a) - ln_gamma(c - a)).exp();
    pre * integrate(|t| t.powf(a - 1.0) * (1.0 - t).powf(c - a - 1.0) * (1.0 - x * t).powf(-b) * (1.0 - y * t).powf(-bp), 40)
}

#[test]
fn appell_f1_against_local_integral() {
    for (a, c) in [(1.0, 3.0), (2.0, 4.0), (3.0, 5.0)] {
        for (b, bp) in [(0.5, 1.5), (2.0, 1.0), (-0.5, 0.7)] {
            for (x, y) in [(0.3, -0.4), (-4.0, 0.8), (0.9, 0.95), (-10.0, -2.0)] {
                let ap = AppellF1Params::new(a, b, bp, c).unwrap();
                close(appell_f1(&ap, x, y).unwrap().value, euler_f1(a, b, bp, c, x, y), 1e-11);
            }
        }
    }
}

#[test]
fn lauricella_against_local_integral() {
    // F_D(a; α; c; x) = Γ(c)/(Γ(a)Γ(c−a)) ∫ t^{a−1}(1−t)^{c−a−1} Π(1−x_j t)^{−α_j}
    let (a, c) = (2.0, 5.0);
    let al = [0.5, 1.2, -0.3];
    for xs in [[0.2, -0.5, 0.7], [-3.0, 0.9, 0.4], [0.95, 0.95, -8.0]] {
        let p = LauricellaParams::new(a, al.to_vec(), c).unwrap();
        let pre = (ln_gamma(c) - ln_gamma(a) - ln_gamma(c - a)).exp();
        let want = pre
            * integrate(
                |t| t.powf(a - 1.0) * (1.0 - t).powf(c - a - 1.0) * (0..3).map(|j| (1.0 - xs[j] * t).powf(-al[j])).product::<f64>(),
                40,
            );
        close(lauricella_fd(&p, &xs).unwrap().value, want, 1e-11);
    }
}
