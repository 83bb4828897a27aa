//! Named relation suites over a parameter grid. Each suite returns one
//! [`RelationReport`] per relation; the CLI and the acceptance test both
//! run through here.

use crate::error::{Error, Result};
use crate::gamma::{gamma, gamma_ratio};
use crate::hypergeo::{
    contiguous_residuals, differential_residuals, f1_differential_residuals, pfaff_euler_residual,
    symbolic_2f1_a1c, Transform,
    appell_f1, appell_f1_quad, appell_f2, appell_f2_quad, f1_c2_reduction, f1_divided_difference, f21,
    f2_f1_reduction_residual, f2_series, f2_to_2f1, fd_simplex_quad, gauss_2f1, kummer_1f1, lauricella_fd,
    AppellF1Params, AppellF2Params, GaussParams, LauricellaParams,
};
use crate::oracle;
use crate::quad::{self, QuadConfig};
use crate::report::{PointResidual, RelationReport};
use crate::spectral::{self, SpectralIndex};
use crate::symbol;
use crate::variational::{self, ScalarFn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub m_values: Vec<f64>,
    /// First (or only) argument of the spectral functions.
    pub arg_values: Vec<f64>,
    /// Second argument of the two-variable functions.
    pub second_args: Vec<f64>,
    /// Points closer than this to u = 1, v = 1, uv = 1 or u = v are skipped.
    pub exclusion_radius: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            m_values: vec![2.5, 3.0, 3.7, 4.0, 5.0, 6.25, 8.0],
            arg_values: vec![0.25, 0.5, 0.8, 1.25, 2.0, 4.0],
            second_args: vec![0.3, 0.7, 1.6, 3.5],
            exclusion_radius: 1e-3,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::ParamDomain(what.to_string()));
        if self.m_values.is_empty() || self.arg_values.is_empty() || self.second_args.is_empty() {
            return bad("grid lists must be non-empty");
        }
        if self.m_values.iter().any(|m| !(m.is_finite() && *m > 0.0)) {
            return bad("m values must be positive");
        }
        if self.arg_values.iter().chain(&self.second_args).any(|a| !(a.is_finite() && *a > 0.0)) {
            return bad("arguments must be positive");
        }
        if !(self.exclusion_radius >= 0.0) {
            return bad("exclusion radius must be non-negative");
        }
        Ok(())
    }

    fn require_m_above_two(&self, suite: Suite) -> Result<()> {
        match self.m_values.iter().find(|&&m| m <= 2.0) {
            Some(m) => Err(Error::ParamDomain(format!("suite {suite} needs m > 2, got {m}"))),
            None => Ok(()),
        }
    }

    /// (u, v) pairs away from the removable singular loci.
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        let r = self.exclusion_radius;
        let mut out = Vec::new();
        for &u in &self.arg_values {
            for &v in &self.second_args {
                let near = (u - 1.0).abs() < r || (v - 1.0).abs() < r || (u * v - 1.0).abs() < r || (u - v).abs() < r;
                if !near {
                    out.push((u, v));
                }
            }
        }
        out
    }

    fn describe(&self) -> String {
        format!("m in {:?}, y in {:?}", self.m_values, self.arg_values)
    }

    fn describe2(&self) -> String {
        format!(
            "m in {:?}, (y1, y2) in {:?} x {:?} minus radius {}",
            self.m_values, self.arg_values, self.second_args, self.exclusion_radius
        )
    }
}

/// Per-suite tolerances; every report echoes the one it was judged by.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub hypergeo: f64,
    pub transforms: f64,
    pub f1_system: f64,
    pub oracles: f64,
    pub oracle_h: f64,
    pub collapse: f64,
    pub oscillatory: f64,
    pub displays: f64,
    pub spectral: f64,
    pub recurrences: f64,
    pub jets: f64,
    pub variational: f64,
    pub functional: f64,
    pub symbol: f64,
    pub crosscheck: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hypergeo: 1e-9,
            transforms: 1e-11,
            f1_system: 1e-8,
            oracles: 1e-9,
            oracle_h: 1e-8,
            collapse: 1e-7,
            oscillatory: 1e-3,
            displays: 1e-10,
            spectral: 1e-8,
            recurrences: 1e-9,
            jets: 1e-10,
            variational: 1e-8,
            functional: 1e-7,
            symbol: 0.0,
            crosscheck: 1e-9,
        }
    }
}

impl Tolerances {
    /// Sets a field by its name, as used in the key-value config file.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "hypergeo" => &mut self.hypergeo,
            "transforms" => &mut self.transforms,
            "f1_system" => &mut self.f1_system,
            "oracles" => &mut self.oracles,
            "oracle_h" => &mut self.oracle_h,
            "collapse" => &mut self.collapse,
            "oscillatory" => &mut self.oscillatory,
            "displays" => &mut self.displays,
            "spectral" => &mut self.spectral,
            "recurrences" => &mut self.recurrences,
            "jets" => &mut self.jets,
            "variational" => &mut self.variational,
            "functional" | "thm4_10" => &mut self.functional,
            "symbol" => &mut self.symbol,
            "crosscheck" => &mut self.crosscheck,
            _ => return Err(Error::ParamDomain(format!("unknown tolerance key {key}"))),
        };
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::ParamDomain(format!("tolerance {key} must be finite and >= 0")));
        }
        *slot = value;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Hypergeo,
    Oracles,
    Spectral,
    Recurrences,
    Jets,
    Variational,
    Thm4_10,
    Symbol,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Hypergeo,
        Suite::Oracles,
        Suite::Spectral,
        Suite::Recurrences,
        Suite::Jets,
        Suite::Variational,
        Suite::Thm4_10,
        Suite::Symbol,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hypergeo => "hypergeo",
            Suite::Oracles => "oracles",
            Suite::Spectral => "spectral",
            Suite::Recurrences => "recurrences",
            Suite::Jets => "jets",
            Suite::Variational => "variational",
            Suite::Thm4_10 => "thm4_10",
            Suite::Symbol => "symbol",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain([Suite::All].iter())
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::ParamDomain(format!("unknown suite {s}")))
    }
}

/// Runs a suite. Configuration problems are errors; failed relations are
/// reports with `passed == false`.
pub fn run(suite: Suite, grid: &GridSpec, tol: &Tolerances) -> Result<Vec<RelationReport>> {
    grid.validate()?;
    match suite {
        Suite::Hypergeo => Ok(hypergeo(tol)),
        Suite::Oracles => Ok(oracles(grid, tol)),
        Suite::Spectral => {
            grid.require_m_above_two(suite)?;
            Ok(spectral_suite(grid, tol))
        }
        Suite::Recurrences => Ok(recurrences(grid, tol)),
        Suite::Jets => jets(grid, tol),
        Suite::Variational => Ok(variational_suite(grid, tol)),
        Suite::Thm4_10 => {
            grid.require_m_above_two(suite)?;
            Ok(functional(grid, tol))
        }
        Suite::Symbol => Ok(symbol_suite(grid, tol)),
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::EACH {
                out.extend(run(s, grid, tol)?);
            }
            Ok(out)
        }
    }
}

/// Evaluates `f` at every point in parallel; an evaluation error counts as
/// an infinite residual.
fn sweep<F>(id: &str, spec: String, tol: f64, points: Vec<Vec<f64>>, f: F) -> RelationReport
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    let pts = points
        .into_par_iter()
        .map(|p| {
            let residual = f(&p).unwrap_or(f64::INFINITY);
            PointResidual { point: p, residual }
        })
        .collect();
    RelationReport::from_points(id, spec, tol, pts)
}

/// All concatenations of a row of `a` with a row of `b`.
fn cross(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    a.iter().flat_map(|x| b.iter().map(move |y| [x.as_slice(), y.as_slice()].concat())).collect()
}

fn col(v: &[f64]) -> Vec<Vec<f64>> {
    v.iter().map(|&x| vec![x]).collect()
}

fn pair_rows(v: &[(f64, f64)]) -> Vec<Vec<f64>> {
    v.iter().map(|&(x, y)| vec![x, y]).collect()
}

fn idx2(v: &[(u32, u32)]) -> Vec<Vec<f64>> {
    v.iter().map(|&(a, b)| vec![a as f64, b as f64]).collect()
}

fn idx3(v: &[(u32, u32, u32)]) -> Vec<Vec<f64>> {
    v.iter().map(|&(a, b, c)| vec![a as f64, b as f64, c as f64]).collect()
}

/// |a − b| / max(1, |b|)
fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

const GAUSS_TRIPLES: [(f64, f64, f64); 10] = [
    (2.0, 1.0, 3.0),
    (1.5, 2.5, 3.2),
    (0.5, 0.7, 1.9),
    (-0.5, 1.2, 2.5),
    (3.0, 2.0, 4.5),
    (1.2, 0.3, 2.2),
    (2.5, 1.5, 3.7),
    (0.8, 0.8, 2.6),
    (1.0, 1.0, 2.0),
    (4.0, 0.5, 5.5),
];
const GAUSS_Z: [f64; 10] = [-0.85, -0.6, -0.4, -0.2, -0.05, 0.1, 0.3, 0.45, 0.6, 0.8];

fn gauss_grid() -> Vec<Vec<f64>> {
    GAUSS_TRIPLES
        .iter()
        .flat_map(|&(a, b, c)| GAUSS_Z.iter().map(move |&z| vec![a, b, c, z]))
        .collect()
}

fn gp(p: &[f64]) -> Result<GaussParams> {
    GaussParams::new(p[0], p[1], p[2])
}

const DRAWS: usize = 200;

/// Three-variable simplex quadrature is slow, so F_D gets fewer draws.
const FD_DRAWS: usize = 40;

fn draws<T, F: FnMut(&mut ChaCha8Rng) -> T>(seed: u64, f: F) -> Vec<T> {
    draws_n(seed, DRAWS, f)
}

fn draws_n<T, F: FnMut(&mut ChaCha8Rng) -> T>(seed: u64, n: usize, mut f: F) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| f(&mut rng)).collect()
}

fn quad_cfg() -> QuadConfig {
    QuadConfig::default().with_tol(1e-12)
}

fn hypergeo(tol: &Tolerances) -> Vec<RelationReport> {
    let mut out = Vec::new();
    let spec = "10 (a,b,c) triples x 10 z in (-0.85, 0.8)".to_string();
    let grid = gauss_grid();
    let all: Vec<(Vec<f64>, Vec<f64>)> = grid
        .par_iter()
        .map(|p| {
            let r = gp(p).and_then(|g| contiguous_residuals(&g, p[3])).unwrap_or_else(|_| vec![f64::INFINITY; 15]);
            (p.clone(), r)
        })
        .collect();
    for k in 0..15 {
        let pts = all.iter().map(|(p, r)| PointResidual { point: p.clone(), residual: r[k] }).collect();
        out.push(RelationReport::from_points(format!("contiguous.{:02}", k + 1), spec.clone(), tol.hypergeo, pts));
    }
    for (k, name) in ["a_plus", "b_plus", "c_minus"].iter().enumerate() {
        out.push(sweep(&format!("differential.{name}"), spec.clone(), tol.hypergeo, grid.clone(), |p| {
            Ok(differential_residuals(&gp(p)?, p[3])?[k])
        }));
    }
    for (which, name) in [(Transform::PfaffA, "pfaff_a"), (Transform::PfaffB, "pfaff_b"), (Transform::Euler, "euler")] {
        out.push(sweep(&format!("transform.{name}"), spec.clone(), tol.transforms, grid.clone(), |p| {
            let v = f21(p[0], p[1], p[2], p[3])?;
            Ok(pfaff_euler_residual(&gp(p)?, p[3], which)? / v.abs().max(1.0))
        }));
    }

    let cfg = quad_cfg();
    let spec = |what: &str| format!("{DRAWS} seeded draws, {what}");
    let pts = draws(11, |r| {
        let b = r.gen_range(0.5..3.0);
        vec![r.gen_range(-2.0..4.0), b, b + r.gen_range(0.5..3.0), r.gen_range(-0.9..0.9)]
    });
    out.push(sweep("series_vs_quad.2f1", spec("b, c-b in [0.5, 3], z in (-0.9, 0.9)"), tol.hypergeo, pts, |p| {
        let (a, b, c, z) = (p[0], p[1], p[2], p[3]);
        let q = quad::unit(|t, tc| t.powf(b - 1.0) * tc.powf(c - b - 1.0) * (1.0 - z * t).powf(-a), &cfg)?;
        let q = q.value * gamma(c) / (gamma(b) * gamma(c - b));
        Ok(rel(gauss_2f1(&gp(p)?, z)?.value, q))
    }));
    let pts = draws(12, |r| {
        let (b, bp) = (r.gen_range(0.5..2.5), r.gen_range(0.5..2.5));
        vec![r.gen_range(0.5..3.0), b, bp, b + bp + r.gen_range(0.5..2.5), r.gen_range(-0.45..0.45), r.gen_range(-0.45..0.45)]
    });
    out.push(sweep("series_vs_quad.f1", spec("|x|+|y| < 0.9"), tol.hypergeo, pts, |p| {
        let ap = AppellF1Params::new(p[0], p[1], p[2], p[3])?;
        Ok(rel(appell_f1(&ap, p[4], p[5])?.value, appell_f1_quad(&ap, p[4], p[5], &cfg)?.value))
    }));
    let pts = draws(13, |r| {
        let (b, bp) = (r.gen_range(0.5..2.0), r.gen_range(0.5..2.0));
        vec![
            r.gen_range(0.5..3.0),
            b,
            bp,
            b + r.gen_range(0.5..2.0),
            bp + r.gen_range(0.5..2.0),
            r.gen_range(-0.45..0.45),
            r.gen_range(-0.45..0.45),
        ]
    });
    out.push(sweep("series_vs_quad.f2", spec("|x|+|y| < 0.9"), tol.hypergeo, pts, |p| {
        let ap = AppellF2Params::new(p[0], p[1], p[2], p[3], p[4])?;
        Ok(rel(f2_series(&ap, p[5], p[6])?.value, appell_f2_quad(&ap, p[5], p[6], &cfg)?.value))
    }));
    let pts = draws_n(14, FD_DRAWS, |r| {
        let al: Vec<f64> = (0..3).map(|_| r.gen_range(0.6..1.5)).collect();
        let c = al.iter().sum::<f64>() + r.gen_range(0.6..2.0);
        let mut p = vec![r.gen_range(0.5..3.0), c];
        p.extend(al);
        p.extend((0..3).map(|_| r.gen_range(-0.3..0.3)));
        p
    });
    let fd_spec = format!("{FD_DRAWS} seeded draws, n = 3, sum |x| < 0.9");
    out.push(sweep("series_vs_quad.fd3", fd_spec, tol.hypergeo, pts, |p| {
        let lp = LauricellaParams::new(p[0], p[2..5].to_vec(), p[1])?;
        let cfg = QuadConfig::default().with_tol(1e-9);
        Ok(rel(lauricella_fd(&lp, &p[5..8])?.value, fd_simplex_quad(&lp, &p[5..8], &cfg)?.value))
    }));

    let pts: Vec<Vec<f64>> = [0.5, 1.5, 2.5, 3.3]
        .iter()
        .flat_map(|&a| (1..=4).flat_map(move |c| [-0.8, -0.4, 0.3, 0.7].map(|z| vec![a, c as f64, z])))
        .collect();
    out.push(sweep("symbolic_2f1_a1c", "a in {0.5,1.5,2.5,3.3}, c in 1..4, 4 z".into(), tol.hypergeo, pts, |p| {
        Ok(rel(symbolic_2f1_a1c(p[0], p[1] as u32, p[2])?, f21(p[0], 1.0, p[1], p[2])?))
    }));
    let xy = [(0.3, 0.5), (-0.4, 0.2), (0.6, -0.3), (0.1, 0.85), (-0.9, -0.5)];
    let pts: Vec<Vec<f64>> = [(2.0, 3.0), (3.5, 4.0), (1.5, 2.5)]
        .iter()
        .flat_map(|&(a, c)| xy.iter().map(move |&(x, y)| vec![a, c, x, y]))
        .collect();
    out.push(sweep("f1_divided_difference", "3 (a,c) x 5 (x,y)".into(), tol.hypergeo, pts.clone(), |p| {
        let v = appell_f1(&AppellF1Params::new(p[0], 1.0, 1.0, p[1])?, p[2], p[3])?.value;
        Ok(rel(f1_divided_difference(p[0], p[1], p[2], p[3])?, v))
    }));
    out.push(sweep("f1_c2_reduction", "3 (a,b) x 5 (x,y)".into(), tol.hypergeo, pts, |p| {
        let v = appell_f1(&AppellF1Params::new(p[0], 1.0, 2.0, p[1])?, p[2], p[3])?.value;
        Ok(rel(f1_c2_reduction(p[0], p[1], p[2], p[3])?, v))
    }));
    let pts = vec![
        vec![2.0, 1.5, 0.0, 3.0, 0.2, 0.3],
        vec![2.0, 2.0, 1.0, 4.0, 0.1, 0.25],
        vec![3.0, 0.7, 1.0, 2.5, -0.3, 0.4],
        vec![4.0, 1.2, 2.0, 3.5, 0.35, -0.3],
    ];
    out.push(sweep("f2_to_2f1", "4 (q,a,p,b,x,y) points".into(), tol.hypergeo, pts, |p| {
        let (q, a, pp, b, x, y) = (p[0] as u32, p[1], p[2] as u32, p[3], p[4], p[5]);
        let ap = AppellF2Params::new(q as f64 + 1.0, a, pp as f64 + 1.0, b, pp as f64 + 2.0)?;
        Ok(rel(f2_to_2f1(q, a, pp, b, x, y)?, appell_f2(&ap, x, y)?.value))
    }));
    let pts = vec![
        vec![1.5, 0.7, 1.2, 3.1, 0.3, 0.4],
        vec![2.0, 1.0, 1.0, 3.5, 0.2, 0.35],
        vec![0.8, 2.0, 0.5, 2.2, -0.2, -0.3],
        vec![3.0, 0.5, 1.5, 4.5, 0.4, 0.5],
    ];
    out.push(sweep("f2_f1_reduction", "4 (a,b,b',c,x,y) points".into(), tol.hypergeo, pts.clone(), |p| {
        let ap = AppellF1Params::new(p[0], p[1], p[2], p[3])?;
        let v = appell_f1(&ap, p[4], p[5])?.value;
        Ok(f2_f1_reduction_residual(&ap, p[4], p[5])? / v.abs().max(1.0))
    }));
    out.push(sweep("f1_differential", "4 (a,b,b',c,x,y) points, 4 relations".into(), tol.f1_system, pts, |p| {
        let r = f1_differential_residuals(&AppellF1Params::new(p[0], p[1], p[2], p[3])?, p[4], p[5])?;
        Ok(r.into_iter().fold(0.0, f64::max))
    }));
    out
}

fn oracles(grid: &GridSpec, tol: &Tolerances) -> Vec<RelationReport> {
    let mut out = Vec::new();
    let cfg = quad_cfg();
    let vals = [0.5, 1.0, 2.0];
    let ints = [1.0, 2.0, 3.0];
    let pts = cross(&cross(&col(&vals), &col(&vals)), &cross(&col(&ints), &col(&ints)));
    out.push(sweep(
        "contour.confluent",
        "A,B in {0.5,1,2}, a,b in {1,2,3}; e^{-B}/G(a+b) 1F1(a;a+b;B-A)".into(),
        tol.oracles,
        pts,
        |p| {
            let (aa, bb, a, b) = (p[0], p[1], p[2], p[3]);
            let lhs = oracle::contour_ab_rhs(aa, bb, a, b, &cfg)?;
            Ok(rel(lhs, (-bb).exp() / gamma(a + b) * kummer_1f1(a, a + b, bb - aa)?.value))
        },
    ));
    let pts: Vec<Vec<f64>> =
        [0.5, 1.0, 3.0].iter().flat_map(|&aa| [1.0, 2.0, 3.5].map(|a| vec![aa, a])).collect();
    out.push(sweep("contour.mellin", "A in {0.5,1,3}, a in {1,2,3.5}".into(), tol.transforms, pts, |p| {
        Ok(rel(oracle::mellin_lhs(p[0], p[1], &cfg)?, p[0].powf(-p[1])))
    }));

    let k_idx = [(1u32, 1u32), (2, 1), (1, 2), (3, 1), (2, 2)];
    let pts = cross(&cross(&col(&grid.m_values), &col(&grid.arg_values)), &idx2(&k_idx));
    out.push(sweep("family.k_statement", format!("{}, (a,b) in {k_idx:?}", grid.describe()), tol.oracles, pts, |p| {
        let (m, y, a, b) = (p[0], p[1], p[2] as u32, p[3] as u32);
        let d = (a + b) as f64 - 2.0 + (m - 2.0) / 2.0;
        let want = gamma_ratio(d + 1.0, (a + b) as f64) * f21(d + 1.0, b as f64, (a + b) as f64, 1.0 - y)?;
        Ok(rel(oracle::spectral_k_oracle(a, b, y, m, &cfg)?, want))
    }));
    let h_idx = [(1u32, 1u32, 1u32), (2, 1, 1), (1, 2, 3)];
    let pairs = grid.pairs();
    let pts = cross(&cross(&col(&grid.m_values), &pair_rows(&pairs)), &idx3(&h_idx));
    let cfg_h = QuadConfig::default().with_tol(1e-10);
    out.push(sweep("family.h_statement", format!("{}, (a,b,c) in {h_idx:?}", grid.describe2()), tol.oracle_h, pts, |p| {
        let (m, y1, y2) = (p[0], p[1], p[2]);
        let (a, b, c) = (p[3] as u32, p[4] as u32, p[5] as u32);
        let s = (a + b + c) as f64;
        let d = s - 2.0 + (m - 2.0) / 2.0;
        let f1 = appell_f1(&AppellF1Params::new(d + 1.0, c as f64, b as f64, s)?, 1.0 - y1 * y2, 1.0 - y1)?.value;
        Ok(rel(oracle::spectral_h_oracle(a, b, c, y1, y2, m, &cfg_h)?, gamma_ratio(d + 1.0, s) * f1))
    }));
    let pts: Vec<Vec<f64>> =
        grid.m_values.iter().flat_map(|&m| grid.arg_values.iter().map(move |&y| vec![m, y])).collect();
    out.push(sweep("family.n_collapse.1", grid.describe(), tol.collapse, pts, |p| {
        let (m, y) = (p[0], p[1]);
        let k = spectral::k_family(&SpectralIndex::k(2, 1, m)?, y)?;
        Ok(rel(oracle::spectral_n_oracle(&[2, 1], &[y], m, &cfg)?, k))
    }));
    let pts: Vec<Vec<f64>> =
        grid.m_values.iter().flat_map(|&m| pairs.iter().map(move |&(u, v)| vec![m, u, v])).collect();
    out.push(sweep("family.n_collapse.2", grid.describe2(), tol.collapse, pts, |p| {
        let (m, y1, y2) = (p[0], p[1], p[2]);
        let h = spectral::h_family(&SpectralIndex::h(1, 2, 1, m)?, y1, y2)?;
        Ok(rel(oracle::spectral_n_oracle(&[1, 2, 1], &[y1, y2], m, &cfg_h)?, h))
    }));
    let pts = vec![vec![4.0, 1.2, 0.9, 1.1], vec![3.0, 0.7, 1.3, 0.8], vec![5.5, 1.5, 0.6, 1.4]];
    out.push(sweep("family.n_collapse.3", "alpha = (1,1,1,1), 3 (m, y) points".into(), tol.collapse, pts, |p| {
        let (m, ys) = (p[0], &p[1..4]);
        let d = 4.0 - 2.0 + (m - 2.0) / 2.0;
        let mut prod = 1.0;
        let zs: Vec<f64> = ys
            .iter()
            .map(|y| {
                prod *= y;
                1.0 - prod
            })
            .collect();
        // (1 − Σ z_j u_j) with α₀ = 1: F_D(d+1; α₁, α₂, α₃; Σα; z)
        let lp = LauricellaParams::new(d + 1.0, vec![1.0, 1.0, 1.0], 4.0)?;
        let want = gamma_ratio(d + 1.0, 4.0) * lauricella_fd(&lp, &zs)?.value;
        let cfg3 = QuadConfig::default().with_tol(1e-9);
        Ok(rel(oracle::spectral_n_oracle(&[1, 1, 1, 1], ys, m, &cfg3)?, want))
    }));
    let pts = vec![
        vec![1.0, 1.0, 1.0, 2.0],
        vec![1.0, 2.0, 2.0, 1.0],
        vec![0.5, 1.5, 2.0, 2.0],
        vec![2.0, 1.0, 1.0, 3.0],
        vec![1.0, 1.5, 3.0, 1.0],
    ];
    out.push(sweep("contour.oscillatory", "a+b >= 3, truncation radius 1e4".into(), tol.oscillatory, pts, |p| {
        let (aa, bb, a, b) = (p[0], p[1], p[2] as u32, p[3] as u32);
        let lhs = oracle::oscillatory_lhs_ab(aa, bb, a, b, 1.0e4)?;
        Ok((lhs - oracle::contour_ab_rhs(aa, bb, a as f64, b as f64, &cfg)?).abs())
    }));
    out
}

/// Twenty sample arguments in (0.1, 6) away from 1.
fn display_args() -> Vec<f64> {
    (0..20).map(|i| 0.12 + 0.29 * i as f64).filter(|y| (y - 1.0).abs() > 1e-3).collect()
}

fn display_pairs() -> Vec<(f64, f64)> {
    let a = display_args();
    (0..20).map(|i| (a[i], a[(7 * i + 3) % a.len()] * 1.07)).filter(|(x, y)| (x - y).abs() > 1e-2).collect()
}

fn spectral_suite(grid: &GridSpec, tol: &Tolerances) -> Vec<RelationReport> {
    let mut out = Vec::new();
    let sp = PI.sqrt();
    let single: Vec<Vec<f64>> = display_args().into_iter().map(|y| vec![y]).collect();
    let double: Vec<Vec<f64>> = display_pairs().into_iter().map(|(x, y)| vec![x, y]).collect();
    let spec1 = "20 arguments in (0.1, 5.7)".to_string();
    let spec2 = format!("{} argument pairs", double.len());

    out.push(sweep("display.log", spec1.clone(), tol.displays, single.clone(), |p| {
        let z = p[0];
        Ok(rel(f21(1.0, 1.0, 2.0, 1.0 - z)?, z.ln() / (z - 1.0)))
    }));
    out.push(sweep("display.k11_m2", spec1.clone(), tol.displays, single.clone(), |p| {
        let z = p[0];
        Ok(rel(spectral::k_tilde(&SpectralIndex::k(1, 1, 2.0)?, 1.0 - z)?, z.ln() / (z - 1.0)))
    }));
    out.push(sweep("display.k21_m3", spec1.clone(), tol.displays, single.clone(), |p| {
        let r = p[0].sqrt();
        let want = sp * (r + 2.0) / (2.0 * (r + 1.0).powi(2) * r);
        Ok(rel(spectral::k_tilde(&SpectralIndex::k(2, 1, 3.0)?, 1.0 - p[0])?, want))
    }));
    out.push(sweep("display.k31_m3", spec1, tol.displays, single, |p| {
        let (z, r) = (p[0], p[0].sqrt());
        let want = sp * (3.0 * z + 9.0 * r + 8.0) / (8.0 * (r + 1.0).powi(3) * r);
        Ok(rel(spectral::k_tilde(&SpectralIndex::k(3, 1, 3.0)?, 1.0 - z)?, want))
    }));
    out.push(sweep("display.h211_m2", spec2.clone(), tol.displays, double.clone(), |p| {
        let (s, t) = (p[0], p[1]);
        let want = ((t - 1.0).powi(2) * s.ln() + (s - 1.0) * ((t - 1.0) * (s - t) - (s - 1.0) * t.ln()))
            / ((s - 1.0).powi(2) * (t - 1.0).powi(2) * (s - t));
        Ok(rel(spectral::h_tilde(&SpectralIndex::h(2, 1, 1, 2.0)?, 1.0 - s, 1.0 - t)?, want))
    }));
    out.push(sweep("display.h311_m2", spec2.clone(), tol.displays, double.clone(), |p| {
        let (s, t) = (p[0], p[1]);
        let want = ((s - 1.0) * (t - 1.0) * (s - t) * ((s - 3.0) * t - 3.0 * s + 5.0) + 2.0 * (s - 1.0).powi(3) * t.ln()
            - 2.0 * (t - 1.0).powi(3) * s.ln())
            / (2.0 * (s - 1.0).powi(3) * (t - 1.0).powi(3) * (s - t));
        Ok(rel(spectral::h_tilde(&SpectralIndex::h(3, 1, 1, 2.0)?, 1.0 - s, 1.0 - t)?, want))
    }));
    out.push(sweep("display.h211_m3", spec2.clone(), tol.displays, double.clone(), |p| {
        let (x, y) = (p[0], p[1]);
        let (rx, ry) = (x.sqrt(), y.sqrt());
        let num = x * ry + rx * y + 4.0 * rx * ry + 2.0 * x + 4.0 * rx + 2.0 * y + 4.0 * ry + 2.0;
        let want = sp * num / (2.0 * (rx + 1.0).powi(2) * rx * (ry + 1.0).powi(2) * ry * (rx + ry));
        Ok(rel(spectral::h_tilde(&SpectralIndex::h(2, 1, 1, 3.0)?, 1.0 - x, 1.0 - y)?, want))
    }));
    out.push(sweep("display.h111_m3", spec2, tol.displays, double, |p| {
        let (rx, ry) = (p[0].sqrt(), p[1].sqrt());
        let want = sp * (rx + ry + 1.0) / ((rx + 1.0) * rx * (ry + 1.0) * ry * (rx + ry));
        Ok(rel(spectral::h_tilde(&SpectralIndex::h(1, 1, 1, 3.0)?, 1.0 - p[0], 1.0 - p[1])?, want))
    }));

    let one: Vec<Vec<f64>> =
        grid.m_values.iter().flat_map(|&m| grid.arg_values.iter().map(move |&y| vec![m, y])).collect();
    let two: Vec<Vec<f64>> = grid
        .m_values
        .iter()
        .flat_map(|&m| grid.arg_values.iter().flat_map(move |&u| grid.second_args.iter().map(move |&v| vec![m, u, v])))
        .collect();
    out.push(sweep("closed.k_delta", grid.describe(), tol.spectral, one.clone(), |p| {
        Ok(rel(spectral::k_delta_closed(p[1], p[0]), spectral::k_delta_hyper(p[1], p[0])?))
    }));
    out.push(sweep("closed.t_delta", grid.describe(), tol.spectral, one.clone(), |p| {
        Ok(rel(spectral::t_delta_closed(p[1], p[0]), spectral::t_delta_hyper(p[1], p[0])?))
    }));
    out.push(sweep(
        "closed.h_delta",
        format!("m in {:?}, (s,t) in {:?} x {:?}", grid.m_values, grid.arg_values, grid.second_args),
        tol.spectral,
        two,
        |p| Ok(rel(spectral::h_delta_closed(p[1], p[2], p[0]), spectral::h_delta_hyper(p[1], p[2], p[0])?)),
    ));
    out.push(sweep("closed.k_delta_at_one_m4", "s = 1, m = 4".into(), tol.spectral, vec![vec![4.0, 1.0]], |p| {
        Ok(spectral::k_delta_closed(p[1], p[0]).abs())
    }));
    let pts: Vec<Vec<f64>> = grid
        .m_values
        .iter()
        .flat_map(|&m| grid.arg_values.iter().flat_map(move |&y| [(1, 1, 1), (2, 1, 3), (3, 2, 1)].map(|(a, b, c)| vec![m, y, a as f64, b as f64, c as f64])))
        .collect();
    out.push(sweep("family.h_inverse_pair", grid.describe(), tol.spectral, pts, |p| {
        let (m, y) = (p[0], p[1]);
        let (a, b, c) = (p[2] as u32, p[3] as u32, p[4] as u32);
        let h = spectral::h_family(&SpectralIndex::h(a, b, c, m)?, y, 1.0 / y)?;
        Ok(rel(h, spectral::k_family(&SpectralIndex::k(a + c, b, m)?, y)?))
    }));
    out
}

fn recurrences(grid: &GridSpec, tol: &Tolerances) -> Vec<RelationReport> {
    let mut out = Vec::new();
    let k_idx = [(1u32, 1u32), (2, 1), (1, 3), (3, 2)];
    let h_idx = [(1u32, 1u32, 1u32), (2, 1, 3), (1, 2, 2)];
    // The relations are identities in u = 1 − y, so they are checked for u < 1 on the mapped grid.
    let us: Vec<f64> = grid.arg_values.iter().map(|y| 1.0 - y).collect();
    let vs: Vec<f64> = grid.second_args.iter().map(|y| 1.0 - y).collect();
    let one = cross(&cross(&col(&grid.m_values), &col(&us)), &idx2(&k_idx));
    let two = cross(&cross(&cross(&col(&grid.m_values), &col(&us)), &col(&vs)), &idx3(&h_idx));
    let spec1 = format!("{}, u = 1 - y, (a,b) in {k_idx:?}", grid.describe());
    let spec2 = format!("m in {:?}, u = 1 - y1, v = 1 - y2, (a,b,c) in {h_idx:?}", grid.m_values);
    for k in 0..4 {
        out.push(sweep(&format!("recurrence.k{}", k + 1), spec1.clone(), tol.recurrences, one.clone(), |p| {
            let idx = SpectralIndex::k(p[2] as u32, p[3] as u32, p[0])?;
            Ok(spectral::k_relation_residuals(&idx, p[1])?[k])
        }));
        out.push(sweep(&format!("recurrence.h{}", k + 1), spec2.clone(), tol.recurrences, two.clone(), |p| {
            let idx = SpectralIndex::h(p[3] as u32, p[4] as u32, p[5] as u32, p[0])?;
            Ok(spectral::h_relation_residuals(&idx, p[1], p[2])?[k])
        }));
    }
    let inside: Vec<f64> = us.iter().copied().filter(|u| u.abs() < 1.0).collect();
    let pts = cross(&cross(&col(&grid.m_values), &col(&inside)), &idx2(&k_idx));
    out.push(sweep("recurrence.gauss_cf", format!("{spec1}, |u| < 1, depth 60"), tol.recurrences, pts, |p| {
        spectral::gauss_cf_residual(&SpectralIndex::k(p[2] as u32, p[3] as u32, p[0])?, p[1], 60)
    }));
    out
}

fn jets(grid: &GridSpec, tol: &Tolerances) -> Result<Vec<RelationReport>> {
    let ms: Vec<f64> =
        grid.m_values.iter().copied().filter(|&m| m >= 4.0 && m.fract() == 0.0 && (m as u64) % 2 == 0).collect();
    if ms.is_empty() {
        return Err(Error::ParamDomain("the jets suite needs an even integer m >= 4 in the grid".into()));
    }
    let us: Vec<f64> = grid.arg_values.iter().map(|y| 1.0 - y).collect();
    let vs: Vec<f64> = grid.second_args.iter().map(|y| 1.0 - y).collect();
    let k_idx = [(1u32, 1u32), (2, 1), (1, 3), (3, 2)];
    let h_idx = [(1u32, 1u32, 1u32), (1, 3, 2), (2, 1, 2)];
    let one = cross(&cross(&col(&ms), &col(&us)), &idx2(&k_idx));
    let mut two = Vec::new();
    for &m in &ms {
        for &u in &us {
            for &v in &vs {
                for &(a, b, c) in &h_idx {
                    two.push(vec![m, u, v, a as f64, b as f64, c as f64]);
                }
            }
        }
    }
    Ok(vec![
        sweep("jet.k", format!("m in {ms:?}, u = 1 - y, y in {:?}", grid.arg_values), tol.jets, one, |p| {
            let idx = SpectralIndex::k(p[2] as u32, p[3] as u32, p[0])?;
            Ok(rel(spectral::k_jet(&idx, p[1])?, spectral::k_tilde(&idx, p[1])?))
        }),
        sweep("jet.h", format!("m in {ms:?}, (a,b,c) in {h_idx:?}"), tol.jets, two, |p| {
            let idx = SpectralIndex::h(p[3] as u32, p[4] as u32, p[5] as u32, p[0])?;
            Ok(rel(spectral::h_jet(&idx, p[1], p[2])?, spectral::h_tilde(&idx, p[1], p[2])?))
        }),
    ])
}

fn variational_suite(grid: &GridSpec, tol: &Tolerances) -> Vec<RelationReport> {
    let mut out = Vec::new();
    let pairs = grid.pairs();
    let gauss_ac = [(2.5, 4.0), (1.5, 3.0), (3.2, 5.0)];
    let pts: Vec<Vec<f64>> =
        gauss_ac.iter().flat_map(|&(a, c)| pairs.iter().map(move |&(u, v)| vec![a, c, u, v])).collect();
    let spec = format!("(a,c) in {gauss_ac:?}, (y1,y2) in {:?} x {:?}", grid.arg_values, grid.second_args);
    out.push(sweep("d_op.gauss", spec.clone(), tol.variational, pts.clone(), |p| {
        let (a, c) = (p[0], p[1]);
        let t = ScalarFn::new(move |z| f21(a, 1.0, c, 1.0 - z).unwrap_or(f64::NAN));
        Ok(rel(variational::d_2f1(a, c, p[2], p[3])?, variational::d_op(&t, p[2], p[3])?))
    }));
    out.push(sweep("d_op.gauss_inversion", format!("{spec}, j = -2.5"), tol.variational, pts, |p| {
        let (a, c, j) = (p[0], p[1], -2.5);
        let t = ScalarFn::new(move |z| f21(a, 1.0, c, 1.0 - z).unwrap_or(f64::NAN));
        let direct = variational::d_op(&variational::inversion_op(&t, j), p[2], p[3])?;
        Ok(rel(variational::d_inversion_2f1(a, c, j, p[2], p[3])?, direct))
    }));
    let pts: Vec<Vec<f64>> = grid
        .m_values
        .iter()
        .flat_map(|&m| pairs.iter().flat_map(move |&(u, v)| [2.0, 3.0].map(|a| vec![m, a, u, v])))
        .collect();
    out.push(sweep("d_op.k_a1", grid.describe2(), tol.variational, pts, |p| {
        let (m, a) = (p[0], p[1] as u32);
        let idx = SpectralIndex::k(a, 1, m)?;
        let t = ScalarFn::new(move |z| spectral::k_family(&idx, z).unwrap_or(f64::NAN));
        Ok(rel(variational::d_k_a1(a, m, p[2], p[3])?, variational::d_op(&t, p[2], p[3])?))
    }));
    let pts: Vec<Vec<f64>> =
        grid.m_values.iter().flat_map(|&m| grid.arg_values.iter().map(move |&u| vec![m, u])).collect();
    out.push(sweep("inversion.k_family", format!("{}, K(2,3) -> K(3,2), j = -1.25", grid.describe()), tol.variational, pts, |p| {
        let (m, u, j) = (p[0], p[1], -1.25);
        let kab = SpectralIndex::k(2, 3, m)?;
        let kba = SpectralIndex::k(3, 2, m)?;
        let t = ScalarFn::new(move |z| spectral::k_family(&kab, z).unwrap_or(f64::NAN));
        let lhs = variational::inversion_op(&t, j).eval(u)?;
        Ok(rel(lhs, u.powf(j + kab.degree()) * spectral::k_family(&kba, u)?))
    }));
    let pts: Vec<Vec<f64>> =
        [-2.5, 1.5, -3.0].iter().flat_map(|&j| pairs.iter().map(move |&(u, v)| vec![j, u, v])).collect();
    out.push(sweep("op_ii.constant", format!("T = 1, j in {{-2.5, 1.5, -3}}, {}", grid.describe2()), tol.variational, pts, |p| {
        let (j, u, v) = (p[0], p[1], p[2]);
        let pq = |x: f64| spectral::power_quotient(j, x);
        let want = pq(u * v) - pq(u) - u.powf(j - 1.0) * pq(v);
        Ok(rel(variational::op_ii_sum(&ScalarFn::new(|_| 1.0), j, u, v)?, want))
    }));
    out
}

fn functional(grid: &GridSpec, tol: &Tolerances) -> Vec<RelationReport> {
    let mut out = Vec::new();
    for &m in &grid.m_values {
        let us: Vec<f64> = grid.arg_values.to_vec();
        let vs: Vec<f64> = grid.second_args.to_vec();
        match variational::verify_functional_relation(m, &us, &vs, tol.functional) {
            Ok(chk) => out.extend(chk.reports().into_iter().map(|mut r| {
                r.relation_id = format!("{}[m={m}]", r.relation_id);
                r
            })),
            Err(e) => {
                let spec = format!("m = {m}");
                for id in ["functional.K", "functional.H"] {
                    out.push(RelationReport::failed(format!("{id}[m={m}]"), spec.clone(), tol.functional, &e.to_string()));
                }
            }
        }
    }
    out
}

fn symbol_suite(grid: &GridSpec, tol: &Tolerances) -> Vec<RelationReport> {
    use symbol::ratfunc::RatFunc;
    use symbol::Family;
    let mut out = Vec::new();
    let flag = |ok: bool| PointResidual { point: Vec::new(), residual: if ok { 0.0 } else { 1.0 } };
    let b2 = symbol::build_b2();
    out.push(RelationReport::from_points("symbol.b2_words", "six expanded words".to_string(), tol.symbol, vec![flag(b2.len() == 6 && b2.is_real())]));
    let averaged = symbol::sphere_average_terms(&b2);
    let want_avg = [
        RatFunc::int(-1),
        RatFunc::frac(4, 1) * RatFunc::inv_m(),
        RatFunc::int(2),
        RatFunc::frac(4, 1) * RatFunc::inv_m(),
        RatFunc::frac(-8, 1) * RatFunc::inv_m(),
        RatFunc::frac(-4, 1) * RatFunc::inv_m(),
    ];
    let ok = averaged.as_ref().is_ok_and(|ws| {
        let mut got: Vec<String> = ws.iter().map(|w| w.coeff.to_string()).collect();
        let mut want: Vec<String> = want_avg.iter().map(|c| c.to_string()).collect();
        got.sort();
        want.sort();
        got == want && ws.iter().all(|w| w.xi.is_empty())
    });
    out.push(RelationReport::from_points("symbol.sphere_average", "six averaged coefficients", tol.symbol, vec![flag(ok)]));
    let inv = |c: i128| RatFunc::int(c) * RatFunc::inv_m();
    let expected = [
        (Family::K(3, 1), 0, inv(4)),
        (Family::K(2, 1), 0, RatFunc::int(-1)),
        (Family::H(2, 1, 1), 0, RatFunc::int(2) + inv(4)),
        (Family::H(2, 2, 1), 1, inv(-4)),
        (Family::H(3, 1, 1), 0, inv(-8)),
    ];
    let dec = symbol::derive_spectral();
    let ok = dec.as_ref().is_ok_and(|d| {
        d.entries.len() == expected.len() && expected.iter().all(|(f, w, c)| d.coeff(*f, *w) == Some(c))
    });
    out.push(RelationReport::from_points("symbol.decomposition", "K and H family coefficients", tol.symbol, vec![flag(ok)]));
    let report = match dec {
        Ok(d) => {
            let pairs = grid.pairs();
            let pts: Vec<Vec<f64>> = grid
                .m_values
                .iter()
                .filter(|&&m| m > 2.0)
                .flat_map(|&m| pairs.iter().map(move |&(s, t)| vec![s, t, m]))
                .chain([vec![1.0, 1.0, 3.0], vec![2.0, 0.5, 4.0], vec![1.3, 1.7, 3.0]])
                .collect();
            sweep("symbol.crosscheck", grid.describe2(), tol.crosscheck, pts, |p| symbol::numeric_crosscheck(&d, p[0], p[1], p[2]))
        }
        Err(e) => RelationReport::failed("symbol.crosscheck", grid.describe2(), tol.crosscheck, &e.to_string()),
    };
    out.push(report);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.iter().chain([Suite::All].iter()) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn grid_validation() {
        let mut g = GridSpec::default();
        assert!(g.validate().is_ok());
        g.arg_values.push(-1.0);
        assert!(g.validate().is_err());
        let g = GridSpec { m_values: vec![2.0], ..GridSpec::default() };
        assert!(run(Suite::Thm4_10, &g, &Tolerances::default()).is_err());
        let g = GridSpec { m_values: vec![3.0, 5.0], ..GridSpec::default() };
        assert!(run(Suite::Jets, &g, &Tolerances::default()).is_err());
    }

    #[test]
    fn exclusion_drops_singular_pairs() {
        let g = GridSpec { arg_values: vec![0.5, 1.0, 2.0], second_args: vec![0.5, 2.0, 3.0], ..GridSpec::default() };
        // u = 1 row, u = v, and uv = 1 are removed
        assert_eq!(g.pairs(), vec![(0.5, 3.0), (2.0, 3.0)]);
    }

    #[test]
    fn tolerance_keys() {
        let mut t = Tolerances::default();
        t.set("jets", 1e-6).unwrap();
        assert_eq!(t.jets, 1e-6);
        assert!(t.set("nope", 1.0).is_err());
        assert!(t.set("jets", -1.0).is_err());
    }

    #[test]
    fn symbol_suite_passes() {
        let r = run(Suite::Symbol, &GridSpec::default(), &Tolerances::default()).unwrap();
        for rep in &r {
            assert!(rep.passed, "{} {}", rep.relation_id, rep.max_abs_residual);
        }
    }
}
