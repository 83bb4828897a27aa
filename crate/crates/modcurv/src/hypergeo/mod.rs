//! Gauss, Kummer, Appell and Lauricella hypergeometric functions for real
//! arguments, with the contiguous and transformation identities used to
//! check them.

mod appell;
mod gauss;
mod lauricella;
mod relations;

pub use appell::*;
pub use gauss::*;
pub use lauricella::*;
pub use relations::*;

use crate::error::{Error, Result};
use crate::gamma::is_nonpositive_integer;
use serde::Serialize;

pub(crate) const SERIES_EPS: f64 = 1e-16;
pub(crate) const MAX_TERMS: usize = 100_000;
pub(crate) const MAX_TERMS_PER_INDEX: usize = 4_000;
pub(crate) const PARAM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Method {
    Series,
    Pfaff,
    SingleSum,
    Quadrature,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Work {
    Terms(usize),
    Nodes(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub est_error: f64,
    pub work: Work,
    pub method: Method,
}

impl EvalResult {
    pub(crate) fn checked(self) -> Result<Self> {
        if self.value.is_finite() && self.est_error.is_finite() {
            Ok(self)
        } else {
            Err(Error::NoConvergence(format!("non-finite result {:?}", self.value)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl GaussParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        check_lower("c", c)?;
        Ok(GaussParams { a, b, c })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppellF1Params {
    pub a: f64,
    pub b: f64,
    pub bp: f64,
    pub c: f64,
}

impl AppellF1Params {
    pub fn new(a: f64, b: f64, bp: f64, c: f64) -> Result<Self> {
        check_lower("c", c)?;
        Ok(AppellF1Params { a, b, bp, c })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppellF2Params {
    pub a: f64,
    pub b: f64,
    pub bp: f64,
    pub c: f64,
    pub cp: f64,
}

impl AppellF2Params {
    pub fn new(a: f64, b: f64, bp: f64, c: f64, cp: f64) -> Result<Self> {
        check_lower("c", c)?;
        check_lower("c'", cp)?;
        Ok(AppellF2Params { a, b, bp, c, cp })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LauricellaParams {
    pub a: f64,
    pub alphas: Vec<f64>,
    pub c: f64,
}

impl LauricellaParams {
    pub fn new(a: f64, alphas: Vec<f64>, c: f64) -> Result<Self> {
        if alphas.is_empty() || alphas.len() > 4 {
            return Err(Error::ParamDomain(format!(
                "Lauricella F_D needs 1 to 4 variables, got {}",
                alphas.len()
            )));
        }
        check_lower("c", c)?;
        Ok(LauricellaParams { a, alphas, c })
    }
}

pub(crate) fn check_lower(name: &str, c: f64) -> Result<()> {
    if !c.is_finite() || is_nonpositive_integer(c, PARAM_TOL) {
        return Err(Error::ParamDomain(format!("{name} = {c} is a non-positive integer")));
    }
    Ok(())
}

pub(crate) fn check_finite(vals: &[f64]) -> Result<()> {
    if vals.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::ParamDomain("non-finite parameter".into()))
    }
}

/// Running sum of a hypergeometric-type series with the shared stopping rule:
/// three consecutive terms below `SERIES_EPS` relative to the partial sum.
pub(crate) struct SeriesSum {
    /// Compensated running total.
    pub sum: f64,
    pub abs_sum: f64,
    hi: f64,
    comp: f64,
    small: u32,
    pub terms: usize,
}

impl SeriesSum {
    pub fn new() -> Self {
        SeriesSum { sum: 0.0, abs_sum: 0.0, hi: 0.0, comp: 0.0, small: 0, terms: 0 }
    }

    /// Adds a term (Neumaier summation); returns true once the series has converged.
    pub fn push(&mut self, t: f64) -> bool {
        let next = self.hi + t;
        self.comp += if self.hi.abs() >= t.abs() { (self.hi - next) + t } else { (t - next) + self.hi };
        self.hi = next;
        self.sum = self.hi + self.comp;
        self.abs_sum += t.abs();
        self.terms += 1;
        if t == 0.0 || t.abs() < SERIES_EPS * self.sum.abs() {
            self.small += 1;
        } else {
            self.small = 0;
        }
        self.small >= 3
    }

    pub fn rounding_error(&self) -> f64 {
        4.0 * f64::EPSILON * (self.abs_sum + self.terms as f64 * f64::EPSILON * self.abs_sum)
    }
}
