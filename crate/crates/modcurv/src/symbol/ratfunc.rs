//! Exact rational functions of the dimension m with integer coefficients.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Integer polynomial in m, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Poly(pub Vec<i128>);

impl Poly {
    pub fn constant(c: i128) -> Self {
        Poly(vec![c]).trimmed()
    }

    /// The monomial m.
    pub fn m() -> Self {
        Poly(vec![0, 1])
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with −1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    fn lead(&self) -> i128 {
        *self.0.last().unwrap_or(&0)
    }

    pub fn eval(&self, m: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * m + c as f64)
    }

    fn content(&self) -> i128 {
        self.0.iter().fold(0, |g, &c| gcd_i(g, c))
    }

    fn scale(&self, k: i128) -> Self {
        Poly(self.0.iter().map(|&c| c * k).collect()).trimmed()
    }

    fn div_exact(&self, k: i128) -> Self {
        Poly(self.0.iter().map(|&c| c / k).collect())
    }

    fn primitive(&self) -> Self {
        let g = self.content();
        if g == 0 {
            return self.clone();
        }
        let p = self.div_exact(g);
        if p.lead() < 0 {
            p.scale(-1)
        } else {
            p
        }
    }

    /// Pseudo-remainder of self by d.
    fn prem(&self, d: &Poly) -> Poly {
        let mut r = self.clone().trimmed();
        let dl = d.lead();
        while !r.is_zero() && r.degree() >= d.degree() {
            let shift = (r.degree() - d.degree()) as usize;
            let rl = r.lead();
            let mut next = r.scale(dl);
            for (i, &c) in d.0.iter().enumerate() {
                next.0[i + shift] -= rl * c;
            }
            r = next.trimmed();
        }
        r
    }

    /// Exact division, assuming d divides self over the rationals with an integer quotient.
    fn div_poly(&self, d: &Poly) -> Poly {
        let mut r = self.clone();
        let mut q = vec![0i128; (self.degree() - d.degree() + 1).max(0) as usize];
        let dl = d.lead();
        while !r.is_zero() && r.degree() >= d.degree() {
            let shift = (r.degree() - d.degree()) as usize;
            let c = r.lead() / dl;
            q[shift] = c;
            for (i, &dc) in d.0.iter().enumerate() {
                r.0[i + shift] -= c * dc;
            }
            r = r.trimmed();
        }
        debug_assert!(r.is_zero(), "inexact polynomial division");
        Poly(q).trimmed()
    }

    /// Primitive gcd with positive leading coefficient.
    fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.primitive(), b.primitive());
        if x.degree() < y.degree() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            let r = x.prem(&y).primitive();
            x = y;
            y = r;
        }
        x
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let v = (0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + o.0.get(i).copied().unwrap_or(0))
            .collect();
        Poly(v).trimmed()
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(Vec::new());
        }
        let mut v = vec![0i128; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly(v).trimmed()
    }
}

fn gcd_i(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// num/den in lowest terms; den has positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        let (num, den) = (num.trimmed(), den.trimmed());
        assert!(!den.is_zero(), "zero denominator");
        RatFunc { num, den }.reduced()
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(c: i128) -> Self {
        RatFunc { num: Poly::constant(c), den: Poly::constant(1) }
    }

    pub fn frac(p: i128, q: i128) -> Self {
        Self::new(Poly::constant(p), Poly::constant(q))
    }

    /// The rational function 1/m.
    pub fn inv_m() -> Self {
        Self::new(Poly::constant(1), Poly::m())
    }

    pub fn m() -> Self {
        Self::new(Poly::m(), Poly::constant(1))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, m: f64) -> f64 {
        self.num.eval(m) / self.den.eval(m)
    }

    fn reduced(self) -> Self {
        if self.num.is_zero() {
            return Self::zero().with_den_one();
        }
        let g = Poly::gcd(&self.num, &self.den);
        let mut num = self.num.div_poly(&g);
        let mut den = self.den.div_poly(&g);
        let c = gcd_i(num.content(), den.content());
        num = num.div_exact(c);
        den = den.div_exact(c);
        if den.lead() < 0 {
            num = num.scale(-1);
            den = den.scale(-1);
        }
        RatFunc { num, den }
    }

    fn with_den_one(mut self) -> Self {
        self.den = Poly::constant(1);
        self
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        assert!(!o.is_zero(), "division by zero rational function");
        RatFunc::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: self.num.scale(-1), den: self.den.clone() }
    }
}

macro_rules! by_value {
    ($tr:ident, $f:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $f(self, o: RatFunc) -> RatFunc {
                (&self).$f(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);
by_value!(Div, div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

fn fmt_poly(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (i, &c) in p.0.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else if first { "" } else { "+" };
        let a = c.abs();
        let coef = if a == 1 && i > 0 { String::new() } else { a.to_string() };
        let mon = match i {
            0 => String::new(),
            1 => "m".into(),
            _ => format!("m^{i}"),
        };
        write!(f, "{sign}{coef}{mon}")?;
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Writes c·m^e as a signed term, e.g. "+4/m", "-2", "+m".
fn fmt_term(c: RatFunc, e: i64, first: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let (p, q) = (c.num.0[0], c.den.0[0]);
    let sign = if p < 0 { "-" } else if first { "" } else { "+" };
    let p = p.abs();
    let mon = |k: i64| match k {
        1 => "m".to_string(),
        k => format!("m^{k}"),
    };
    let (top, bottom) = match e.cmp(&0) {
        std::cmp::Ordering::Equal => (p.to_string(), (q != 1).then(|| q.to_string())),
        std::cmp::Ordering::Greater => {
            let t = if p == 1 { mon(e) } else { format!("{p}{}", mon(e)) };
            (t, (q != 1).then(|| q.to_string()))
        }
        std::cmp::Ordering::Less => {
            let b = if q == 1 { mon(-e) } else { format!("{q}{}", mon(-e)) };
            (p.to_string(), Some(b))
        }
    };
    match bottom {
        Some(b) => write!(f, "{sign}{top}/{b}"),
        None => write!(f, "{sign}{top}"),
    }
}

impl fmt::Display for RatFunc {
    /// Denominators of the form q·m^k print as a sum of terms, e.g. "2+4/m";
    /// anything else prints as "(num)/(den)".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_zero() {
            return write!(f, "0");
        }
        let dlow = self.den.0.iter().position(|&c| c != 0).unwrap_or(0);
        let monomial_den = self.den.0.iter().skip(dlow + 1).all(|&c| c == 0);
        if monomial_den {
            let q = self.den.0[dlow];
            let mut first = true;
            for (i, &c) in self.num.0.iter().enumerate().rev() {
                if c == 0 {
                    continue;
                }
                fmt_term(RatFunc::frac(c, q), i as i64 - dlow as i64, first, f)?;
                first = false;
            }
            return Ok(());
        }
        write!(f, "(")?;
        fmt_poly(&self.num, f)?;
        write!(f, ")/(")?;
        fmt_poly(&self.den, f)?;
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn untrimmed_zero_numerator() {
        let r = RatFunc::new(Poly(vec![0, 0]), Poly(vec![1, 1]));
        assert!(r.is_zero());
        assert_eq!(r.den(), &Poly::constant(1));
        let x = RatFunc::new(Poly(vec![3, 0]), Poly(vec![1, 1, 0]));
        assert_eq!(x, RatFunc::new(Poly(vec![3]), Poly(vec![1, 1])));
    }

    #[test]
    fn reduces_to_lowest_terms() {
        // (2m+4)/(m^2+2m) = 2/m
        let r = RatFunc::new(Poly(vec![4, 2]), Poly(vec![0, 2, 1]));
        assert_eq!(r, RatFunc::frac(2, 1) * RatFunc::inv_m());
        let r = RatFunc::new(Poly(vec![-6]), Poly(vec![-4]));
        assert_eq!(r, RatFunc::frac(3, 2));
        // (m^2-1)/(m-1) = m+1
        let r = RatFunc::new(Poly(vec![-1, 0, 1]), Poly(vec![-1, 1]));
        assert_eq!(r, RatFunc::m() + RatFunc::one());
    }

    #[test]
    fn arithmetic() {
        let a = RatFunc::int(2) + RatFunc::int(4) * RatFunc::inv_m();
        assert_eq!(a.to_string(), "2+4/m");
        assert!((a.eval(3.0) - (2.0 + 4.0 / 3.0)).abs() < 1e-15);
        assert!((a.clone() - a.clone()).is_zero());
        assert_eq!((a.clone() / a).to_string(), "1");
        assert_eq!((RatFunc::int(-8) * RatFunc::inv_m()).to_string(), "-8/m");
        assert_eq!(RatFunc::frac(1, 2).to_string(), "1/2");
        let odd = RatFunc::one() / (RatFunc::m() - RatFunc::int(2));
        assert_eq!(odd.to_string(), "(1)/(m-2)");
    }
}
