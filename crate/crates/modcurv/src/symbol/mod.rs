//! Exact symbol calculus for the resolvent of Δ_k = kΔ on a flat torus.
//!
//! Symbols are sums of words: an exact coefficient, a power of r = |ξ|,
//! a commuting ξ monomial, Kronecker deltas, and a noncommuting string of
//! atoms built from b₀ = (kr²−λ)⁻¹, powers of k and derivatives of k.
//! Repeated indices are summed.

pub mod ratfunc;

use crate::error::{Error, Result};
use crate::spectral::{self, SpectralIndex};
use ratfunc::RatFunc;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type Idx = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Atom {
    /// b₀^p, p ≥ 1.
    B0(u32),
    /// k^q.
    Kpow(i32),
    /// (∇k)_i
    GradK(Idx),
    /// (∇²k)_{ij}
    Grad2K(Idx, Idx),
}

/// Complex coefficient with parts rational in m.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coeff {
    pub re: RatFunc,
    pub im: RatFunc,
}

impl Coeff {
    pub fn real(re: RatFunc) -> Self {
        Coeff { re, im: RatFunc::zero() }
    }

    pub fn int(c: i128) -> Self {
        Self::real(RatFunc::int(c))
    }

    /// (−i)^j / j!
    fn a_prefactor(j: u32) -> Self {
        let fact: i128 = (1..=j as i128).product();
        let f = RatFunc::frac(1, fact);
        match j % 4 {
            0 => Coeff::real(f),
            1 => Coeff { re: RatFunc::zero(), im: -f },
            2 => Coeff::real(-f),
            _ => Coeff { re: RatFunc::zero(), im: f },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    fn mul(&self, o: &Coeff) -> Coeff {
        Coeff {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    fn add(&self, o: &Coeff) -> Coeff {
        Coeff { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn scale(&self, r: &RatFunc) -> Coeff {
        Coeff { re: &self.re * r, im: &self.im * r }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => {
                let im = self.im.to_string();
                if im[1..].contains(['+', '-', '/', '(']) {
                    write!(f, "({im})i")
                } else {
                    write!(f, "{im}i")
                }
            }
            _ => write!(f, "({})+({})i", self.re, self.im),
        }
    }
}

/// Exponent of 𝐲₁ picked up by moving interior powers of k to the left.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModularWeight {
    pub exponent: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolWord {
    pub coeff: Coeff,
    pub r_power: u32,
    pub xi: Vec<Idx>,
    /// Kronecker deltas 1_{ij}, each pair sorted.
    pub deltas: Vec<(Idx, Idx)>,
    pub atoms: Vec<Atom>,
    /// Power of k pulled in front by `normalize_k_left`.
    pub k_front: i32,
    pub weight: ModularWeight,
}

type WordKey = (u32, Vec<Idx>, Vec<(Idx, Idx)>, Vec<Atom>, i32, ModularWeight);

impl SymbolWord {
    pub fn new(coeff: Coeff, r_power: u32, xi: Vec<Idx>, deltas: Vec<(Idx, Idx)>, atoms: Vec<Atom>) -> Self {
        SymbolWord { coeff, r_power, xi, deltas, atoms, k_front: 0, weight: ModularWeight::default() }
    }

    fn atoms_only(coeff: Coeff, r_power: u32, atoms: Vec<Atom>) -> Self {
        Self::new(coeff, r_power, Vec::new(), Vec::new(), atoms)
    }

    fn key(&self) -> WordKey {
        (self.r_power, self.xi.clone(), self.deltas.clone(), self.atoms.clone(), self.k_front, self.weight)
    }

    fn times(&self, o: &SymbolWord) -> SymbolWord {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&o.atoms);
        SymbolWord {
            coeff: self.coeff.mul(&o.coeff),
            r_power: self.r_power + o.r_power,
            xi: [self.xi.clone(), o.xi.clone()].concat(),
            deltas: [self.deltas.clone(), o.deltas.clone()].concat(),
            atoms,
            k_front: self.k_front + o.k_front,
            weight: ModularWeight { exponent: self.weight.exponent + o.weight.exponent },
        }
    }

    fn all_indices(&self) -> Vec<Idx> {
        let mut v = Vec::new();
        for a in &self.atoms {
            match *a {
                Atom::GradK(i) => v.push(i),
                Atom::Grad2K(i, j) => v.extend([i, j]),
                _ => {}
            }
        }
        for &(i, j) in &self.deltas {
            v.extend([i, j]);
        }
        v.extend_from_slice(&self.xi);
        v
    }

    /// Every index occurs exactly twice.
    fn is_closed(&self) -> bool {
        let mut count = BTreeMap::new();
        for i in self.all_indices() {
            *count.entry(i).or_insert(0) += 1;
        }
        count.values().all(|&c| c == 2)
    }

    /// Degree of the ξ monomial.
    pub fn xi_degree(&self) -> usize {
        self.xi.len()
    }

    /// Number of derivative atoms.
    pub fn rho_count(&self) -> usize {
        self.atoms.iter().filter(|a| matches!(a, Atom::GradK(_) | Atom::Grad2K(..))).count()
    }

    /// Total power of b₀.
    pub fn b0_total(&self) -> u32 {
        self.atoms.iter().map(|a| if let Atom::B0(p) = a { *p } else { 0 }).sum()
    }

    /// Total power of k, inside the atoms and in front.
    pub fn k_total(&self) -> i32 {
        self.k_front + self.atoms.iter().map(|a| if let Atom::Kpow(q) = a { *q } else { 0 }).sum::<i32>()
    }

    /// Merges commuting runs of b₀ and k (b₀ first), relabels indices by
    /// first appearance and sorts the symmetric parts.
    fn canonical(mut self) -> SymbolWord {
        let mut atoms = Vec::with_capacity(self.atoms.len());
        let (mut p, mut q) = (0u32, 0i32);
        let flush = |atoms: &mut Vec<Atom>, p: &mut u32, q: &mut i32| {
            if *p > 0 {
                atoms.push(Atom::B0(*p));
            }
            if *q != 0 {
                atoms.push(Atom::Kpow(*q));
            }
            *p = 0;
            *q = 0;
        };
        for a in self.atoms.drain(..) {
            match a {
                Atom::B0(x) => p += x,
                Atom::Kpow(x) => q += x,
                other => {
                    flush(&mut atoms, &mut p, &mut q);
                    atoms.push(other);
                }
            }
        }
        flush(&mut atoms, &mut p, &mut q);
        self.atoms = atoms;

        let mut map = BTreeMap::new();
        for i in self.all_indices() {
            let n = map.len() as Idx;
            map.entry(i).or_insert(n);
        }
        let r = |i: Idx| map[&i];
        for a in &mut self.atoms {
            match a {
                Atom::GradK(i) => *i = r(*i),
                Atom::Grad2K(i, j) => {
                    let (x, y) = (r(*i), r(*j));
                    *i = x.min(y);
                    *j = x.max(y);
                }
                _ => {}
            }
        }
        for d in &mut self.deltas {
            let (x, y) = (r(d.0), r(d.1));
            *d = (x.min(y), x.max(y));
        }
        self.deltas.sort_unstable();
        for x in &mut self.xi {
            *x = r(*x);
        }
        self.xi.sort_unstable();
        self
    }

    /// Vertical derivative D_l (in ξ).
    fn d_vert(&self, l: Idx) -> Vec<SymbolWord> {
        let mut out = Vec::new();
        if self.r_power > 0 {
            let mut w = self.clone();
            w.coeff = w.coeff.scale(&RatFunc::int(self.r_power as i128));
            w.r_power -= 2;
            w.xi.push(l);
            out.push(w);
        }
        for pos in 0..self.xi.len() {
            let mut w = self.clone();
            let i = w.xi.remove(pos);
            w.deltas.push((l.min(i), l.max(i)));
            out.push(w);
        }
        for (pos, a) in self.atoms.iter().enumerate() {
            if let Atom::B0(p) = *a {
                // D_l b₀^p = −2p ξ_l b₀^{p+1} k
                let mut w = self.clone();
                w.coeff = w.coeff.scale(&RatFunc::int(-2 * p as i128));
                w.xi.push(l);
                w.atoms.splice(pos..=pos, [Atom::B0(p + 1), Atom::Kpow(1)]);
                out.push(w);
            }
        }
        out
    }

    /// Horizontal derivative ∇_l (flat connection).
    fn d_horiz(&self, l: Idx) -> Result<Vec<SymbolWord>> {
        let mut out = Vec::new();
        for (pos, a) in self.atoms.iter().enumerate() {
            match *a {
                Atom::B0(p) => {
                    // ∇b₀ = −r² b₀(∇k)b₀
                    for i in 0..p {
                        let mut w = self.clone();
                        w.coeff = w.coeff.scale(&RatFunc::int(-1));
                        w.r_power += 2;
                        w.atoms.splice(pos..=pos, [Atom::B0(i + 1), Atom::GradK(l), Atom::B0(p - i)]);
                        out.push(w);
                    }
                }
                Atom::Kpow(q) if q > 0 => {
                    for i in 0..q {
                        let mut w = self.clone();
                        w.atoms.splice(pos..=pos, [Atom::Kpow(i), Atom::GradK(l), Atom::Kpow(q - 1 - i)]);
                        w.atoms.retain(|a| *a != Atom::Kpow(0));
                        out.push(w);
                    }
                }
                Atom::Kpow(q) if q < 0 => {
                    return Err(Error::PatternMismatch(format!("∇ of k^{q} is not supported")));
                }
                Atom::GradK(i) => {
                    let mut w = self.clone();
                    w.atoms[pos] = Atom::Grad2K(i, l);
                    out.push(w);
                }
                Atom::Grad2K(..) => {
                    return Err(Error::PatternMismatch("third derivatives of k are not supported".into()));
                }
                Atom::Kpow(_) => {}
            }
        }
        Ok(out)
    }
}

fn index_name(i: Idx) -> String {
    const NAMES: [&str; 8] = ["l", "j", "p", "q", "s", "t", "u", "v"];
    NAMES.get(i as usize).map(|s| s.to_string()).unwrap_or_else(|| format!("i{i}"))
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::B0(1) => write!(f, "b0"),
            Atom::B0(p) => write!(f, "b0^{p}"),
            Atom::Kpow(1) => write!(f, "k"),
            Atom::Kpow(q) => write!(f, "k^{q}"),
            Atom::GradK(i) => write!(f, "(∇k)_{}", index_name(i)),
            Atom::Grad2K(i, j) => write!(f, "(∇²k)_{{{},{}}}", index_name(i), index_name(j)),
        }
    }
}

impl fmt::Display for SymbolWord {
    /// Dotted-word notation, e.g. `4 r^2 ξ_j ξ_l b0^3.k^2.(∇²k)_{l,j}.b0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coeff.to_string();
        let simple = !c[1..].contains(['+', '-', '/', '(']);
        match c.as_str() {
            "1" => {}
            "-1" => write!(f, "-")?,
            _ if simple => write!(f, "{c} ")?,
            _ => write!(f, "({c}) ")?,
        }
        if self.k_front != 0 {
            match self.k_front {
                1 => write!(f, "k ")?,
                q => write!(f, "k^{q} ")?,
            }
        }
        match self.weight.exponent {
            0 => {}
            1 => write!(f, "y1 ")?,
            w => write!(f, "y1^{w} ")?,
        }
        if self.r_power > 0 {
            write!(f, "r^{} ", self.r_power)?;
        }
        let mut xi: Vec<String> = self.xi.iter().map(|&i| index_name(i)).collect();
        xi.sort();
        for x in xi {
            write!(f, "ξ_{x} ")?;
        }
        let mut ds: Vec<String> = self
            .deltas
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (index_name(i), index_name(j));
                if a <= b { format!("1_{{{a}{b}}}") } else { format!("1_{{{b}{a}}}") }
            })
            .collect();
        ds.sort();
        for d in ds {
            write!(f, "{d}. ")?;
        }
        let atoms: Vec<String> = self.atoms.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", atoms.join("."))
    }
}

/// A canonical sum of words: structurally equal words are merged and zero
/// coefficients dropped. Iteration order is deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolPoly {
    words: Vec<SymbolWord>,
}

impl SymbolPoly {
    /// Canonicalizes and merges. Every index must be contracted.
    pub fn from_words(words: impl IntoIterator<Item = SymbolWord>) -> Result<Self> {
        let mut map: BTreeMap<WordKey, SymbolWord> = BTreeMap::new();
        for w in words {
            if !w.is_closed() {
                return Err(Error::PatternMismatch(format!("free index in {w}")));
            }
            let w = w.canonical();
            match map.get_mut(&w.key()) {
                Some(e) => e.coeff = e.coeff.add(&w.coeff),
                None => {
                    map.insert(w.key(), w);
                }
            }
        }
        let words = map.into_values().filter(|w| !w.coeff.is_zero()).collect();
        Ok(SymbolPoly { words })
    }

    pub fn words(&self) -> &[SymbolWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.words.iter().all(|w| w.coeff.is_real())
    }

    /// Finds the word with the same structure as `w` (coefficient ignored).
    pub fn coeff_of(&self, w: &SymbolWord) -> Option<&Coeff> {
        let key = w.clone().canonical().key();
        self.words.iter().find(|x| x.key() == key).map(|x| &x.coeff)
    }
}

impl fmt::Display for SymbolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, w) in self.words.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Fresh summation indices.
struct Indices(Idx);

impl Indices {
    fn fresh(&mut self) -> Idx {
        self.0 += 1;
        self.0
    }
}

type Raw = Vec<SymbolWord>;

fn product(p: &Raw, q: &Raw) -> Raw {
    p.iter().flat_map(|a| q.iter().map(move |b| a.times(b))).collect()
}

fn d_vert_all(p: &Raw, l: Idx) -> Raw {
    p.iter().flat_map(|w| w.d_vert(l)).collect()
}

fn d_horiz_all(p: &Raw, l: Idx) -> Result<Raw> {
    let mut out = Vec::new();
    for w in p {
        out.extend(w.d_horiz(l)?);
    }
    Ok(out)
}

/// a_j(p,q) = (−i)^j/j! (D^j p)·(∇^j q) for j ≤ 2.
fn a_j(j: u32, p: &Raw, q: &Raw, ix: &mut Indices) -> Result<Raw> {
    let (mut dp, mut nq) = (p.clone(), q.clone());
    for _ in 0..j {
        let l = ix.fresh();
        dp = d_vert_all(&dp, l);
        nq = d_horiz_all(&nq, l)?;
    }
    let pre = SymbolWord::atoms_only(Coeff::a_prefactor(j), 0, Vec::new());
    Ok(product(&product(&vec![pre], &dp), &nq))
}

/// Symbol of a second-order operator split by homogeneity.
struct OperatorSymbol {
    p2: Raw,
    p1: Raw,
    p0: Raw,
}

fn lap_k() -> OperatorSymbol {
    OperatorSymbol {
        p2: vec![SymbolWord::atoms_only(Coeff::int(1), 2, vec![Atom::Kpow(1)])],
        p1: Vec::new(),
        p0: Vec::new(),
    }
}

fn sum(parts: Vec<Raw>) -> Raw {
    parts.into_iter().flatten().collect()
}

fn resolvent_terms(op: &OperatorSymbol) -> Result<(Raw, Raw)> {
    let mut ix = Indices(0);
    let b0 = vec![SymbolWord::atoms_only(Coeff::int(1), 0, vec![Atom::B0(1)])];
    let minus_b0 = vec![SymbolWord::atoms_only(Coeff::int(-1), 0, vec![Atom::B0(1)])];
    let b1 = product(&sum(vec![a_j(0, &b0, &op.p1, &mut ix)?, a_j(1, &b0, &op.p2, &mut ix)?]), &minus_b0);
    let b2 = product(
        &sum(vec![
            a_j(0, &b0, &op.p0, &mut ix)?,
            a_j(0, &b1, &op.p1, &mut ix)?,
            a_j(1, &b0, &op.p1, &mut ix)?,
            a_j(1, &b1, &op.p2, &mut ix)?,
            a_j(2, &b0, &op.p2, &mut ix)?,
        ]),
        &minus_b0,
    );
    Ok((b1, b2))
}

/// b₁ of kΔ.
pub fn build_b1() -> SymbolPoly {
    let (b1, _) = resolvent_terms(&lap_k()).expect("b1 uses first derivatives only");
    SymbolPoly::from_words(b1).expect("b1 words are closed")
}

/// Fully expanded b₂ of kΔ. Panics only if the imaginary parts fail to cancel.
pub fn build_b2() -> SymbolPoly {
    let (_, b2) = resolvent_terms(&lap_k()).expect("b2 uses at most second derivatives");
    let p = SymbolPoly::from_words(b2).expect("b2 words are closed");
    assert!(p.is_real(), "imaginary part of b2 did not cancel");
    p
}

/// Replaces each ξ monomial by its average over the unit sphere, with the
/// volume factor dropped: ξ_iξ_j ↦ (r²/m)1_{ij}, odd degrees ↦ 0.
/// Returns one entry per input word, without merging.
pub fn sphere_average_terms(p: &SymbolPoly) -> Result<Vec<SymbolWord>> {
    let mut out = Vec::new();
    for w in p.words() {
        match w.xi.len() {
            0 => out.push(w.clone()),
            2 => {
                let mut v = w.clone();
                v.coeff = v.coeff.scale(&RatFunc::inv_m());
                v.r_power += 2;
                let (i, j) = (v.xi[0], v.xi[1]);
                v.xi.clear();
                v.deltas.push((i.min(j), i.max(j)));
                out.push(v.canonical());
            }
            n if n % 2 == 1 => {}
            n => return Err(Error::UnsupportedMonomial(format!("ξ-degree {n} in {w}"))),
        }
    }
    Ok(out)
}

/// Sphere average followed by merging.
pub fn sphere_average(p: &SymbolPoly) -> Result<SymbolPoly> {
    SymbolPoly::from_words(sphere_average_terms(p)?)
}

/// Moves every power of k to the front. A power of k sitting after the
/// first derivative atom crosses it and adds to the 𝐲₁ exponent.
pub fn normalize_k_left(p: &SymbolPoly) -> Result<SymbolPoly> {
    let mut out = Vec::new();
    for w in p.words() {
        if !w.xi.is_empty() {
            return Err(Error::PatternMismatch(format!("ξ left in {w}")));
        }
        let mut v = w.clone();
        let mut slot = 0;
        let mut atoms = Vec::new();
        for a in &w.atoms {
            match *a {
                Atom::Kpow(q) => {
                    v.k_front += q;
                    match slot {
                        0 => {}
                        1 => v.weight.exponent += q,
                        _ => {
                            return Err(Error::PatternMismatch(format!(
                                "k after the second derivative needs a 𝐲₂ weight: {w}"
                            )))
                        }
                    }
                }
                Atom::GradK(_) | Atom::Grad2K(..) => {
                    slot += 1;
                    atoms.push(*a);
                }
                Atom::B0(_) => atoms.push(*a),
            }
        }
        v.atoms = atoms;
        out.push(v);
    }
    SymbolPoly::from_words(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    K(u32, u32),
    H(u32, u32, u32),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::K(a, b) => write!(f, "K({a},{b})"),
            Family::H(a, b, c) => write!(f, "H({a},{b},{c})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralEntry {
    pub family: Family,
    /// Power of y₁ multiplying the family.
    pub modular_prefactor: i32,
    pub coeff: RatFunc,
}

impl fmt::Display for SpectralEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut c = self.coeff.to_string();
        if c.starts_with('-') && !c[1..].contains(['+', '-', '(']) {
            write!(f, "-")?;
            c.remove(0);
        }
        match c.as_str() {
            "1" => {}
            _ if c.contains('/') || c.contains('+') => write!(f, "({c}) ")?,
            _ => write!(f, "{c} ")?,
        }
        match self.modular_prefactor {
            0 => {}
            1 => write!(f, "y1 ")?,
            w => write!(f, "y1^{w} ")?,
        }
        write!(f, "{}", self.family)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub entries: Vec<SpectralEntry>,
}

impl SpectralDecomposition {
    pub fn k_part(&self) -> impl Iterator<Item = &SpectralEntry> {
        self.entries.iter().filter(|e| matches!(e.family, Family::K(..)))
    }

    pub fn h_part(&self) -> impl Iterator<Item = &SpectralEntry> {
        self.entries.iter().filter(|e| matches!(e.family, Family::H(..)))
    }

    pub fn coeff(&self, family: Family, prefactor: i32) -> Option<&RatFunc> {
        self.entries.iter().find(|e| e.family == family && e.modular_prefactor == prefactor).map(|e| &e.coeff)
    }

    /// Σ c·y^w·K_{a,b}(y;m) over the one-variable entries.
    pub fn eval_k(&self, y: f64, m: f64) -> Result<f64> {
        let mut s = 0.0;
        for e in self.k_part() {
            if let Family::K(a, b) = e.family {
                let idx = SpectralIndex::k(a, b, m)?;
                s += e.coeff.eval(m) * y.powi(e.modular_prefactor) * spectral::k_family(&idx, y)?;
            }
        }
        Ok(s)
    }

    /// Σ c·y₁^w·H_{a,b,c}(y₁,y₂;m) over the two-variable entries.
    pub fn eval_h(&self, y1: f64, y2: f64, m: f64) -> Result<f64> {
        let mut s = 0.0;
        for e in self.h_part() {
            if let Family::H(a, b, c) = e.family {
                let idx = SpectralIndex::h(a, b, c, m)?;
                s += e.coeff.eval(m) * y1.powi(e.modular_prefactor) * spectral::h_family(&idx, y1, y2)?;
            }
        }
        Ok(s)
    }
}

impl fmt::Display for SpectralDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |it: Vec<&SpectralEntry>| {
            it.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" + ").replace("+ -", "- ")
        };
        writeln!(f, "K = {}", side(self.k_part().collect()))?;
        write!(f, "H = {}", side(self.h_part().collect()))
    }
}

/// Splits a normalized word as b₀^{l₀}ρ₁b₀^{l₁}[ρ₂b₀^{l₂}] and checks the
/// contraction pattern and both homogeneities.
fn classify(w: &SymbolWord) -> Result<(Family, RatFunc)> {
    let bad = |why: &str| Error::PatternMismatch(format!("{why}: {w}"));
    if !w.coeff.is_real() {
        return Err(bad("complex coefficient"));
    }
    if !w.xi.is_empty() || w.atoms.iter().any(|a| matches!(a, Atom::Kpow(_))) {
        return Err(bad("word is not normalized"));
    }
    let mut ls = Vec::new();
    let mut rhos = Vec::new();
    for (n, a) in w.atoms.iter().enumerate() {
        let expect_b0 = n % 2 == 0;
        match (*a, expect_b0) {
            (Atom::B0(p), true) => ls.push(p),
            (Atom::GradK(_) | Atom::Grad2K(..), false) => rhos.push(*a),
            _ => return Err(bad("atoms do not alternate b0 and a derivative")),
        }
    }
    if ls.len() != rhos.len() + 1 {
        return Err(bad("word must end in a power of b0"));
    }
    let deltas: BTreeSet<(Idx, Idx)> = w.deltas.iter().copied().collect();
    let family = match rhos.as_slice() {
        [Atom::Grad2K(i, j)] if w.deltas.len() == 1 && deltas.contains(&((*i).min(*j), (*i).max(*j))) => {
            Family::K(ls[0], ls[1])
        }
        [Atom::GradK(i), Atom::GradK(j)] if w.deltas.len() == 1 && deltas.contains(&((*i).min(*j), (*i).max(*j))) => {
            Family::H(ls[0], ls[1], ls[2])
        }
        _ => return Err(bad("derivatives are not contracted as ∇²k·g⁻¹ or ∇k∇k·g⁻¹")),
    };
    let total: i64 = ls.iter().map(|&l| l as i64).sum();
    if w.r_power as i64 != 2 * (total - 2) {
        return Err(Error::HomogeneityViolation(format!("r^{} with b0 degree {total}: {w}", w.r_power)));
    }
    if w.k_front as i64 + rhos.len() as i64 - total != -1 {
        return Err(Error::HomogeneityViolation(format!("k-degree of {w} is not −1")));
    }
    Ok((family, w.coeff.re.clone()))
}

/// Maps each normalized word to its K or H family.
pub fn decompose_spectral(p: &SymbolPoly) -> Result<SpectralDecomposition> {
    let mut acc: BTreeMap<(Family, i32), RatFunc> = BTreeMap::new();
    for w in p.words() {
        let (fam, c) = classify(w)?;
        let e = acc.entry((fam, w.weight.exponent)).or_insert_with(RatFunc::zero);
        *e = &*e + &c;
    }
    let entries = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((family, modular_prefactor), coeff)| SpectralEntry { family, modular_prefactor, coeff })
        .collect();
    Ok(SpectralDecomposition { entries })
}

/// The whole pipeline: b₂, sphere average, k to the left, families.
pub fn derive_spectral() -> Result<SpectralDecomposition> {
    decompose_spectral(&normalize_k_left(&sphere_average(&build_b2())?)?)
}

/// Largest absolute deviation of the decomposition from the closed forms
/// K_Δk(s;m) and H_Δk(s,t;m).
pub fn numeric_crosscheck(d: &SpectralDecomposition, s: f64, t: f64, m: f64) -> Result<f64> {
    let dk = (d.eval_k(s, m)? - spectral::k_delta_closed(s, m)).abs();
    let dh = (d.eval_h(s, t, m)? - spectral::h_delta_closed(s, t, m)).abs();
    Ok(dk.max(dh))
}
