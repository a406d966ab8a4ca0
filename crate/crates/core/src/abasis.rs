//! The graded Lie algebra of planar formal vector fields in the basis
//! `A[s,d,q]`, where `s = k + l` is the filtration degree, `d = k - l`, and
//! `q` in `{0, 1}` (the relation `A^{q+2} = -A^q` is folded into signs).
//!
//! Everything here is index arithmetic with integer structure constants; the
//! monomial realization lives in [`crate::oracle`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::coeff::{RingElem, Scalar, Q};
use crate::error::Error;
use crate::linalg::Matrix;

/// A canonical basis element. Field order gives the fixed basis order:
/// degree, then `d`, then `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ATerm {
    s: i32,
    d: i32,
    q: u8,
}

impl ATerm {
    /// Builds a term with `q` already in `{0, 1}`.
    pub fn new(s: i32, d: i32, q: u8) -> Result<Self, Error> {
        match canonicalize(s, d, q as i32)? {
            (t, 1) => Ok(t),
            _ => Err(Error::NotABasisElement { s, d, q: q as i32 }),
        }
    }

    /// Builds a term from `k >= -1`, `l >= 0`.
    pub fn from_kl(k: i32, l: i32, q: u8) -> Result<Self, Error> {
        Self::new(k + l, k - l, q)
    }

    pub fn s(&self) -> i32 {
        self.s
    }

    pub fn d(&self) -> i32 {
        self.d
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn k(&self) -> i32 {
        (self.s + self.d) / 2
    }

    pub fn l(&self) -> i32 {
        (self.s - self.d) / 2
    }

    /// Filtration degree (Taylor degree minus one).
    pub fn degree(&self) -> i32 {
        self.s
    }

    /// Smallest and largest term of degree `p` in basis order.
    fn degree_bounds(p: i32) -> (ATerm, ATerm) {
        (ATerm { s: p, d: i32::MIN, q: 0 }, ATerm { s: p, d: i32::MAX, q: 1 })
    }
}

impl fmt::Display for ATerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A[{},{},{}]", self.s, self.d, self.q)
    }
}

impl FromStr for ATerm {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse(format!("expected A[s,d,q], got `{text}`"));
        let inner = text.trim().strip_prefix("A[").and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let parts: Vec<i32> =
            inner.split(',').map(|p| p.trim().parse::<i32>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let [s, d, q] = parts[..] else { return Err(bad()) };
        match canonicalize(s, d, q)? {
            (t, 1) => Ok(t),
            _ => Err(Error::Parse(format!("`{text}` is not in canonical form (q must be 0 or 1)"))),
        }
    }
}

/// Reduces `q` modulo 4 into `{0, 1}`, returning the sign picked up by
/// `A^{q+2} = -A^q`.
pub fn canonicalize(s: i32, d: i32, q: i32) -> Result<(ATerm, i64), Error> {
    let invalid = Error::NotABasisElement { s, d, q };
    if (s + d).rem_euclid(2) != 0 {
        return Err(invalid);
    }
    let k = (s + d) / 2;
    let l = (s - d) / 2;
    if k < -1 || l < 0 {
        return Err(invalid);
    }
    let q4 = q.rem_euclid(4);
    let (q, sign) = if q4 >= 2 { (q4 - 2, -1) } else { (q4, 1) };
    Ok((ATerm { s, d, q: q as u8 }, sign))
}

/// Integer structure constants of `[a, b]`:
/// `[A^{k-l,p}, A^{m-n,q}] = (m-k) A^{k-l+m-n,p+q} + n A^{m-n-(k-l),q-p} - l A^{k-l-(m-n),p-q}`,
/// all at lower index `k+l+m+n`.
///
/// A summand with a nonzero factor but invalid indices is an error; it
/// cannot occur for valid inputs (each invalid index forces its factor to
/// vanish), so hitting it means the relation itself was mistyped.
pub fn structure_constants(a: ATerm, b: ATerm) -> Result<Vec<(ATerm, i64)>, Error> {
    let (k, l, p) = (a.k() as i64, a.l() as i64, a.q as i32);
    let (m, n, q) = (b.k() as i64, b.l() as i64, b.q as i32);
    let s = a.s + b.s;
    let (da, db) = (a.d, b.d);
    let summands = [(m - k, da + db, p + q), (n, db - da, q - p), (-l, da - db, p - q)];
    let mut out: Vec<(ATerm, i64)> = Vec::with_capacity(3);
    for (factor, d, qq) in summands {
        if factor == 0 {
            continue;
        }
        let (term, sign) =
            canonicalize(s, d, qq).map_err(|_| Error::InvalidStructureConstant { left: a, right: b, s, d, q: qq })?;
        let c = factor * sign;
        match out.iter_mut().find(|(t, _)| *t == term) {
            Some(slot) => slot.1 += c,
            None => out.push((term, c)),
        }
    }
    out.retain(|(_, c)| *c != 0);
    out.sort();
    Ok(out)
}

/// Finite linear combination of basis terms, canonical (no zero coefficients).
#[derive(Debug, Clone, PartialEq)]
pub struct LinComb<C> {
    terms: BTreeMap<ATerm, C>,
}

/// An element of the Lie algebra with coefficients in the working ring.
pub type AElement = LinComb<RingElem>;

impl<C> Default for LinComb<C> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<C: Scalar> LinComb<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(t: ATerm, c: C) -> Self {
        let mut e = Self::zero();
        e.add_term(t, c);
        e
    }

    pub fn from_terms(items: impl IntoIterator<Item = (ATerm, C)>) -> Self {
        let mut e = Self::zero();
        for (t, c) in items {
            e.add_term(t, c);
        }
        e
    }

    pub fn add_term(&mut self, t: ATerm, c: C) {
        if c.is_zero_elem() {
            return;
        }
        match self.terms.get_mut(&t) {
            Some(slot) => {
                let sum = slot.plus(&c);
                if sum.is_zero_elem() {
                    self.terms.remove(&t);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(t, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ATerm, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &ATerm) -> Option<&C> {
        self.terms.get(t)
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().map(|t| t.s)
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().map(|t| t.s)
    }

    /// Degrees carrying at least one term.
    pub fn degrees(&self) -> Vec<i32> {
        let mut out: Vec<i32> = self.terms.keys().map(|t| t.s).collect();
        out.dedup();
        out
    }

    pub fn part(&self, p: i32) -> Self {
        let (lo, hi) = ATerm::degree_bounds(p);
        LinComb { terms: self.terms.range(lo..=hi).map(|(t, c)| (*t, c.clone())).collect() }
    }

    pub fn part_iter(&self, p: i32) -> impl Iterator<Item = (&ATerm, &C)> {
        let (lo, hi) = ATerm::degree_bounds(p);
        self.terms.range(lo..=hi)
    }

    /// Drops every term of degree above `n`.
    pub fn truncate(&mut self, n: i32) {
        let (lo, _) = ATerm::degree_bounds(n + 1);
        self.terms.split_off(&lo);
    }

    pub fn truncated(&self, n: i32) -> Self {
        let mut e = self.clone();
        e.truncate(n);
        e
    }

    /// Replaces the degree-`p` part.
    pub fn set_part(&mut self, p: i32, part: &Self) {
        let (lo, hi) = ATerm::degree_bounds(p);
        let keys: Vec<ATerm> = self.terms.range(lo..=hi).map(|(t, _)| *t).collect();
        for k in keys {
            self.terms.remove(&k);
        }
        for (t, c) in part.iter() {
            assert_eq!(t.s, p, "set_part with a term of the wrong degree");
            self.terms.insert(*t, c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (t, c) in other.iter() {
            self.add_term(*t, c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in other.iter() {
            out.add_term(*t, c.negated());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LinComb { terms: self.terms.iter().map(|(t, c)| (*t, c.negated())).collect() }
    }

    pub fn scale_q(&self, f: &Q) -> Self {
        LinComb::from_terms(self.terms.iter().map(|(t, c)| (*t, c.scaled(f))))
    }

    pub fn scale(&self, f: &C) -> Self {
        LinComb::from_terms(self.terms.iter().map(|(t, c)| (*t, c.times(f))))
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> LinComb<D> {
        LinComb::from_terms(self.terms.iter().map(|(t, c)| (*t, f(c))))
    }

    pub fn residue(&self) -> LinComb<Q> {
        self.map(|c| c.residue_q())
    }

    /// Lie bracket, dropping all output above degree `max_degree`.
    pub fn bracket_truncated(&self, other: &Self, max_degree: i32) -> Self {
        let mut acc: BTreeMap<ATerm, C> = BTreeMap::new();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                if a.s + b.s > max_degree {
                    // `other` is sorted by degree
                    break;
                }
                accumulate(&mut acc, *a, ca, *b, cb);
            }
        }
        finish(acc)
    }

    /// Degree-`n` part of the bracket, computed from matching degree pairs only.
    pub fn bracket_at_degree(&self, other: &Self, n: i32) -> Self {
        let mut acc: BTreeMap<ATerm, C> = BTreeMap::new();
        for (a, ca) in self.iter() {
            for (b, cb) in other.part_iter(n - a.s) {
                accumulate(&mut acc, *a, ca, *b, cb);
            }
        }
        finish(acc)
    }

    pub fn bracket(&self, other: &Self) -> Self {
        self.bracket_truncated(other, i32::MAX)
    }

    /// Coordinates of the degree-`p` part in [`GradeBasis`] order.
    pub fn coords(&self, p: i32, zero: &C) -> Vec<C> {
        let basis = GradeBasis::new(p);
        let mut v = vec![zero.clone(); basis.dim()];
        for (t, c) in self.part_iter(p) {
            v[basis.index_of(t).expect("term of matching degree")] = c.clone();
        }
        v
    }

    pub fn from_coords(p: i32, coords: &[C]) -> Self {
        let basis = GradeBasis::new(p);
        assert_eq!(coords.len(), basis.dim());
        LinComb::from_terms(basis.terms().iter().copied().zip(coords.iter().cloned()))
    }
}

fn accumulate<C: Scalar>(acc: &mut BTreeMap<ATerm, C>, a: ATerm, ca: &C, b: ATerm, cb: &C) {
    let constants = match structure_constants(a, b) {
        Ok(c) => c,
        Err(e) => panic!("{e}"),
    };
    if constants.is_empty() {
        return;
    }
    let prod = ca.times(cb);
    for (t, k) in constants {
        let contrib = prod.scaled(&Q::from_integer(k.into()));
        match acc.get_mut(&t) {
            Some(slot) => *slot = slot.plus(&contrib),
            None => {
                acc.insert(t, contrib);
            }
        }
    }
}

fn finish<C: Scalar>(acc: BTreeMap<ATerm, C>) -> LinComb<C> {
    LinComb { terms: acc.into_iter().filter(|(_, c)| !c.is_zero_elem()).collect() }
}

impl<C: Scalar> fmt::Display for LinComb<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.iter().enumerate() {
            write_term(f, i == 0, &c.to_string(), t)?;
        }
        Ok(())
    }
}

/// Writes `c*t` with its separator: `1` is omitted, a single negative
/// number becomes ` - `, compound coefficients are parenthesized.
pub(crate) fn write_term(f: &mut fmt::Formatter<'_>, first: bool, c: &str, t: &ATerm) -> fmt::Result {
    let (negative, mag) = match c.strip_prefix('-') {
        Some(m) if !m.contains(' ') => (true, m),
        _ => (false, c),
    };
    match (first, negative) {
        (true, true) => write!(f, "-")?,
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
        (true, false) => {}
    }
    if mag == "1" {
        write!(f, "{t}")
    } else if mag.contains(' ') {
        write!(f, "({mag})*{t}")
    } else {
        write!(f, "{mag}*{t}")
    }
}

/// `[a, b]` for two basis terms, with coefficients in the ring of `ctx`.
pub fn bracket_terms<C: Scalar>(a: ATerm, b: ATerm, ctx: C::Ctx) -> Result<LinComb<C>, Error> {
    Ok(LinComb::from_terms(
        structure_constants(a, b)?.into_iter().map(|(t, k)| (t, C::from_q(ctx, Q::from_integer(k.into())))),
    ))
}

/// Ordered basis of the graded piece `G_p`: `d` runs over
/// `-p-2, -p, ..., p` (so that `k >= -1`, `l >= 0`), each with `q = 0, 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradeBasis {
    p: i32,
    terms: Vec<ATerm>,
}

impl GradeBasis {
    pub fn new(p: i32) -> Self {
        assert!(p >= -1, "graded pieces start at degree -1");
        let terms = (0..=p + 1)
            .flat_map(|j| {
                let d = -p - 2 + 2 * j;
                [ATerm { s: p, d, q: 0 }, ATerm { s: p, d, q: 1 }]
            })
            .collect();
        GradeBasis { p, terms }
    }

    pub fn degree(&self) -> i32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[ATerm] {
        &self.terms
    }

    pub fn index_of(&self, t: &ATerm) -> Option<usize> {
        if t.s != self.p {
            return None;
        }
        let j = (t.d + self.p + 2) / 2;
        Some(2 * j as usize + t.q as usize)
    }
}

/// Matrix of `t -> [x, t]` restricted to `G_p`, projected onto `G_target`.
pub fn ad_matrix<C: Scalar>(x: &LinComb<C>, p: i32, target: i32, ctx: C::Ctx) -> Matrix<C> {
    let domain = GradeBasis::new(p);
    let codomain = GradeBasis::new(target);
    let zero = C::zero_in(ctx);
    let columns: Vec<Vec<C>> = domain
        .terms()
        .iter()
        .map(|t| {
            let image = x.bracket_at_degree(&LinComb::term(*t, C::one_in(ctx)), target);
            image.coords(target, &zero)
        })
        .collect();
    Matrix::from_columns(ctx, codomain.dim(), &columns)
}
