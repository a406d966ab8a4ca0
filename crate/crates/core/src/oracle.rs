//! Independent checks: the A-basis realized as polynomial vector fields over
//! the Gaussian rationals, brackets computed on monomials, and a small
//! row reducer of its own for cross-checking the engine.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::abasis::{structure_constants, ATerm, GradeBasis, LinComb};
use crate::coeff::Q;
use crate::error::{Error, Result};

/// `re + i im` with rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Q,
    pub im: Q,
}

impl GaussianRational {
    pub fn new(re: Q, im: Q) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Q) -> Self {
        GaussianRational { re, im: Q::zero() }
    }

    pub fn zero() -> Self {
        Self::real(Q::zero())
    }

    pub fn one() -> Self {
        Self::real(Q::one())
    }

    pub fn i() -> Self {
        GaussianRational { re: Q::zero(), im: Q::one() }
    }

    /// `i^n` for any integer `n`.
    pub fn i_pow(n: i32) -> Self {
        match n.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn scale(&self, q: &Q) -> Self {
        GaussianRational { re: &self.re * q, im: &self.im * q }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussianRational { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussianRational { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        GaussianRational { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re, self.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Comp {
    Dx,
    Dy,
}

/// Polynomial vector field: `(a, b, comp) -> c` stands for `c x^a y^b d/d(comp)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MonoVF {
    terms: BTreeMap<(u32, u32, Comp), GaussianRational>,
}

impl MonoVF {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(a: u32, b: u32, comp: Comp, c: GaussianRational) -> Self {
        let mut f = Self::zero();
        f.add_term(a, b, comp, c);
        f
    }

    pub fn add_term(&mut self, a: u32, b: u32, comp: Comp, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let key = (a, b, comp);
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn add(&self, other: &MonoVF) -> MonoVF {
        let mut out = self.clone();
        for (&(a, b, comp), c) in &other.terms {
            out.add_term(a, b, comp, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> MonoVF {
        let mut out = MonoVF::zero();
        for (&(a, b, comp), x) in &self.terms {
            out.add_term(a, b, comp, x.clone() * c.clone());
        }
        out
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

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32, Comp), &GaussianRational)> {
        self.terms.iter()
    }

    pub fn get(&self, a: u32, b: u32, comp: Comp) -> GaussianRational {
        self.terms.get(&(a, b, comp)).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// `(f . grad) g` for a single component of `g`.
    fn derivation(f: &MonoVF, g: &MonoVF) -> MonoVF {
        let mut out = MonoVF::zero();
        for (&(fa, fb, fc), fcoef) in &f.terms {
            for (&(ga, gb, gc), gcoef) in &g.terms {
                // f^fc * d/d(fc) of x^ga y^gb
                let (exp, na, nb) = match fc {
                    Comp::Dx if ga > 0 => (ga, ga - 1, gb),
                    Comp::Dy if gb > 0 => (gb, ga, gb - 1),
                    _ => continue,
                };
                let c = fcoef.clone() * gcoef.clone();
                out.add_term(na + fa, nb + fb, gc, c.scale(&Q::from_integer(exp.into())));
            }
        }
        out
    }
}

/// Lie bracket `[f, g] = (f . grad) g - (g . grad) f`.
pub fn mono_bracket(f: &MonoVF, g: &MonoVF) -> MonoVF {
    let a = MonoVF::derivation(f, g);
    let b = MonoVF::derivation(g, f);
    a.add(&b.scale(&-GaussianRational::one()))
}

/// `A[s,d,q] = i^q (x^{k+1} y^l d/dx + i^{2q} x^l y^{k+1} d/dy)`.
pub fn to_monomials(t: ATerm) -> MonoVF {
    let (k, l, q) = (t.k(), t.l(), t.q() as i32);
    let mut f = MonoVF::zero();
    f.add_term((k + 1) as u32, l as u32, Comp::Dx, GaussianRational::i_pow(q));
    f.add_term(l as u32, (k + 1) as u32, Comp::Dy, GaussianRational::i_pow(3 * q));
    f
}

pub fn element_to_monomials(e: &LinComb<Q>) -> MonoVF {
    let mut out = MonoVF::zero();
    for (t, c) in e.iter() {
        out = out.add(&to_monomials(*t).scale(&GaussianRational::real(c.clone())));
    }
    out
}

/// Writes a monomial field in the A-basis with rational coefficients.
/// The `d/dx` coefficient `a` of `x^{k+1} y^l` must be matched by `conj(a)`
/// on `x^l y^{k+1} d/dy`; then the field is `re(a) A^{k-l,0} + im(a) A^{k-l,1}`.
pub fn from_monomials(f: &MonoVF) -> Result<LinComb<Q>> {
    let mut out = LinComb::zero();
    for (&(a, b, comp), c) in f.iter() {
        let (xa, xb) = match comp {
            Comp::Dx => (a, b),
            Comp::Dy => (b, a),
        };
        // pair: x^{k+1} y^l d/dx with k = xa - 1, l = xb
        let dx = f.get(xa, xb, Comp::Dx);
        let dy = f.get(xb, xa, Comp::Dy);
        if dy != dx.conj() {
            return Err(Error::Parse(format!(
                "monomial field is not real in the A-basis: x^{xa} y^{xb} d/dx has {dx} but x^{xb} y^{xa} d/dy has {dy}"
            )));
        }
        if comp == Comp::Dy {
            continue;
        }
        let (k, l) = (a as i32 - 1, b as i32);
        let s = k + l;
        let d = k - l;
        out.add_term(ATerm::new(s, d, 0)?, c.re.clone());
        out.add_term(ATerm::new(s, d, 1)?, c.im.clone());
    }
    Ok(out)
}

/// A pair whose abstract bracket disagrees with the monomial bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub left: ATerm,
    pub right: ATerm,
    pub abstract_bracket: String,
    pub monomial_bracket: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    pub s_max: i32,
    pub pairs_checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Terms with `-1 <= s <= s_max`.
pub fn terms_up_to(s_max: i32) -> Vec<ATerm> {
    (-1..=s_max).flat_map(|s| GradeBasis::new(s).terms().to_vec()).collect()
}

/// Compares every abstract bracket of terms with `s <= s_max` against the
/// monomial bracket.
pub fn check_structure_constants(s_max: i32) -> StructureReport {
    check_structure_constants_with(s_max, |a, b| structure_constants(a, b).map_err(|e| e.to_string()))
}

/// As [`check_structure_constants`], with the structure constants supplied
/// by the caller.
pub fn check_structure_constants_with(
    s_max: i32,
    constants: impl Fn(ATerm, ATerm) -> std::result::Result<Vec<(ATerm, i64)>, String>,
) -> StructureReport {
    let terms = terms_up_to(s_max);
    let monos: Vec<MonoVF> = terms.iter().map(|t| to_monomials(*t)).collect();
    let mut mismatches = Vec::new();
    let mut pairs = 0;
    for (i, a) in terms.iter().enumerate() {
        for (j, b) in terms.iter().enumerate() {
            pairs += 1;
            let expected = mono_bracket(&monos[i], &monos[j]);
            let (got, text) = match constants(*a, *b) {
                Ok(cs) => {
                    let e = LinComb::from_terms(cs.into_iter().map(|(t, k)| (t, Q::from_integer(k.into()))));
                    (Some(element_to_monomials(&e)), e.to_string())
                }
                Err(msg) => (None, msg),
            };
            if got.as_ref() != Some(&expected) {
                let monomial_bracket = match from_monomials(&expected) {
                    Ok(e) => e.to_string(),
                    Err(_) => format!("{expected:?}"),
                };
                mismatches.push(Mismatch { left: *a, right: *b, abstract_bracket: text, monomial_bracket });
            }
        }
    }
    StructureReport { s_max, pairs_checked: pairs, mismatches }
}

/// Jacobi identity check on sampled triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiReport {
    pub seed: u64,
    pub triples_checked: usize,
    /// Triples whose cyclic sum is nonzero.
    pub failures: Vec<(ATerm, ATerm, ATerm)>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `count` triples drawn uniformly from the terms with `s <= s_max`.
pub fn random_triples(count: usize, s_max: i32, seed: u64) -> Vec<(ATerm, ATerm, ATerm)> {
    use rand::{rngs::StdRng, seq::IndexedRandom, SeedableRng};
    let terms = terms_up_to(s_max);
    let mut rng = StdRng::seed_from_u64(seed);
    let mut pick = || *terms.choose(&mut rng).expect("nonempty basis");
    (0..count).map(|_| (pick(), pick(), pick())).collect()
}

/// `[a,[b,c]] + [b,[c,a]] + [c,[a,b]] = 0` for each triple.
pub fn check_jacobi(count: usize, s_max: i32, seed: u64) -> JacobiReport {
    let triples = random_triples(count, s_max, seed);
    let failures = triples.iter().copied().filter(|&(a, b, c)| !jacobi_holds(a, b, c)).collect();
    JacobiReport { seed, triples_checked: triples.len(), failures }
}

/// Whether the cyclic sum of double brackets of `a`, `b`, `c` vanishes.
pub fn jacobi_holds(a: ATerm, b: ATerm, c: ATerm) -> bool {
    let one = Q::from_integer(1.into());
    let [a, b, c] = [a, b, c].map(|t| LinComb::term(t, one.clone()));
    a.bracket(&b.bracket(&c)).add(&b.bracket(&c.bracket(&a))).add(&c.bracket(&a.bracket(&b))).is_zero()
}

/// A list of coordinate vectors.
pub type Vectors = Vec<Vec<Q>>;

/// Row reduction over `Q`, kept separate from the library's elimination.
fn row_reduce(mut rows: Vec<Vec<Q>>, ncols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, pr);
        let inv = rows[r][c].recip();
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(pivots.len());
    (rows, pivots)
}

/// Kernel and column space of a matrix given by its columns.
pub fn kernel_and_image(columns: &[Vec<Q>], nrows: usize) -> (Vectors, Vectors) {
    let ncols = columns.len();
    let rows: Vec<Vec<Q>> = (0..nrows).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    let (reduced, pivots) = row_reduce(rows, ncols);
    let mut kernel = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[f] = Q::one();
        for (row, &pc) in reduced.iter().zip(&pivots) {
            v[pc] = -row[f].clone();
        }
        kernel.push(v);
    }
    let (image, _) = row_reduce(columns.to_vec(), nrows);
    (kernel, image)
}

/// Echelon basis of a span, for comparing subspaces.
pub fn echelon(vectors: &[Vec<Q>], ambient: usize) -> Vec<Vec<Q>> {
    row_reduce(vectors.to_vec(), ambient).0
}

/// Kernel and image of `ad(v0)` on `G_p`, computed through monomial brackets.
/// Both are returned as echelon bases in `GradeBasis(p)` coordinates.
pub fn brute_force_first_page(v0: &LinComb<Q>, p: i32) -> Result<(Vectors, Vectors)> {
    let basis = GradeBasis::new(p);
    let f = element_to_monomials(v0);
    let mut columns = Vec::with_capacity(basis.dim());
    for t in basis.terms() {
        let image = from_monomials(&mono_bracket(&f, &to_monomials(*t)))?;
        let mut col = vec![Q::zero(); basis.dim()];
        for (u, c) in image.iter() {
            let i = basis.index_of(u).ok_or_else(|| Error::Invariant(format!("{u} outside degree {p}")))?;
            col[i] = c.clone();
        }
        columns.push(col);
    }
    let (kernel, image) = kernel_and_image(&columns, basis.dim());
    Ok((echelon(&kernel, basis.dim()), image))
}
