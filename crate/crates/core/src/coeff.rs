//! Coefficient rings: the rationals and truncated power series in a single
//! deformation parameter `l`, a local ring with maximal ideal `m = (l)`.
//!
//! Invertibility is always decided in the residue field `R/m = Q`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rationals.
pub type Q = BigRational;

/// Default truncation order for the local ring.
pub const DEFAULT_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("incompatible ring contexts: {0} vs {1}")]
    SpecMismatch(RingSpec, RingSpec),
    #[error("not invertible in local ring: {0}")]
    NotInvertible(String),
    #[error("truncation order must be at least 1")]
    ZeroOrder,
    #[error("cannot parse ring element `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

/// Which coefficient ring a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingSpec {
    /// The field of rationals.
    Rational,
    /// `Q[[l]] / (l^order)`.
    Local { order: usize },
}

impl RingSpec {
    pub fn local(order: usize) -> Result<Self, RingError> {
        if order == 0 {
            return Err(RingError::ZeroOrder);
        }
        Ok(RingSpec::Local { order })
    }

    /// Number of stored coefficients (powers `l^0 .. l^{len-1}`).
    pub fn len(&self) -> usize {
        match *self {
            RingSpec::Rational => 1,
            RingSpec::Local { order } => order,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Rational => write!(f, "Q"),
            RingSpec::Local { order } => write!(f, "Ql:{order}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(RingSpec::Rational);
        }
        if let Some(k) = s.strip_prefix("Ql:") {
            let order: usize = k
                .parse()
                .map_err(|_| RingError::Parse { input: s.to_string(), reason: "expected Ql:<order>".into() })?;
            return RingSpec::local(order);
        }
        Err(RingError::Parse { input: s.to_string(), reason: "expected `Q` or `Ql:<order>`".into() })
    }
}

/// An element of the coefficient ring. `coeffs[j]` is the `l^j` coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    spec: RingSpec,
    coeffs: Vec<Q>,
}

impl RingElem {
    pub fn zero(spec: RingSpec) -> Self {
        RingElem { spec, coeffs: vec![Q::zero(); spec.len()] }
    }

    pub fn one(spec: RingSpec) -> Self {
        Self::from_rational(spec, Q::one())
    }

    pub fn from_rational(spec: RingSpec, q: Q) -> Self {
        let mut e = Self::zero(spec);
        e.coeffs[0] = q;
        e
    }

    pub fn from_int(spec: RingSpec, n: i64) -> Self {
        Self::from_rational(spec, Q::from_integer(BigInt::from(n)))
    }

    /// The deformation parameter itself; zero when the order is 1.
    pub fn lambda(spec: RingSpec) -> Self {
        let mut e = Self::zero(spec);
        if spec.len() > 1 {
            e.coeffs[1] = Q::one();
        }
        e
    }

    /// Builds an element from its `l`-coefficients; extra entries are truncated.
    pub fn from_coeffs(spec: RingSpec, coeffs: impl IntoIterator<Item = Q>) -> Self {
        let mut e = Self::zero(spec);
        for (slot, c) in e.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        e
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Residue-field image: the constant coefficient.
    pub fn residue(&self) -> Q {
        self.coeffs[0].clone()
    }

    /// A unit exactly when the element is outside `m`.
    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// Smallest `j` with a nonzero `l^j` coefficient; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<(), RingError> {
        if self.spec != other.spec {
            return Err(RingError::SpecMismatch(self.spec, other.spec));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(RingElem { spec: self.spec, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(RingElem { spec: self.spec, coeffs })
    }

    /// Exact product, truncated at `l^K`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        let n = self.coeffs.len();
        let mut out = vec![Q::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(RingElem { spec: self.spec, coeffs: out })
    }

    pub fn neg(&self) -> Self {
        RingElem { spec: self.spec, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, q: &Q) -> Self {
        RingElem { spec: self.spec, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Inverse by geometric series: `a = a0 (1 + x)` with `x` in `m`.
    pub fn invert(&self) -> Result<Self, RingError> {
        if !self.is_unit() {
            return Err(RingError::NotInvertible(self.to_string()));
        }
        let a0_inv = self.coeffs[0].recip();
        let mut x = self.scale(&a0_inv);
        x.coeffs[0] = Q::zero();
        let neg_x = x.neg();
        let mut acc = RingElem::one(self.spec);
        let mut power = RingElem::one(self.spec);
        for _ in 1..self.spec.len() {
            power = power.try_mul(&neg_x)?;
            if power.is_zero() {
                break;
            }
            acc = acc.try_add(&power)?;
        }
        Ok(acc.scale(&a0_inv))
    }

    /// Divides an element of `m` by `l`; the result lives in the ring of order `K-1`.
    pub fn div_lambda(&self) -> Option<Self> {
        match self.spec {
            RingSpec::Rational => None,
            RingSpec::Local { order } => {
                if !self.coeffs[0].is_zero() || order < 2 {
                    return None;
                }
                let spec = RingSpec::Local { order: order - 1 };
                Some(RingElem::from_coeffs(spec, self.coeffs[1..].iter().cloned()))
            }
        }
    }

    /// Exact `n`-th root of a unit, if the residue has a rational root.
    /// Chooses the positive root when `n` is even.
    pub fn nth_root(&self, n: u32) -> Option<Self> {
        if n == 0 || !self.is_unit() {
            return None;
        }
        let r0 = rational_root(&self.coeffs[0], n)?;
        // a = a0 (1 + x); a^{1/n} = r0 * sum_j binom(1/n, j) x^j
        let a0_inv = self.coeffs[0].recip();
        let mut x = self.scale(&a0_inv);
        x.coeffs[0] = Q::zero();
        let alpha = Q::new(BigInt::one(), BigInt::from(n));
        let mut binom = Q::one();
        let mut acc = RingElem::one(self.spec);
        let mut power = RingElem::one(self.spec);
        for j in 1..self.spec.len() {
            let jq = Q::from_integer(BigInt::from(j as u64));
            binom = binom * (&alpha - (&jq - Q::one())) / &jq;
            power = power.try_mul(&x).ok()?;
            if power.is_zero() {
                break;
            }
            acc = acc.try_add(&power.scale(&binom)).ok()?;
        }
        Some(acc.scale(&r0))
    }
}

fn rational_root(q: &Q, n: u32) -> Option<Q> {
    if q.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let num = int_root(q.numer(), n)?;
    let den = int_root(q.denom(), n)?;
    Some(Q::new(num, den))
}

fn int_root(a: &BigInt, n: u32) -> Option<BigInt> {
    let r = a.nth_root(n);
    if num_traits::Pow::pow(&r, n) == *a {
        Some(r)
    } else {
        None
    }
}

impl std::ops::Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        self.try_add(rhs).expect("ring spec mismatch")
    }
}

impl std::ops::Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        self.try_sub(rhs).expect("ring spec mismatch")
    }
}

impl std::ops::Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        self.try_mul(rhs).expect("ring spec mismatch")
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if j == 1 {
                        write!(f, "l")?;
                    } else {
                        write!(f, "l^{j}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Parses an exact rational such as `3`, `-3/2`.
pub fn parse_rational(s: &str) -> Result<Q, RingError> {
    let err = |reason: &str| RingError::Parse { input: s.to_string(), reason: reason.to_string() };
    let s = s.trim();
    if s.is_empty() {
        return Err(err("empty rational"));
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err("bad numerator"))?;
            let d: BigInt = d.trim().parse().map_err(|_| err("bad denominator"))?;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            Ok(Q::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| err("bad integer"))?;
            Ok(Q::from_integer(n))
        }
    }
}

impl RingElem {
    /// Parses the text form `3/2 + 1/4*l^2`. Powers at or beyond the
    /// truncation order are dropped.
    pub fn parse(spec: RingSpec, input: &str) -> Result<Self, RingError> {
        let err = |reason: &str| RingError::Parse { input: input.to_string(), reason: reason.to_string() };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty"));
        }
        let mut out = RingElem::zero(spec);
        // split into signed monomials
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push((negative, std::mem::take(&mut cur)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                negative = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        terms.push((negative, cur));
        for (negative, body) in terms {
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coeff, power) = match body.find('l') {
                None => (parse_rational(&body).map_err(|_| err("bad coefficient"))?, 0usize),
                Some(pos) => {
                    let (c, rest) = body.split_at(pos);
                    let coeff = if c.is_empty() {
                        Q::one()
                    } else {
                        let c = c.strip_suffix('*').ok_or_else(|| err("expected `*` before `l`"))?;
                        parse_rational(c).map_err(|_| err("bad coefficient"))?
                    };
                    let power = match rest.strip_prefix('l').unwrap_or("") {
                        "" => 1,
                        p => p
                            .strip_prefix('^')
                            .and_then(|p| p.parse::<usize>().ok())
                            .ok_or_else(|| err("bad power of l"))?,
                    };
                    (coeff, power)
                }
            };
            if power > 0 && spec == RingSpec::Rational {
                return Err(err("deformation parameter `l` used over Q"));
            }
            if power < out.coeffs.len() {
                let c = if negative { -coeff } else { coeff };
                out.coeffs[power] += c;
            }
        }
        Ok(out)
    }
}

/// Arithmetic shared by the rationals and the local ring, so that linear
/// algebra and brackets can be written once.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ctx: Copy + PartialEq + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero_in(ctx: Self::Ctx) -> Self;
    fn from_q(ctx: Self::Ctx, q: Q) -> Self;
    fn one_in(ctx: Self::Ctx) -> Self {
        Self::from_q(ctx, Q::one())
    }
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, q: &Q) -> Self;
    fn unit(&self) -> bool;
    fn inverse(&self) -> Option<Self>;
    fn residue_q(&self) -> Q;
    /// The `l^j` layers, constant first.
    fn layers(&self) -> Vec<Q>;
}

impl Scalar for Q {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero_in(_: ()) -> Self {
        Q::zero()
    }
    fn from_q(_: (), q: Q) -> Self {
        q
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, q: &Q) -> Self {
        self * q
    }
    fn unit(&self) -> bool {
        !self.is_zero()
    }
    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn residue_q(&self) -> Q {
        self.clone()
    }
    fn layers(&self) -> Vec<Q> {
        vec![self.clone()]
    }
}

impl Scalar for RingElem {
    type Ctx = RingSpec;

    fn ctx(&self) -> RingSpec {
        self.spec
    }
    fn zero_in(ctx: RingSpec) -> Self {
        RingElem::zero(ctx)
    }
    fn from_q(ctx: RingSpec, q: Q) -> Self {
        RingElem::from_rational(ctx, q)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, q: &Q) -> Self {
        self.scale(q)
    }
    fn unit(&self) -> bool {
        self.is_unit()
    }
    fn inverse(&self) -> Option<Self> {
        self.invert().ok()
    }
    fn residue_q(&self) -> Q {
        self.residue()
    }
    fn layers(&self) -> Vec<Q> {
        self.coeffs.clone()
    }
}

/// Integer shorthand for rationals.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n/d` as a rational.
pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> RingSpec {
        RingSpec::local(3).unwrap()
    }

    fn el(spec: RingSpec, s: &str) -> RingElem {
        RingElem::parse(spec, s).unwrap()
    }

    #[test]
    fn difference_of_squares_truncates() {
        let s = k3();
        let p = &el(s, "1 + l") * &el(s, "1 - l");
        assert_eq!(p, el(s, "1 - l^2"));
    }

    #[test]
    fn lambda_squared_vanishes_at_order_two() {
        let s = RingSpec::local(2).unwrap();
        let l = RingElem::lambda(s);
        assert!((&l * &l).is_zero());
    }

    #[test]
    fn one_is_identity() {
        let s = RingSpec::local(4).unwrap();
        let x = el(s, "3/2 - 2*l + 5*l^3");
        assert_eq!(&x * &RingElem::one(s), x);
    }

    #[test]
    fn unit_tests() {
        let s = k3();
        assert!(el(s, "1 + l").is_unit());
        assert!(!RingElem::lambda(s).is_unit());
        assert!(!RingElem::zero(s).is_unit());
    }

    #[test]
    fn inversion() {
        assert_eq!(
            RingElem::from_int(RingSpec::Rational, 2).invert().unwrap(),
            RingElem::from_rational(RingSpec::Rational, qf(1, 2))
        );
        let s = k3();
        let inv = el(s, "1 + l").invert().unwrap();
        assert_eq!(inv, el(s, "1 - l + l^2"));
        assert_eq!(&inv * &el(s, "1 + l"), RingElem::one(s));
        assert!(matches!(RingElem::lambda(s).invert(), Err(RingError::NotInvertible(_))));
    }

    #[test]
    fn residue_examples() {
        let s = k3();
        assert_eq!(el(s, "3 + 5*l").residue(), q(3));
        assert_eq!(RingElem::lambda(s).residue(), q(0));
    }

    #[test]
    fn spec_mismatch_is_an_error() {
        let a = RingElem::one(RingSpec::Rational);
        let b = RingElem::one(k3());
        assert!(matches!(a.try_mul(&b), Err(RingError::SpecMismatch(..))));
    }

    #[test]
    fn text_round_trip() {
        let s = RingSpec::local(4).unwrap();
        for text in ["3/2 + 1/4*l^2", "-l", "0", "2 - l + 7/3*l^3"] {
            let e = el(s, text);
            assert_eq!(e.to_string(), text);
        }
        assert!(RingElem::parse(s, "1/0").is_err());
        assert!(RingElem::parse(RingSpec::Rational, "l").is_err());
        assert!(RingElem::parse(s, "2*").is_err());
    }

    #[test]
    fn roots_and_division() {
        let s = k3();
        let a = el(s, "4 + 4*l + l^2");
        let r = a.nth_root(2).unwrap();
        assert_eq!(r, el(s, "2 + l"));
        assert!(el(s, "3").nth_root(2).is_none());
        assert_eq!(el(s, "2*l + l^2").div_lambda().unwrap().to_string(), "2 + l");
        assert!(el(s, "1 + l").div_lambda().is_none());
    }

    #[test]
    fn ring_spec_text() {
        assert_eq!("Q".parse::<RingSpec>().unwrap(), RingSpec::Rational);
        assert_eq!("Ql:3".parse::<RingSpec>().unwrap(), k3());
        assert!("Ql:0".parse::<RingSpec>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn elem(order: usize) -> impl Strategy<Value = RingElem> {
            proptest::collection::vec((-6i64..=6, 1i64..=4), order).prop_map(move |v| {
                RingElem::from_coeffs(RingSpec::Local { order }, v.into_iter().map(|(n, d)| qf(n, d)))
            })
        }

        proptest! {
            #[test]
            fn ring_axioms(a in elem(4), b in elem(4), c in elem(4)) {
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&a * &b, &b * &a);
            }

            #[test]
            fn residue_is_multiplicative(a in elem(3), b in elem(3)) {
                prop_assert_eq!((&a * &b).residue(), a.residue() * b.residue());
            }

            #[test]
            fn units_multiply(a in elem(3), b in elem(3)) {
                prop_assert_eq!((&a * &b).is_unit(), a.is_unit() && b.is_unit());
            }

            #[test]
            fn valuation_adds(a in elem(5), b in elem(5)) {
                prop_assume!(!a.is_zero() && !b.is_zero());
                let va = a.valuation().unwrap();
                let vb = b.valuation().unwrap();
                let expected = if va + vb >= 5 { None } else { Some(va + vb) };
                prop_assert_eq!((&a * &b).valuation(), expected);
            }

            #[test]
            fn inverse_is_two_sided(a in elem(5)) {
                prop_assume!(a.is_unit());
                let inv = a.invert().unwrap();
                prop_assert_eq!(&a * &inv, RingElem::one(a.spec()));
                prop_assert_eq!(&inv * &a, RingElem::one(a.spec()));
            }
        }
    }
}
