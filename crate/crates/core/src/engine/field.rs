use std::fmt;

use crate::abasis::{AElement, ATerm, LinComb};
use crate::coeff::{RingElem, RingSpec, Scalar, Q};
use crate::error::{Error, Result};

/// A formal vector field `v_0 + v_1 + ...` with coefficients in one ring.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedField {
    spec: RingSpec,
    elem: AElement,
}

impl GradedField {
    pub fn new(spec: RingSpec, elem: AElement) -> Result<Self> {
        for (_, c) in elem.iter() {
            if c.spec() != spec {
                return Err(Error::Ring(crate::coeff::RingError::SpecMismatch(spec, c.spec())));
            }
        }
        Ok(GradedField { spec, elem })
    }

    pub fn zero(spec: RingSpec) -> Self {
        GradedField { spec, elem: AElement::zero() }
    }

    /// Field with rational coefficients embedded into `spec`.
    pub fn from_rational(spec: RingSpec, terms: impl IntoIterator<Item = (ATerm, Q)>) -> Self {
        let elem = AElement::from_terms(terms.into_iter().map(|(t, c)| (t, RingElem::from_rational(spec, c))));
        GradedField { spec, elem }
    }

    pub fn from_terms(spec: RingSpec, terms: impl IntoIterator<Item = (ATerm, RingElem)>) -> Result<Self> {
        Self::new(spec, AElement::from_terms(terms))
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn element(&self) -> &AElement {
        &self.elem
    }

    pub fn into_element(self) -> AElement {
        self.elem
    }

    pub fn part(&self, p: i32) -> AElement {
        self.elem.part(p)
    }

    pub fn linear_part(&self) -> AElement {
        self.elem.part(0)
    }

    pub fn coeff(&self, t: &ATerm) -> RingElem {
        self.elem.coeff(t).cloned().unwrap_or_else(|| RingElem::zero(self.spec))
    }

    pub fn set_coeff(&mut self, t: ATerm, c: RingElem) {
        let old = self.coeff(&t);
        self.elem.add_term(t, c.minus(&old));
    }

    pub fn set_part(&mut self, p: i32, part: &AElement) {
        self.elem.set_part(p, part);
    }

    pub fn truncated(&self, n: i32) -> Self {
        GradedField { spec: self.spec, elem: self.elem.truncated(n) }
    }

    pub fn is_zero(&self) -> bool {
        self.elem.is_zero()
    }

    /// The field over the residue field `Q`.
    pub fn residue(&self) -> GradedField {
        GradedField::from_rational(RingSpec::Rational, self.elem.iter().map(|(t, c)| (*t, c.residue())))
    }

    pub fn residue_element(&self) -> LinComb<Q> {
        self.elem.residue()
    }

    pub fn scale(&self, c: &RingElem) -> GradedField {
        GradedField { spec: self.spec, elem: self.elem.scale(c) }
    }

    /// Reinterprets the coefficients in another ring, truncating or padding
    /// the `l`-expansion.
    pub fn with_spec(&self, spec: RingSpec) -> GradedField {
        let elem = AElement::from_terms(
            self.elem.iter().map(|(t, c)| (*t, RingElem::from_coeffs(spec, c.coeffs().iter().cloned()))),
        );
        GradedField { spec, elem }
    }

    /// The `l^j` layer as a rational element.
    pub fn layer(&self, j: usize) -> LinComb<Q> {
        LinComb::from_terms(self.elem.iter().filter_map(|(t, c)| c.coeffs().get(j).map(|x| (*t, x.clone()))))
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.elem.degrees()
    }
}

impl fmt::Display for GradedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_zero() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.elem.iter().enumerate() {
            crate::abasis::write_term(f, i == 0, &c.to_string(), t)?;
        }
        Ok(())
    }
}

/// Parses the text form produced by `Display`, e.g.
/// `A[0,0,1] + (1/2 + l)*A[2,0,0] - A[2,0,1]`.
pub fn parse_field(spec: RingSpec, text: &str) -> Result<GradedField> {
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut negative = false;
    for ch in text.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (ch == '+' || ch == '-') {
            if !cur.trim().is_empty() {
                pieces.push((negative, std::mem::take(&mut cur)));
            } else if ch == '-' && negative {
                return Err(Error::Parse(format!("double sign in `{text}`")));
            }
            negative = ch == '-';
            continue;
        }
        cur.push(ch);
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in `{text}`")));
    }
    if !cur.trim().is_empty() {
        pieces.push((negative, cur));
    } else if text.trim().is_empty() || negative {
        return Err(Error::Parse(format!("empty term in `{text}`")));
    }
    let mut elem = AElement::zero();
    for (negative, piece) in pieces {
        let piece = piece.trim();
        let (coeff, term) = match piece.rfind("*A[") {
            Some(pos) => {
                let c = piece[..pos].trim();
                let c = c.strip_prefix('(').and_then(|c| c.strip_suffix(')')).unwrap_or(c);
                (RingElem::parse(spec, c)?, &piece[pos + 1..])
            }
            None => (RingElem::one(spec), piece),
        };
        let term: ATerm = term.parse()?;
        elem.add_term(term, if negative { coeff.neg() } else { coeff });
    }
    Ok(GradedField { spec, elem })
}

/// `exp(ad t) v = sum_m ad(t)^m v / m!`, truncated at degree `n`.
pub fn exp_ad(t: &AElement, v: &GradedField, n: i32) -> Result<GradedField> {
    if t.min_degree().is_some_and(|d| d < 1) {
        return Err(Error::DegreeZeroGenerator);
    }
    let mut acc = v.elem.truncated(n);
    let mut term = acc.clone();
    let mut m = 1i64;
    loop {
        term = t.bracket_truncated(&term, n);
        if term.is_zero() {
            break;
        }
        term = term.scale_q(&Q::new(1.into(), m.into()));
        acc.add_assign(&term);
        m += 1;
    }
    Ok(GradedField { spec: v.spec, elem: acc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::q;

    fn a(s: i32, d: i32, qq: u8) -> ATerm {
        ATerm::new(s, d, qq).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let spec = RingSpec::local(3).unwrap();
        let v = parse_field(spec, "A[0,0,1] + (1/2 + l)*A[2,0,0] - A[2,0,1] - 3*A[4,0,0]").unwrap();
        assert_eq!(v.coeff(&a(2, 0, 1)), RingElem::from_int(spec, -1));
        assert_eq!(v.coeff(&a(4, 0, 0)), RingElem::from_int(spec, -3));
        assert_eq!(parse_field(spec, &v.to_string()).unwrap(), v);
        assert!(parse_field(spec, "A[1,3,0]").is_err());
        assert!(parse_field(spec, "").is_err());
        assert!(parse_field(RingSpec::Rational, "l*A[2,0,0]").is_err());
    }

    #[test]
    fn exp_of_kernel_element_is_identity() {
        let v = GradedField::from_rational(RingSpec::Rational, [(a(0, 0, 1), q(1))]);
        let t = LinComb::term(a(2, 0, 0), RingElem::one(RingSpec::Rational));
        assert_eq!(exp_ad(&t, &v, 6).unwrap(), v);
    }

    #[test]
    fn exp_terminates_after_two_terms() {
        let v = GradedField::from_rational(RingSpec::Rational, [(a(0, 0, 1), q(1))]);
        let t = LinComb::term(a(1, 1, 0), RingElem::one(RingSpec::Rational));
        let w = exp_ad(&t, &v, 4).unwrap();
        let expected = GradedField::from_rational(RingSpec::Rational, [(a(0, 0, 1), q(1)), (a(1, 1, 1), q(-1))]);
        assert_eq!(w, expected);
    }

    #[test]
    fn lambda_scaled_generator_only_moves_the_ideal() {
        let spec = RingSpec::local(3).unwrap();
        let v = GradedField::from_rational(spec, [(a(0, 0, 1), q(1)), (a(1, 1, 0), q(2))]);
        let t = LinComb::term(a(1, -1, 0), RingElem::lambda(spec));
        let w = exp_ad(&t, &v, 6).unwrap();
        assert_eq!(w.residue(), v.residue());
        assert_ne!(w, v);
    }

    #[test]
    fn degree_zero_generators_are_rejected() {
        let v = GradedField::from_rational(RingSpec::Rational, [(a(0, 0, 1), q(1))]);
        let t = LinComb::term(a(0, 0, 0), RingElem::one(RingSpec::Rational));
        assert_eq!(exp_ad(&t, &v, 4), Err(Error::DegreeZeroGenerator));
    }
}
