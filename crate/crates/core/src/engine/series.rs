use std::collections::BTreeMap;
use std::fmt;

use super::page::PageState;

/// Integer polynomial in one variable `t`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Poly {
    coeffs: BTreeMap<u32, i64>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, i64)>) -> Self {
        let mut p = Poly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exponent: u32, c: i64) {
        let slot = self.coeffs.entry(exponent).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.coeffs.remove(&exponent);
        }
    }

    pub fn coeff(&self, exponent: u32) -> i64 {
        self.coeffs.get(&exponent).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Keeps only exponents `<= e`.
    pub fn truncated(&self, e: u32) -> Poly {
        Poly { coeffs: self.coeffs.range(..=e).map(|(k, v)| (*k, *v)).collect() }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let mag = c.unsigned_abs();
            if c < 0 {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "t")?,
                (1, m) => write!(f, "{m}t")?,
                (e, 1) => write!(f, "t^{e}")?,
                (e, m) => write!(f, "{m}t^{e}")?,
            }
        }
        Ok(())
    }
}

/// `sum_p (dim N_p - dim T_p) t^p` over `0 <= p <= p_max`.
pub fn page_series(state: &PageState, p_max: i32) -> Poly {
    let p_max = p_max.min(state.truncation());
    Poly::from_terms((0..=p_max).map(|p| (p as u32, state.normal_dim(p) as i64 - state.transform_dim(p) as i64)))
}

/// Series of the zeroth page, where `N_p = T_p = G_p`.
pub fn page_zero_series(p_max: i32) -> Poly {
    Poly::from_terms((0..=p_max).map(|p| {
        let (normal, transform) = (2 * (p as i64 + 2), 2 * (p as i64 + 2));
        (p as u32, normal - transform)
    }))
}
