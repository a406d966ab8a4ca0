use std::fmt;

use num_traits::{One, Zero};

use super::field::GradedField;
use super::page::{unique_normal_form, PageState};
use super::EngineConfig;
use crate::abasis::LinComb;
use crate::coeff::{RingElem, RingSpec, Q};
use crate::error::Result;

/// What a coefficient of the final page may be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Marker {
    /// Always zero.
    Zero,
    /// Lies in the maximal ideal.
    Ideal,
    /// A unit.
    Unit,
    /// Anything in `R`.
    Any,
}

impl Marker {
    pub fn as_str(&self) -> &'static str {
        match self {
            Marker::Zero => "0",
            Marker::Ideal => "m",
            Marker::Unit => "R\\m",
            Marker::Any => "R",
        }
    }

    pub fn parse(s: &str) -> Option<Marker> {
        match s {
            "0" => Some(Marker::Zero),
            "m" => Some(Marker::Ideal),
            "R\\m" | "R∖m" => Some(Marker::Unit),
            "R" => Some(Marker::Any),
            _ => None,
        }
    }
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Markers of one degree, one entry per kernel direction.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeMarkers {
    pub degree: i32,
    pub directions: Vec<LinComb<Q>>,
    pub normal: Vec<Marker>,
    pub transform: Vec<Marker>,
}

/// `(dim N_p, dim T_p)` for every degree of the state.
pub fn profile_of(state: &PageState) -> Vec<(usize, usize)> {
    (0..=state.truncation()).map(|p| (state.normal_dim(p), state.transform_dim(p))).collect()
}

fn profile(v: &GradedField, horizon: i32, config: EngineConfig) -> Option<Vec<(usize, usize)>> {
    unique_normal_form(v, horizon, config).ok().map(|nf| profile_of(&nf.state))
}

/// Marker rows for degrees `0..=n` of the final page.
///
/// The computation runs over the residue field up to the horizon `2n + 2`,
/// so that transformations near `n` see the differentials that kill them.
/// A normal-form direction that is an image pivot is `0`. Any other
/// direction is probed: its coefficient is replaced (by `1` and `-2` when it
/// is zero, by `0` when it is a unit) and the page dimensions are recomputed.
/// If they change, the coefficient is case-defining: `m` when it was zero,
/// `R\m` when it was a unit. Otherwise it is free, `R`.
pub fn marker_rows(v: &GradedField, n: i32, config: EngineConfig) -> Result<Vec<DegreeMarkers>> {
    let horizon = 2 * n + 2;
    let res = v.residue();
    let nf = unique_normal_form(&res, horizon, config)?;
    let base = profile_of(&nf.state);
    let state = &nf.state;
    let mut rows = Vec::new();
    for p in 0..=n {
        let directions = state.kernel_basis(p);
        let image_pivots = state.image_pivots(p);
        let transform_pivots = state.transform_pivots(p);
        let mut normal = Vec::with_capacity(directions.len());
        let mut transform = Vec::with_capacity(directions.len());
        for (j, dir) in directions.iter().enumerate() {
            transform.push(if p == 0 || transform_pivots.contains(&j) { Marker::Any } else { Marker::Zero });
            if image_pivots.contains(&j) {
                normal.push(Marker::Zero);
                continue;
            }
            let c = state.kernel_coordinate(p, j).residue();
            let probes: Vec<Q> =
                if c.is_zero() { vec![Q::one(), Q::from_integer((-2).into())] } else { vec![Q::zero()] };
            let sensitive = probes.iter().any(|value| {
                let delta = dir.scale_q(&(value - &c));
                let mut elem = nf.field.element().clone();
                elem.add_assign(&delta.map(|x| RingElem::from_rational(RingSpec::Rational, x.clone())));
                let probe = GradedField::new(RingSpec::Rational, elem).expect("rational field");
                profile(&probe, horizon, config).as_ref() != Some(&base)
            });
            normal.push(match (sensitive, c.is_zero()) {
                (false, _) => Marker::Any,
                (true, true) => Marker::Ideal,
                (true, false) => Marker::Unit,
            });
        }
        rows.push(DegreeMarkers { degree: p, directions, normal, transform });
    }
    Ok(rows)
}
