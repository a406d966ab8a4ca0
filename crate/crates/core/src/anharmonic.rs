//! Classification of the anharmonic oscillator `A[0,0,1] + ...` into the
//! cases `A^r`, `A_r^q`, `A_r^inf`, with closed-form final-page tables,
//! Poincare series, index and codimension, cross-checked against the engine.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::abasis::ATerm;
use crate::coeff::{RingElem, RingSpec, Scalar};
use crate::engine::{marker_rows, unique_normal_form, EngineConfig, GradedField, Marker, PivotOrder, Poly};
use crate::error::{Error, Result};

/// Outcome of the classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    /// `A^r`: the first nonlinear kernel term has a unit `A[2r,0,0]` coefficient.
    Upper { r: u32 },
    /// `A_r^q`: `A[2r,0,1]` is the first unit, `A[2q,0,0]` the first later one.
    Lower { r: u32, q: u32 },
    /// `A_r^inf`: no unit `A[2q,0,0]` follows the unit `A[2r,0,1]`.
    LowerInfinite { r: u32 },
    /// No unit coefficient through the truncation degree; undetermined.
    LinearOnly,
}

impl CaseLabel {
    pub fn lower(r: u32, q: u32) -> Result<Self> {
        if r == 0 || q <= r {
            return Err(Error::InvalidCase(format!("A_r^q needs 0 < r < q, got r = {r}, q = {q}")));
        }
        Ok(CaseLabel::Lower { r, q })
    }

    /// Largest finite parameter.
    pub fn max_parameter(&self) -> u32 {
        match *self {
            CaseLabel::Upper { r } | CaseLabel::LowerInfinite { r } => r,
            CaseLabel::Lower { q, .. } => q,
            CaseLabel::LinearOnly => 0,
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::Upper { r } => write!(f, "A^{r}"),
            CaseLabel::Lower { r, q } => write!(f, "A_{r}^{q}"),
            CaseLabel::LowerInfinite { r } => write!(f, "A_{r}^inf"),
            CaseLabel::LinearOnly => write!(f, "linear-only"),
        }
    }
}

/// One row of a final-page table: degree `2p`, markers for the normal form
/// and transformation coefficients of `A[2p,0,0]` and `A[2p,0,1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarkerRow {
    pub p: u32,
    pub normal: [Marker; 2],
    pub transform: [Marker; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkerTable {
    pub case: CaseLabel,
    pub rows: Vec<MarkerRow>,
}

impl MarkerTable {
    pub fn row(&self, p: u32) -> Option<&MarkerRow> {
        self.rows.iter().find(|r| r.p == p)
    }
}

impl fmt::Display for MarkerTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>4} | {:>5} {:>5} | {:>5} {:>5}", "p", "N:00", "N:01", "T:00", "T:01")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>4} | {:>5} {:>5} | {:>5} {:>5}",
                r.p,
                r.normal[0].as_str(),
                r.normal[1].as_str(),
                r.transform[0].as_str(),
                r.transform[1].as_str()
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Codim {
    Finite(u32),
    Infinite,
    Undetermined,
}

impl fmt::Display for Codim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codim::Finite(c) => write!(f, "{c}"),
            Codim::Infinite => write!(f, "inf"),
            Codim::Undetermined => write!(f, "undetermined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesReport {
    pub poly: Poly,
    pub index: i64,
    pub codim: Codim,
}

fn a(s: i32, q: u8) -> ATerm {
    ATerm::new(s, 0, q).expect("diagonal term")
}

/// Checks that the linear part is a unit multiple of `A[0,0,1]`.
fn check_linear_part(v: &GradedField) -> Result<()> {
    let v0 = v.linear_part();
    let rot = a(0, 1);
    if v0.len() != 1 || !v0.coeff(&rot).is_some_and(|c| c.is_unit()) {
        return Err(Error::WrongLinearPart);
    }
    Ok(())
}

fn check_truncation(n: i32) -> Result<()> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidTruncation(format!("classification needs an even degree >= 2, got {n}")));
    }
    Ok(())
}

/// Classifies `v` from its normal form over the residue field through degree `n`.
pub fn classify(v: &GradedField, n: i32) -> Result<CaseLabel> {
    classify_with(v, n, EngineConfig::default())
}

pub fn classify_with(v: &GradedField, n: i32, config: EngineConfig) -> Result<CaseLabel> {
    check_truncation(n)?;
    check_linear_part(v)?;
    let nf = unique_normal_form(&v.residue(), n, config)?;
    let beta = |p: i32, q: u8| !nf.field.coeff(&a(2 * p, q)).is_zero();
    let half = n / 2;
    let Some(r) = (1..=half).find(|&p| beta(p, 0) || beta(p, 1)) else {
        return Ok(CaseLabel::LinearOnly);
    };
    if beta(r, 0) {
        return Ok(CaseLabel::Upper { r: r as u32 });
    }
    Ok(match ((r + 1)..=half).find(|&p| beta(p, 0)) {
        Some(q) => CaseLabel::Lower { r: r as u32, q: q as u32 },
        None => CaseLabel::LowerInfinite { r: r as u32 },
    })
}

fn row(p: u32, n: [Marker; 2], t: [Marker; 2]) -> MarkerRow {
    MarkerRow { p, normal: n, transform: t }
}

/// The closed-form final page for rows `0..=p_max`.
pub fn einf_table(case: CaseLabel, p_max: u32) -> MarkerTable {
    use Marker::{Any as R, Ideal as M, Unit as U, Zero as Z};
    let rows = (0..=p_max)
        .map(|p| {
            if p == 0 {
                return row(0, [M, U], [R, R]);
            }
            match case {
                CaseLabel::Upper { r } => match p {
                    p if p < r => row(p, [M, M], [Z, Z]),
                    p if p == r => row(p, [U, R], [R, Z]),
                    p if p == 2 * r => row(p, [R, Z], [Z, Z]),
                    _ => row(p, [Z, Z], [Z, Z]),
                },
                CaseLabel::Lower { r, q } => match p {
                    p if p < r => row(p, [M, M], [Z, Z]),
                    p if p == r => row(p, [M, U], [Z, R]),
                    p if p < q => row(p, [M, Z], [Z, Z]),
                    p if p == q => row(p, [U, Z], [Z, Z]),
                    p if p <= 2 * q - r => row(p, [R, Z], [Z, Z]),
                    p if p == 2 * q => row(p, [R, Z], [Z, Z]),
                    _ => row(p, [Z, Z], [Z, Z]),
                },
                CaseLabel::LowerInfinite { r } => match p {
                    p if p < r => row(p, [M, M], [Z, R]),
                    p if p == r => row(p, [M, U], [Z, R]),
                    _ => row(p, [M, Z], [Z, R]),
                },
                CaseLabel::LinearOnly => row(p, [M, M], [R, R]),
            }
        })
        .collect();
    MarkerTable { case, rows }
}

/// Poincare series `sum (dim N - dim T) t^{2p}` of the final page, index and
/// codimension.
pub fn series(case: CaseLabel) -> SeriesReport {
    let mut poly = Poly::zero();
    let codim = match case {
        CaseLabel::Upper { r } => {
            for i in 1..r {
                poly.add_term(2 * i, 2);
            }
            poly.add_term(2 * r, 1);
            poly.add_term(4 * r, 1);
            Codim::Finite(2 * r - 1)
        }
        CaseLabel::Lower { r, q } => {
            for i in 1..r {
                poly.add_term(2 * i, 2);
            }
            for i in r..=(2 * q - r) {
                poly.add_term(2 * i, 1);
            }
            poly.add_term(4 * q, 1);
            Codim::Finite(r + q - 1)
        }
        CaseLabel::LowerInfinite { r } => {
            for i in 1..=r {
                poly.add_term(2 * i, 1);
            }
            Codim::Infinite
        }
        CaseLabel::LinearOnly => Codim::Undetermined,
    };
    let index = poly.eval_at_one();
    SeriesReport { poly, index, codim }
}

/// `2r` for `A^r`, `2q` for `A_r^q`, `r` for `A_r^inf`.
pub fn index_summary(case: CaseLabel) -> i64 {
    match case {
        CaseLabel::Upper { r } => 2 * r as i64,
        CaseLabel::Lower { q, .. } => 2 * q as i64,
        CaseLabel::LowerInfinite { r } => r as i64,
        CaseLabel::LinearOnly => 0,
    }
}

/// Codimension read off a table: the number of `m` entries among the
/// normal-form markers.
pub fn codim_of_table(table: &MarkerTable) -> u32 {
    table.rows.iter().flat_map(|r| r.normal).filter(|m| *m == Marker::Ideal).count() as u32
}

/// Series read off a table: nonzero normal markers minus nonzero
/// transformation markers, per row.
pub fn table_series(table: &MarkerTable) -> Poly {
    let count = |ms: &[Marker; 2]| ms.iter().filter(|m| **m != Marker::Zero).count() as i64;
    Poly::from_terms(table.rows.iter().map(|r| (2 * r.p, count(&r.normal) - count(&r.transform))))
}

/// The engine's final page at even degrees `0..=n`, in table form.
pub fn engine_table(v: &GradedField, n: i32, config: EngineConfig) -> Result<MarkerTable> {
    check_truncation(n)?;
    check_linear_part(v)?;
    let case = classify_with(v, n, config)?;
    let degrees = marker_rows(v, n, config)?;
    let mut rows = Vec::new();
    for d in degrees.iter().filter(|d| d.degree % 2 == 0) {
        let expected = [a(d.degree, 0), a(d.degree, 1)];
        let dirs: Vec<Option<ATerm>> =
            d.directions.iter().map(|e| if e.len() == 1 { e.iter().next().map(|(t, _)| *t) } else { None }).collect();
        if dirs != expected.map(Some) {
            return Err(Error::Invariant(format!(
                "kernel at degree {} is not spanned by A[p,0,0], A[p,0,1]",
                d.degree
            )));
        }
        rows.push(MarkerRow {
            p: (d.degree / 2) as u32,
            normal: [d.normal[0], d.normal[1]],
            transform: [d.transform[0], d.transform[1]],
        });
    }
    Ok(MarkerTable { case, rows })
}

/// Closed form and engine side by side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub case: CaseLabel,
    pub closed_form: MarkerTable,
    pub engine: MarkerTable,
    /// Rows where the two tables differ.
    pub mismatched_rows: Vec<u32>,
    /// Whether `n` is large enough for the table to be fully determined.
    pub conclusive: bool,
}

impl Verification {
    pub fn agrees(&self) -> bool {
        self.mismatched_rows.is_empty()
    }
}

/// Classifies `v` and compares the closed-form table with the engine's.
pub fn verify(v: &GradedField, n: i32, config: EngineConfig) -> Result<Verification> {
    let engine = engine_table(v, n, config)?;
    let case = engine.case;
    let closed_form = einf_table(case, (n / 2) as u32);
    let mismatched_rows = closed_form.rows.iter().zip(&engine.rows).filter(|(c, e)| c != e).map(|(c, _)| c.p).collect();
    let conclusive = case != CaseLabel::LinearOnly && n >= 4 * case.max_parameter() as i32 + 2;
    Ok(Verification { case, closed_form, engine, mismatched_rows, conclusive })
}

/// Result of the m-adic refinement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MadicReport {
    pub levels: Vec<(usize, CaseLabel)>,
    /// Whether reversing the pivot order of the complements changes any level.
    pub complement_sensitive: bool,
}

impl MadicReport {
    /// `sum_p u^p P_p(t)`, keyed by the power of `u`.
    pub fn generating_function(&self) -> BTreeMap<usize, Poly> {
        self.levels.iter().map(|(p, c)| (*p, series(*c).poly)).collect()
    }

    pub fn generating_function_text(&self) -> String {
        let parts: Vec<String> = self
            .generating_function()
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(level, p)| match level {
                0 => format!("({p})"),
                1 => format!("u*({p})"),
                l => format!("u^{l}*({p})"),
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Repeats the classification on the `m` level: the surviving coefficients
/// marked `m` (degree at least 2) are divided by `l` and, together with the
/// linear part, classified again over the ring of one lower order.
pub fn madic_refine(v: &GradedField, n: i32, levels: usize) -> Result<MadicReport> {
    let ascending = refine_levels(v, n, levels, EngineConfig::default())?;
    let descending = refine_levels(v, n, levels, EngineConfig { pivot_order: PivotOrder::Descending })?;
    Ok(MadicReport { complement_sensitive: ascending != descending, levels: ascending })
}

fn refine_levels(v: &GradedField, n: i32, levels: usize, config: EngineConfig) -> Result<Vec<(usize, CaseLabel)>> {
    check_truncation(n)?;
    check_linear_part(v)?;
    let mut out = Vec::new();
    let mut field = v.clone();
    for level in 0..levels.max(1) {
        let nf = unique_normal_form(&field, n, config)?;
        let case = classify_with(&field, n, config)?;
        out.push((level, case));
        let spec = field.spec();
        let order = match spec {
            RingSpec::Local { order } if order >= 2 => order,
            _ => break,
        };
        let table = einf_table(case, (n / 2) as u32);
        let mut positions = Vec::new();
        for r in table.rows.iter().filter(|r| r.p >= 1) {
            for (q, marker) in r.normal.iter().enumerate() {
                if *marker == Marker::Ideal {
                    positions.push(a(2 * r.p as i32, q as u8));
                }
            }
        }
        let next_spec = RingSpec::Local { order: order - 1 };
        let rot = a(0, 1);
        let unit = nf.field.coeff(&rot);
        let mut next = GradedField::zero(next_spec);
        next.set_coeff(rot, RingElem::from_coeffs(next_spec, unit.coeffs().iter().cloned()));
        let mut any = false;
        for t in positions {
            let c = nf.field.coeff(&t);
            if c.is_zero() {
                continue;
            }
            let reduced = c
                .div_lambda()
                .ok_or_else(|| Error::Invariant(format!("coefficient of {t} marked m is {c}, not in m")))?;
            next.set_coeff(t, reduced);
            any = true;
        }
        if !any {
            break;
        }
        field = next;
    }
    Ok(out)
}

/// Rescales with the grading action of `A[0,0,0]` (a degree-`s` term is
/// multiplied by `mu^s`) so that the leading unit coefficient becomes 1.
/// The leading coefficient is the first unit, in basis order, of degree >= 1.
pub fn scale_leading(v: &GradedField) -> Result<GradedField> {
    let spec = v.spec();
    let (lead, beta) = v
        .element()
        .iter()
        .find(|(t, c)| t.degree() >= 1 && c.is_unit())
        .map(|(t, c)| (*t, c.clone()))
        .ok_or(Error::NoUnitToScale)?;
    let g = v.degrees().into_iter().filter(|&d| d >= 1).fold(0i32, |acc, d| acc.gcd(&d));
    let w = lead.degree();
    let root = (w / g) as u32;
    let target = beta.invert()?;
    let nu = target.nth_root(root).ok_or_else(|| Error::NoExactRoot { root, value: target.to_string() })?;
    let mut powers: BTreeMap<i32, RingElem> = BTreeMap::new();
    let mut out = GradedField::zero(spec);
    for (t, c) in v.element().iter() {
        let e = t.degree() / g.max(1);
        let factor =
            powers.entry(e).or_insert_with(|| (0..e.max(0)).fold(RingElem::one(spec), |acc, _| acc.times(&nu))).clone();
        out.set_coeff(*t, c.times(&factor));
    }
    debug_assert!(out.coeff(&lead).residue() == num_traits::One::one());
    Ok(out)
}
