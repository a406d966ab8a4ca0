//! Unique normal forms of formal planar vector fields, computed page by page
//! with a spectral sequence, in exact arithmetic over `Q` or over the local
//! ring `Q[[l]]/(l^K)`.
//!
//! ```
//! use nfspectral::{classify, parse_field, CaseLabel, RingSpec};
//!
//! let v = parse_field(RingSpec::Rational, "A[0,0,1] + A[2,0,0]").unwrap();
//! assert_eq!(classify(&v, 10).unwrap(), CaseLabel::Upper { r: 1 });
//! ```

pub mod abasis;
pub mod anharmonic;
pub mod coeff;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod oracle;

pub use abasis::{ad_matrix, bracket_terms, canonicalize, AElement, ATerm, GradeBasis, LinComb};
pub use anharmonic::{
    classify, einf_table, index_summary, madic_refine, scale_leading, series, table_series, CaseLabel, Codim,
    MadicReport, MarkerRow, MarkerTable, SeriesReport,
};
pub use coeff::{RingElem, RingSpec, Scalar, DEFAULT_ORDER, Q};
pub use engine::{
    exp_ad, first_page, parse_field, unique_normal_form, EngineConfig, GradedField, Marker, NormalForm, PageState,
    PivotOrder, Poly, TransformGenerator,
};
pub use error::{Error, Result};
