//! The spectral-sequence normal-form engine.
//!
//! Each graded piece splits as `G_p = k_p + i_p`, kernel and image of
//! `ad(v_0)` on residues. The first page is `N_p = T_p = k_p`. On every later
//! page a transformation in `T_p` is carried as a chain: an element of `W_p`
//! with leading part in `k_p` whose bracket with the field vanishes (over the
//! residue field) in degrees `p .. p+r-1`. The differential is the projection
//! of its degree `p+r` bracket onto `N_{p+r}`.

mod field;
mod markers;
mod page;
mod series;

pub use field::{exp_ad, parse_field, GradedField};
pub use markers::{marker_rows, profile_of, DegreeMarkers, Marker};
pub use page::{
    advance_to_page, first_page, unique_normal_form, Differential, NormalForm, PageState, TransformGenerator,
};
pub use series::{page_series, page_zero_series, Poly};

/// Which end of the kernel basis elimination prefers when choosing pivots on
/// higher pages (and hence which directions survive as normal-form directions).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotOrder {
    #[default]
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EngineConfig {
    pub pivot_order: PivotOrder,
}

/// Truncation degree used when none is given.
pub const DEFAULT_TRUNCATION: i32 = 16;
