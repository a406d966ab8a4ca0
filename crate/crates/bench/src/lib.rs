//! Inputs shared by the benchmarks.

use nfspectral::{ATerm, GradeBasis, GradedField, RingSpec, Q};
use rand::{rngs::StdRng, Rng, SeedableRng};

/// `A[0,0,1]` plus every term of degree `1..=top` with a small random
/// rational coefficient.
pub fn dense_field(spec: RingSpec, top: i32, seed: u64) -> GradedField {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut terms = vec![(ATerm::new(0, 0, 1).expect("rotation"), Q::from_integer(1.into()))];
    for s in 1..=top {
        for t in GradeBasis::new(s).terms() {
            terms.push((*t, Q::new(rng.random_range(-5i64..=5).into(), rng.random_range(1i64..=4).into())));
        }
    }
    GradedField::from_rational(spec, terms)
}
