use nfspectral::coeff::q;
use nfspectral::engine::{advance_to_page, page_series, page_zero_series, profile_of};
use nfspectral::oracle::{brute_force_first_page, echelon, kernel_and_image};
use nfspectral::*;
use num_traits::Zero;

fn a(s: i32, d: i32, q: u8) -> ATerm {
    ATerm::new(s, d, q).unwrap()
}

fn field(text: &str) -> GradedField {
    parse_field(RingSpec::Rational, text).unwrap()
}

fn local(text: &str, order: usize) -> GradedField {
    parse_field(RingSpec::local(order).unwrap(), text).unwrap()
}

fn span_of(p: i32, items: &[LinComb<Q>]) -> linalg::Subspace {
    let zero = Q::zero();
    linalg::Subspace::span(GradeBasis::new(p).dim(), items.iter().map(|x| x.coords(p, &zero)).collect::<Vec<_>>())
}

fn diagonal_span(p: i32) -> linalg::Subspace {
    span_of(p, &[LinComb::term(a(p, 0, 0), q(1)), LinComb::term(a(p, 0, 1), q(1))])
}

/// A dense field with small rational coefficients through degree `top`.
fn generic(spec: RingSpec, top: i32, seed: u64) -> GradedField {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut terms = vec![(a(0, 0, 1), q(1))];
    for s in 1..=top {
        for t in GradeBasis::new(s).terms() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let num = ((state >> 33) % 7) as i64 - 3;
            let den = ((state >> 40) % 3) as i64 + 1;
            terms.push((*t, Q::new(num.into(), den.into())));
        }
    }
    GradedField::from_rational(spec, terms)
}

fn inputs() -> Vec<GradedField> {
    vec![
        field("A[0,0,1] + A[2,0,0]"),
        field("A[0,0,1] + A[2,0,1]"),
        field("A[0,0,1] + A[2,0,1] + A[4,0,0]"),
        field("A[0,0,1] + A[1,1,0] + 2*A[2,0,0] - A[2,2,1] + A[3,-1,0]"),
        field("A[0,0,1] + A[4,0,0]"),
        generic(RingSpec::Rational, 3, 1),
        generic(RingSpec::Rational, 4, 2),
    ]
}

#[test]
fn first_page_of_the_rotation() {
    let state = first_page(&field("A[0,0,1]"), 6).unwrap();
    assert_eq!(state.page(), 1);
    for p in 1..=6 {
        if p % 2 == 0 {
            assert_eq!(state.transform_space(p), diagonal_span(p));
            assert_eq!(state.normal_space(p), diagonal_span(p));
        } else {
            assert_eq!(state.transform_dim(p), 0);
            assert_eq!(state.normal_dim(p), 0);
        }
    }
}

#[test]
fn first_page_of_the_euler_field_is_trivial() {
    let state = first_page(&field("A[0,0,0]"), 4).unwrap();
    for p in 1..=4 {
        assert_eq!((state.normal_dim(p), state.transform_dim(p)), (0, 0));
    }
}

#[test]
fn first_page_rejects_bad_linear_parts() {
    assert_eq!(first_page(&field("A[2,0,0]"), 4).unwrap_err(), Error::ZeroLinearPart);
    assert_eq!(first_page(&local("l*A[0,0,1] + A[2,0,0]", 3), 4).unwrap_err(), Error::ZeroLinearPart);
    // rotation plus reflection is nilpotent
    assert!(matches!(first_page(&field("A[0,0,1] + A[0,-2,0]"), 4), Err(Error::NonSemisimple { .. })));
    assert_eq!(first_page(&field("A[-1,-1,0] + A[0,0,1]"), 4).unwrap_err(), Error::ConstantTerms);
    assert_eq!(first_page(&local("A[0,0,1] + l*A[0,-2,0]", 3), 4).unwrap_err(), Error::IncompatibleLinearPart);
}

#[test]
fn first_page_matches_the_oracle() {
    for v0 in ["A[0,0,1]", "A[0,0,0]", "A[0,0,1] + 2*A[0,0,0]", "3*A[0,0,1] - A[0,0,0]"] {
        let v = field(v0);
        let state = first_page(&v, 6).unwrap();
        let res0 = v.linear_part().residue();
        for p in 0..=6 {
            let (kernel, image) = brute_force_first_page(&res0, p).unwrap();
            let dim = GradeBasis::new(p).dim();
            assert_eq!(state.transform_space(p).basis(), &echelon(&kernel, dim)[..], "{v0} at {p}");
            assert_eq!(state.normal_space(p).basis(), &echelon(&kernel, dim)[..]);
            assert_eq!(state.image_space(p).basis(), &echelon(&image, dim)[..]);
        }
    }
}

#[test]
fn first_and_zeroth_page_series_vanish() {
    let state = first_page(&field("A[0,0,1]"), 12).unwrap();
    assert!(page_series(&state, 12).is_zero());
    assert!(page_zero_series(12).is_zero());
}

#[test]
fn removal_of_odd_terms() {
    let mut state = first_page(&field("A[0,0,1] + A[1,1,0]"), 4).unwrap();
    state.normalize_degree(1).unwrap();
    assert!(state.field().part(1).is_zero());
}

#[test]
fn kernel_terms_survive_the_first_page() {
    let mut state = first_page(&field("A[0,0,1] + A[2,0,0]"), 4).unwrap();
    state.normalize_degree(1).unwrap();
    state.turn_page();
    state.normalize_degree(2).unwrap();
    assert_eq!(state.field().part(2), field("A[2,0,0]").part(2));
}

#[test]
fn second_page_removes_only_the_rotation_component() {
    let v = field("A[0,0,1] + A[2,0,0] + A[4,0,0] + A[4,0,1] + A[4,2,0]");
    let state = advance_to_page(&v, 6, 4, EngineConfig::default()).unwrap();
    let part = state.field().part(4);
    assert!(part.iter().all(|(t, _)| *t == a(4, 0, 0)), "{part}");
}

#[test]
fn normalize_degree_checks_its_preconditions() {
    let mut state = first_page(&field("A[0,0,1] + A[2,0,0]"), 4).unwrap();
    assert!(matches!(state.normalize_degree(2), Err(Error::Invariant(_))));
}

#[test]
fn exp_ad_examples() {
    let v = field("A[0,0,1]");
    let one = RingElem::one(RingSpec::Rational);
    assert_eq!(exp_ad(&LinComb::term(a(2, 0, 0), one.clone()), &v, 6).unwrap(), v);
    let w = exp_ad(&LinComb::term(a(1, 1, 0), one), &v, 4).unwrap();
    assert_eq!(w, field("A[0,0,1] - A[1,1,1]"));
}

#[test]
fn linear_fields_are_already_normal() {
    let v = field("A[0,0,1]");
    let nf = unique_normal_form(&v, 10, EngineConfig::default()).unwrap();
    assert_eq!(nf.field, v);
    assert!(nf.log.is_empty());
    for p in (2..=10).step_by(2) {
        assert_eq!(nf.state.transform_space(p), diagonal_span(p));
    }
}

#[test]
fn support_of_normal_forms() {
    let nf = unique_normal_form(&field("A[0,0,1] + A[2,0,0]"), 10, EngineConfig::default()).unwrap();
    let allowed = [a(0, 0, 1), a(2, 0, 0), a(2, 0, 1), a(4, 0, 0)];
    assert!(nf.field.element().iter().all(|(t, _)| allowed.contains(t)));
    assert_eq!(page_series(&nf.state, 8).to_string(), "t^2+t^4");

    let spec = RingSpec::local(3).unwrap();
    let nf = unique_normal_form(&local("A[0,0,1] + A[2,0,1] + l*A[3,1,0]", 3), 10, EngineConfig::default()).unwrap();
    for (t, c) in nf.field.element().iter() {
        let ok = [a(0, 0, 1), a(2, 0, 1)].contains(t) || (t.d() == 0 && t.q() == 0 && !c.is_unit());
        assert!(ok, "{t} with {c}");
        assert_eq!(c.spec(), spec);
    }
}

#[test]
fn differential_matrix_of_the_oscillator() {
    let v = field("A[0,0,1] + 3*A[2,0,0] + 5*A[2,0,1]");
    let state = advance_to_page(&v, 8, 2, EngineConfig::default()).unwrap();
    let d = state.differential(4).unwrap();
    let q = |n: i64| Q::from_integer(n.into());
    assert_eq!(d.domain, vec![LinComb::term(a(4, 0, 0), q(1)), LinComb::term(a(4, 0, 1), q(1))]);
    assert_eq!(d.matrix, linalg::Matrix::from_rows((), 2, &[vec![q(6), q(0)], vec![q(-10), q(12)]]));
    // surjective away from p = r when the A[2r,0,0] coefficient is a unit
    for p in [2, 6] {
        let d = state.differential(p).unwrap();
        assert_eq!(linalg::rank(&d.matrix), if p == 2 { 1 } else { 2 });
    }
    let state = advance_to_page(&local("A[0,0,1] + l*A[2,0,0] + A[2,0,1]", 3), 8, 2, EngineConfig::default()).unwrap();
    assert_eq!(linalg::rank(&state.differential(4).unwrap().matrix), 1);
}

#[test]
fn page_turn_examples() {
    let nf = unique_normal_form(&field("A[0,0,1] + A[4,0,0]"), 12, EngineConfig::default()).unwrap();
    assert_eq!(nf.state.normal_space(8), span_of(8, &[LinComb::term(a(8, 0, 0), q(1))]));
    for p in [6, 10, 12] {
        assert_eq!(nf.state.normal_dim(p), 0, "degree {p}");
    }
    // all differentials vanish for the linear field
    let mut state = first_page(&field("A[0,0,1]"), 6).unwrap();
    state.normalize_degree(1).unwrap();
    let before = profile_of(&state);
    state.turn_page();
    assert_eq!(profile_of(&state), before);

    let nf = unique_normal_form(&field("A[0,0,1] + A[2,0,1]"), 10, EngineConfig::default()).unwrap();
    for p in (2..=8).step_by(2) {
        assert_eq!(nf.state.transform_space(p), span_of(p, &[LinComb::term(a(p, 0, 1), q(1))]));
    }
}

#[test]
fn pages_match_brute_force_ker_and_im() {
    let n = 6;
    for v in inputs() {
        for r in 1..n {
            let state = advance_to_page(&v, n, r, EngineConfig::default()).unwrap();
            let mut turned = state.clone();
            turned.turn_page();
            for p in 1..=(n - r) {
                let target = p + r;
                let d = state.differential(p).unwrap();
                let columns: Vec<Vec<Q>> = (0..d.matrix.cols()).map(|j| d.matrix.column(j)).collect();
                let (kernel, image) = kernel_and_image(&columns, d.matrix.rows());
                let lift = |coeffs: &[Q], basis: &[LinComb<Q>]| {
                    basis.iter().zip(coeffs).fold(LinComb::zero(), |acc, (b, c)| acc.add(&b.scale_q(c)))
                };
                let ker: Vec<LinComb<Q>> = kernel.iter().map(|k| lift(k, &d.domain)).collect();
                assert_eq!(turned.transform_space(p), span_of(p, &ker), "T_{p} on page {r}");
                let hit: Vec<LinComb<Q>> = image.iter().map(|i| lift(i, &d.codomain)).collect();
                assert_eq!(turned.image_space(target), state.image_space(target).sum(&span_of(target, &hit)));
                assert_eq!(turned.normal_dim(target), state.normal_dim(target) - image.len());
            }
        }
    }
}

#[test]
fn dimensions_never_grow() {
    for v in inputs() {
        let n = 10;
        let mut state = first_page(&v, n).unwrap();
        let mut last = profile_of(&state);
        for d in 1..=n {
            state.normalize_degree(d).unwrap();
            state.turn_page();
            let now = profile_of(&state);
            for (x, y) in now.iter().zip(&last) {
                assert!(x.0 <= y.0 && x.1 <= y.1);
            }
            last = now;
        }
        // beyond the truncation nothing moves
        let field = state.field().clone();
        state.turn_page();
        state.turn_page();
        assert_eq!(profile_of(&state), last);
        assert_eq!(state.field(), &field);
    }
}

#[test]
fn lower_degrees_are_untouched() {
    for v in inputs() {
        let n = 8;
        let mut state = first_page(&v, n).unwrap();
        for d in 1..=n {
            let before = state.field().clone();
            state.normalize_degree(d).unwrap();
            for p in 0..d {
                assert_eq!(state.field().part(p), before.part(p), "degree {p} while normalizing {d}");
            }
            state.turn_page();
        }
    }
    // over the local ring the residues are untouched
    let v = generic(RingSpec::local(3).unwrap(), 3, 5);
    let mut state = first_page(&v, 8).unwrap();
    for d in 1..=8 {
        let before = state.field().residue();
        state.normalize_degree(d).unwrap();
        for p in 0..d {
            assert_eq!(state.field().residue().part(p), before.part(p));
        }
        state.turn_page();
    }
}

#[test]
fn normal_forms_are_idempotent() {
    let mut all = inputs();
    all.push(generic(RingSpec::local(3).unwrap(), 3, 9));
    all.push(local("A[0,0,1] + l*A[2,0,0] + A[2,2,1] + A[4,0,0]", 4));
    for v in all {
        let n = 10;
        let nf = unique_normal_form(&v, n, EngineConfig::default()).unwrap();
        let again = unique_normal_form(&nf.field, n, EngineConfig::default()).unwrap();
        assert_eq!(again.field.residue(), nf.field.residue());
        assert!(again.log.iter().all(|g| !g.is_effective()));
        if v.spec() == RingSpec::Rational {
            assert_eq!(again.field, nf.field);
            assert!(again.log.is_empty());
        }
    }
}

#[test]
fn generators_respect_their_page() {
    for v in inputs() {
        let n = 10;
        let nf = unique_normal_form(&v, n, EngineConfig::default()).unwrap();
        let res = nf.field.residue_element();
        for g in &nf.log {
            assert!(g.degree >= 1);
            assert_eq!(g.element.min_degree(), Some(g.degree));
            if g.page == 0 {
                continue;
            }
            let low = res.truncated(g.page - 1);
            let bracket = low.bracket_truncated(&g.element.residue(), g.degree + g.page - 1);
            assert!(bracket.is_zero(), "t_{}^{} brackets to {bracket}", g.degree, g.page);
        }
    }
}

#[test]
fn earlier_stage_changes_differentials_only_in_deeper_filtration() {
    for v in inputs() {
        let n = 8;
        let mut state = first_page(&v, n).unwrap();
        for r in 1..n {
            let previous = state.field().residue_element();
            state.normalize_degree(r).unwrap();
            let current = state.field().residue_element();
            for p in 1..=(n - r) {
                for chain in state.transform_chains(p) {
                    let diff = current.bracket_truncated(&chain, n).sub(&previous.bracket_truncated(&chain, n));
                    assert!(diff.min_degree().is_none_or(|d| d >= p + r), "page {r}, degree {p}");
                }
            }
            state.turn_page();
        }
    }
}

#[test]
fn descending_pivots_change_only_the_choice_of_complement() {
    let v = generic(RingSpec::Rational, 3, 4);
    let up = unique_normal_form(&v, 8, EngineConfig::default()).unwrap();
    let down = unique_normal_form(&v, 8, EngineConfig { pivot_order: PivotOrder::Descending }).unwrap();
    assert_eq!(profile_of(&up.state), profile_of(&down.state));
}
