use nfspectral::anharmonic::{table_series, verify};
use nfspectral::*;

fn field(text: &str) -> GradedField {
    parse_field(RingSpec::Rational, text).unwrap()
}

fn local(text: &str) -> GradedField {
    parse_field(RingSpec::local(3).unwrap(), text).unwrap()
}

fn assert_verified(text: &str, n: i32, case: CaseLabel) {
    let v = field(text);
    let ver = verify(&v, n, EngineConfig::default()).unwrap();
    assert_eq!(ver.case, case, "{text}");
    assert!(ver.agrees(), "{text}: rows {:?}\n{}\n{}", ver.mismatched_rows, ver.engine, ver.closed_form);
    assert!(ver.conclusive);
    assert_eq!(table_series(&ver.engine), series(case).poly);
}

#[test]
fn larger_parameters_match_the_closed_form() {
    assert_verified("A[0,0,1] + A[8,0,0]", 18, CaseLabel::Upper { r: 4 });
    assert_verified("A[0,0,1] + A[2,0,1] + A[8,0,0]", 18, CaseLabel::Lower { r: 1, q: 4 });
    assert_verified("A[0,0,1] + A[4,0,1] + A[8,0,0]", 18, CaseLabel::Lower { r: 2, q: 4 });
    assert_verified("A[0,0,1] + A[6,0,1] + A[8,0,0]", 18, CaseLabel::Lower { r: 3, q: 4 });
    assert_verified("A[0,0,1] + A[6,0,1]", 18, CaseLabel::LowerInfinite { r: 3 });
}

#[test]
fn nonunit_coefficients_and_extra_terms_keep_the_case() {
    assert_verified("A[0,0,1] - 3/2*A[2,0,0] + A[3,1,1] + 7*A[4,2,0]", 10, CaseLabel::Upper { r: 1 });
    assert_verified(
        "A[0,0,1] + 5*A[2,0,1] + A[2,-2,0] - 2/3*A[4,0,0] + A[4,-2,1]",
        10,
        CaseLabel::Lower { r: 1, q: 2 },
    );
    assert_verified("-2*A[0,0,1] + A[4,0,0]", 12, CaseLabel::Upper { r: 2 });
}

#[test]
fn classification_reads_units_in_the_residue_field() {
    let v = local("A[0,0,1] + l*A[2,0,0] + A[4,0,0]");
    assert_eq!(classify(&v, 10).unwrap(), CaseLabel::Upper { r: 2 });
    let v = local("A[0,0,1] + l*A[2,0,0] + l*A[2,0,1]");
    assert_eq!(classify(&v, 10).unwrap(), CaseLabel::LinearOnly);
    assert_eq!(series(CaseLabel::LinearOnly).codim, Codim::Undetermined);
}

#[test]
fn classification_rejects_bad_input() {
    assert_eq!(classify(&field("A[0,0,0] + A[2,0,0]"), 10).unwrap_err(), Error::WrongLinearPart);
    assert_eq!(classify(&field("A[0,0,1] + A[0,0,0]"), 10).unwrap_err(), Error::WrongLinearPart);
    assert!(matches!(classify(&field("A[0,0,1]"), 7), Err(Error::InvalidTruncation(_))));
    assert!(matches!(CaseLabel::lower(2, 2), Err(Error::InvalidCase(_))));
}

#[test]
fn index_and_codimension() {
    let cases = [
        (CaseLabel::Upper { r: 3 }, 6, Codim::Finite(5)),
        (CaseLabel::Lower { r: 2, q: 3 }, 6, Codim::Finite(4)),
        (CaseLabel::LowerInfinite { r: 2 }, 2, Codim::Infinite),
    ];
    for (case, index, codim) in cases {
        let s = series(case);
        assert_eq!((s.index, s.codim), (index, codim), "{case}");
        assert_eq!(index_summary(case), index);
    }
}

#[test]
fn scaling_makes_the_leading_unit_one() {
    let v = field("A[0,0,1] + 4*A[2,0,0] + A[4,0,1]");
    let w = scale_leading(&v).unwrap();
    assert_eq!(w, field("A[0,0,1] + A[2,0,0] + 1/16*A[4,0,1]"));
    assert_eq!(classify(&w, 10).unwrap(), classify(&v, 10).unwrap());
    // odd degrees force a square root of 1/2
    assert!(matches!(scale_leading(&field("A[0,0,1] + 2*A[2,0,0] + A[3,1,0]")), Err(Error::NoExactRoot { .. })));
    assert_eq!(scale_leading(&field("A[0,0,1]")).unwrap_err(), Error::NoUnitToScale);
}

#[test]
fn madic_refinement_levels() {
    let report = madic_refine(&local("A[0,0,1] + l*A[2,0,0] + A[4,0,0]"), 10, 3).unwrap();
    assert_eq!(report.levels, vec![(0, CaseLabel::Upper { r: 2 }), (1, CaseLabel::Upper { r: 1 })]);
    assert!(!report.complement_sensitive);
    assert_eq!(report.generating_function_text(), "(2t^2+t^4+t^8) + u*(t^2+t^4)");

    let report = madic_refine(&local("A[0,0,1]"), 10, 3).unwrap();
    assert_eq!(report.levels, vec![(0, CaseLabel::LinearOnly)]);
    assert_eq!(report.generating_function_text(), "0");

    let report = madic_refine(&field("A[0,0,1] + A[2,0,0]"), 10, 3).unwrap();
    assert_eq!(report.levels, vec![(0, CaseLabel::Upper { r: 1 })]);
}

#[test]
fn pivot_order_does_not_change_the_tables() {
    let v = field("A[0,0,1] + A[2,0,1] + A[6,0,0]");
    let up = verify(&v, 14, EngineConfig::default()).unwrap();
    let down = verify(&v, 14, EngineConfig { pivot_order: PivotOrder::Descending }).unwrap();
    assert_eq!(up.engine, down.engine);
}
