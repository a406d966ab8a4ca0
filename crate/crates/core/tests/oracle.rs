use nfspectral::coeff::q;
use nfspectral::oracle::*;
use nfspectral::*;
use proptest::prelude::*;

#[test]
fn structure_constants_agree_with_monomials() {
    let report = check_structure_constants(6);
    assert!(report.passed(), "{:?}", report.mismatches.first());
    assert_eq!(report.pairs_checked, terms_up_to(6).len().pow(2));
}

#[test]
fn a_wrong_table_is_caught() {
    let report = check_structure_constants_with(2, |a, b| {
        let mut cs = abasis::structure_constants(a, b).map_err(|e| e.to_string())?;
        if a == ATerm::new(1, 1, 0).unwrap() && b == ATerm::new(1, -1, 1).unwrap() {
            cs.iter_mut().for_each(|c| c.1 *= 2);
            cs.push((ATerm::new(2, 0, 0).unwrap(), 1));
        }
        Ok(cs)
    });
    assert_eq!(report.mismatches.len(), 1);
    assert_eq!(report.mismatches[0].left, ATerm::new(1, 1, 0).unwrap());
}

#[test]
fn jacobi_on_sampled_triples() {
    for seed in [1, 2, 3] {
        let report = check_jacobi(200, 8, seed);
        assert!(report.passed(), "seed {seed}: {:?}", report.failures.first());
    }
    assert_eq!(random_triples(5, 8, 11), random_triples(5, 8, 11));
}

#[test]
fn monomial_round_trip() {
    for t in terms_up_to(5) {
        let e = LinComb::term(t, q(3));
        assert_eq!(from_monomials(&element_to_monomials(&e)).unwrap(), e);
    }
}

#[test]
fn kernel_and_image_of_a_small_matrix() {
    // columns (1,1), (2,2), (0,1)
    let columns = vec![vec![q(1), q(1)], vec![q(2), q(2)], vec![q(0), q(1)]];
    let (ker, im) = kernel_and_image(&columns, 2);
    assert_eq!(ker.len(), 1);
    assert_eq!(im.len(), 2);
}

fn any_term() -> impl Strategy<Value = ATerm> {
    (-1i32..=6).prop_flat_map(|s| {
        let n = GradeBasis::new(s).dim();
        (0..n).prop_map(move |i| GradeBasis::new(s).terms()[i])
    })
}

proptest! {
    #[test]
    fn bracket_is_antisymmetric(a in any_term(), b in any_term()) {
        let (x, y) = (LinComb::term(a, q(1)), LinComb::term(b, q(1)));
        prop_assert!(x.bracket(&y).add(&y.bracket(&x)).is_zero());
    }

    #[test]
    fn bracket_adds_degrees(a in any_term(), b in any_term()) {
        let z = LinComb::term(a, q(1)).bracket(&LinComb::term(b, q(1)));
        prop_assert!(z.iter().all(|(t, _)| t.degree() == a.degree() + b.degree()));
    }

    #[test]
    fn abstract_and_monomial_brackets_agree(a in any_term(), b in any_term()) {
        let (x, y) = (LinComb::term(a, q(1)), LinComb::term(b, q(1)));
        let m = mono_bracket(&element_to_monomials(&x), &element_to_monomials(&y));
        prop_assert_eq!(element_to_monomials(&x.bracket(&y)), m);
    }
}
