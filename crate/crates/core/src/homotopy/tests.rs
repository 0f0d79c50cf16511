use super::*;
use crate::quiver::DimVector;

fn nil_hecke(n: usize) -> KlrAlgebra {
    KlrAlgebra::new(&"A1".parse().unwrap(), &DimVector::new(vec![n])).unwrap()
}

fn complex<A: GradedAlgebra>(alg: &A, gens: &[(usize, i64, i64)], entries: &[(usize, usize, &str)]) -> GradedComplex<A::Elem> {
    GradedComplex::new(
        gens.iter().map(|&(i, s, c)| GenSpec::new(i, s, c)).collect(),
        entries
            .iter()
            .map(|&(l, k, t)| ((l, k), alg.parse(t).unwrap()))
            .collect(),
    )
}

#[test]
fn validation_examples() {
    let a = nil_hecke(2);
    validate(&a, &GradedComplex::zero()).unwrap();
    validate(&a, &complex(&a, &[(0, 0, 0), (0, 1, 1)], &[(1, 0, "x1")])).unwrap();
    let bad_degree = complex(&a, &[(0, 0, 0), (0, 2, 1)], &[(1, 0, "x1")]);
    assert!(matches!(validate(&a, &bad_degree), Err(Error::InvalidComplex(_))));
    let bad_square = complex(&a, &[(0, 0, 0), (0, 1, 1), (0, 2, 2)], &[(1, 0, "x1"), (2, 1, "x2")]);
    assert!(validate(&a, &bad_square).unwrap_err().to_string().contains("d^2"));
    let good_square = complex(&a, &[(0, 0, 0), (0, -1, 1), (0, -2, 2)], &[(1, 0, "psi1"), (2, 1, "psi1")]);
    validate(&a, &good_square).unwrap();
    let skips = complex(&a, &[(0, 0, 0), (0, 1, 2)], &[(1, 0, "x1")]);
    assert!(validate(&a, &skips).is_err());
}

#[test]
fn shift_and_twist() {
    let a = nil_hecke(2);
    let c = complex(&a, &[(0, 0, 0), (0, 1, 1)], &[(1, 0, "x1")]);
    assert_eq!(shift(&a, &shift(&a, &c, 1), -1), c);
    let e = euler_symbol(&c);
    let e1 = euler_symbol(&shift(&a, &c, 1));
    assert!(e.iter().all(|(k, v)| e1[k] == -v));
    let d = complex(&a, &[(0, 3, 2)], &[]);
    assert_eq!(twist(&direct_sum(&c, &d), 2), direct_sum(&twist(&c, 2), &twist(&d, 2)));
    validate(&a, &twist(&shift(&a, &c, 3), -1)).unwrap();
    assert_eq!(euler_symbol(&complex(&a, &[(0, 0, 0)], &[])), BTreeMap::from([((0, 0), 1)]));
}

#[test]
fn cone_of_identity_is_contractible() {
    let a = nil_hecke(2);
    let c = complex(&a, &[(0, 0, 0), (0, 1, 1)], &[(1, 0, "x1")]);
    let cone_id = cone(&a, &identity_map(&a, &c)).unwrap();
    validate(&a, &cone_id).unwrap();
    assert!(euler_symbol(&cone_id).is_empty());
    let m = minimize(&a, &cone_id).unwrap();
    assert!(m.complex.is_empty());
    assert_eq!(m.cancellations.len(), 2);
}

#[test]
fn cone_of_zero_map_splits() {
    let a = SmashAlgebra::new(2).unwrap();
    let src = complex(&a, &[(0, 0, 0), (0, 1, 1)], &[(1, 0, "x1")]);
    let tgt = complex(&a, &[(0, 0, 0)], &[]);
    let f = ChainMap {
        source: src.clone(),
        target: tgt.clone(),
        entries: Matrix::new(),
    };
    let c = cone(&a, &f).unwrap();
    assert!(equal_up_to_reordering(&a, &c, &direct_sum(&tgt, &shift(&a, &src, 1))));
    let mut want = euler_symbol(&tgt);
    for (k, v) in euler_symbol(&src) {
        *want.entry(k).or_default() -= v;
    }
    want.retain(|_, v| *v != 0);
    assert_eq!(euler_symbol(&c), want);
}

#[test]
fn non_chain_maps_are_rejected() {
    let a = nil_hecke(2);
    let src = complex(&a, &[(0, 0, 0)], &[]);
    let tgt = complex(&a, &[(0, 0, 0), (0, 1, 1)], &[(1, 0, "x1")]);
    let f = ChainMap {
        source: src,
        target: tgt,
        entries: BTreeMap::from([((0, 0), a.idempotent(0))]),
    };
    assert!(matches!(cone(&a, &f), Err(Error::NotChainMap(_))));
}

#[test]
fn minimal_complexes_are_fixed() {
    let a = nil_hecke(2);
    let c = complex(&a, &[(0, 0, 0), (0, 1, 1)], &[(1, 0, "x1")]);
    let m = minimize(&a, &c).unwrap();
    assert_eq!(m.complex, c);
    assert!(m.cancellations.is_empty());
    assert_eq!(m.equality_bound, Some(1));
}

#[test]
fn schur_complement_by_hand() {
    // generators a, z in degree 0 and b, w in degree 1; the unit 2 + s1 joins a to b
    let alg = SmashAlgebra::new(2).unwrap();
    let c = complex(
        &alg,
        &[(0, 0, 0), (0, -1, 0), (0, 0, 1), (0, 0, 1)],
        &[(2, 0, "2 + s1"), (2, 1, "x1"), (3, 0, "1 + s1"), (3, 1, "x2")],
    );
    validate(&alg, &c).unwrap();
    let m = minimize(&alg, &c).unwrap();
    assert_eq!(m.cancellations, vec![(0, 2)]);
    // x2 - (1 + s1) (2 + s1)^{-1} x1 with (2 + s1)^{-1} = (2 - s1)/3
    let want = complex(&alg, &[(0, -1, 0), (0, 0, 1)], &[(1, 0, "x2 - 1/3*x1 - 1/3*x2*s1")]);
    assert_eq!(m.complex, want);
}

#[test]
fn weight_truncation_examples() {
    let a = nil_hecke(2);
    let conc = complex(&a, &[(0, 0, 0), (0, 1, 0)], &[]);
    let t = weight_truncate(&a, &conc, 0).unwrap();
    assert!(t.upper.is_empty());
    assert_eq!(t.lower, conc);
    let t = weight_truncate(&a, &conc, -5).unwrap();
    assert_eq!(t.upper, conc);
    assert!(t.lower.is_empty());

    let two = complex(&a, &[(0, 0, 0), (0, 1, 1)], &[(1, 0, "x1")]);
    let t = weight_truncate(&a, &two, 0).unwrap();
    assert_eq!(t.upper.gens, vec![GenSpec::new(0, 1, 1)]);
    assert_eq!(t.lower.gens, vec![GenSpec::new(0, 0, 0)]);
    let c = cone(&a, &t.inclusion).unwrap();
    let m = minimize(&a, &c).unwrap().complex;
    assert!(equal_up_to_reordering(&a, &m, &minimize(&a, &t.lower).unwrap().complex));
}

#[test]
fn reordering_is_detected() {
    let a = nil_hecke(2);
    let c = complex(&a, &[(0, 0, 0), (0, 1, 1), (0, 5, 0)], &[(1, 0, "x1")]);
    let d = complex(&a, &[(0, 5, 0), (0, 1, 1), (0, 0, 0)], &[(1, 2, "x1")]);
    assert!(equal_up_to_reordering(&a, &c, &d));
    let e = complex(&a, &[(0, 5, 0), (0, 1, 1), (0, 0, 0)], &[(1, 2, "x2")]);
    assert!(!equal_up_to_reordering(&a, &c, &e));
}

#[test]
fn klr_corpus_sample() {
    use rand::SeedableRng;
    let a = KlrAlgebra::new(&"A2".parse().unwrap(), &DimVector::new(vec![2, 1])).unwrap();
    let bank = random::Bank::new(&a);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let c = random::random_complex(&a, &bank, &mut rng);
        validate(&a, &c).unwrap();
        let m = minimize(&a, &c).unwrap();
        validate(&a, &m.complex).unwrap();
        assert_eq!(euler_symbol(&m.complex), euler_symbol(&c));
    }
}
