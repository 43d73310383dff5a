mod common;

use common::q;
use passi_core::group_ring::{filtration_degree, magnus, reduce, zeta, FiltrationDegree, FreeWord};
use passi_core::johnson::{
    apply_derivation, classify_monomial, delta_phi_table, kind_counts, DerivationTable,
    MonomialType,
};
use passi_core::limits::{truncated_dim, SizeLimit};
use passi_core::linalg::{kernel_by_elimination, SparseMatrix};
use passi_core::mcg::{
    action_matrix, braid_defect, derivation_from_endo, fixed_space, standard_genset,
    truncated_coordinates, Endo, GenSet,
};
use passi_core::tensor::{wedge, GenLetter, Monomial};
use passi_core::{Poly, RatMatrix, Rational};
use proptest::prelude::*;

const G: SizeLimit = SizeLimit::GROUP_RING;

fn word(genus: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((0..2 * genus, prop::bool::ANY), 0..10).prop_map(move |v| {
        reduce(
            genus,
            v.into_iter()
                .map(|(c, s)| (GenLetter::from_code(c), if s { 1 } else { -1 })),
        )
        .unwrap()
    })
}

fn monomial(genus: usize, degree: usize) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..2 * genus, degree)
        .prop_map(|codes| Monomial::new(codes.into_iter().map(GenLetter::from_code).collect()))
}

fn homogeneous(genus: usize, degree: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((monomial(genus, degree), -3i64..=3), 0..5).prop_map(move |terms| {
        Poly::from_terms(genus, terms.into_iter().map(|(m, c)| (m, q(c)))).unwrap()
    })
}

fn mixed(genus: usize) -> impl Strategy<Value = Poly> {
    (
        homogeneous(genus, 0),
        homogeneous(genus, 1),
        homogeneous(genus, 2),
        homogeneous(genus, 3),
    )
        .prop_map(|(a, b, c, d)| &(&a + &b) + &(&c + &d))
}

fn table(genus: usize) -> impl Strategy<Value = DerivationTable<Rational>> {
    prop::collection::vec(homogeneous(genus, 2), 2 * genus).prop_map(move |images| {
        DerivationTable::new(
            genus,
            images
                .into_iter()
                .enumerate()
                .map(|(c, p)| (GenLetter::from_code(c), p)),
        )
        .unwrap()
    })
}

/// An element of the group generated by the shipped set.
fn mapping_class(genus: usize) -> impl Strategy<Value = Endo> {
    let gens = standard_genset(genus).unwrap();
    let n = gens.len();
    prop::collection::vec((0..n, prop::bool::ANY), 0..4).prop_map(move |picks| {
        picks
            .into_iter()
            .fold(Endo::identity(genus), |acc, (i, inv)| {
                let e = &gens.generators()[i];
                acc.compose(&if inv {
                    e.inverse_endo().unwrap()
                } else {
                    e.clone()
                })
            })
    })
}

fn conjugate(h: &Endo, e: &Endo) -> Endo {
    h.compose(e).compose(&h.inverse_endo().unwrap())
}

proptest! {
    #[test]
    fn product_is_associative_with_unit(p in mixed(2), r in mixed(2), s in mixed(2)) {
        prop_assert_eq!(&(&p * &r) * &s, &p * &(&r * &s));
        prop_assert_eq!(&Poly::one(2) * &p, p.clone());
        prop_assert_eq!(&p * &Poly::one(2), p);
    }

    #[test]
    fn truncation_commutes_with_product(p in mixed(2), r in mixed(2), k in 0usize..6) {
        prop_assert_eq!((&p * &r).truncate(k), &p.clone().truncate(k) * &r.clone().truncate(k));
    }

    #[test]
    fn wedge_is_antisymmetric(x in homogeneous(3, 1), y in homogeneous(3, 1)) {
        prop_assert_eq!(wedge(&x, &y).unwrap(), -&wedge(&y, &x).unwrap());
        prop_assert!(wedge(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn magnus_is_multiplicative(u in word(3), v in word(3), k in 0usize..=4) {
        prop_assert_eq!(magnus::<Rational>(&u.mul(&v), k), &magnus(&u, k) * &magnus(&v, k));
        prop_assert_eq!(&magnus::<Rational>(&u.inverse(), k) * &magnus(&u, k), Poly::one(3).truncate(k));
    }

    #[test]
    fn magnus_leading_terms(w in word(2), k in 1usize..=3) {
        let m = magnus::<Rational>(&w, k);
        prop_assert_eq!(m.coeff(&Monomial::unit()), q(1));
        for (code, e) in w.abelianization().into_iter().enumerate() {
            prop_assert_eq!(m.coeff(&Monomial::new(vec![GenLetter::from_code(code)])), q(e));
        }
    }

    #[test]
    fn fox_correspondence(ws in prop::collection::vec(word(2), 1..=4)) {
        let k = ws.len();
        let one = Poly::one(2).truncate(k);
        let product = ws.iter().fold(one.clone(), |acc, w| &acc * &(&magnus::<Rational>(w, k) - &one));
        let classes = ws.iter().fold(Poly::one(2), |acc, w| {
            let h = Poly::from_terms(2, w.abelianization().into_iter().enumerate()
                .map(|(c, e)| (Monomial::new(vec![GenLetter::from_code(c)]), q(e)))).unwrap();
            &acc * &h
        });
        prop_assert_eq!(product.grade_component(k), classes);
    }

    #[test]
    fn commutators_lie_in_the_square_of_the_augmentation_ideal(u in word(2), v in word(2), k in 0usize..=4) {
        let c = FreeWord::commutator(&u, &v);
        let d = &magnus::<Rational>(&c, k) - &Poly::one(2);
        match filtration_degree(&d) {
            FiltrationDegree::Degree(n) => prop_assert!(n >= 2),
            FiltrationDegree::AboveTruncation => {}
        }
    }

    #[test]
    fn derivations_satisfy_leibniz(t in table(2), p in mixed(2), r in mixed(2)) {
        let lhs = apply_derivation(&t, &(&p * &r)).unwrap();
        let rhs = &(&apply_derivation(&t, &p).unwrap() * &r) + &(&p * &apply_derivation(&t, &r).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_phi_on_chord_type_monomials(m in monomial(3, 4)) {
        let t = delta_phi_table::<Rational>(3).unwrap();
        let image = apply_derivation(&t, &Poly::monomial(3, m.clone(), q(1))).unwrap();
        let (a, b) = kind_counts(&m);
        for (y, _) in image.terms() {
            prop_assert_eq!(kind_counts(y), (a, b + 1));
        }
        if classify_monomial(&m, 2).is_x() {
            prop_assert!(!image.is_zero());
            for (y, c) in image.terms() {
                prop_assert_eq!(classify_monomial(y, 2), MonomialType::Y);
                prop_assert!(*c == q(1) || *c == q(-1));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn actions_preserve_the_filtration(e in mapping_class(2), k in 1usize..=3) {
        let a: RatMatrix = action_matrix(&e, k, G).unwrap();
        let degree_of = |i: usize| (0..=k).find(|&d| i < truncated_dim(2, d)).unwrap();
        for (r, c, _) in a.triplets() {
            prop_assert!(degree_of(r) >= degree_of(c));
        }
    }

    #[test]
    fn boundary_powers_are_fixed(e in mapping_class(2), n in -2i64..=2) {
        let z = zeta(2).unwrap().pow(n);
        prop_assert_eq!(e.apply(&z), z.clone());
        let v = truncated_coordinates(&magnus::<Rational>(&z, 3));
        prop_assert_eq!(action_matrix::<Rational>(&e, 3, G).unwrap().mul_vec(&v), v);
    }

    #[test]
    fn torelli_derivations_match_the_first_off_diagonal_block(h in mapping_class(2), m in monomial(2, 2)) {
        let e = conjugate(&h, &braid_defect(2).unwrap());
        let t = derivation_from_endo::<Rational>(&e).unwrap();
        let p = Poly::monomial(2, m.clone(), q(1));
        let direct = apply_derivation(&t, &p).unwrap();
        let a = action_matrix::<Rational>(&e, 3, G).unwrap();
        let col = a.mul_vec(&truncated_coordinates(&p));
        let image = passi_core::mcg::from_truncated_coordinates(2, 3, &col);
        prop_assert_eq!(image.grade_component(2), p.clone());
        prop_assert_eq!(image.grade_component(3), direct);
        prop_assert!(apply_derivation(&t, &passi_core::tensor::omega(2).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn fixed_spaces_shrink_as_generators_are_added(mask in prop::collection::vec(prop::bool::ANY, 5), extra in 0usize..5) {
        let all = standard_genset(2).unwrap();
        let chosen: Vec<Endo> = all.generators().iter().zip(&mask).filter(|(_, b)| **b).map(|(e, _)| e.clone()).collect();
        let small = GenSet::new("subset", 2, chosen.clone()).unwrap();
        let mut more = chosen;
        more.push(all.generators()[extra].clone());
        let large = GenSet::new("superset", 2, more).unwrap();
        let fs = fixed_space::<Rational>(&small, 2, G).unwrap();
        let fl = fixed_space::<Rational>(&large, 2, G).unwrap();
        prop_assert!(fs.contains_subspace(&fl));
    }

    #[test]
    fn modular_kernel_agrees_with_exact_elimination(
        entries in prop::collection::vec((0usize..12, 0usize..10, -4i64..=4, 1i64..=3), 0..40)
    ) {
        let mut seen = std::collections::BTreeSet::new();
        let triplets: Vec<(usize, usize, Rational)> = entries
            .into_iter()
            .filter(|(r, c, _, _)| seen.insert((*r, *c)))
            .map(|(r, c, n, d)| (r, c, Rational::new(n.into(), d.into())))
            .collect();
        let m = SparseMatrix::from_triplets(12, 10, triplets).unwrap();
        let fast = passi_core::linalg::modular::certified_kernel(&m);
        prop_assert_eq!(&fast, &kernel_by_elimination(&m));
        for v in fast.basis() {
            prop_assert!(m.mul_vec(v).is_empty());
        }
    }
}
