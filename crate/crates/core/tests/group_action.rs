use std::collections::BTreeSet;

use invpoly::factor::random_irreducible_with;
use invpoly::pgl2::{random_element, random_subgroup};
use invpoly::{is_irreducible, Embedding, Field, P1Value, Poly, ProjElement, Subgroup};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORDERS: [u128; 6] = [2, 3, 4, 5, 7, 9];

fn setup(i: usize, seed: u64) -> (Field, ChaCha8Rng) {
    (
        Field::from_order(ORDERS[i % ORDERS.len()]).unwrap(),
        ChaCha8Rng::seed_from_u64(seed),
    )
}

/// Points of the projective line over `field`.
fn line(field: &Field) -> Vec<P1Value> {
    field
        .elements()
        .map(P1Value::Finite)
        .chain([P1Value::Infinity])
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn star_is_a_right_action(i in 0usize..6, seed in any::<u64>()) {
        let (f, mut r) = setup(i, seed);
        let a = random_element(&f, &mut r);
        let b = random_element(&f, &mut r);
        // irreducibles of degree >= 2 have no rational roots, so degrees never drop
        let d = r.gen_range(2..=4);
        let g = random_irreducible_with(&f, d, &mut r);
        let ab = a.mul(&b, &f);
        prop_assert_eq!(ab.star_transform(&g).unwrap(), b.star_transform(&a.star_transform(&g).unwrap()).unwrap());
        prop_assert_eq!(ProjElement::identity().star_transform(&g).unwrap(), g.clone());
        let ag = a.star_transform(&g).unwrap();
        prop_assert_eq!(ag.deg(), g.deg());
        prop_assert!(is_irreducible(&ag).unwrap());
    }

    #[test]
    fn star_is_multiplicative(i in 0usize..6, seed in any::<u64>()) {
        let (f, mut r) = setup(i, seed);
        let a = random_element(&f, &mut r);
        let g = random_irreducible_with(&f, r.gen_range(2..=3), &mut r);
        let h = random_irreducible_with(&f, r.gen_range(2..=3), &mut r);
        let lhs = a.star_transform(&(&g * &h)).unwrap();
        let rhs = &a.star_transform(&g).unwrap() * &a.star_transform(&h).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn roots_move_by_the_inverse(i in 0usize..6, seed in any::<u64>()) {
        let (f, mut r) = setup(i, seed);
        let a = random_element(&f, &mut r);
        let inv = a.inverse(&f);
        let roots: BTreeSet<_> = (0..3).map(|_| invpoly::factor::random_elem(&f, &mut r)).collect();
        let g = Poly::from_roots(&f, roots.iter().copied());
        // A*g keeps its degree only when no root of g maps to infinity under A^-1
        let images: Vec<P1Value> = roots.iter().map(|&v| inv.mobius_apply(P1Value::Finite(v), &f)).collect();
        prop_assume!(images.iter().all(|v| !v.is_infinity()));
        let moved = a.star_transform(&g).unwrap();
        let expected = Poly::from_roots(&f, images.iter().map(|v| v.finite().unwrap()));
        prop_assert_eq!(moved, expected);
    }

    #[test]
    fn orbit_stabilizer(i in 0usize..6, seed in any::<u64>()) {
        let (f, mut r) = setup(i, seed);
        let g = random_subgroup(&f, 60, &mut r);
        for v in line(&f) {
            let (orbit, stab) = g.point_orbit(v);
            prop_assert_eq!(orbit.len() * stab, g.order());
        }
    }

    #[test]
    fn mobius_permutes_the_line(i in 0usize..6, seed in any::<u64>()) {
        let (f, mut r) = setup(i, seed);
        let a = random_element(&f, &mut r);
        let points = line(&f);
        let images: BTreeSet<P1Value> = points.iter().map(|&v| a.mobius_apply(v, &f)).collect();
        prop_assert_eq!(images.len(), points.len());
    }
}

#[test]
fn degree_drop_is_reported() {
    let f = Field::from_order(5).unwrap();
    // 1/x sends the root 0 to infinity
    assert!(ProjElement::swap().star_transform(&Poly::x(&f).pow(2)).is_err());
    let g = &Poly::x(&f) * &Poly::from_ints(&f, &[1, 1]);
    assert!(ProjElement::swap().star_transform(&g).is_err());
}

#[test]
fn lifted_groups_keep_their_order() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let f = Field::from_order(3).unwrap();
    let big = Field::from_order(27).unwrap();
    let emb = Embedding::new(&f, &big).unwrap();
    for _ in 0..20 {
        let g = random_subgroup(&f, 60, &mut r);
        let lifted = g.lift(&big).unwrap();
        assert_eq!(lifted.order(), g.order());
        for a in g.elements() {
            assert!(lifted.contains(&a.embed(&emb)));
        }
    }
    assert_eq!(Subgroup::full_pgl2(&f, 3).unwrap().order(), 24);
}
