use std::sync::Arc;

use galmod::fixtures::{random_descriptor, random_lattice, small_groups};
use galmod::linalg::solve_linear_integer_detailed;
use galmod::{
    h1, h1_cyclic_oracle, hom_lattice, is_invertible, is_unimodular, kernel_basis, permutation_lattice,
    restrict_action, smith_normal_form, Integer, IntegerMatrix, Subgroup,
};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix_strategy(max_dim: usize, range: i64) -> impl Strategy<Value = IntegerMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-range..=range, r * c)
            .prop_map(move |data| IntegerMatrix::new(r, c, data.into_iter().map(Integer::from).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_form_invariants(a in matrix_strategy(6, 9)) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(&(&snf.u * &a) * &snf.v, snf.s.clone());
        prop_assert!(is_unimodular(&snf.u).unwrap());
        prop_assert!(is_unimodular(&snf.v).unwrap());
        let d = snf.diagonal();
        for i in 0..snf.s.rows() {
            for j in 0..snf.s.cols() {
                if i != j {
                    prop_assert!(snf.s.get(i, j).is_zero());
                }
            }
        }
        for w in d.windows(2) {
            prop_assert!(w[0] >= Integer::zero());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn kernel_rank_nullity(a in matrix_strategy(6, 4)) {
        let k = kernel_basis(&a);
        prop_assert_eq!(k.cols() + a.rank(), a.cols());
        prop_assert!((&a * &k).is_zero());
    }

    #[test]
    fn solvability_matches_smith_criterion(a in matrix_strategy(5, 5), seed in any::<u64>()) {
        // right-hand sides in the image are always solvable
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = galmod::fixtures::random_matrix(&mut rng, a.cols(), 1, -3, 3).column(0);
        let b = a.mul_vec(&x).unwrap();
        let sol = solve_linear_integer_detailed(&a, &b).unwrap();
        prop_assert!(sol.is_ok());
        let sol = sol.unwrap();
        prop_assert_eq!(a.mul_vec(&sol.x0).unwrap(), b.clone());
        // doubling the system makes odd right-hand sides unsolvable
        let two = a.scale(&Integer::from(2));
        let odd: Vec<Integer> = b.iter().map(|v| v * 2 + 1).collect();
        prop_assert!(solve_linear_integer_detailed(&two, &odd).unwrap().is_err());
    }
}

#[test]
fn cocycle_method_matches_cyclic_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..60 {
        let m = random_lattice(&mut rng, 4, 12, 2);
        let g = m.group();
        for x in 0..g.order() {
            let c = Subgroup::generated_by(g, &[x]);
            assert_eq!(h1(&m, &c), h1_cyclic_oracle(&m, x));
        }
    }
}

#[test]
fn permutation_lattices_have_no_cohomology_and_are_invertible() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for (name, g) in small_groups() {
        for _ in 0..3 {
            let d = random_descriptor(&mut rng, &g, 2);
            let p = permutation_lattice(&g, &d).unwrap();
            for h in g.catalog().classes() {
                assert!(h1(&p, h).is_trivial(), "{name} {d:?}");
            }
            if p.rank() <= 12 {
                assert!(is_invertible(&p).unwrap().invertible, "{name} {d:?}");
            }
        }
    }
}

#[test]
fn invertibility_implies_vanishing_and_restricts() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..25 {
        let m = random_lattice(&mut rng, 3, 8, 2);
        let inv = is_invertible(&m).unwrap();
        let classes = m.group().catalog().classes().to_vec();
        let vanishing = classes.iter().all(|h| h1(&m, h).is_trivial());
        if inv.invertible {
            assert!(vanishing);
            for h in &classes {
                let r = restrict_action(&m, h).unwrap();
                assert!(is_invertible(&r).unwrap().invertible);
            }
        } else {
            assert!(inv.obstruction.is_some());
        }
    }
}

#[test]
fn hom_basis_is_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let m = random_lattice(&mut rng, 3, 12, 2);
        let n = galmod::GLattice::trivial(Arc::clone(m.group_arc()), 2);
        for t in hom_lattice(&m, &m).unwrap().into_iter() {
            for &g in m.group().generators() {
                assert_eq!(&t * m.action(g), m.action(g) * &t);
            }
        }
        for t in hom_lattice(&m, &n).unwrap() {
            for &g in m.group().generators() {
                assert_eq!(&t * m.action(g), t);
            }
        }
    }
}
