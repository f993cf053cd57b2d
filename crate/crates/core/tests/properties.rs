use std::sync::Arc;

use proptest::prelude::*;

use twk_core::boxtensor::{box_morphism, box_type_d, check_da, elementary_module, identity_da, split_pair_name};
use twk_core::cmdfunctor::{cmd_morphism, cmd_object, uncmd, uncmd_morphism};
use twk_core::format::{parse, to_json, Morphism, Object};
use twk_core::kernel::{strand_algebra_torus, torus_algebra, BitMatrix, PathAlgebra};
use twk_core::models::bsd_infty;
use twk_core::random::{
    random_closed_morphism, random_dd, random_flip_module, random_map, random_structure, random_typewriter,
    random_typewriter_morphism, seeded,
};
use twk_core::typed::{
    check_structure, compose_morphisms, cone, equivalent, identity_morphism, reduce, CoeffMap, TypeDMorphism,
    TypeDStructure,
};
use twk_core::typewriter::{check_typewriter_morphism, TypewriterMorphism};

fn algebra(k: u8) -> Arc<PathAlgebra> {
    match k % 3 {
        0 => PathAlgebra::trivial(),
        1 => torus_algebra(),
        _ => strand_algebra_torus(),
    }
}

fn matrix() -> impl Strategy<Value = BitMatrix> {
    (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
        proptest::collection::vec(any::<bool>(), r * c).prop_map(move |bits| {
            let ones = bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| (i / c, i % c));
            BitMatrix::from_entries(r, c, ones).unwrap()
        })
    })
}

fn strip(n: &TypeDStructure) -> TypeDStructure {
    n.renamed(|s| split_pair_name(s).unwrap().1.to_string()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity_is_column_count(a in matrix()) {
        let kernel = a.nullspace();
        prop_assert_eq!(a.rank() + kernel.len(), a.cols());
        for v in &kernel {
            prop_assert!(a.mul_vec(v).unwrap().iter().all(|&x| !x));
        }
    }

    #[test]
    fn solutions_satisfy_the_system(a in matrix(), seed in any::<u64>()) {
        let x: Vec<bool> = (0..a.cols()).map(|i| (seed >> (i % 64)) & 1 == 1).collect();
        let b = a.mul_vec(&x).unwrap();
        let y = a.solve(&b).unwrap().expect("consistent by construction");
        prop_assert_eq!(a.mul_vec(&y).unwrap(), b);
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>(), k in 0u8..3) {
        let mut rng = seeded(seed);
        let alg = algebra(k);
        let n = random_structure(&mut rng, &alg, "x", 3);
        let (a, b, c) = (
            random_map(&mut rng, &n, &n, 0.5),
            random_map(&mut rng, &n, &n, 0.5),
            random_map(&mut rng, &n, &n, 0.5),
        );
        prop_assert_eq!(a.then(&b, &alg).then(&c, &alg), a.then(&b.then(&c, &alg), &alg));
    }

    #[test]
    fn reduction_is_a_deformation_retract(seed in any::<u64>(), k in 0u8..3, len in 0usize..7) {
        let mut rng = seeded(seed);
        let n = random_structure(&mut rng, &algebra(k), "x", len);
        let r = reduce(&n);
        prop_assert!(r.reduced.is_reduced());
        prop_assert!(check_structure(&r.reduced).is_valid());
        prop_assert!(r.forward.is_closed());
        prop_assert!(r.backward.is_closed());
        let round = compose_morphisms(&r.backward, &r.forward).unwrap();
        prop_assert_eq!(round, identity_morphism(&r.reduced));
        let there_and_back = compose_morphisms(&r.forward, &r.backward).unwrap();
        prop_assert_eq!(
            r.homotopy.differential(),
            there_and_back.map().add(&n.identity_map())
        );
        prop_assert!(equivalent(&n, &r.reduced).unwrap().is_equivalent());
    }

    #[test]
    fn reduction_is_idempotent(seed in any::<u64>(), k in 0u8..3) {
        let mut rng = seeded(seed);
        let n = random_structure(&mut rng, &algebra(k), "x", 5);
        let once = reduce(&n).reduced;
        prop_assert_eq!(reduce(&once).reduced, once);
    }

    #[test]
    fn documents_round_trip_byte_identically(seed in any::<u64>(), k in 0u8..3) {
        let mut rng = seeded(seed);
        let alg = algebra(k);
        let m = random_typewriter(&mut rng, &alg, 3);
        let n = random_structure(&mut rng, &alg, "x", 4);
        let phi = random_closed_morphism(&mut rng, &n, &n);
        let objects = [
            Object::Typewriter(m.clone()),
            Object::Typed(n),
            Object::Morphism(Morphism::Typed(phi)),
            Object::Dd(random_dd(&mut rng, &alg, 3)),
            Object::Flip(random_flip_module(&mut rng, 3)),
            Object::Da(identity_da(&alg)),
        ];
        for o in &objects {
            let text = to_json(o).unwrap();
            let back = parse(&text).unwrap();
            prop_assert_eq!(to_json(&back).unwrap(), text);
        }
    }

    #[test]
    fn cmd_is_linear_on_morphisms(seed in any::<u64>(), k in 0u8..3) {
        let mut rng = seeded(seed);
        let alg = algebra(k);
        let a = random_typewriter(&mut rng, &alg, 3);
        let b = random_typewriter(&mut rng, &alg, 3);
        let t = random_typewriter_morphism(&mut rng, &a, &b);
        let u = random_typewriter_morphism(&mut rng, &a, &b);
        let sum = TypewriterMorphism::from_cone_of_cones_map(
            &a,
            &b,
            &t.cone_of_cones_map().add(&u.cone_of_cones_map()),
        )
        .unwrap();
        prop_assert!(check_typewriter_morphism(&sum).is_valid());
        let lhs = cmd_morphism(&sum).unwrap();
        let rhs = cmd_morphism(&t).unwrap().add(&cmd_morphism(&u).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn uncmd_inverts_cmd_on_morphisms(seed in any::<u64>(), k in 0u8..3) {
        let mut rng = seeded(seed);
        let alg = algebra(k);
        let a = random_typewriter(&mut rng, &alg, 3);
        let b = random_typewriter(&mut rng, &alg, 3);
        let t = random_typewriter_morphism(&mut rng, &a, &b);
        let phi = cmd_morphism(&t).unwrap();
        prop_assert!(phi.is_closed());
        let a2 = uncmd(&cmd_object(&a).unwrap()).unwrap();
        let b2 = uncmd(&cmd_object(&b).unwrap()).unwrap();
        prop_assert_eq!(uncmd_morphism(&a2, &b2, &phi).unwrap(), t);
    }

    #[test]
    fn box_commutes_with_cones(seed in any::<u64>(), k in 1u8..3) {
        let mut rng = seeded(seed);
        let alg = algebra(k);
        let n = random_structure(&mut rng, &alg, "x", 3);
        let n2 = random_structure(&mut rng, &alg, "y", 3);
        let phi = random_closed_morphism(&mut rng, &n, &n2);
        let da = identity_da(&alg);
        let boxed_cone = box_type_d(&da, &cone(&phi).unwrap()).unwrap();
        let cone_boxed = cone(&box_morphism(&da, &phi).unwrap()).unwrap();
        // Names nest differently, `(p,0.x)` against `0.(p,x)`; everything else agrees.
        let idempotents = |n: &TypeDStructure| n.generators().iter().map(|g| g.idempotent).collect::<Vec<_>>();
        prop_assert_eq!(idempotents(&boxed_cone), idempotents(&cone_boxed));
        prop_assert_eq!(boxed_cone.delta(), cone_boxed.delta());
        for i in 0..alg.vertex_count() {
            let e = elementary_module(&alg, i).unwrap();
            prop_assert!(check_da(&e).is_valid());
            let slice = box_type_d(&e, &n).unwrap();
            prop_assert!(check_structure(&strip(&slice)).is_valid());
        }
    }

    #[test]
    fn flip_output_is_reduced_iff_complex_has_no_differential(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let f = random_flip_module(&mut rng, 4);
        let n = bsd_infty(&f).unwrap();
        prop_assert!(check_structure(&n).is_valid());
        prop_assert_eq!(n.len(), 2 * f.complex().len());
        prop_assert_eq!(n.is_reduced(), f.complex().delta().is_zero());
    }

    #[test]
    fn closed_morphisms_are_closed(seed in any::<u64>(), k in 0u8..3) {
        let mut rng = seeded(seed);
        let alg = algebra(k);
        let n = random_structure(&mut rng, &alg, "x", 3);
        let m = random_structure(&mut rng, &alg, "y", 3);
        let phi = random_closed_morphism(&mut rng, &n, &m);
        prop_assert!(phi.is_closed());
        prop_assert!(check_structure(&cone(&phi).unwrap()).is_valid());
        let zero = TypeDMorphism::new(n.clone(), m.clone(), CoeffMap::new()).unwrap();
        prop_assert_eq!(phi.add(&zero).unwrap(), phi);
    }
}
