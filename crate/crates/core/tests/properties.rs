//! Randomized structural properties of the library, driven by seeds so
//! every failure replays exactly.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use snlkit_core::convex::{Kind, QuadraticOnAffine, SubgradientSet};
use snlkit_core::instances::{
    contraction_graph, involution_instance, proper_subspace, random_contraction,
    random_maximal_positive, random_monotone_matrix, standard_normal_vector,
};
use snlkit_core::nalgebra::DVector;
use snlkit_core::positivity::{extension_oracle, inf_q_over, is_negative, is_positive};
use snlkit_core::relations::{pdense_witness, rho, LinearRelation};
use snlkit_core::subspace::DEFAULT_RANK_TOL;
use snlkit_core::{ExtReal, SnlSpace, Subspace};

const TOL: f64 = 1e-8;

fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_span(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Subspace {
    if k == 0 {
        return Subspace::zero(n);
    }
    let dirs: Vec<DVector<f64>> = (0..k).map(|_| standard_normal_vector(n, rng)).collect();
    Subspace::span(&dirs, DEFAULT_RANK_TOL).expect("Gaussian directions span")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pairing_is_symmetric_and_dominated_by_the_norm(
        seed in any::<u64>(),
        n in 1usize..7,
        plus in 0usize..7,
    ) {
        let mut rng = rng_from(seed);
        let inst = involution_instance(n, plus.min(n), &mut rng);
        let a = standard_normal_vector(n, &mut rng);
        let b = standard_normal_vector(n, &mut rng);
        let ab = inst.space.pairing(&a, &b).unwrap();
        let ba = inst.space.pairing(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-10 * ab.abs().max(1.0));

        let q = inst.space.q(&a).unwrap();
        prop_assert!(q.abs() <= 0.5 * a.norm_squared() + 1e-10);
        // The augmented form is pointwise nonnegative.
        prop_assert!(q + 0.5 * a.norm_squared() >= -1e-10);
    }

    #[test]
    fn involution_transport_preserves_the_form_and_the_norm(
        seed in any::<u64>(),
        n in 1usize..7,
        plus in 0usize..7,
    ) {
        let mut rng = rng_from(seed);
        let inst = involution_instance(n, plus.min(n), &mut rng);
        let b = standard_normal_vector(n, &mut rng);
        let lb = inst.space.apply(&b).unwrap();
        let q = inst.space.q(&b).unwrap();
        let q_pulled = inst.space.q_dual(&lb).unwrap();
        prop_assert!((q - q_pulled).abs() <= 1e-12 * q.abs().max(1.0));
        prop_assert!((lb.norm() - b.norm()).abs() <= 1e-10 * b.norm().max(1.0));
    }

    #[test]
    fn negating_the_pairing_swaps_positive_and_negative(
        seed in any::<u64>(),
        n in 1usize..7,
        k in 0usize..7,
    ) {
        let mut rng = rng_from(seed);
        let inst = involution_instance(n, n / 2, &mut rng);
        let sub = random_span(n, k.min(n), &mut rng);
        let negated = inst.space.negated();
        let pos = is_positive(&inst.space, &sub, TOL).unwrap();
        let neg = is_negative(&negated, &sub, TOL).unwrap();
        prop_assert_eq!(pos.passed(), neg.passed());
    }

    #[test]
    fn polar_is_the_orthogonal_complement(
        seed in any::<u64>(),
        n in 1usize..8,
        k in 0usize..8,
    ) {
        let mut rng = rng_from(seed);
        let sub = random_span(n, k.min(n), &mut rng);
        let polar = sub.polar();
        prop_assert_eq!(sub.dim() + polar.dim(), n);
        if sub.dim() > 0 && polar.dim() > 0 {
            let cross = sub.basis().transpose() * polar.basis();
            prop_assert!(cross.abs().max() <= 1e-10);
        }
        prop_assert!(sub.same_subspace(&polar.polar(), 1e-9));
    }

    #[test]
    fn reflection_swaps_negativity_and_positivity_in_products(
        seed in any::<u64>(),
        d in 1usize..4,
        k in 0usize..8,
    ) {
        let mut rng = rng_from(seed);
        let space = SnlSpace::product(d).unwrap();
        let sub = random_span(2 * d, k.min(2 * d), &mut rng);
        let reflected = rho(&sub).unwrap();
        prop_assert!(rho(&reflected).unwrap().same_subspace(&sub, 1e-9));
        let neg = is_negative(&space, &sub, TOL).unwrap();
        let pos = is_positive(&space, &reflected, TOL).unwrap();
        prop_assert_eq!(neg.passed(), pos.passed());
    }

    #[test]
    fn adjoint_satisfies_the_bilinear_identity_twice_over(
        seed in any::<u64>(),
        d in 1usize..5,
    ) {
        let mut rng = rng_from(seed);
        let m = snlkit_core::instances::standard_normal_matrix(d, d, &mut rng);
        let relation = LinearRelation::from_matrix(&m).unwrap();
        let adj = relation.adjoint();

        for _ in 0..5 {
            let a = relation
                .graph()
                .project(&standard_normal_vector(2 * d, &mut rng))
                .unwrap();
            let y = adj
                .graph()
                .project(&standard_normal_vector(2 * d, &mut rng))
                .unwrap();
            let (x, xstar) = (a.rows(0, d).into_owned(), a.rows(d, d).into_owned());
            let (ystar, ystarstar) = (y.rows(0, d).into_owned(), y.rows(d, d).into_owned());
            let residual = x.dot(&ystar) - xstar.dot(&ystarstar);
            let scale = a.norm() * y.norm();
            prop_assert!(residual.abs() <= 1e-10 * scale.max(1.0));
        }

        prop_assert!(adj.adjoint().graph().same_subspace(relation.graph(), 1e-9));
    }

    #[test]
    fn fenchel_young_holds_with_equality_exactly_on_the_subdifferential(
        seed in any::<u64>(),
        n in 2usize..7,
        plus in 1usize..7,
    ) {
        let mut rng = rng_from(seed);
        let plus = plus.min(n);
        let inst = involution_instance(n, plus, &mut rng);
        let graph = random_maximal_positive(&inst, 0.9, &mut rng);
        prop_assume!(graph.dim() > 0);
        let d = standard_normal_vector(n, &mut rng);
        let f = QuadraticOnAffine::new(&inst.space, &graph, d, Kind::Q).unwrap();

        let t = standard_normal_vector(graph.dim(), &mut rng);
        let b = f.domain().point(&t).unwrap();
        let fb = f.eval(&b).unwrap().finite().unwrap();

        match f.subdifferential(&b).unwrap() {
            SubgradientSet::Empty => prop_assert!(false, "domain point has subgradients"),
            SubgradientSet::Affine { anchor, directions } => {
                // Equality on a sampled subgradient.
                let s = standard_normal_vector(directions.dim(), &mut rng);
                let bstar = &anchor + directions.basis() * s;
                let conj = f.conjugate(&bstar).unwrap().finite().unwrap();
                let scale = fb.abs().max(conj.abs()).max(1.0);
                prop_assert!((fb + conj - b.dot(&bstar)).abs() <= 1e-8 * scale);

                // Inequality for arbitrary dual points.
                let other = standard_normal_vector(n, &mut rng);
                if let ExtReal::Finite(c2) = f.conjugate(&other).unwrap() {
                    let scale = fb.abs().max(c2.abs()).max(1.0);
                    prop_assert!(fb + c2 >= b.dot(&other) - 1e-10 * scale);
                    // Conjugate coercivity bound.
                    prop_assert!(-c2 <= 0.5 * other.norm_squared() + 1e-9);
                }
            }
        }
    }

    #[test]
    fn closed_form_infimum_lower_bounds_every_affine_sample(
        seed in any::<u64>(),
        n in 2usize..7,
        plus in 1usize..7,
    ) {
        let mut rng = rng_from(seed);
        let inst = involution_instance(n, plus.min(n), &mut rng);
        let graph = random_maximal_positive(&inst, 0.9, &mut rng);
        prop_assume!(graph.dim() > 0);
        let d = standard_normal_vector(n, &mut rng);
        if let ExtReal::Finite(v) = inf_q_over(&inst.space, &graph, &d).unwrap() {
            for _ in 0..8 {
                let t = standard_normal_vector(graph.dim(), &mut rng);
                let sample = graph.basis() * t + &d;
                let q = inst.space.q(&sample).unwrap();
                prop_assert!(q >= v - 1e-8 * q.abs().max(1.0));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn contraction_graphs_are_maximal_and_their_parts_are_not(
        seed in any::<u64>(),
        n in 2usize..7,
        plus in 1usize..7,
    ) {
        let mut rng = rng_from(seed);
        let plus = plus.min(n);
        let inst = involution_instance(n, plus, &mut rng);
        let sigma = rng.random_range(0.3..0.9);
        let t = random_contraction(n - plus, plus, sigma, &mut rng);
        let graph = contraction_graph(&inst, &t);

        let maximal = snlkit_core::positivity::is_maximally_positive(&inst.space, &graph, TOL)
            .unwrap();
        prop_assert!(maximal.passed());
        prop_assert!(extension_oracle(&inst.space, &graph, 300, seed, 1e-9).unwrap().is_none());

        if graph.dim() > 1 {
            let part = proper_subspace(&graph, graph.dim() - 1, &mut rng);
            let verdict =
                snlkit_core::positivity::is_maximally_positive(&inst.space, &part, TOL).unwrap();
            prop_assert!(!verdict.passed());
            let witness = extension_oracle(&inst.space, &part, 4000, seed, 1e-9).unwrap();
            if let Some(w) = &witness {
                let mut dirs = part.basis_vectors();
                dirs.push(w.clone());
                let extended = Subspace::span(&dirs, DEFAULT_RANK_TOL).unwrap();
                prop_assert!(extended.dim() == part.dim() + 1);
                prop_assert!(is_positive(&inst.space, &extended, TOL).unwrap().passed());
            }
        }
    }

    #[test]
    fn monotone_matrix_relations_pass_every_four_way_check(
        seed in any::<u64>(),
        d in 1usize..5,
    ) {
        let mut rng = rng_from(seed);
        let m = random_monotone_matrix(d, &mut rng);
        let relation = LinearRelation::from_matrix(&m).unwrap();
        let ni = relation.is_type_ni_sampled(TOL, 60, seed).unwrap();
        prop_assert!(ni.passed());
        let bb = relation.brezis_browder_sampled(TOL, 60, seed).unwrap();
        prop_assert!(bb.passed());
        for key in ["maximal", "adjoint_monotone", "adjoint_maximal", "type_ni"] {
            prop_assert_eq!(bb.evidence_value(key), Some(1.0));
        }
    }

    #[test]
    fn product_density_witness_defect_vanishes(
        seed in any::<u64>(),
        d in 1usize..7,
    ) {
        let mut rng = rng_from(seed);
        let space = SnlSpace::product(d).unwrap();
        let dstar = standard_normal_vector(2 * d, &mut rng);
        let (witness, value) = pdense_witness(&space, &dstar).unwrap();
        prop_assert!(value.abs() <= 1e-10 * dstar.norm_squared().max(1.0));
        // First block of the witness is zero by construction.
        prop_assert!(witness.rows(0, d).norm() == 0.0);
    }

    #[test]
    fn refinement_moves_at_most_the_guaranteed_step(
        seed in any::<u64>(),
        n in 2usize..7,
    ) {
        let mut rng = rng_from(seed);
        let inst = involution_instance(n, n / 2 + 1, &mut rng);
        let graph = random_maximal_positive(&inst, 0.9, &mut rng);
        prop_assume!(graph.dim() > 0);
        let d = standard_normal_vector(n, &mut rng);
        let f = QuadraticOnAffine::new(&inst.space, &graph, d, Kind::P).unwrap();

        let t = standard_normal_vector(graph.dim(), &mut rng);
        let b0 = f.domain().point(&t).unwrap();
        let exact = match f.subdifferential(&b0).unwrap() {
            SubgradientSet::Affine { anchor, .. } => anchor,
            SubgradientSet::Empty => {
                return Err(proptest::test_runner::TestCaseError::fail(
                    "domain point must have subgradients",
                ))
            }
        };
        let eta = 0.5;
        // Perturb the exact subgradient; the gap grows at most quadratically
        // in the perturbation, so eta^2 = 0.25 is a generous budget.
        let noise = standard_normal_vector(n, &mut rng);
        let b0star = &exact + 0.05 * &noise / noise.norm().max(1.0);
        let refined = f.refine(&b0, &b0star, eta).unwrap();
        prop_assert!(refined.gap <= eta * eta + 1e-9);
        prop_assert!(refined.step_norm <= refined.step_bound + 1e-9);
        prop_assert!(refined.subgradient_residual <= 1e-9);
        // The output pair really is exact: Fenchel equality holds at b1.
        let f_b1 = f.eval(&refined.b1).unwrap().finite().unwrap();
        let minus_conj = f_b1 - refined.b1.dot(&refined.b1star) - refined.subgradient_residual;
        prop_assert!(minus_conj.is_finite());
    }
}
