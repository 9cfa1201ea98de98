use num_bigint::BigUint;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use skrecoup_core::combinatorics::{
    class_size, conjugacy_classes, enumerate_partitions, factorial, round_spectrum, sk_dim, Partition, Permutation,
};
use skrecoup_core::experiments::{cmd_skew_union_fuzz, cmd_thm1_certificate, skew_union_sides};
use skrecoup_core::intertwiner::{cg_isometries, kronecker_coefficient};
use skrecoup_core::quantumstates::{
    entropies, random_unitary, sample_hs_random, sample_hs_random_with, spectra_tuple, ssa_gap, weak_mono_gap,
    DensityMatrix,
};
use skrecoup_core::recoupling::{column_swap_check, recoupling_tensor};
use skrecoup_core::repsym::{cached_rep, character_of_permutation, represent, represent_word};
use skrecoup_core::schurweyl::{
    apply_permutation, isotypic_projector, projected_trace, projected_trace_dense, CopyLayout,
};
use skrecoup_core::tensorlinalg::{partial_trace, ComplexMatrix, TensorShape};

fn partition(max_k: usize) -> impl Strategy<Value = Partition> {
    (1..=max_k).prop_flat_map(|k| {
        let parts = enumerate_partitions(k, k);
        (0..parts.len()).prop_map(move |i| parts[i].clone())
    })
}

fn same_k_partitions(max_k: usize, n: usize) -> impl Strategy<Value = Vec<Partition>> {
    (1..=max_k).prop_flat_map(move |k| {
        let parts = enumerate_partitions(k, k);
        proptest::collection::vec(0..parts.len(), n)
            .prop_map(move |ix| ix.into_iter().map(|i| parts[i].clone()).collect())
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn random_complex_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_is_an_involution(l in partition(12)) {
        prop_assert_eq!(l.conjugate().conjugate(), l.clone());
        prop_assert_eq!(sk_dim(&l.conjugate()), sk_dim(&l));
    }

    #[test]
    fn rounding_fixes_normalized_diagrams(l in partition(12), pad in 0usize..3) {
        let x = l.normalize(l.num_rows() + pad);
        prop_assert_eq!(round_spectrum(&x, l.k()).unwrap(), l);
    }

    #[test]
    fn rounding_yields_a_partition_of_k(w in proptest::collection::vec(0.0f64..1.0, 1..6), k in 1usize..40) {
        let total: f64 = w.iter().sum();
        prop_assume!(total > 1e-6);
        let r: Vec<f64> = w.iter().map(|x| x / total).collect();
        let l = round_spectrum(&r, k).unwrap();
        prop_assert_eq!(l.k(), k);
        prop_assert!(l.num_rows() <= r.len());
    }

    #[test]
    fn permutation_group_laws(a in permutation(7), b in permutation(7)) {
        let ab = a.compose(&b);
        prop_assert!(ab.compose(&ab.inverse()).is_identity());
        prop_assert_eq!(ab.cycle_lengths(), b.compose(&a).cycle_lengths());
        prop_assert_eq!(a.reduced_word().len(), a.inversions());
    }

    #[test]
    fn representation_is_a_homomorphism(l in partition(6), seed in any::<u64>()) {
        let k = l.k();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Permutation::random(k, &mut rng);
        let b = Permutation::random(k, &mut rng);
        let rep = cached_rep(&l).unwrap();
        let lhs = represent(&rep, &a.compose(&b)).unwrap();
        let rhs = &represent(&rep, &a).unwrap() * &represent(&rep, &b).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        let m = represent(&rep, &a).unwrap();
        prop_assert!((&m.transpose() * &m).max_abs_diff(&skrecoup_core::tensorlinalg::RealMatrix::identity(m.rows())) <= 1e-12);
    }

    #[test]
    fn word_choice_does_not_matter(l in partition(6), seed in any::<u64>()) {
        let k = l.k();
        let pi = Permutation::random(k, &mut ChaCha8Rng::seed_from_u64(seed));
        let rep = cached_rep(&l).unwrap();
        let a = represent_word(&rep, &pi.reduced_word(), k).unwrap();
        let b = represent(&rep, &pi).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-12);
    }

    #[test]
    fn trace_matches_character(l in partition(7), seed in any::<u64>()) {
        let pi = Permutation::random(l.k(), &mut ChaCha8Rng::seed_from_u64(seed));
        let m = represent(&cached_rep(&l).unwrap(), &pi).unwrap();
        let chi = character_of_permutation(&l, &pi).unwrap() as f64;
        prop_assert!((m.trace() - chi).abs() <= 1e-9);
    }

    #[test]
    fn kronecker_coefficient_is_symmetric(t in same_k_partitions(6, 3)) {
        let (a, b, c) = (&t[0], &t[1], &t[2]);
        let g = kronecker_coefficient(a, b, c).unwrap();
        prop_assert_eq!(g, kronecker_coefficient(b, a, c).unwrap());
        prop_assert_eq!(g, kronecker_coefficient(c, b, a).unwrap());
        prop_assert_eq!(g, kronecker_coefficient(&a.conjugate(), &b.conjugate(), c).unwrap());
    }

    #[test]
    fn isometry_count_and_orthonormality(t in same_k_partitions(5, 3)) {
        let basis = cg_isometries(&t[0], &t[1], &t[2]).unwrap();
        prop_assert_eq!(basis.multiplicity(), kronecker_coefficient(&t[0], &t[1], &t[2]).unwrap());
        let dl = sk_dim(&t[2]) as f64;
        for (i, p) in basis.maps.iter().enumerate() {
            for (j, q) in basis.maps.iter().enumerate() {
                let expected = if i == j { dl } else { 0.0 };
                prop_assert!((p.hs_inner(q) - expected).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn recoupling_norm_sandwich(t in same_k_partitions(4, 6)) {
        let six: [Partition; 6] = t.try_into().unwrap();
        let r = recoupling_tensor(&six).unwrap();
        let op = r.op_norm();
        let rank = r.as_matrix().singular_values().iter().filter(|&&s| s > 1e-10).count() as f64;
        prop_assert!(op <= r.hs + 1e-10);
        prop_assert!(r.hs <= rank.sqrt() * op + 1e-10);
        prop_assert!(op <= 1.0 + 1e-10);
        prop_assert!(column_swap_check(&six).unwrap().residual() <= 1e-8);
    }

    #[test]
    fn norm_sandwich_on_random_matrices(rows in 1usize..8, cols in 1usize..8, seed in any::<u64>()) {
        let m = random_complex_matrix(rows, cols, seed);
        let (op, hs) = (m.op_norm(), m.hs_norm());
        prop_assert!(op <= hs + 1e-12);
        prop_assert!(hs <= (rows.min(cols) as f64).sqrt() * op + 1e-12);
    }

    #[test]
    fn partial_traces_compose(seed in any::<u64>()) {
        let rho = sample_hs_random(&[2, 3, 2], seed).unwrap();
        let shape = TensorShape::new(vec![2, 3, 2]).unwrap();
        let direct = partial_trace(rho.matrix(), &shape, &[0]).unwrap();
        let ab = partial_trace(rho.matrix(), &shape, &[0, 1]).unwrap();
        let staged = partial_trace(&ab, &TensorShape::new(vec![2, 3]).unwrap(), &[0]).unwrap();
        prop_assert!(direct.max_abs_diff(&staged) <= 1e-12);
    }

    #[test]
    fn entropy_gaps_are_non_negative(seed in any::<u64>()) {
        let rho = sample_hs_random(&[2, 2, 2], seed).unwrap();
        prop_assert!(ssa_gap(&rho).unwrap() >= -1e-9);
        prop_assert!(weak_mono_gap(&rho).unwrap() >= -1e-9);
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = sample_hs_random_with(&[4], &mut rng).unwrap();
        let w = random_unitary(4, &mut rng);
        let h = rho.entropy().unwrap();
        prop_assert!((rho.conjugate_by(&w).unwrap().entropy().unwrap() - h).abs() <= 1e-10);
    }

    #[test]
    fn pure_states_pair_complementary_spectra(seed in any::<u64>()) {
        use rand_distr::{Distribution, StandardNormal};
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi: Vec<Complex64> = (0..8)
            .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        let rho = DensityMatrix::from_pure(vec![2, 2, 2], &psi).unwrap();
        let s = spectra_tuple(&rho).unwrap();
        let close = |x: &[f64], y: &[f64]| x.iter().zip(y).all(|(a, b)| (a - b).abs() <= 1e-9);
        prop_assert!(close(&s.r_ab, &s.r_c));
        prop_assert!(close(&s.r_bc, &s.r_a));
        prop_assert!((s.r_abc[0] - 1.0).abs() <= 1e-9);
        prop_assert!(entropies(&rho).unwrap()[5].abs() <= 1e-9);
    }

    #[test]
    fn skew_union_holds_for_random_projectors(dim in 1usize..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unitary(dim, &mut rng);
        let v = random_unitary(dim, &mut rng);
        let proj = |w: &ComplexMatrix, r: usize| {
            ComplexMatrix::from_fn(dim, dim, |i, j| (0..r).map(|c| w[(i, c)] * w[(j, c)].conj()).sum())
        };
        let (rp, rq) = (seed as usize % (dim + 1), (seed >> 8) as usize % (dim + 1));
        let sigma = sample_hs_random_with(&[dim], &mut rng).unwrap();
        let (lhs, rhs) = skew_union_sides(&proj(&u, rp), &proj(&v, rq), sigma.matrix());
        prop_assert!(lhs >= rhs - 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn projector_commutes_with_permutations(l in partition(4), d in 1usize..=3, seed in any::<u64>()) {
        let k = l.k();
        let layout = CopyLayout::single(d, k).unwrap();
        let p = isotypic_projector(&l, d, k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pi = Permutation::random(k, &mut rng);
        let v: Vec<Complex64> = random_complex_matrix(layout.total(), 1, seed).into_data();
        let a = apply_permutation(&pi, &p.apply(&v).unwrap(), &layout).unwrap();
        let b = p.apply(&apply_permutation(&pi, &v, &layout).unwrap()).unwrap();
        let diff = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(diff <= 1e-9);
    }

    #[test]
    fn cycle_type_trace_matches_dense(l in partition(4), seed in any::<u64>()) {
        let rho = sample_hs_random(&[2], seed).unwrap();
        let a = projected_trace(&l, &rho, l.k()).unwrap();
        let b = projected_trace_dense(&l, &rho, l.k()).unwrap();
        prop_assert!((a - b).abs() <= 1e-10);
    }

    #[test]
    fn reports_are_reproducible(n in 1usize..40, seed in any::<u64>()) {
        let a = cmd_skew_union_fuzz(n, seed).unwrap().to_json_lines();
        let b = cmd_skew_union_fuzz(n, seed).unwrap().to_json_lines();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn certificate_chain_holds_for_random_states(seed in any::<u64>(), k in 1usize..=3, delta in 0.0f64..2.0) {
        let rho = sample_hs_random(&[2, 2, 2], seed).unwrap();
        let r = cmd_thm1_certificate(&rho, k, delta).unwrap();
        prop_assert!(r.passed());
    }
}

#[test]
fn class_sizes_sum_to_factorial() {
    for k in 1..=10 {
        let total: BigUint = conjugacy_classes(k).iter().map(|c| class_size(&c.cycles)).sum();
        assert_eq!(total, factorial(k));
    }
}
