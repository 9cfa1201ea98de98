use approx::assert_abs_diff_eq;
use num_bigint::BigUint;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use skrecoup_core::combinatorics::{
    all_permutations, conjugacy_classes, enumerate_partitions, factorial, round_spectrum, sk_dim, weyl_dimension,
    Partition, Permutation,
};
use skrecoup_core::intertwiner::{
    bend_and_compare, cg_isometries, kronecker_coefficient, teleportation_contraction, trivial_coupling,
};
use skrecoup_core::quantumstates::{sample_hs_random, DensityMatrix};
use skrecoup_core::recoupling::{associativity_count, full_recoupling_unitary, recoupling_tensor};
use skrecoup_core::repsym::{cached_rep, character_of_cycle_type, represent};
use skrecoup_core::schurweyl::{
    hs_norm_via_schurweyl, isotypic_projector, overlap_trace, projected_trace, projected_trace_dense,
    tripartite_projectors, TripartiteLabels,
};
use skrecoup_core::tensorlinalg::{hermitian_eigenvalues, partial_trace, ComplexMatrix, RealMatrix, TensorShape};

fn p(rows: &[usize]) -> Partition {
    Partition::new(rows.to_vec()).unwrap()
}

/// Semistandard tableaux of shape `λ` with entries in `1..=d`, counted by brute force.
fn count_ssyt(lambda: &Partition, d: usize) -> usize {
    let cells: Vec<(usize, usize)> = lambda
        .rows()
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
        .collect();
    fn fill(cells: &[(usize, usize)], i: usize, grid: &mut Vec<Vec<usize>>, d: usize) -> usize {
        if i == cells.len() {
            return 1;
        }
        let (r, c) = cells[i];
        let mut total = 0;
        for v in 1..=d {
            let left_ok = c == 0 || grid[r][c - 1] <= v;
            let up_ok = r == 0 || grid[r - 1][c] < v;
            if left_ok && up_ok {
                grid[r][c] = v;
                total += fill(cells, i + 1, grid, d);
            }
        }
        total
    }
    let mut grid: Vec<Vec<usize>> = lambda.rows().iter().map(|&n| vec![0; n]).collect();
    fill(&cells, 0, &mut grid, d)
}

/// `g(α,β,λ)` from traces of explicit representation matrices over all of `S_k`.
fn kronecker_by_traces(a: &Partition, b: &Partition, l: &Partition) -> f64 {
    let (ra, rb, rl) = (cached_rep(a).unwrap(), cached_rep(b).unwrap(), cached_rep(l).unwrap());
    let perms = all_permutations(a.k());
    let sum: f64 = perms
        .iter()
        .map(|pi| {
            represent(&ra, pi).unwrap().trace()
                * represent(&rb, pi).unwrap().trace()
                * represent(&rl, pi).unwrap().trace()
        })
        .sum();
    sum / perms.len() as f64
}

#[test]
fn partition_enumeration() {
    assert_eq!(enumerate_partitions(4, 4).len(), 5);
    assert_eq!(enumerate_partitions(3, 1), vec![p(&[3])]);
    assert_eq!(enumerate_partitions(5, 2), vec![p(&[5]), p(&[4, 1]), p(&[3, 2])]);
}

#[test]
fn weyl_dimensions_match_tableau_counts() {
    assert_eq!(weyl_dimension(&p(&[2, 1, 1]), 2), BigUint::from(0u32));
    for k in 1..=6 {
        for d in 1..=3 {
            for l in enumerate_partitions(k, k) {
                assert_eq!(weyl_dimension(&l, d), BigUint::from(count_ssyt(&l, d)), "{l}, d={d}");
            }
        }
    }
}

#[test]
fn rounding_examples() {
    assert_eq!(round_spectrum(&[0.5, 0.5], 4).unwrap(), p(&[2, 2]));
    assert_eq!(round_spectrum(&[1.0], 7).unwrap(), p(&[7]));
    assert_eq!(round_spectrum(&[0.6, 0.4], 5).unwrap(), p(&[3, 2]));
}

#[test]
fn class_sizes_match_brute_force() {
    for k in 1..=5 {
        for class in conjugacy_classes(k) {
            let count = all_permutations(k)
                .iter()
                .filter(|pi| pi.cycle_lengths() == class.cycles)
                .count();
            assert_eq!(class.class_size, BigUint::from(count));
        }
    }
}

#[test]
fn character_table_column_orthogonality() {
    for k in 1..=8 {
        let classes = conjugacy_classes(k);
        let parts = enumerate_partitions(k, k);
        let kf: i128 = factorial(k).try_into().unwrap();
        for s in &classes {
            for t in &classes {
                let sum: i128 = parts
                    .iter()
                    .map(|l| {
                        character_of_cycle_type(l, &s.cycles).unwrap() * character_of_cycle_type(l, &t.cycles).unwrap()
                    })
                    .sum();
                let size: i128 = s.class_size.clone().try_into().unwrap();
                let expected = if s.cycles == t.cycles { kf / size } else { 0 };
                assert_eq!(sum, expected);
            }
        }
    }
}

#[test]
fn standard_representation_of_s3() {
    let rep = cached_rep(&p(&[2, 1])).unwrap();
    for g in &rep.generators {
        assert_abs_diff_eq!(g.trace(), 0.0, epsilon = 1e-12);
    }
    let three_cycle = Permutation::from_images(vec![1, 2, 0]).unwrap();
    assert_abs_diff_eq!(represent(&rep, &three_cycle).unwrap().trace(), -1.0, epsilon = 1e-12);
}

#[test]
fn kronecker_coefficients_match_matrix_traces() {
    for k in 1..=4 {
        let parts = enumerate_partitions(k, k);
        for a in &parts {
            for b in &parts {
                for l in &parts {
                    let g = kronecker_coefficient(a, b, l).unwrap();
                    assert_abs_diff_eq!(g as f64, kronecker_by_traces(a, b, l), epsilon = 1e-9);
                }
            }
            assert_eq!(kronecker_coefficient(a, a, &p(&[k])).unwrap(), 1);
        }
    }
    assert_eq!(kronecker_coefficient(&p(&[2, 1]), &p(&[2, 1]), &p(&[2, 1])).unwrap(), 1);
}

#[test]
fn special_coupling_is_maximally_entangled() {
    let a = p(&[2, 1]);
    let basis = cg_isometries(&a, &a, &p(&[3])).unwrap();
    assert_eq!(basis.multiplicity(), 1);
    let phi = &basis.maps[0];
    assert_eq!((phi.rows(), phi.cols()), (4, 1));
    let v = trivial_coupling(&a);
    let overlap = phi.hs_inner(&v);
    assert_abs_diff_eq!(overlap.abs(), 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(
        teleportation_contraction(&a).max_abs_diff(&RealMatrix::identity(2).scale(0.5)),
        0.0,
        epsilon = 1e-15
    );
}

#[test]
fn bent_intertwiners_keep_their_orthogonality() {
    let a = p(&[2, 1]);
    let cmp = bend_and_compare(&a, &a, &a).unwrap();
    assert_abs_diff_eq!(cmp.u[(0, 0)].abs(), 1.0, epsilon = 1e-10);
    for k in 1..=3 {
        let parts = enumerate_partitions(k, k);
        for x in &parts {
            for y in &parts {
                for z in &parts {
                    if kronecker_coefficient(x, y, z).unwrap() > 0 {
                        assert!(bend_and_compare(x, y, z).unwrap().gram_residual <= 1e-8);
                    }
                }
            }
        }
    }
}

#[test]
fn recoupling_examples() {
    let t = p(&[3]);
    let trivial = recoupling_tensor(&std::array::from_fn(|_| t.clone())).unwrap();
    assert_eq!(trivial.shape, [1, 1, 1, 1]);
    assert_abs_diff_eq!(trivial.entry(0, 0, 0, 0), 1.0, epsilon = 1e-12);

    let s = p(&[2, 1]);
    let count = associativity_count(&s, &s, &s, &s).unwrap();
    let mut sum = 0.0;
    for mu in enumerate_partitions(3, 3) {
        for nu in enumerate_partitions(3, 3) {
            let hs = recoupling_tensor(&[s.clone(), s.clone(), s.clone(), mu.clone(), nu, s.clone()])
                .unwrap()
                .hs;
            sum += hs * hs;
        }
    }
    assert_abs_diff_eq!(sum, count as f64, epsilon = 1e-8);
    let u = full_recoupling_unitary(&s, &s, &s, &s).unwrap();
    assert!(u.unitarity_residual() <= 1e-8);
}

#[test]
fn identity_recoupling_when_third_label_is_trivial() {
    for k in 2..=4 {
        let parts = enumerate_partitions(k, k);
        let g = p(&[k]);
        for a in &parts {
            for b in &parts {
                for l in &parts {
                    for mu in &parts {
                        for nu in &parts {
                            let hs = recoupling_tensor(&[
                                a.clone(),
                                b.clone(),
                                g.clone(),
                                mu.clone(),
                                nu.clone(),
                                l.clone(),
                            ])
                            .unwrap()
                            .hs;
                            let expected = if mu == l && nu == b {
                                (kronecker_coefficient(a, b, l).unwrap() as f64).sqrt()
                            } else {
                                0.0
                            };
                            assert_abs_diff_eq!(hs, expected, epsilon = 1e-9);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn isotypic_ranks_follow_schur_weyl_counting() {
    assert_eq!(isotypic_projector(&p(&[2]), 2, 2).unwrap().rank(), BigUint::from(3u32));
    assert_eq!(
        isotypic_projector(&p(&[1, 1]), 2, 2).unwrap().rank(),
        BigUint::from(1u32)
    );
    for l in enumerate_partitions(4, 4) {
        let proj = isotypic_projector(&l, 2, 4).unwrap();
        let dense = proj.dense().unwrap();
        let numeric = dense.trace().round() as usize;
        let expected = sk_dim(&l) * count_ssyt(&l, 2);
        assert_eq!(numeric, expected);
        assert_eq!(proj.rank(), BigUint::from(expected));
    }
}

#[test]
fn projected_trace_examples() {
    let half = DensityMatrix::maximally_mixed(vec![2]).unwrap();
    assert_abs_diff_eq!(projected_trace(&p(&[2]), &half, 2).unwrap(), 0.75, epsilon = 1e-15);
    assert_abs_diff_eq!(projected_trace(&p(&[1, 1]), &half, 2).unwrap(), 0.25, epsilon = 1e-15);
    let r = DensityMatrix::diagonal(&[2.0 / 3.0, 1.0 / 3.0]).unwrap();
    for (l, v) in [(p(&[2]), 7.0 / 9.0), (p(&[1, 1]), 2.0 / 9.0)] {
        assert_abs_diff_eq!(projected_trace(&l, &r, 2).unwrap(), v, epsilon = 1e-15);
        assert_abs_diff_eq!(projected_trace_dense(&l, &r, 2).unwrap(), v, epsilon = 1e-12);
    }
    let rho = sample_hs_random(&[3], 11).unwrap();
    for k in 1..=10 {
        let total: f64 = enumerate_partitions(k, 3)
            .iter()
            .map(|l| projected_trace(l, &rho, k).unwrap())
            .sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }
}

#[test]
fn tripartite_projector_bookkeeping() {
    let dims = [2, 2, 2];
    for k in 1..=2 {
        let labels = TripartiteLabels {
            sets: std::array::from_fn(|i| enumerate_partitions(k, [2, 2, 2, 4, 4, 8][i])),
        };
        for six in labels.tuples() {
            let [a, b, c, mu, _, l] = &six;
            let (_, q) = tripartite_projectors(&TripartiteLabels::single(&six), dims, k).unwrap();
            assert!((&q * &q).max_abs_diff(&q) <= 1e-10);
            assert!(q.max_abs_diff(&q.transpose()) <= 1e-10);
            let expected = sk_dim(l) as f64
                * [a, b, c].iter().map(|x| count_ssyt(x, 2) as f64).product::<f64>()
                * (kronecker_coefficient(a, b, mu).unwrap() * kronecker_coefficient(mu, c, l).unwrap()) as f64;
            assert_abs_diff_eq!(q.trace(), expected, epsilon = 1e-9);
        }
    }
}

#[test]
fn cross_route_examples() {
    let t = p(&[2]);
    let all = hs_norm_via_schurweyl(&std::array::from_fn(|_| t.clone()), [2, 2, 2], 2).unwrap();
    assert_abs_diff_eq!(all.hs, 1.0, epsilon = 1e-12);
    let s = p(&[2, 1]);
    let six: [Partition; 6] = std::array::from_fn(|_| s.clone());
    assert_abs_diff_eq!(
        hs_norm_via_schurweyl(&six, [2, 2, 2], 3).unwrap().hs,
        recoupling_tensor(&six).unwrap().hs,
        epsilon = 1e-8
    );
}

#[test]
fn overlap_bounds_on_random_states() {
    for seed in 0..4u64 {
        let rho = sample_hs_random(&[2, 2, 2], seed).unwrap();
        let all = overlap_trace(&TripartiteLabels::all(2), &rho, 2).unwrap();
        assert_abs_diff_eq!(all.t_p, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(all.overlap.re, 1.0, epsilon = 1e-12);
        let s = p(&[1, 1]);
        let t = p(&[2]);
        let labels = TripartiteLabels::single(&[t.clone(), t.clone(), s.clone(), s.clone(), s.clone(), t.clone()]);
        let traces = overlap_trace(&labels, &rho, 2).unwrap();
        assert!(traces.overlap.norm() <= (traces.t_p * traces.t_q).sqrt() + 1e-12);
    }
}

#[test]
fn linear_algebra_examples() {
    let x = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let ev = hermitian_eigenvalues(&x).unwrap();
    assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-14);
    assert_abs_diff_eq!(ev[1], -1.0, epsilon = 1e-14);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = ComplexMatrix::from_fn(3, 3, |_, _| Complex64::new(rand::Rng::random(&mut rng), 0.0));
    let b = ComplexMatrix::from_fn(3, 3, |_, _| Complex64::new(0.0, rand::Rng::random(&mut rng)));
    assert_abs_diff_eq!(a.kron(&b).hs_norm(), a.hs_norm() * b.hs_norm(), epsilon = 1e-12);

    let ghz = DensityMatrix::ghz(3).unwrap();
    let ab = partial_trace(ghz.matrix(), &TensorShape::new(vec![2, 2, 2]).unwrap(), &[0, 1]).unwrap();
    let expected = ComplexMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5].map(|x| Complex64::new(x, 0.0)));
    assert!(ab.max_abs_diff(&expected) <= 1e-15);
}
