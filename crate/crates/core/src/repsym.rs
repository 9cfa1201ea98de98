//! Young's orthogonal form of the irreducible representations of `S_k` and
//! their characters.
//!
//! Representation matrices are real and orthogonal. Characters are computed
//! combinatorially with the Murnaghan–Nakayama rule, never by tracing matrices.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::combinatorics::{standard_tableaux, CycleType, Partition, Permutation, StandardTableau};
use crate::error::{Error, Result};
use crate::tensorlinalg::RealMatrix;

/// Default cap on `dim[λ]` for materialised representation matrices.
pub const DEFAULT_REP_DIM_CAP: usize = 5000;

/// Action of one adjacent transposition `s_i` in Young's orthogonal form.
///
/// Column `t` of the generator has `diag[t]` on the diagonal and, when the
/// swapped tableau is standard, `offdiag[t]` in row `partner[t]`.
#[derive(Clone, Debug)]
pub struct GeneratorAction {
    pub diag: Vec<f64>,
    pub partner: Vec<Option<usize>>,
    pub offdiag: Vec<f64>,
}

impl GeneratorAction {
    pub fn to_matrix(&self) -> RealMatrix {
        let n = self.diag.len();
        let mut m = RealMatrix::zeros(n, n);
        for t in 0..n {
            m[(t, t)] = self.diag[t];
            if let Some(p) = self.partner[t] {
                m[(p, t)] = self.offdiag[t];
            }
        }
        m
    }

    /// `m · G` without forming `G`.
    pub fn right_multiply(&self, m: &RealMatrix) -> RealMatrix {
        let n = self.diag.len();
        assert_eq!(m.cols(), n);
        let mut out = RealMatrix::zeros(m.rows(), n);
        for r in 0..m.rows() {
            let src = m.row(r);
            let dst = out.row_mut(r);
            for t in 0..n {
                let mut v = self.diag[t] * src[t];
                if let Some(p) = self.partner[t] {
                    v += self.offdiag[t] * src[p];
                }
                dst[t] = v;
            }
        }
        out
    }
}

/// Orthogonal matrices of the irrep `[λ]` on the adjacent transpositions `s_1,…,s_{k-1}`.
#[derive(Clone, Debug)]
pub struct RepMatrixSet {
    pub shape: Partition,
    pub basis: Vec<StandardTableau>,
    pub actions: Vec<GeneratorAction>,
    pub generators: Vec<RealMatrix>,
}

impl RepMatrixSet {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn k(&self) -> usize {
        self.shape.k()
    }
}

/// Young's orthogonal form with the default dimension cap.
pub fn young_orthogonal_rep(lambda: &Partition) -> Result<RepMatrixSet> {
    young_orthogonal_rep_with_cap(lambda, DEFAULT_REP_DIM_CAP)
}

pub fn young_orthogonal_rep_with_cap(lambda: &Partition, cap: usize) -> Result<RepMatrixSet> {
    let dim = crate::combinatorics::sk_dimension(lambda).exact;
    let dim_usize = usize::try_from(&dim).unwrap_or(usize::MAX);
    if dim_usize > cap {
        return Err(Error::ResourceLimit {
            what: "irrep",
            dim: dim_usize,
            cap,
        });
    }
    let basis = standard_tableaux(lambda);
    let index: HashMap<&[usize], usize> = basis.iter().enumerate().map(|(i, t)| (t.row_word(), i)).collect();
    let k = lambda.k();
    let mut actions = Vec::with_capacity(k.saturating_sub(1));
    for e in 0..k.saturating_sub(1) {
        let n = basis.len();
        let mut diag = vec![0.0; n];
        let mut partner = vec![None; n];
        let mut offdiag = vec![0.0; n];
        for (t, tab) in basis.iter().enumerate() {
            // axial distance from entry e+1 to entry e+2
            let d = (tab.content(e + 1) - tab.content(e)) as f64;
            diag[t] = 1.0 / d;
            if let Some(swapped) = tab.swap_adjacent(e) {
                partner[t] = Some(index[swapped.row_word()]);
                offdiag[t] = (1.0 - 1.0 / (d * d)).sqrt();
            }
        }
        actions.push(GeneratorAction { diag, partner, offdiag });
    }
    let generators = actions.iter().map(GeneratorAction::to_matrix).collect();
    Ok(RepMatrixSet {
        shape: lambda.clone(),
        basis,
        actions,
        generators,
    })
}

fn rep_cache() -> &'static RwLock<HashMap<Partition, Arc<RepMatrixSet>>> {
    static CACHE: OnceLock<RwLock<HashMap<Partition, Arc<RepMatrixSet>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Memoised [`young_orthogonal_rep`].
pub fn cached_rep(lambda: &Partition) -> Result<Arc<RepMatrixSet>> {
    if let Some(r) = rep_cache().read().unwrap().get(lambda) {
        return Ok(Arc::clone(r));
    }
    let rep = Arc::new(young_orthogonal_rep(lambda)?);
    rep_cache()
        .write()
        .unwrap()
        .entry(lambda.clone())
        .or_insert_with(|| Arc::clone(&rep));
    Ok(rep)
}

/// The matrix of `π`, multiplied out along its bubble-sort reduced word.
pub fn represent(reps: &RepMatrixSet, pi: &Permutation) -> Result<RealMatrix> {
    represent_word(reps, &pi.reduced_word(), pi.len())
}

/// The product `G_{i₁}⋯G_{i_m}` for an explicit word.
pub fn represent_word(reps: &RepMatrixSet, word: &[usize], n: usize) -> Result<RealMatrix> {
    if n != reps.k() {
        return Err(Error::MismatchedSize(format!(
            "permutation of {n} letters for a representation of S_{}",
            reps.k()
        )));
    }
    let mut m = RealMatrix::identity(reps.dim());
    for &i in word {
        m = reps.actions[i].right_multiply(&m);
    }
    Ok(m)
}

/// Rim hooks of length `r` removable from `shape`, with the resulting shape and
/// the sign `(-1)^{height}`.
fn remove_rim_hooks(shape: &[usize], r: usize) -> Vec<(Vec<usize>, i128)> {
    let l = shape.len();
    let beta: Vec<usize> = shape.iter().enumerate().map(|(i, &x)| x + (l - 1 - i)).collect();
    let mut out = Vec::new();
    for (i, &b) in beta.iter().enumerate() {
        if b < r {
            continue;
        }
        let target = b - r;
        if beta.contains(&target) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut nb = beta.clone();
        nb[i] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let mut rows: Vec<usize> = nb.iter().enumerate().map(|(j, &x)| x - (l - 1 - j)).collect();
        while rows.last() == Some(&0) {
            rows.pop();
        }
        let sign = if between % 2 == 0 { 1 } else { -1 };
        out.push((rows, sign));
    }
    out
}

type CharKey = (Vec<usize>, Vec<usize>);

fn char_cache() -> &'static RwLock<HashMap<CharKey, i128>> {
    static CACHE: OnceLock<RwLock<HashMap<CharKey, i128>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn mn_recursive(shape: &[usize], parts: &[usize]) -> i128 {
    if parts.is_empty() {
        return if shape.is_empty() { 1 } else { 0 };
    }
    let key = (shape.to_vec(), parts.to_vec());
    if let Some(&v) = char_cache().read().unwrap().get(&key) {
        return v;
    }
    let value = remove_rim_hooks(shape, parts[0])
        .into_iter()
        .map(|(rest, sign)| sign * mn_recursive(&rest, &parts[1..]))
        .sum();
    char_cache().write().unwrap().insert(key, value);
    value
}

/// `χ_λ(t)` by the Murnaghan–Nakayama rule.
///
/// Values are exact for `k ≤ 56`, where `|χ| ≤ dim[λ] < 2^127`.
pub fn character(lambda: &Partition, t: &CycleType) -> Result<i128> {
    character_of_cycle_type(lambda, &t.cycles)
}

pub fn character_of_cycle_type(lambda: &Partition, cycles: &Partition) -> Result<i128> {
    if lambda.k() != cycles.k() {
        return Err(Error::MismatchedSize(format!(
            "character of {lambda} on cycle type {cycles}"
        )));
    }
    Ok(mn_recursive(lambda.rows(), cycles.rows()))
}

pub fn character_of_permutation(lambda: &Partition, pi: &Permutation) -> Result<i128> {
    character_of_cycle_type(lambda, &pi.cycle_lengths())
}

fn column_cache() -> &'static RwLock<HashMap<Partition, Arc<Vec<i128>>>> {
    static CACHE: OnceLock<RwLock<HashMap<Partition, Arc<Vec<i128>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// All values `χ_λ(t)` in the order of [`crate::combinatorics::conjugacy_classes`].
///
/// Walks cycle types as a prefix tree so that rim-hook removals for a common
/// prefix are shared; this keeps `k ≈ 30` cheap.
pub fn character_row(lambda: &Partition) -> Arc<Vec<i128>> {
    if let Some(r) = column_cache().read().unwrap().get(lambda) {
        return Arc::clone(r);
    }

    fn walk(states: &HashMap<Vec<usize>, i128>, remaining: usize, max_part: usize, out: &mut Vec<i128>) {
        if remaining == 0 {
            out.push(states.get(&Vec::new()).copied().unwrap_or(0));
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            let mut next: HashMap<Vec<usize>, i128> = HashMap::new();
            for (shape, &coeff) in states {
                for (rest, sign) in remove_rim_hooks(shape, part) {
                    *next.entry(rest).or_insert(0) += sign * coeff;
                }
            }
            next.retain(|_, v| *v != 0);
            if next.is_empty() {
                // every completion of this prefix has character zero
                push_zeros(remaining - part, part, out);
            } else {
                walk(&next, remaining - part, part, out);
            }
        }
    }

    fn push_zeros(remaining: usize, max_part: usize, out: &mut Vec<i128>) {
        if remaining == 0 {
            out.push(0);
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            push_zeros(remaining - part, part, out);
        }
    }

    let k = lambda.k();
    let mut start = HashMap::new();
    start.insert(lambda.rows().to_vec(), 1i128);
    let mut out = Vec::new();
    walk(&start, k, k, &mut out);
    let row = Arc::new(out);
    column_cache()
        .write()
        .unwrap()
        .entry(lambda.clone())
        .or_insert_with(|| Arc::clone(&row));
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{all_permutations, conjugacy_classes, enumerate_partitions, factorial, sk_dim};
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(rows: &[usize]) -> Partition {
        Partition::new(rows.to_vec()).unwrap()
    }

    #[test]
    fn trivial_and_sign_reps() {
        for k in 2..=5 {
            let triv = young_orthogonal_rep(&Partition::trivial(k)).unwrap();
            let sign = young_orthogonal_rep(&Partition::sign(k)).unwrap();
            for g in &triv.generators {
                assert_eq!(g.data(), &[1.0]);
            }
            for g in &sign.generators {
                assert_eq!(g.data(), &[-1.0]);
            }
        }
    }

    #[test]
    fn standard_rep_of_s3() {
        let rep = young_orthogonal_rep(&p(&[2, 1])).unwrap();
        assert_eq!(rep.generators.len(), 2);
        for g in &rep.generators {
            assert_eq!((g.rows(), g.cols()), (2, 2));
            assert!(g.trace().abs() < 1e-15);
        }
        let three_cycle = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let m = represent(&rep, &three_cycle).unwrap();
        assert!((m.trace() + 1.0).abs() < 1e-14);
        assert!(represent(&rep, &Permutation::identity(3))
            .unwrap()
            .max_abs_diff(&RealMatrix::identity(2))
            .eq(&0.0));
        let s1 = represent(&rep, &Permutation::adjacent(3, 0)).unwrap();
        assert!(s1.max_abs_diff(&rep.generators[0]) < 1e-15);
    }

    #[test]
    fn generators_are_orthogonal_involutions_satisfying_braid_relations() {
        for k in 2..=6 {
            for lam in enumerate_partitions(k, k) {
                let rep = young_orthogonal_rep(&lam).unwrap();
                let id = RealMatrix::identity(rep.dim());
                let g = &rep.generators;
                for (i, gi) in g.iter().enumerate() {
                    assert!((&gi.transpose() * gi).max_abs_diff(&id) <= 1e-12);
                    assert!(gi.max_abs_diff(&gi.transpose()) <= 1e-12);
                    assert!((gi * gi).max_abs_diff(&id) <= 1e-12);
                    if i + 1 < g.len() {
                        let gj = &g[i + 1];
                        let lhs = &(gi * gj) * gi;
                        let rhs = &(gj * gi) * gj;
                        assert!(lhs.max_abs_diff(&rhs) <= 1e-12, "{lam} braid {i}");
                    }
                    for gj in g.iter().skip(i + 2) {
                        assert!((gi * gj).max_abs_diff(&(gj * gi)) <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = young_orthogonal_rep_with_cap(&p(&[3, 2, 1]), 10).unwrap_err();
        match err {
            Error::ResourceLimit { dim, cap, .. } => assert_eq!((dim, cap), (16, 10)),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn representation_is_word_independent_and_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for lam in [p(&[3, 2]), p(&[2, 2, 1]), p(&[3, 1, 1])] {
            let rep = young_orthogonal_rep(&lam).unwrap();
            for _ in 0..20 {
                let a = Permutation::random(5, &mut rng);
                let b = Permutation::random(5, &mut rng);
                let ra = represent(&rep, &a).unwrap();
                let ra_left = represent_word(&rep, &a.reduced_word_left(), 5).unwrap();
                assert!(ra.max_abs_diff(&ra_left) < 1e-12);
                let rb = represent(&rep, &b).unwrap();
                let rab = represent(&rep, &a.compose(&b)).unwrap();
                assert!((&ra * &rb).max_abs_diff(&rab) < 1e-12);
            }
        }
    }

    #[test]
    fn character_examples() {
        let id3 = CycleType::new(p(&[1, 1, 1]));
        assert_eq!(character(&p(&[2, 1]), &id3).unwrap(), 2);
        assert_eq!(character(&p(&[1, 1]), &CycleType::new(p(&[2]))).unwrap(), -1);
        assert_eq!(character(&p(&[2, 1]), &CycleType::new(p(&[2, 1]))).unwrap(), 0);
        assert_eq!(character(&p(&[2, 1]), &CycleType::new(p(&[3]))).unwrap(), -1);
        assert!(character(&p(&[2, 1]), &CycleType::new(p(&[2, 2]))).is_err());
        for k in 1..=7 {
            for lam in enumerate_partitions(k, k) {
                let id = CycleType::new(Partition::sign(k));
                assert_eq!(character(&lam, &id).unwrap(), sk_dim(&lam) as i128);
            }
        }
    }

    #[test]
    fn character_row_matches_pointwise_rule() {
        for k in 1..=9 {
            let classes = conjugacy_classes(k);
            for lam in enumerate_partitions(k, k) {
                let row = character_row(&lam);
                assert_eq!(row.len(), classes.len());
                for (c, &v) in classes.iter().zip(row.iter()) {
                    assert_eq!(character(&lam, c).unwrap(), v, "{lam} on {}", c.cycles);
                }
            }
        }
    }

    #[test]
    fn traces_of_matrices_match_characters() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 2..=6 {
            for lam in enumerate_partitions(k, k) {
                let rep = young_orthogonal_rep(&lam).unwrap();
                for _ in 0..200 {
                    let pi = Permutation::random(k, &mut rng);
                    let tr = represent(&rep, &pi).unwrap().trace();
                    let chi = character_of_permutation(&lam, &pi).unwrap() as f64;
                    assert!((tr - chi).abs() <= 1e-9, "{lam}");
                }
            }
        }
    }

    #[test]
    fn column_orthogonality_of_character_table() {
        for k in 1..=8 {
            let classes = conjugacy_classes(k);
            let parts = enumerate_partitions(k, k);
            let rows: Vec<_> = parts.iter().map(character_row).collect();
            for (a, ca) in classes.iter().enumerate() {
                for (b, _) in classes.iter().enumerate() {
                    let s: i128 = rows.iter().map(|r| r[a] * r[b]).sum();
                    if a == b {
                        let expected = BigInt::from(factorial(k)) / BigInt::from(ca.class_size.clone());
                        assert_eq!(BigInt::from(s), expected);
                    } else {
                        assert_eq!(s, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn characters_are_class_functions_on_all_of_s4() {
        let lam = p(&[2, 2]);
        let rep = young_orthogonal_rep(&lam).unwrap();
        for pi in all_permutations(4) {
            let tr = represent(&rep, &pi).unwrap().trace();
            assert!((tr - character_of_permutation(&lam, &pi).unwrap() as f64).abs() < 1e-12);
        }
    }
}
