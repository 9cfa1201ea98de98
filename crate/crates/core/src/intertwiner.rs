//! Kronecker coefficients and orthonormal Clebsch–Gordan intertwiners
//! `φ_i : [λ] → [α]⊗[β]` in Young's orthogonal form.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::combinatorics::{conjugacy_classes, factorial, sk_dim, Partition, Permutation};
use crate::error::{Error, Result};
use crate::repsym::{cached_rep, character_row, represent, RepMatrixSet};
use crate::tensorlinalg::{fix_phase, hermitian_eigensystem, RealMatrix};

/// Default cap on `dim[α]·dim[β]·dim[λ]`, the number of unknowns in the
/// intertwiner equations, which are solved densely.
pub const DEFAULT_INTERTWINER_CAP: usize = 4096;

const EQUIVARIANCE_TOL: f64 = 1e-9;

/// Orthonormal basis of `Hom_{S_k}([λ], [α]⊗[β])` with `tr φ_j^† φ_i = dim[λ] δ_ij`.
#[derive(Clone, Debug)]
pub struct IntertwinerBasis {
    pub source: Partition,
    pub targets: (Partition, Partition),
    /// Each map is `(dim[α]·dim[β]) × dim[λ]`, rows indexed by `a·dim[β] + b`.
    pub maps: Vec<RealMatrix>,
}

impl IntertwinerBasis {
    pub fn multiplicity(&self) -> usize {
        self.maps.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "alpha": self.targets.0,
            "beta": self.targets.1,
            "lambda": self.source,
            "multiplicity": self.maps.len(),
            "maps": self.maps.iter().map(RealMatrix::to_rows).collect::<Vec<_>>(),
        })
    }
}

fn check_same_k(parts: &[&Partition]) -> Result<usize> {
    let k = parts[0].k();
    if parts.iter().any(|p| p.k() != k) {
        let labels: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
        return Err(Error::MismatchedSize(labels.join(", ")));
    }
    Ok(k)
}

/// `g(α,β,λ)` from the character inner product.
pub fn kronecker_coefficient(alpha: &Partition, beta: &Partition, lambda: &Partition) -> Result<usize> {
    let k = check_same_k(&[alpha, beta, lambda])?;
    let (ca, cb, cl) = (character_row(alpha), character_row(beta), character_row(lambda));
    let mut total = BigInt::zero();
    for (t, class) in conjugacy_classes(k).iter().enumerate() {
        let prod = BigInt::from(ca[t]) * BigInt::from(cb[t]) * BigInt::from(cl[t]);
        total += prod * BigInt::from(class.class_size.clone());
    }
    let order = BigInt::from(factorial(k));
    if !(&total % &order).is_zero() {
        return Err(Error::Internal(format!(
            "character sum for g({alpha},{beta},{lambda}) not divisible by {k}!"
        )));
    }
    (total / order)
        .to_usize()
        .ok_or_else(|| Error::Internal("negative Kronecker coefficient".into()))
}

type Triple = (Partition, Partition, Partition);

fn cg_cache() -> &'static RwLock<HashMap<Triple, Arc<IntertwinerBasis>>> {
    static CACHE: OnceLock<RwLock<HashMap<Triple, Arc<IntertwinerBasis>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Memoised intertwiner basis with the default cap.
pub fn cg_isometries(alpha: &Partition, beta: &Partition, lambda: &Partition) -> Result<Arc<IntertwinerBasis>> {
    let key = (alpha.clone(), beta.clone(), lambda.clone());
    if let Some(b) = cg_cache().read().unwrap().get(&key) {
        return Ok(Arc::clone(b));
    }
    let basis = Arc::new(cg_isometries_with_cap(alpha, beta, lambda, DEFAULT_INTERTWINER_CAP)?);
    cg_cache()
        .write()
        .unwrap()
        .entry(key)
        .or_insert_with(|| Arc::clone(&basis));
    Ok(basis)
}

/// Solves `(R_α⊗R_β)(s_i) φ = φ R_λ(s_i)` for all Coxeter generators at once
/// as the kernel of `Σ_i (I − R_α(s_i)⊗R_β(s_i)⊗R_λ(s_i))`.
pub fn cg_isometries_with_cap(
    alpha: &Partition,
    beta: &Partition,
    lambda: &Partition,
    cap: usize,
) -> Result<IntertwinerBasis> {
    let k = check_same_k(&[alpha, beta, lambda])?;
    let (da, db, dl) = (sk_dim(alpha), sk_dim(beta), sk_dim(lambda));
    let n = da.saturating_mul(db).saturating_mul(dl);
    if n > cap {
        return Err(Error::ResourceLimit {
            what: "intertwiner system",
            dim: n,
            cap,
        });
    }
    let g = kronecker_coefficient(alpha, beta, lambda)?;
    let empty = IntertwinerBasis {
        source: lambda.clone(),
        targets: (alpha.clone(), beta.clone()),
        maps: Vec::new(),
    };
    if g == 0 {
        return Ok(empty);
    }
    let (ra, rb, rl) = (cached_rep(alpha)?, cached_rep(beta)?, cached_rep(lambda)?);

    let maps = if k == 1 {
        vec![RealMatrix::identity(1)]
    } else {
        let mut system = RealMatrix::identity(n).scale((k - 1) as f64);
        for s in 0..k - 1 {
            let ks = ra.generators[s].kron(&rb.generators[s]).kron(&rl.generators[s]);
            system = &system - &ks;
        }
        let (values, vectors) = hermitian_eigensystem(&system)?;
        let kernel: Vec<usize> = (0..n).filter(|&i| values[i].abs() <= 1e-8).collect();
        if kernel.len() != g {
            return Err(Error::Internal(format!(
                "intertwiner space for ({alpha},{beta};{lambda}) has dimension {} but g = {g}",
                kernel.len()
            )));
        }
        kernel
            .into_iter()
            .map(|c| {
                let mut v = vectors.column(c);
                fix_phase(&mut v);
                let scale = (dl as f64).sqrt();
                RealMatrix::from_vec(da * db, dl, v.into_iter().map(|x| x * scale).collect())
            })
            .collect::<Result<Vec<_>>>()?
    };

    let basis = IntertwinerBasis { maps, ..empty };
    verify_equivariance(&basis, &ra, &rb, &rl)?;
    Ok(basis)
}

/// Largest `‖(R_α⊗R_β)(π)φ − φR_λ(π)‖_max` over the generators and one random
/// permutation.
fn verify_equivariance(
    basis: &IntertwinerBasis,
    ra: &RepMatrixSet,
    rb: &RepMatrixSet,
    rl: &RepMatrixSet,
) -> Result<()> {
    let k = basis.source.k();
    let seed = basis
        .source
        .rows()
        .iter()
        .chain(basis.targets.0.rows())
        .chain(basis.targets.1.rows())
        .fold(k as u64, |h, &x| h.wrapping_mul(31).wrapping_add(x as u64));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perms: Vec<Permutation> = (0..k.saturating_sub(1)).map(|i| Permutation::adjacent(k, i)).collect();
    perms.push(Permutation::random(k, &mut rng));
    for pi in &perms {
        let left = represent(ra, pi)?.kron(&represent(rb, pi)?);
        let right = represent(rl, pi)?;
        for phi in &basis.maps {
            let res = (&left * phi).max_abs_diff(&(phi * &right));
            if res > EQUIVARIANCE_TOL {
                return Err(Error::Internal(format!(
                    "intertwiner for ({},{};{}) fails equivariance by {res:.3e}",
                    basis.targets.0, basis.targets.1, basis.source
                )));
            }
        }
    }
    Ok(())
}

/// The maximally entangled vector `(1/√dim[λ]) Σ_e |e⟩|e⟩`, as a column of length `dim[λ]²`.
pub fn trivial_coupling(lambda: &Partition) -> RealMatrix {
    let d = sk_dim(lambda);
    let mut v = RealMatrix::zeros(d * d, 1);
    let x = 1.0 / (d as f64).sqrt();
    for e in 0..d {
        v[(e * d + e, 0)] = x;
    }
    v
}

/// `(1 ⊗ v^†)(v ⊗ 1)` for the trivial coupling `v` of `[λ]`; equals `1/dim[λ]`.
pub fn teleportation_contraction(lambda: &Partition) -> RealMatrix {
    let d = sk_dim(lambda);
    let v = trivial_coupling(lambda);
    let id = RealMatrix::identity(d);
    let cup = v.kron(&id);
    let cap = id.kron(&v.transpose());
    &cap * &cup
}

/// Result of bending the `β` leg of the `(α,β;λ)` intertwiners.
#[derive(Clone, Debug)]
pub struct BendComparison {
    /// `U_{ii'}` with `ψ_i = Σ_{i'} U_{ii'} φ'_{i'}`, `φ'` the `(λ,β;α)` basis.
    pub u: RealMatrix,
    pub unitarity_residual: f64,
    pub gram_residual: f64,
}

/// Bent maps `ψ_i : [α] → [λ]⊗[β]`, `ψ_i[(l,b),a] = √(dim[α]/dim[λ]) φ_i[(a,b),l]`.
///
/// The factor is `√(dim[α]dim[β]/dim[λ])` times the `1/√dim[β]` of the cup.
pub fn bent_maps(alpha: &Partition, beta: &Partition, lambda: &Partition) -> Result<Vec<RealMatrix>> {
    let basis = cg_isometries(alpha, beta, lambda)?;
    let (da, db, dl) = (sk_dim(alpha), sk_dim(beta), sk_dim(lambda));
    let c = (da as f64 / dl as f64).sqrt();
    Ok(basis
        .maps
        .iter()
        .map(|phi| RealMatrix::from_fn(dl * db, da, |r, a| c * phi[(a * db + r % db, r / db)]))
        .collect())
}

pub fn bend_and_compare(alpha: &Partition, beta: &Partition, lambda: &Partition) -> Result<BendComparison> {
    let psi = bent_maps(alpha, beta, lambda)?;
    if psi.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "g({alpha},{beta},{lambda}) = 0, nothing to compare"
        )));
    }
    let target = cg_isometries(lambda, beta, alpha)?;
    let g = psi.len();
    let da = sk_dim(alpha) as f64;
    if target.maps.len() != g {
        return Err(Error::Internal(format!(
            "multiplicities differ after bending: {g} vs {}",
            target.maps.len()
        )));
    }
    let gram = RealMatrix::from_fn(g, g, |i, j| psi[j].hs_inner(&psi[i]));
    let gram_residual = gram.max_abs_diff(&RealMatrix::identity(g).scale(da));
    let u = RealMatrix::from_fn(g, g, |i, j| target.maps[j].hs_inner(&psi[i]) / da);
    let unitarity_residual = (&u.transpose() * &u).max_abs_diff(&RealMatrix::identity(g));
    if gram_residual > 1e-8 || unitarity_residual > 1e-8 {
        return Err(Error::Internal(format!(
            "bent intertwiners for ({alpha},{beta};{lambda}): Gram residual {gram_residual:.3e}, \
             unitarity residual {unitarity_residual:.3e}"
        )));
    }
    Ok(BendComparison {
        u,
        unitarity_residual,
        gram_residual,
    })
}

/// `‖Σ_λ Σ_i φ_i φ_i^† − 1‖_max` on `[α]⊗[β]`.
pub fn completeness_residual(alpha: &Partition, beta: &Partition) -> Result<f64> {
    let k = check_same_k(&[alpha, beta])?;
    let n = sk_dim(alpha) * sk_dim(beta);
    let mut sum = RealMatrix::zeros(n, n);
    for lambda in crate::combinatorics::enumerate_partitions(k, k) {
        for phi in &cg_isometries(alpha, beta, &lambda)?.maps {
            sum = &sum + &(phi * &phi.transpose());
        }
    }
    Ok(sum.max_abs_diff(&RealMatrix::identity(n)))
}

/// Exact `Σ_λ g(α,β,λ) dim[λ]`, which must equal `dim[α]dim[β]`.
pub fn tensor_dimension_count(alpha: &Partition, beta: &Partition) -> Result<BigUint> {
    let k = check_same_k(&[alpha, beta])?;
    let mut total = BigUint::zero();
    for lambda in crate::combinatorics::enumerate_partitions(k, k) {
        total += BigUint::from(kronecker_coefficient(alpha, beta, &lambda)?)
            * crate::combinatorics::sk_dimension(&lambda).exact;
    }
    Ok(total)
}
