//! The action of `S_k` on `(C^D)^{⊗k}`, isotypic projectors, projected traces
//! `tr(P_λ ρ^{⊗k})` and the tripartite projectors `P̃`, `Q̃`.
//!
//! Global index convention: copies are the slowest index, `x = Σ_t x_t D^{k-1-t}`;
//! inside a copy of `C^a⊗C^b⊗C^c` the local index is `(i_A·b + i_B)·c + i_C`.
//! `U(π)|i_1…i_k⟩ = |i_{π⁻¹(1)}…i_{π⁻¹(k)}⟩`, so `U(π)U(σ) = U(πσ)`.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{Float, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::combinatorics::{
    all_permutations, conjugacy_classes, enumerate_partitions, factorial, l1_distance, sk_dim, weyl_dimension,
    Partition, Permutation,
};
use crate::error::{Error, Result};
use crate::quantumstates::{DensityMatrix, SpectraTuple};
use crate::recoupling::SixLabels;
use crate::repsym::{character_of_permutation, character_row};
use crate::tensorlinalg::{hermitian_eigenvalues, Matrix, RealMatrix, Scalar};

/// Largest total dimension for dense operators.
pub const DENSE_CAP: usize = 4096;
/// Largest total dimension for implicit operators.
pub const IMPLICIT_CAP: usize = 1_000_000;
/// Largest `k` for sums over all of `S_k`.
pub const MAX_SUM_K: usize = 8;

/// A set of tensor factors of one copy, as a bit mask over factor positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Subsystems(pub u32);

impl Subsystems {
    pub const A: Self = Self(0b001);
    pub const B: Self = Self(0b010);
    pub const C: Self = Self(0b100);
    pub const AB: Self = Self(0b011);
    pub const BC: Self = Self(0b110);
    pub const ABC: Self = Self(0b111);

    pub fn contains(self, factor: usize) -> bool {
        self.0 >> factor & 1 == 1
    }
}

/// `k` copies of `C^{d_1}⊗…⊗C^{d_m}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CopyLayout {
    local_dims: Vec<usize>,
    k: usize,
    local: usize,
    total: usize,
}

impl CopyLayout {
    pub fn new(local_dims: Vec<usize>, k: usize) -> Result<Self> {
        if local_dims.is_empty() || local_dims.contains(&0) {
            return Err(Error::Shape(format!("invalid local dimensions {local_dims:?}")));
        }
        let local: usize = local_dims.iter().product();
        let total = u32::try_from(k)
            .ok()
            .and_then(|k| local.checked_pow(k))
            .filter(|&t| t <= IMPLICIT_CAP)
            .ok_or(Error::ResourceLimit {
                what: "tensor power",
                dim: usize::MAX,
                cap: IMPLICIT_CAP,
            })?;
        Ok(Self {
            local_dims,
            k,
            local,
            total,
        })
    }

    pub fn single(d: usize, k: usize) -> Result<Self> {
        Self::new(vec![d], k)
    }

    pub fn tripartite(a: usize, b: usize, c: usize, k: usize) -> Result<Self> {
        Self::new(vec![a, b, c], k)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn local_dim(&self) -> usize {
        self.local
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn full_mask(&self) -> Subsystems {
        Subsystems((1 << self.local_dims.len()) - 1)
    }

    /// Product of the local dimensions selected by `mask`.
    pub fn mask_dim(&self, mask: Subsystems) -> usize {
        self.local_dims
            .iter()
            .enumerate()
            .filter(|(f, _)| mask.contains(*f))
            .map(|(_, &d)| d)
            .product()
    }

    /// The part of each local index carried by the factors in `mask`.
    fn masked_parts(&self, mask: Subsystems) -> Vec<usize> {
        let m = self.local_dims.len();
        let mut strides = vec![1; m];
        for f in (0..m.saturating_sub(1)).rev() {
            strides[f] = strides[f + 1] * self.local_dims[f + 1];
        }
        (0..self.local)
            .map(|x| {
                (0..m)
                    .filter(|&f| mask.contains(f))
                    .map(|f| (x / strides[f]) % self.local_dims[f] * strides[f])
                    .sum()
            })
            .collect()
    }

    /// `src` with `(U_mask(π) v)[j] = v[src[j]]`.
    pub fn source_map(&self, mask: Subsystems, pi: &Permutation) -> Vec<u32> {
        let parts = self.masked_parts(mask);
        let k = self.k;
        let place: Vec<usize> = (0..k).map(|t| self.local.pow((k - 1 - t) as u32)).collect();
        let mut digits = vec![0usize; k];
        let mut out = Vec::with_capacity(self.total);
        for _ in 0..self.total {
            let mut s = 0;
            for t in 0..k {
                let x = digits[t];
                let y = digits[pi.apply(t)];
                s += (x - parts[x] + parts[y]) * place[t];
            }
            out.push(s as u32);
            for t in (0..k).rev() {
                digits[t] += 1;
                if digits[t] < self.local {
                    break;
                }
                digits[t] = 0;
            }
        }
        out
    }
}

/// `U(π)v` on `(C^d)^{⊗k}` without forming `U(π)`.
pub fn apply_permutation<T: Scalar>(pi: &Permutation, v: &[T], layout: &CopyLayout) -> Result<Vec<T>> {
    PermutationAction::new(layout.clone(), layout.full_mask(), pi.clone())?.apply(v)
}

/// `U_mask(π)`: permutes only the factors in `mask` across copies.
#[derive(Clone, Debug)]
pub struct PermutationAction {
    pub layout: CopyLayout,
    pub mask: Subsystems,
    pub perm: Permutation,
    src: Vec<u32>,
}

impl PermutationAction {
    pub fn new(layout: CopyLayout, mask: Subsystems, perm: Permutation) -> Result<Self> {
        if perm.len() != layout.k() {
            return Err(Error::MismatchedSize(format!(
                "permutation of {} letters on {} copies",
                perm.len(),
                layout.k()
            )));
        }
        let src = layout.source_map(mask, &perm);
        Ok(Self {
            layout,
            mask,
            perm,
            src,
        })
    }

    pub fn apply<T: Scalar>(&self, v: &[T]) -> Result<Vec<T>> {
        check_len(v.len(), self.layout.total())?;
        Ok(self.src.iter().map(|&s| v[s as usize]).collect())
    }
}

fn check_len(len: usize, expected: usize) -> Result<()> {
    if len != expected {
        return Err(Error::Shape(format!("length {len}, expected {expected}")));
    }
    Ok(())
}

/// `Σ_π c_π U_mask(π)`, applied by index gathers.
#[derive(Clone, Debug)]
pub struct PermutationSum {
    layout: CopyLayout,
    mask: Subsystems,
    terms: Vec<(f64, Permutation)>,
    maps: Option<Vec<Vec<u32>>>,
}

impl PermutationSum {
    pub fn new(layout: CopyLayout, mask: Subsystems, terms: Vec<(f64, Permutation)>) -> Result<Self> {
        if let Some((_, p)) = terms.iter().find(|(_, p)| p.len() != layout.k()) {
            return Err(Error::MismatchedSize(format!(
                "permutation of {} letters on {} copies",
                p.len(),
                layout.k()
            )));
        }
        let maps = (layout.total().saturating_mul(terms.len()) <= 1 << 24)
            .then(|| terms.iter().map(|(_, p)| layout.source_map(mask, p)).collect());
        Ok(Self {
            layout,
            mask,
            terms,
            maps,
        })
    }

    /// `Σ_{λ ∈ labels} P_λ` on the factors in `mask`, with
    /// `P_λ = (dim[λ]/k!) Σ_π χ_λ(π) U(π)`. Labels with more rows than the
    /// masked dimension contribute nothing.
    pub fn isotypic(layout: &CopyLayout, mask: Subsystems, labels: &[Partition]) -> Result<Self> {
        let k = layout.k();
        if let Some(l) = labels.iter().find(|l| l.k() != k) {
            return Err(Error::MismatchedSize(format!("{l} on {k} copies")));
        }
        let rows = layout.mask_dim(mask);
        let active: Vec<&Partition> = labels.iter().filter(|l| l.num_rows() <= rows).collect();
        if active.is_empty() {
            return Self::new(layout.clone(), mask, Vec::new());
        }
        if k > MAX_SUM_K {
            return Err(Error::ResourceLimit {
                what: "permutation sum over S_k",
                dim: factorial(k).to_usize().unwrap_or(usize::MAX),
                cap: factorial(MAX_SUM_K).to_usize().unwrap_or(usize::MAX),
            });
        }
        let order = factorial(k).to_f64().unwrap_or(f64::INFINITY);
        let mut terms = Vec::new();
        for pi in all_permutations(k) {
            let mut s: i128 = 0;
            for l in &active {
                s += sk_dim(l) as i128 * character_of_permutation(l, &pi)?;
            }
            if s != 0 {
                terms.push((s as f64 / order, pi));
            }
        }
        Self::new(layout.clone(), mask, terms)
    }

    pub fn layout(&self) -> &CopyLayout {
        &self.layout
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn for_each_term(&self, mut f: impl FnMut(f64, &[u32])) {
        match &self.maps {
            Some(maps) => {
                for ((c, _), m) in self.terms.iter().zip(maps) {
                    f(*c, m);
                }
            }
            None => {
                for (c, p) in &self.terms {
                    f(*c, &self.layout.source_map(self.mask, p));
                }
            }
        }
    }

    pub fn apply_vec<T: Scalar>(&self, v: &[T]) -> Result<Vec<T>> {
        check_len(v.len(), self.layout.total())?;
        let mut out = vec![T::zero(); v.len()];
        self.for_each_term(|c, src| {
            let c = T::from_real_f64(c);
            for (o, &s) in out.iter_mut().zip(src) {
                *o += c * v[s as usize];
            }
        });
        Ok(out)
    }

    /// `S·M`.
    pub fn apply_left<T: Scalar>(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        check_len(m.rows(), self.layout.total())?;
        let mut out = Matrix::zeros(m.rows(), m.cols());
        self.for_each_term(|c, src| {
            let c = T::from_real_f64(c);
            for (j, &s) in src.iter().enumerate() {
                let from = m.row(s as usize);
                for (o, &x) in out.row_mut(j).iter_mut().zip(from) {
                    *o += c * x;
                }
            }
        });
        Ok(out)
    }

    /// `M·S`.
    pub fn apply_right<T: Scalar>(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        check_len(m.cols(), self.layout.total())?;
        let mut out = Matrix::zeros(m.rows(), m.cols());
        self.for_each_term(|c, src| {
            let c = T::from_real_f64(c);
            for r in 0..m.rows() {
                let from = m.row(r);
                let to = out.row_mut(r);
                for (j, &s) in src.iter().enumerate() {
                    to[s as usize] += c * from[j];
                }
            }
        });
        Ok(out)
    }

    /// `tr(S·M)` in `O(terms · N)`.
    pub fn trace_with<T: Scalar>(&self, m: &Matrix<T>) -> Result<T> {
        check_len(m.rows(), self.layout.total())?;
        check_len(m.cols(), self.layout.total())?;
        let mut total = T::zero();
        self.for_each_term(|c, src| {
            let mut s = T::zero();
            for (j, &i) in src.iter().enumerate() {
                s += m[(i as usize, j)];
            }
            total += T::from_real_f64(c) * s;
        });
        Ok(total)
    }

    /// `tr S` from cycle counts.
    pub fn trace(&self) -> f64 {
        let md = self.layout.mask_dim(self.mask) as f64;
        let rest = (self.layout.local_dim() / self.layout.mask_dim(self.mask)) as f64;
        let k = self.layout.k() as i32;
        self.terms
            .iter()
            .map(|(c, p)| c * md.powi(p.num_cycles() as i32) * rest.powi(k))
            .sum()
    }

    pub fn to_dense(&self) -> Result<RealMatrix> {
        let n = self.layout.total();
        if n > DENSE_CAP {
            return Err(Error::ResourceLimit {
                what: "dense operator",
                dim: n,
                cap: DENSE_CAP,
            });
        }
        let mut out = RealMatrix::zeros(n, n);
        self.for_each_term(|c, src| {
            for (j, &s) in src.iter().enumerate() {
                out[(j, s as usize)] += c;
            }
        });
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub enum ProjectorRepr {
    Dense(RealMatrix),
    Implicit(PermutationSum),
}

/// Orthogonal projector onto the `[λ]`-isotypic summand of `(C^d)^{⊗k}`.
#[derive(Clone, Debug)]
pub struct IsotypicProjector {
    pub lambda: Partition,
    pub d: usize,
    pub k: usize,
    pub repr: ProjectorRepr,
}

pub fn isotypic_projector(lambda: &Partition, d: usize, k: usize) -> Result<IsotypicProjector> {
    if lambda.k() != k {
        return Err(Error::MismatchedSize(format!("{lambda} on {k} copies")));
    }
    let layout = CopyLayout::single(d, k)?;
    let sum = PermutationSum::isotypic(&layout, layout.full_mask(), std::slice::from_ref(lambda))?;
    let repr = if layout.total() <= DENSE_CAP {
        ProjectorRepr::Dense(sum.to_dense()?)
    } else {
        ProjectorRepr::Implicit(sum)
    };
    Ok(IsotypicProjector {
        lambda: lambda.clone(),
        d,
        k,
        repr,
    })
}

impl IsotypicProjector {
    pub fn apply<T: Scalar>(&self, v: &[T]) -> Result<Vec<T>> {
        match &self.repr {
            ProjectorRepr::Dense(m) => m.map(T::from_real_f64).apply(v),
            ProjectorRepr::Implicit(s) => s.apply_vec(v),
        }
    }

    /// `dim[λ]·dim V^d_λ`.
    pub fn rank(&self) -> BigUint {
        crate::combinatorics::sk_dimension(&self.lambda).exact * weyl_dimension(&self.lambda, self.d)
    }

    pub fn dense(&self) -> Option<&RealMatrix> {
        match &self.repr {
            ProjectorRepr::Dense(m) => Some(m),
            ProjectorRepr::Implicit(_) => None,
        }
    }
}

/// Writes non-negative reals as `n_i / 2^e` with a common exponent.
fn dyadic(xs: &[f64]) -> (Vec<BigInt>, u64) {
    let decoded: Vec<(u64, i64)> = xs
        .iter()
        .map(|&x| {
            let (m, e, _) = x.integer_decode();
            if m == 0 {
                (0, 0)
            } else {
                let tz = m.trailing_zeros();
                (m >> tz, i64::from(e) + i64::from(tz))
            }
        })
        .collect();
    let e = decoded
        .iter()
        .filter(|(m, _)| *m != 0)
        .map(|&(_, e)| -e)
        .max()
        .unwrap_or(0)
        .max(0);
    let ns = decoded
        .iter()
        .map(|&(m, ex)| {
            if m == 0 {
                BigInt::zero()
            } else {
                BigInt::from(m) << (e + ex) as usize
            }
        })
        .collect();
    (ns, e as u64)
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// Correctly scaled `num/den` as `f64`.
fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let negative = num.is_negative() != den.is_negative();
    let (a, b) = (num.abs(), den.abs());
    let shift = b.bits() as i64 - a.bits() as i64 + 64;
    let q = if shift >= 0 {
        (a << shift as usize) / b
    } else {
        a / (b << (-shift) as usize)
    };
    let v = ldexp(q.to_f64().unwrap_or(f64::INFINITY), -shift);
    if negative {
        -v
    } else {
        v
    }
}

/// Exact evaluation of `tr(P_λ ρ^{⊗k})` for all `λ ⊢ k` from the spectrum of `ρ`.
///
/// With `r_i = n_i/2^e`, each class contributes the integer
/// `|C_t| Π_j (Σ_i n_i^j)^{m_j}`, and `tr(P_λ ρ^{⊗k}) = dim[λ] Σ_t χ_λ(t)·(…)/(k! 2^{ek})`.
#[derive(Clone, Debug)]
pub struct ProjectedTraceTable {
    k: usize,
    d: usize,
    weights: Vec<BigInt>,
    denominator: BigInt,
}

impl ProjectedTraceTable {
    pub fn new(spectrum: &[f64], k: usize) -> Result<Self> {
        if spectrum
            .iter()
            .any(|&x| !x.is_finite() || x < -crate::quantumstates::STATE_TOL)
        {
            return Err(Error::InvalidProbability(format!("{spectrum:?}")));
        }
        let r: Vec<f64> = spectrum.iter().map(|&x| x.max(0.0)).collect();
        let (ns, e) = dyadic(&r);
        let power_sums: Vec<BigInt> = (0..=k).map(|j| ns.iter().map(|n| n.pow(j as u32)).sum()).collect();
        let weights = conjugacy_classes(k)
            .iter()
            .map(|class| {
                let mut w = BigInt::from(class.class_size.clone());
                for &part in class.cycles.rows() {
                    w *= &power_sums[part];
                }
                w
            })
            .collect();
        let denominator = BigInt::from(factorial(k)) << (e as usize * k);
        Ok(Self {
            k,
            d: r.len(),
            weights,
            denominator,
        })
    }

    pub fn from_state(rho: &DensityMatrix, k: usize) -> Result<Self> {
        Self::new(&rho.spectrum()?, k)
    }

    pub fn trace(&self, lambda: &Partition) -> Result<f64> {
        if lambda.k() != self.k {
            return Err(Error::MismatchedSize(format!("{lambda} on {} copies", self.k)));
        }
        if lambda.num_rows() > self.d {
            return Ok(0.0);
        }
        let chi = character_row(lambda);
        let mut num = BigInt::zero();
        for (c, w) in chi.iter().zip(&self.weights) {
            if *c != 0 {
                num += BigInt::from(*c) * w;
            }
        }
        num *= BigInt::from(sk_dim(lambda));
        Ok(ratio_to_f64(&num, &self.denominator))
    }

    /// `(λ, tr(P_λ ρ^{⊗k}))` for every `λ ⊢ k` with at most `d` rows.
    pub fn all(&self) -> Result<Vec<(Partition, f64)>> {
        enumerate_partitions(self.k, self.d)
            .into_iter()
            .map(|l| {
                let t = self.trace(&l)?;
                Ok((l, t))
            })
            .collect()
    }
}

pub fn projected_trace(lambda: &Partition, rho: &DensityMatrix, k: usize) -> Result<f64> {
    ProjectedTraceTable::from_state(rho, k)?.trace(lambda)
}

/// `tr(P_λ ρ^{⊗k})` through the permutation sum applied to the dense `ρ^{⊗k}`.
pub fn projected_trace_dense(lambda: &Partition, rho: &DensityMatrix, k: usize) -> Result<f64> {
    let layout = CopyLayout::single(rho.dim(), k)?;
    if layout.total() > DENSE_CAP {
        return Err(Error::ResourceLimit {
            what: "dense tensor power",
            dim: layout.total(),
            cap: DENSE_CAP,
        });
    }
    let sum = PermutationSum::isotypic(&layout, layout.full_mask(), std::slice::from_ref(lambda))?;
    Ok(sum.trace_with(&rho.tensor_power(k))?.re)
}

/// Label sets for each of the six positions `(α, β, γ, μ, ν, λ)`, acting on
/// `A`, `B`, `C`, `AB`, `BC` and `ABC` respectively.
#[derive(Clone, Debug, Serialize)]
pub struct TripartiteLabels {
    pub sets: [Vec<Partition>; 6],
}

const POSITIONS: [Subsystems; 6] = [
    Subsystems::A,
    Subsystems::B,
    Subsystems::C,
    Subsystems::AB,
    Subsystems::BC,
    Subsystems::ABC,
];

/// Partitions of `k` with at most `rows` rows within `ℓ₁` distance `δ` of `r`.
pub fn delta_ball(r: &[f64], k: usize, rows: usize, delta: f64) -> Vec<Partition> {
    enumerate_partitions(k, rows)
        .into_iter()
        .filter(|l| l1_distance(&l.normalize(r.len()), r) <= delta + 1e-12)
        .collect()
}

impl TripartiteLabels {
    pub fn single(six: &SixLabels) -> Self {
        Self {
            sets: six.clone().map(|p| vec![p]),
        }
    }

    /// Every position summed over all partitions of `k`.
    pub fn all(k: usize) -> Self {
        Self {
            sets: std::array::from_fn(|_| enumerate_partitions(k, k)),
        }
    }

    /// The `δ`-balls around the marginal spectra.
    pub fn ball(spectra: &SpectraTuple, dims: [usize; 3], k: usize, delta: f64) -> Result<Self> {
        if delta.is_nan() || delta < 0.0 {
            return Err(Error::InvalidArgument(format!("δ = {delta} must be non-negative")));
        }
        let [a, b, c] = dims;
        let rows = [a, b, c, a * b, b * c, a * b * c];
        let r = spectra.as_array();
        Ok(Self {
            sets: std::array::from_fn(|i| delta_ball(r[i], k, rows[i], delta)),
        })
    }

    /// All six-tuples in the product of the sets, in lexicographic order.
    pub fn tuples(&self) -> Vec<SixLabels> {
        let mut out = vec![Vec::new()];
        for set in &self.sets {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Partition>| {
                    set.iter().map(move |p| {
                        let mut v = prefix.clone();
                        v.push(p.clone());
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(|v| v.try_into().expect("six labels")).collect()
    }

    fn sums(&self, layout: &CopyLayout) -> Result<[PermutationSum; 6]> {
        let sums: Vec<PermutationSum> = POSITIONS
            .iter()
            .zip(&self.sets)
            .map(|(&mask, set)| PermutationSum::isotypic(layout, mask, set))
            .collect::<Result<_>>()?;
        Ok(sums.try_into().expect("six sums"))
    }
}

fn dense_layout(dims: [usize; 3], k: usize) -> Result<CopyLayout> {
    let layout = CopyLayout::new(dims.to_vec(), k)?;
    if layout.total() > DENSE_CAP {
        return Err(Error::ResourceLimit {
            what: "tripartite operator",
            dim: layout.total(),
            cap: DENSE_CAP,
        });
    }
    Ok(layout)
}

/// Dense `(P̃, Q̃)` with `Q̃ = P_α P_β P_γ P_μ^{AB} P_λ` and `P̃ = P_α P_β P_γ P_ν^{BC} P_λ`.
pub fn tripartite_projectors(
    labels: &TripartiteLabels,
    dims: [usize; 3],
    k: usize,
) -> Result<(RealMatrix, RealMatrix)> {
    let layout = dense_layout(dims, k)?;
    let [pa, pb, pc, pm, pn, pl] = labels.sums(&layout)?;
    let local =
        |m: RealMatrix| -> Result<RealMatrix> { pl.apply_left(&pc.apply_left(&pb.apply_left(&pa.apply_left(&m)?)?)?) };
    let q = local(pm.to_dense()?)?;
    let p = local(pn.to_dense()?)?;
    Ok((p, q))
}

/// `P̃Q̃ = P_α P_β P_γ P_λ P_ν^{BC} P_μ^{AB}`.
pub fn tripartite_product(labels: &TripartiteLabels, dims: [usize; 3], k: usize) -> Result<RealMatrix> {
    let layout = dense_layout(dims, k)?;
    let [pa, pb, pc, pm, pn, pl] = labels.sums(&layout)?;
    let mut x = pm.to_dense()?;
    for s in [&pn, &pa, &pb, &pc, &pl] {
        x = s.apply_left(&x)?;
    }
    Ok(x)
}

#[derive(Clone, Debug, Serialize)]
pub struct SchurWeylNorms {
    /// `‖P̃Q̃‖_HS / √(dim[λ] dim V^a_α dim V^b_β dim V^c_γ)`.
    pub hs: f64,
    pub op_norm: f64,
    pub raw_hs: f64,
    pub identity_dim: f64,
}

/// Recoupling norm read off from `P̃Q̃ = 1 ⊗ [α β μ; γ λ ν]`.
pub fn hs_norm_via_schurweyl(six: &SixLabels, dims: [usize; 3], k: usize) -> Result<SchurWeylNorms> {
    let [a, b, c] = dims;
    let rows = [a, b, c, a * b, b * c, a * b * c];
    for (p, &r) in six.iter().zip(&rows) {
        if p.num_rows() > r {
            return Err(Error::InvalidArgument(format!("label {p} has more than {r} rows")));
        }
    }
    let x = tripartite_product(&TripartiteLabels::single(six), dims, k)?;
    let raw_hs = x.hs_norm();
    let identity_dim = sk_dim(&six[5]) as f64
        * weyl_dimension(&six[0], a).to_f64().unwrap_or(0.0)
        * weyl_dimension(&six[1], b).to_f64().unwrap_or(0.0)
        * weyl_dimension(&six[2], c).to_f64().unwrap_or(0.0);
    if identity_dim == 0.0 {
        if raw_hs > 1e-9 {
            return Err(Error::Internal(format!(
                "nonzero P̃Q̃ ({raw_hs:.3e}) on an empty summand"
            )));
        }
        return Ok(SchurWeylNorms {
            hs: 0.0,
            op_norm: 0.0,
            raw_hs,
            identity_dim,
        });
    }
    let op_norm = if raw_hs == 0.0 {
        0.0
    } else {
        let gram = &x * &x.transpose();
        hermitian_eigenvalues(&gram)?
            .first()
            .copied()
            .unwrap_or(0.0)
            .max(0.0)
            .sqrt()
    };
    Ok(SchurWeylNorms {
        hs: raw_hs / identity_dim.sqrt(),
        op_norm,
        raw_hs,
        identity_dim,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OverlapTraces {
    pub t_p: f64,
    pub t_q: f64,
    pub overlap: Complex64,
}

/// `tr(P̃ρ^{⊗k})`, `tr(Q̃ρ^{⊗k})` and `tr(P̃Q̃ρ^{⊗k})` for summed label sets.
///
/// With `L = Π_A Π_B Π_C Π_ABC` the traces reduce to `R = ρ^{⊗k} L` and
/// `tr(Π_AB R)`, `tr(Π_BC R)`, `tr(Π_BC Π_AB R)`.
pub fn overlap_trace(labels: &TripartiteLabels, rho: &DensityMatrix, k: usize) -> Result<OverlapTraces> {
    let dims: [usize; 3] = rho
        .dims()
        .try_into()
        .map_err(|_| Error::Shape(format!("expected a tripartite state, got dims {:?}", rho.dims())))?;
    let layout = dense_layout(dims, k)?;
    let [pa, pb, pc, pm, pn, pl] = labels.sums(&layout)?;
    let mut r = rho.tensor_power(k);
    for s in [&pa, &pb, &pc, &pl] {
        r = s.apply_right(&r)?;
    }
    let t_q = pm.trace_with(&r)?.re;
    let t_p = pn.trace_with(&r)?.re;
    let overlap = pn.trace_with(&pm.apply_left(&r)?)?;
    Ok(OverlapTraces { t_p, t_q, overlap })
}
