//! Density matrices on `C^a ⊗ C^b ⊗ C^c`, their marginal spectra and entropies.

use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensorlinalg::{hermitian_eigenvalues, partial_trace, ComplexMatrix, TensorShape};

/// Tolerance for Hermiticity, trace and positivity of a state.
pub const STATE_TOL: f64 = 1e-10;

/// A validated density matrix with its tensor factorisation.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    dims: Vec<usize>,
    matrix: Vec<Vec<Entry>>,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let shape = TensorShape::new(dims.clone())?;
        if !matrix.is_square() || matrix.rows() != shape.total() {
            return Err(Error::Shape(format!(
                "{}×{} matrix for dims {dims:?}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let residual = matrix.hermiticity_residual();
        if residual > STATE_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = hermitian_eigenvalues(&matrix)?.last().copied().unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { dims, matrix })
    }

    /// Normalises `|ψ⟩⟨ψ|`.
    pub fn from_pure(dims: Vec<usize>, psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let n = psi.len();
        let m = ComplexMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / (norm * norm));
        Self::new(dims, m)
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let d: Vec<Complex64> = probs.iter().map(|&p| Complex64::new(p, 0.0)).collect();
        Self::new(vec![probs.len()], ComplexMatrix::diagonal(&d))
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().product();
        Self::new(
            dims,
            ComplexMatrix::identity(n).scale(Complex64::new(1.0 / n as f64, 0.0)),
        )
    }

    /// `(|0…0⟩ + |1…1⟩)/√2` on qubits.
    pub fn ghz(parties: usize) -> Result<Self> {
        let n = 1usize << parties;
        let mut psi = vec![Complex64::new(0.0, 0.0); n];
        psi[0] = Complex64::new(1.0, 0.0);
        psi[n - 1] = Complex64::new(1.0, 0.0);
        Self::from_pure(vec![2; parties], &psi)
    }

    /// The basis state `|0…0⟩`.
    pub fn product_pure(dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().product();
        let mut psi = vec![Complex64::new(0.0, 0.0); n];
        psi[0] = Complex64::new(1.0, 0.0);
        Self::from_pure(dims, &psi)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn marginal(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let shape = TensorShape::new(self.dims.clone())?;
        let m = partial_trace(&self.matrix, &shape, keep)?;
        let dims = keep.iter().map(|&i| self.dims[i]).collect();
        Ok(DensityMatrix { dims, matrix: m })
    }

    /// Eigenvalues in non-increasing order, with round-off negatives set to zero.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigenvalues(&self.matrix)?
            .into_iter()
            .map(|x| x.max(0.0))
            .collect())
    }

    pub fn entropy(&self) -> Result<f64> {
        Ok(von_neumann_entropy(&self.spectrum()?))
    }

    /// `ρ^{⊗k}` as a dense matrix.
    pub fn tensor_power(&self, k: usize) -> ComplexMatrix {
        let mut out = ComplexMatrix::identity(1);
        for _ in 0..k {
            out = out.kron(&self.matrix);
        }
        out
    }

    /// `W ρ W^†`.
    pub fn conjugate_by(&self, w: &ComplexMatrix) -> Result<DensityMatrix> {
        let m = &(w * &self.matrix) * &w.adjoint();
        let m = &(&m + &m.adjoint()) * &ComplexMatrix::identity(m.rows()).scale(Complex64::new(0.5, 0.0));
        DensityMatrix::new(self.dims.clone(), m)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let file = StateFile {
            dims: self.dims.clone(),
            matrix: self
                .matrix
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|z| Entry::Complex([z.re, z.im])).collect())
                .collect(),
        };
        serde_json::to_value(file).expect("state serialises")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(s)?;
        let rows: Vec<Vec<Complex64>> = file
            .matrix
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|e| match e {
                        Entry::Complex([re, im]) => Complex64::new(re, im),
                        Entry::Real(re) => Complex64::new(re, 0.0),
                    })
                    .collect()
            })
            .collect();
        Self::new(file.dims, ComplexMatrix::from_rows(&rows)?)
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let s =
            std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&s)
    }
}

/// Marginal spectra `(r_A, r_B, r_C, r_AB, r_BC, r_ABC)` of a tripartite state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectraTuple {
    pub r_a: Vec<f64>,
    pub r_b: Vec<f64>,
    pub r_c: Vec<f64>,
    pub r_ab: Vec<f64>,
    pub r_bc: Vec<f64>,
    pub r_abc: Vec<f64>,
}

impl SpectraTuple {
    /// The six vectors in the order `A, B, C, AB, BC, ABC`.
    pub fn as_array(&self) -> [&[f64]; 6] {
        [&self.r_a, &self.r_b, &self.r_c, &self.r_ab, &self.r_bc, &self.r_abc]
    }

    /// Checks normalisation and ordering of every vector.
    pub fn validate(&self) -> Result<()> {
        for r in self.as_array() {
            let s: f64 = r.iter().sum();
            if (s - 1.0).abs() > STATE_TOL || r.iter().any(|&x| x < -STATE_TOL) {
                return Err(Error::InvalidProbability(format!("{r:?}")));
            }
            if r.windows(2).any(|w| w[1] > w[0] + STATE_TOL) {
                return Err(Error::InvalidProbability(format!("{r:?} is not non-increasing")));
            }
        }
        Ok(())
    }
}

fn tripartite(rho: &DensityMatrix) -> Result<()> {
    if rho.dims.len() != 3 {
        return Err(Error::Shape(format!("expected three factors, got dims {:?}", rho.dims)));
    }
    Ok(())
}

pub fn spectra_tuple(rho: &DensityMatrix) -> Result<SpectraTuple> {
    tripartite(rho)?;
    Ok(SpectraTuple {
        r_a: rho.marginal(&[0])?.spectrum()?,
        r_b: rho.marginal(&[1])?.spectrum()?,
        r_c: rho.marginal(&[2])?.spectrum()?,
        r_ab: rho.marginal(&[0, 1])?.spectrum()?,
        r_bc: rho.marginal(&[1, 2])?.spectrum()?,
        r_abc: rho.spectrum()?,
    })
}

/// Shannon entropy in bits with `0 log 0 = 0`.
pub fn von_neumann_entropy(r: &[f64]) -> f64 {
    r.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Entropies `[H(A), H(B), H(C), H(AB), H(BC), H(ABC)]`.
pub fn entropies(rho: &DensityMatrix) -> Result<[f64; 6]> {
    let t = spectra_tuple(rho)?;
    Ok(t.as_array().map(von_neumann_entropy))
}

/// `H(AB) + H(BC) − H(B) − H(ABC)`.
pub fn ssa_gap(rho: &DensityMatrix) -> Result<f64> {
    let [_, hb, _, hab, hbc, habc] = entropies(rho)?;
    Ok(hab + hbc - hb - habc)
}

/// `H(AB) + H(BC) − H(A) − H(C)`.
pub fn weak_mono_gap(rho: &DensityMatrix) -> Result<f64> {
    let [ha, _, hc, hab, hbc, _] = entropies(rho)?;
    Ok(hab + hbc - ha - hc)
}

/// `GG^†/tr(GG^†)` for a square complex Gaussian `G`.
pub fn sample_hs_random_with<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<DensityMatrix> {
    let n: usize = TensorShape::new(dims.to_vec())?.total();
    let g = ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let mut m = &g * &g.adjoint();
    let tr = m.trace().re;
    for z in m.data_mut() {
        *z /= tr;
    }
    // symmetrise away round-off
    for i in 0..n {
        m[(i, i)].im = 0.0;
        for j in 0..i {
            m[(i, j)] = m[(j, i)].conj();
        }
    }
    DensityMatrix::new(dims.to_vec(), m)
}

pub fn sample_hs_random(dims: &[usize], seed: u64) -> Result<DensityMatrix> {
    sample_hs_random_with(dims, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Haar-random unitary from the QR decomposition of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.to_nalgebra().qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = ComplexMatrix::from_nalgebra(&q);
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}
