//! Recoupling coefficients between the `((αβ)γ)` and `(α(βγ))` coupling trees.
//!
//! For the six labels `(α, β, γ, μ, ν, λ)` the coefficient is the map
//! `H^{αβ}_μ ⊗ H^{μγ}_λ → H^{βγ}_ν ⊗ H^{αν}_λ` with entries
//! `(1/dim[λ]) tr[S_{kl}^† T_{ij}]`, where `T_{ij} = (A_i ⊗ 1_γ) B_j` and
//! `S_{kl} = (1_α ⊗ C_k) D_l` are composite intertwiners `[λ] → [α]⊗[β]⊗[γ]`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::combinatorics::{enumerate_partitions, sk_dim, Partition};
use crate::error::{Error, Result};
use crate::intertwiner::cg_isometries;
use crate::tensorlinalg::RealMatrix;

/// Six labels in the order `(α, β, γ, μ, ν, λ)`.
pub type SixLabels = [Partition; 6];

#[derive(Clone, Debug)]
pub struct RecouplingTensor {
    pub labels: SixLabels,
    /// `(g(α,β,μ), g(μ,γ,λ), g(β,γ,ν), g(α,ν,λ))`.
    pub shape: [usize; 4],
    entries: Vec<f64>,
    pub hs: f64,
}

impl RecouplingTensor {
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let [_, gj, gk, gl] = self.shape;
        self.entries[((i * gj + j) * gk + k) * gl + l]
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The coefficient as a matrix with rows `(k,l)` and columns `(i,j)`.
    pub fn as_matrix(&self) -> RealMatrix {
        let [gi, gj, gk, gl] = self.shape;
        RealMatrix::from_fn(gk * gl, gi * gj, |r, c| self.entry(c / gj, c % gj, r / gl, r % gl))
    }

    pub fn op_norm(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.as_matrix().op_norm()
        }
    }

    pub fn to_json(&self) -> Value {
        let [gi, gj, gk, gl] = self.shape;
        let entries: Vec<Vec<Vec<Vec<f64>>>> = (0..gi)
            .map(|i| {
                (0..gj)
                    .map(|j| {
                        (0..gk)
                            .map(|k| (0..gl).map(|l| self.entry(i, j, k, l)).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        json!({
            "labels": self.labels,
            "block_shape": self.shape,
            "entries": entries,
            "hs": self.hs,
        })
    }
}

/// Composite maps `T_{ij}` of the `((αβ)γ)` tree through `μ`, ordered `(i, j)`.
fn left_tree(
    alpha: &Partition,
    beta: &Partition,
    gamma: &Partition,
    mu: &Partition,
    lambda: &Partition,
) -> Result<Vec<RealMatrix>> {
    let a = cg_isometries(alpha, beta, mu)?;
    let b = cg_isometries(mu, gamma, lambda)?;
    let (dg, dl, dm) = (sk_dim(gamma), sk_dim(lambda), sk_dim(mu));
    let mut out = Vec::with_capacity(a.maps.len() * b.maps.len());
    for ai in &a.maps {
        for bj in &b.maps {
            // B_j[(m,c),x] read as a dim[μ] × (dim[γ]·dim[λ]) matrix
            let bj = RealMatrix::from_vec(dm, dg * dl, bj.data().to_vec())?;
            let t = ai * &bj;
            out.push(RealMatrix::from_vec(t.rows() * dg, dl, t.into_data())?);
        }
    }
    Ok(out)
}

/// Composite maps `S_{kl}` of the `(α(βγ))` tree through `ν`, ordered `(k, l)`.
fn right_tree(
    alpha: &Partition,
    beta: &Partition,
    gamma: &Partition,
    nu: &Partition,
    lambda: &Partition,
) -> Result<Vec<RealMatrix>> {
    let c = cg_isometries(beta, gamma, nu)?;
    let d = cg_isometries(alpha, nu, lambda)?;
    let (da, dn, dl) = (sk_dim(alpha), sk_dim(nu), sk_dim(lambda));
    let rows = da * sk_dim(beta) * sk_dim(gamma);
    let mut out = Vec::with_capacity(c.maps.len() * d.maps.len());
    for ck in &c.maps {
        for dl_map in &d.maps {
            let mut data = Vec::with_capacity(rows * dl);
            for a in 0..da {
                let block = RealMatrix::from_vec(dn, dl, dl_map.data()[a * dn * dl..(a + 1) * dn * dl].to_vec())?;
                data.extend((ck * &block).into_data());
            }
            out.push(RealMatrix::from_vec(rows, dl, data)?);
        }
    }
    Ok(out)
}

pub fn recoupling_tensor(labels: &SixLabels) -> Result<RecouplingTensor> {
    let [alpha, beta, gamma, mu, nu, lambda] = labels;
    let k = alpha.k();
    if labels.iter().any(|p| p.k() != k) {
        return Err(Error::MismatchedSize(format!(
            "recoupling labels {}",
            labels.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
        )));
    }
    let shape = [
        cg_isometries(alpha, beta, mu)?.multiplicity(),
        cg_isometries(mu, gamma, lambda)?.multiplicity(),
        cg_isometries(beta, gamma, nu)?.multiplicity(),
        cg_isometries(alpha, nu, lambda)?.multiplicity(),
    ];
    if shape.contains(&0) {
        return Ok(RecouplingTensor {
            labels: labels.clone(),
            shape,
            entries: Vec::new(),
            hs: 0.0,
        });
    }
    let t = left_tree(alpha, beta, gamma, mu, lambda)?;
    let s = right_tree(alpha, beta, gamma, nu, lambda)?;
    let dl = sk_dim(lambda) as f64;
    let mut entries = Vec::with_capacity(t.len() * s.len());
    for tij in &t {
        for skl in &s {
            entries.push(skl.hs_inner(tij) / dl);
        }
    }
    let hs = entries.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(RecouplingTensor {
        labels: labels.clone(),
        shape,
        entries,
        hs,
    })
}

/// Row/column block bookkeeping of [`full_recoupling_unitary`].
#[derive(Clone, Debug, Serialize)]
pub struct BlockLabel {
    pub label: Partition,
    pub offset: usize,
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct RecouplingUnitary {
    /// Columns `(μ, i, j)` in the order of `column_blocks`.
    pub column_blocks: Vec<BlockLabel>,
    /// Rows `(ν, k, l)` in the order of `row_blocks`.
    pub row_blocks: Vec<BlockLabel>,
    pub matrix: RealMatrix,
}

impl RecouplingUnitary {
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.matrix.cols();
        let id = RealMatrix::identity(n);
        let a = (&self.matrix.transpose() * &self.matrix).max_abs_diff(&id);
        let b = (&self.matrix * &self.matrix.transpose()).max_abs_diff(&id);
        a.max(b)
    }

    /// `‖block(μ, ν)‖_HS` indexed `[ν][μ]`.
    pub fn block_norms(&self) -> Vec<Vec<f64>> {
        self.row_blocks
            .iter()
            .map(|r| {
                self.column_blocks
                    .iter()
                    .map(|c| {
                        let mut s = 0.0;
                        for x in r.offset..r.offset + r.size {
                            for y in c.offset..c.offset + c.size {
                                s += self.matrix[(x, y)].powi(2);
                            }
                        }
                        s.sqrt()
                    })
                    .collect()
            })
            .collect()
    }
}

/// All recoupling blocks for fixed `(α, β, γ, λ)`, with `μ` and `ν` ranging
/// over every partition of `k`.
pub fn full_recoupling_unitary(
    alpha: &Partition,
    beta: &Partition,
    gamma: &Partition,
    lambda: &Partition,
) -> Result<RecouplingUnitary> {
    let k = alpha.k();
    if [beta, gamma, lambda].iter().any(|p| p.k() != k) {
        return Err(Error::MismatchedSize(format!("{alpha} {beta} {gamma} {lambda}")));
    }
    let parts = enumerate_partitions(k, k);
    let mut columns = Vec::new();
    let mut column_blocks = Vec::new();
    for mu in &parts {
        let t = left_tree(alpha, beta, gamma, mu, lambda)?;
        if !t.is_empty() {
            column_blocks.push(BlockLabel {
                label: mu.clone(),
                offset: columns.len(),
                size: t.len(),
            });
            columns.extend(t);
        }
    }
    let mut rows = Vec::new();
    let mut row_blocks = Vec::new();
    for nu in &parts {
        let s = right_tree(alpha, beta, gamma, nu, lambda)?;
        if !s.is_empty() {
            row_blocks.push(BlockLabel {
                label: nu.clone(),
                offset: rows.len(),
                size: s.len(),
            });
            rows.extend(s);
        }
    }
    if rows.len() != columns.len() {
        return Err(Error::Internal(format!(
            "associativity count mismatch for ({alpha},{beta},{gamma};{lambda}): {} vs {}",
            columns.len(),
            rows.len()
        )));
    }
    let dl = sk_dim(lambda) as f64;
    let matrix = RealMatrix::from_fn(rows.len(), columns.len(), |r, c| rows[r].hs_inner(&columns[c]) / dl);
    Ok(RecouplingUnitary {
        column_blocks,
        row_blocks,
        matrix,
    })
}

/// `Σ_μ g(α,β,μ) g(μ,γ,λ)` from characters alone.
pub fn associativity_count(
    alpha: &Partition,
    beta: &Partition,
    gamma: &Partition,
    lambda: &Partition,
) -> Result<usize> {
    use crate::intertwiner::kronecker_coefficient;
    let mut total = 0;
    for mu in enumerate_partitions(alpha.k(), alpha.k()) {
        total += kronecker_coefficient(alpha, beta, &mu)? * kronecker_coefficient(&mu, gamma, lambda)?;
    }
    Ok(total)
}

/// Comparison of a recoupling norm with a column-swapped one.
#[derive(Clone, Debug, Serialize)]
pub struct SwapCheck {
    pub lhs_hs: f64,
    pub rhs_hs: f64,
    pub predicted_ratio: f64,
}

impl SwapCheck {
    /// `|lhs − ratio·rhs| / max(1, lhs)`.
    pub fn residual(&self) -> f64 {
        (self.lhs_hs - self.predicted_ratio * self.rhs_hs).abs() / self.lhs_hs.max(1.0)
    }
}

fn dims(labels: &SixLabels) -> [f64; 6] {
    let mut d = [0.0; 6];
    for (x, p) in d.iter_mut().zip(labels) {
        *x = sk_dim(p) as f64;
    }
    d
}

/// Swaps the columns `(β, λ) ↔ (μ, ν)` of `[α β μ; γ λ ν]`.
pub fn column_swap_check(labels: &SixLabels) -> Result<SwapCheck> {
    let [a, b, g, m, n, l] = labels.clone();
    let [_, db, _, dm, dn, dl] = dims(labels);
    let lhs = recoupling_tensor(labels)?;
    let rhs = recoupling_tensor(&[a, m, g, b, l, n])?;
    Ok(SwapCheck {
        lhs_hs: lhs.hs,
        rhs_hs: rhs.hs,
        predicted_ratio: (dm * dn / (db * dl)).sqrt(),
    })
}

/// Swaps the columns `(α, γ) ↔ (μ, ν)` of `[α β μ; γ λ ν]`.
pub fn column_swap_check_ag(labels: &SixLabels) -> Result<SwapCheck> {
    let [a, b, g, m, n, l] = labels.clone();
    let [da, _, dg, dm, dn, _] = dims(labels);
    let lhs = recoupling_tensor(labels)?;
    let rhs = recoupling_tensor(&[m, b, n, a, g, l])?;
    Ok(SwapCheck {
        lhs_hs: lhs.hs,
        rhs_hs: rhs.hs,
        predicted_ratio: (dm * dn / (da * dg)).sqrt(),
    })
}

/// Parses six labels separated by `/` or `;`, each written `3,1`.
pub fn parse_six_labels(s: &str) -> Result<SixLabels> {
    let parts: Vec<Partition> = s.split(['/', ';']).map(|x| x.trim().parse()).collect::<Result<_>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<Partition>| Error::InvalidArgument(format!("expected 6 labels, got {}", v.len())))
}
