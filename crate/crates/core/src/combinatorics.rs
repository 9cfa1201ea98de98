//! Partitions, permutations, conjugacy classes and standard tableaux of `S_k`,
//! together with the dimension formulas used throughout the crate.
//!
//! Partitions are always listed in reverse lexicographic order, so `(k)` comes
//! first and `(1,…,1)` last.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Young diagram: non-increasing positive rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    rows: Vec<usize>,
}

impl Partition {
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidPartition {
                rows,
                reason: "no rows".into(),
            });
        }
        if rows.contains(&0) {
            return Err(Error::InvalidPartition {
                rows,
                reason: "rows must be positive".into(),
            });
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition {
                rows,
                reason: "rows must be non-increasing".into(),
            });
        }
        Ok(Self { rows })
    }

    /// Builds a partition from rows that may contain trailing zeros.
    pub(crate) fn from_rows_unchecked(mut rows: Vec<usize>) -> Self {
        while rows.last() == Some(&0) {
            rows.pop();
        }
        debug_assert!(rows.windows(2).all(|w| w[0] >= w[1]));
        Self { rows }
    }

    /// The single-row diagram `(k)`.
    pub fn trivial(k: usize) -> Self {
        Self { rows: vec![k] }
    }

    /// The single-column diagram `(1,…,1)`.
    pub fn sign(k: usize) -> Self {
        Self { rows: vec![1; k] }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Number of boxes.
    pub fn k(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.rows[0];
        let rows = (0..cols)
            .map(|j| self.rows.iter().take_while(|&&r| r > j).count())
            .collect();
        Partition { rows }
    }

    /// Hook lengths, row by row.
    pub fn hook_lengths(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut hooks = Vec::with_capacity(self.k());
        for (i, &r) in self.rows.iter().enumerate() {
            for j in 0..r {
                hooks.push(r - j + conj.rows[j] - i - 1);
            }
        }
        hooks
    }

    /// The normalised diagram `λ/k`, zero-padded to at least `len` entries.
    pub fn normalize(&self, len: usize) -> Vec<f64> {
        let k = self.k() as f64;
        let mut v: Vec<f64> = self.rows.iter().map(|&r| r as f64 / k).collect();
        if v.len() < len {
            v.resize(len, 0.0);
        }
        v
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(rows: Vec<usize>) -> Result<Self> {
        Partition::new(rows)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.rows
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses comma-separated rows such as `"3,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(',')
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::InvalidPartition {
                    rows: vec![],
                    reason: format!("cannot parse row {t:?} in {s:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(rows)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `k` with at most `max_rows` rows, reverse lexicographic.
pub fn enumerate_partitions(k: usize, max_rows: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max_part: usize, rows_left: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { rows: cur.clone() });
            return;
        }
        if rows_left == 0 {
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            cur.push(part);
            rec(remaining - part, part, rows_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 || max_rows == 0 {
        return out;
    }
    rec(k, k, max_rows, &mut Vec::new(), &mut out);
    out
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `dim[λ]` as an exact integer together with its natural logarithm.
#[derive(Clone, Debug, PartialEq)]
pub struct SkDimension {
    pub exact: BigUint,
    pub ln: f64,
}

/// Dimension of the irreducible representation `[λ]` of `S_k` (hook-length formula).
pub fn sk_dimension(lambda: &Partition) -> SkDimension {
    let hooks = lambda.hook_lengths();
    let num = factorial(lambda.k());
    let den = hooks.iter().fold(BigUint::one(), |acc, &h| acc * BigUint::from(h));
    let exact = num / den;
    SkDimension {
        exact,
        ln: ln_sk_dimension(lambda),
    }
}

/// `ln dim[λ]` without forming big integers; usable for `k` in the hundreds of thousands.
pub fn ln_sk_dimension(lambda: &Partition) -> f64 {
    let ln_fact = statrs::function::gamma::ln_gamma(lambda.k() as f64 + 1.0);
    let ln_hooks: f64 = lambda.hook_lengths().iter().map(|&h| (h as f64).ln()).sum();
    ln_fact - ln_hooks
}

/// `dim[λ]` as a machine integer. Panics if it does not fit, which cannot happen for k ≤ 20.
pub fn sk_dim(lambda: &Partition) -> usize {
    sk_dimension(lambda).exact.to_usize().expect("dim[λ] exceeds usize")
}

/// Dimension of the `GL(d)` irrep `V^d_λ` (Weyl's product formula); zero when λ has more than `d` rows.
pub fn weyl_dimension(lambda: &Partition, d: usize) -> BigUint {
    if lambda.num_rows() > d {
        return BigUint::zero();
    }
    let mut padded = lambda.rows.clone();
    padded.resize(d, 0);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..d {
        for j in (i + 1)..d {
            num *= BigUint::from(padded[i] - padded[j] + j - i);
            den *= BigUint::from(j - i);
        }
    }
    num / den
}

/// ℓ₁ distance between two vectors, zero-padding the shorter one.
pub fn l1_distance(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().max(y.len());
    (0..n)
        .map(|i| (x.get(i).copied().unwrap_or(0.0) - y.get(i).copied().unwrap_or(0.0)).abs())
        .sum()
}

/// Rounds a probability vector to a Young diagram with `k` boxes by largest-remainder
/// apportionment of `k·r`, then sorting rows non-increasingly.
pub fn round_spectrum(r: &[f64], k: usize) -> Result<Partition> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if r.is_empty() {
        return Err(Error::InvalidProbability("empty vector".into()));
    }
    if let Some(x) = r.iter().find(|x| !x.is_finite() || **x < -1e-12) {
        return Err(Error::InvalidProbability(format!("entry {x} is negative")));
    }
    let total: f64 = r.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidProbability(format!("entries sum to {total}")));
    }
    let scaled: Vec<f64> = r.iter().map(|&x| x.max(0.0) * k as f64).collect();
    let mut rows: Vec<usize> = scaled.iter().map(|&x| (x + 1e-9).floor() as usize).collect();
    let assigned: usize = rows.iter().sum();
    if assigned > k {
        return Err(Error::Internal(format!(
            "apportionment assigned {assigned} > {k} boxes"
        )));
    }
    let mut order: Vec<usize> = (0..r.len()).collect();
    let rem: Vec<f64> = scaled
        .iter()
        .zip(&rows)
        .map(|(&x, &f)| (x - f as f64).max(0.0))
        .collect();
    // Larger remainder first; equal remainders keep the earlier index.
    order.sort_by(|&a, &b| {
        if (rem[a] - rem[b]).abs() <= 1e-12 {
            a.cmp(&b)
        } else {
            rem[b].total_cmp(&rem[a])
        }
    });
    for &i in order.iter().take(k - assigned) {
        rows[i] += 1;
    }
    rows.sort_unstable_by(|a, b| b.cmp(a));
    Ok(Partition::from_rows_unchecked(rows))
}

/// A permutation of `{0,…,n-1}` in one-line notation: `images[i] = π(i)`.
///
/// Composition follows `(π·σ)(i) = π(σ(i))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidArgument(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    /// The adjacent transposition `s_i = (i, i+1)`, zero-based.
    pub fn adjacent(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(i, i + 1);
        p
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Self { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    pub fn cycle_lengths(&self) -> Partition {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Partition::from_rows_unchecked(lengths)
    }

    pub fn num_cycles(&self) -> usize {
        self.cycle_lengths().num_rows()
    }

    /// A reduced word `[i₁,…,i_m]` with `π = s_{i₁}·…·s_{i_m}`, found by bubble sort.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.images.clone();
        let mut rev = Vec::new();
        // π = π'·s_i whenever π has a descent at i; peel generators off the right.
        while let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
            w.swap(i, i + 1);
            rev.push(i);
        }
        rev.reverse();
        rev
    }

    /// A reduced word obtained by peeling generators off the left instead; used to
    /// check that representation matrices do not depend on the word.
    pub fn reduced_word_left(&self) -> Vec<usize> {
        // Left multiplication acts on values: s_i·π swaps the values i and i+1.
        let mut inv = self.inverse().images;
        let mut word = Vec::new();
        while let Some(i) = (0..inv.len().saturating_sub(1)).find(|&i| inv[i] > inv[i + 1]) {
            inv.swap(i, i + 1);
            word.push(i);
        }
        word
    }

    pub fn inversions(&self) -> usize {
        let n = self.len();
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.images[i] > self.images[j])
            .count()
    }
}

/// All permutations of `n` letters in lexicographic order of their one-line notation.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![Permutation { images: cur.clone() }];
    while let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) {
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(Permutation { images: cur.clone() });
    }
    out
}

/// A conjugacy class of `S_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleType {
    pub cycles: Partition,
    pub class_size: BigUint,
}

impl CycleType {
    pub fn new(cycles: Partition) -> Self {
        let class_size = class_size(&cycles);
        Self { cycles, class_size }
    }

    /// Multiplicities `m_j` of each cycle length `j = 1..=k` (index 0 unused).
    pub fn multiplicities(&self) -> Vec<usize> {
        let k = self.cycles.k();
        let mut m = vec![0; k + 1];
        for &c in self.cycles.rows() {
            m[c] += 1;
        }
        m
    }
}

/// `k! / ∏_j j^{m_j} m_j!`.
pub fn class_size(cycles: &Partition) -> BigUint {
    let k = cycles.k();
    let mut m = vec![0usize; k + 1];
    for &c in cycles.rows() {
        m[c] += 1;
    }
    let mut z = BigUint::one();
    for (j, &mj) in m.iter().enumerate().skip(1) {
        if mj > 0 {
            z *= BigUint::from(j).pow(mj as u32) * factorial(mj);
        }
    }
    factorial(k) / z
}

/// One entry per partition of `k`, in reverse lexicographic order.
pub fn conjugacy_classes(k: usize) -> Vec<CycleType> {
    enumerate_partitions(k, k).into_iter().map(CycleType::new).collect()
}

/// A standard Young tableau stored by its Yamanouchi word: `row_of[e]` is the
/// row holding entry `e + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StandardTableau {
    row_of: Vec<usize>,
    col_of: Vec<usize>,
}

impl StandardTableau {
    pub fn row_word(&self) -> &[usize] {
        &self.row_of
    }

    /// `(row, column)` of entry `e` (zero-based entry index).
    pub fn position(&self, e: usize) -> (usize, usize) {
        (self.row_of[e], self.col_of[e])
    }

    /// Content `column − row` of entry `e`.
    pub fn content(&self, e: usize) -> i64 {
        self.col_of[e] as i64 - self.row_of[e] as i64
    }

    /// Rows of the filling, entries 1-based.
    pub fn filling(&self) -> Vec<Vec<usize>> {
        let nrows = self.row_of.iter().max().map_or(0, |r| r + 1);
        let mut rows = vec![Vec::new(); nrows];
        for (e, &r) in self.row_of.iter().enumerate() {
            rows[r].push(e + 1);
        }
        rows
    }

    /// The tableau with entries `e+1` and `e+2` exchanged, if it is standard.
    pub fn swap_adjacent(&self, e: usize) -> Option<StandardTableau> {
        let (r0, c0) = self.position(e);
        let (r1, c1) = self.position(e + 1);
        if r0 == r1 || c0 == c1 {
            return None;
        }
        let mut t = self.clone();
        t.row_of.swap(e, e + 1);
        t.col_of.swap(e, e + 1);
        Some(t)
    }
}

/// All standard tableaux of shape `λ`, ordered lexicographically by row word.
pub fn standard_tableaux(lambda: &Partition) -> Vec<StandardTableau> {
    fn rec(
        shape: &[usize],
        lens: &mut Vec<usize>,
        rows: &mut Vec<usize>,
        cols: &mut Vec<usize>,
        k: usize,
        out: &mut Vec<StandardTableau>,
    ) {
        if rows.len() == k {
            out.push(StandardTableau {
                row_of: rows.clone(),
                col_of: cols.clone(),
            });
            return;
        }
        for r in 0..shape.len() {
            if lens[r] < shape[r] && (r == 0 || lens[r - 1] > lens[r]) {
                rows.push(r);
                cols.push(lens[r]);
                lens[r] += 1;
                rec(shape, lens, rows, cols, k, out);
                lens[r] -= 1;
                rows.pop();
                cols.pop();
            }
        }
    }
    let mut out = Vec::new();
    let k = lambda.k();
    rec(
        lambda.rows(),
        &mut vec![0; lambda.num_rows()],
        &mut Vec::with_capacity(k),
        &mut Vec::with_capacity(k),
        k,
        &mut out,
    );
    out
}
