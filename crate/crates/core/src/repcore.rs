//! Partitions, weights and the representation theory of GL(n) needed for
//! homogeneous bundles: Littlewood–Richardson products, Cauchy decompositions,
//! the Weyl dimension formula and Borel–Weil–Bott.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{CoreError, Result};

/// An integral weight of GL(n), stored unshifted.
pub type Weight = Vec<i64>;

/// A weakly decreasing sequence of positive integers. Trailing zeros are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(CoreError::NotPartition(parts.iter().map(|&p| p as i64).collect()));
        }
        let mut parts = parts;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition (k).
    pub fn row(k: u32) -> Self {
        if k == 0 {
            Self::empty()
        } else {
            Partition { parts: vec![k] }
        }
    }

    /// The one-column partition (1^k).
    pub fn column(k: u32) -> Self {
        Partition { parts: vec![1; k as usize] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0) as usize;
        let parts = (0..cols)
            .map(|c| self.parts.iter().filter(|&&p| p as usize > c).count() as u32)
            .collect();
        Partition { parts }
    }

    /// True when the diagram fits in a `rows` × `cols` box.
    pub fn fits(&self, rows: usize, cols: u32) -> bool {
        self.len() <= rows && self.part(0) <= cols
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && (0..other.len()).all(|i| other.part(i) <= self.part(i))
    }

    /// The weight of length `n` obtained by padding with zeros.
    pub fn to_weight(&self, n: usize) -> Result<Weight> {
        if self.len() > n {
            return Err(CoreError::BadLength { expected: n, got: self.len() });
        }
        let mut w: Weight = self.parts.iter().map(|&p| p as i64).collect();
        w.resize(n, 0);
        Ok(w)
    }

    /// All partitions of `k`, in decreasing lexicographic order.
    pub fn all_of_size(k: u32) -> Vec<Partition> {
        fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(k, k, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions contained in the `rows` × `cols` box.
    pub fn in_box(rows: usize, cols: u32) -> Vec<Partition> {
        fn rec(row: usize, rows: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            out.push(Partition::new(cur.clone()).expect("decreasing"));
            if row == rows {
                return;
            }
            for p in 1..=max {
                cur.push(p);
                rec(row + 1, rows, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, rows, cols, &mut Vec::new(), &mut out);
        out.sort_by(|a, b| a.size().cmp(&b.size()).then(b.cmp(a)));
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// True when the weight is weakly decreasing.
pub fn is_dominant(w: &[i64]) -> bool {
    w.windows(2).all(|p| p[0] >= p[1])
}

/// Littlewood–Richardson product of Schur functors, discarding shapes with more
/// than `rank_bound` rows.
pub fn lr_product(lambda: &Partition, mu: &Partition, rank_bound: usize) -> BTreeMap<Partition, u64> {
    let mut out = BTreeMap::new();
    if lambda.len() > rank_bound || mu.len() > rank_bound {
        return out;
    }
    let rows = rank_bound.min(lambda.len() + mu.len());
    let mut shape: Vec<u32> = lambda.parts.clone();
    shape.resize(rows, 0);
    // counts[label][row]
    let mut counts = vec![vec![0u32; rows]; mu.len()];
    lr_label(0, mu, &mut shape, &mut counts, &mut out);
    out
}

fn lr_label(
    label: usize,
    mu: &Partition,
    shape: &mut Vec<u32>,
    counts: &mut Vec<Vec<u32>>,
    out: &mut BTreeMap<Partition, u64>,
) {
    if label == mu.len() {
        let p = Partition::new(shape.clone()).expect("LR shapes are partitions");
        *out.entry(p).or_insert(0) += 1;
        return;
    }
    let old = shape.clone();
    lr_strip(label, 0, mu.part(label), 0, mu, &old, shape, counts, out);
}

#[allow(clippy::too_many_arguments)]
fn lr_strip(
    label: usize,
    row: usize,
    remaining: u32,
    cum: u32,
    mu: &Partition,
    old: &[u32],
    shape: &mut Vec<u32>,
    counts: &mut Vec<Vec<u32>>,
    out: &mut BTreeMap<Partition, u64>,
) {
    if remaining == 0 {
        lr_label(label + 1, mu, shape, counts, out);
        return;
    }
    if row == shape.len() {
        return;
    }
    let room = if row == 0 { remaining } else { old[row - 1] - old[row] };
    // lattice condition: i's in rows <= row must not exceed (i-1)'s in rows < row
    let lattice_cap = if label == 0 {
        u32::MAX
    } else {
        let above: u32 = counts[label - 1][..row].iter().sum();
        above.saturating_sub(cum)
    };
    let max_here = room.min(remaining).min(lattice_cap);
    for a in (0..=max_here).rev() {
        shape[row] = old[row] + a;
        counts[label][row] = a;
        lr_strip(label, row + 1, remaining - a, cum + a, mu, old, shape, counts, out);
    }
    shape[row] = old[row];
    counts[label][row] = 0;
}

/// Cauchy decomposition of Λ^k(A ⊗ B) for rank A = a and rank B = b:
/// pairs (λ, λ') with λ ⊢ k, ℓ(λ) ≤ a, λ₁ ≤ b.
pub fn cauchy_wedge(k: u32, a: usize, b: usize) -> Vec<(Partition, Partition)> {
    Partition::all_of_size(k)
        .into_iter()
        .filter(|l| l.len() <= a && (l.part(0) as usize) <= b)
        .map(|l| {
            let c = l.conjugate();
            (l, c)
        })
        .collect()
}

/// Cauchy decomposition of S^k(A ⊗ B): pairs (λ, λ) with ℓ(λ) ≤ min(a, b).
pub fn cauchy_sym(k: u32, a: usize, b: usize) -> Vec<(Partition, Partition)> {
    Partition::all_of_size(k)
        .into_iter()
        .filter(|l| l.len() <= a.min(b))
        .map(|l| (l.clone(), l))
        .collect()
}

/// Weyl dimension of the GL(n) module with dominant highest weight `w`.
pub fn weyl_dim(n: usize, w: &[i64]) -> Result<BigUint> {
    if w.len() != n {
        return Err(CoreError::BadLength { expected: n, got: w.len() });
    }
    if !is_dominant(w) {
        return Err(CoreError::NotDominant(w.to_vec()));
    }
    Ok(weyl_dim_unchecked(w))
}

/// Weyl dimension without validation; `w` must be dominant.
pub fn weyl_dim_unchecked(w: &[i64]) -> BigUint {
    let n = w.len();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= (w[i] - w[j] + (j - i) as i64) as u64;
            den *= (j - i) as u64;
        }
    }
    num / den
}

/// Outcome of Borel–Weil–Bott for one irreducible bundle on one flag factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BwbResult {
    Acyclic,
    /// Cohomology concentrated in `degree`, isomorphic to the GL(n) module of
    /// highest weight `highest`.
    Concentrated { degree: usize, highest: Weight },
}

impl BwbResult {
    pub fn dimension(&self) -> BigUint {
        match self {
            BwbResult::Acyclic => BigUint::default(),
            BwbResult::Concentrated { highest, .. } => weyl_dim_unchecked(highest),
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            BwbResult::Acyclic => None,
            BwbResult::Concentrated { degree, .. } => Some(*degree),
        }
    }
}

/// ρ = (n−1, …, 1, 0).
pub fn rho(n: usize) -> Weight {
    (0..n).rev().map(|i| i as i64).collect()
}

/// Checks that `steps` describe a flag k₁ < … < k_r < n with k₁ > 0.
pub fn validate_steps(n: usize, steps: &[usize]) -> Result<()> {
    if steps.is_empty() {
        return Err(CoreError::InvalidFactor(format!("no steps for n={n}")));
    }
    if steps[0] == 0 || *steps.last().unwrap() >= n || steps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CoreError::InvalidFactor(format!("steps {steps:?} for n={n}")));
    }
    Ok(())
}

/// Borel–Weil–Bott on Fl(steps; n) for the bundle with weight `weight`
/// (dominant within each block of the flag).
pub fn bwb(factor_rank: usize, steps: &[usize], weight: &[i64]) -> Result<BwbResult> {
    validate_steps(factor_rank, steps)?;
    if weight.len() != factor_rank {
        return Err(CoreError::BadLength { expected: factor_rank, got: weight.len() });
    }
    let mut start = 0;
    for &end in steps.iter().chain(std::iter::once(&factor_rank)) {
        if !is_dominant(&weight[start..end]) {
            return Err(CoreError::NotDominant(weight.to_vec()));
        }
        start = end;
    }
    Ok(bwb_weight(weight))
}

/// Borel–Weil–Bott on the full flag variety for an arbitrary weight; on a
/// partial flag this is the answer for block-dominant weights.
pub fn bwb_weight(weight: &[i64]) -> BwbResult {
    let n = weight.len();
    let r = rho(n);
    let shifted: Vec<i64> = weight.iter().zip(&r).map(|(a, b)| a + b).collect();
    let mut inversions = 0;
    for i in 0..n {
        for j in i + 1..n {
            if shifted[i] == shifted[j] {
                return BwbResult::Acyclic;
            }
            if shifted[i] < shifted[j] {
                inversions += 1;
            }
        }
    }
    let mut sorted = shifted;
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let highest = sorted.iter().zip(&r).map(|(a, b)| a - b).collect();
    BwbResult::Concentrated { degree: inversions, highest }
}

/// Torus character of the GL(b) module with dominant highest weight `alpha`,
/// as a map weight → multiplicity (enumeration of semistandard tableaux).
pub fn gl_character(alpha: &[i64]) -> BTreeMap<Weight, u64> {
    let b = alpha.len();
    let mut out = BTreeMap::new();
    if b == 0 {
        out.insert(Vec::new(), 1);
        return out;
    }
    let shift = *alpha.iter().min().unwrap();
    let shape: Vec<usize> = alpha.iter().map(|&a| (a - shift) as usize).collect();
    let mut rows: Vec<Vec<usize>> = shape.iter().map(|&l| vec![0; l]).collect();
    let mut content = vec![0i64; b];
    fill_ssyt(&shape, 0, 0, b, &mut rows, &mut content, shift, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn fill_ssyt(
    shape: &[usize],
    r: usize,
    c: usize,
    b: usize,
    rows: &mut Vec<Vec<usize>>,
    content: &mut Vec<i64>,
    shift: i64,
    out: &mut BTreeMap<Weight, u64>,
) {
    if r == shape.len() || shape[r] == 0 {
        let w: Weight = content.iter().map(|&x| x + shift).collect();
        *out.entry(w).or_insert(0) += 1;
        return;
    }
    if c == shape[r] {
        fill_ssyt(shape, r + 1, 0, b, rows, content, shift, out);
        return;
    }
    let lo_row = if c > 0 { rows[r][c - 1] } else { 0 };
    let lo_col = if r > 0 { rows[r - 1][c] + 1 } else { 0 };
    let lo = lo_row.max(lo_col);
    // entries in row r are at least r, leaving room below in the column
    for v in lo..b {
        if v + (shape.iter().skip(r + 1).take_while(|&&l| l > c).count()) >= b {
            break;
        }
        rows[r][c] = v;
        content[v] += 1;
        fill_ssyt(shape, r, c + 1, b, rows, content, shift, out);
        content[v] -= 1;
    }
}
