//! Sheaf cohomology of homogeneous bundles on products of flag varieties:
//! Borel–Weil–Bott per factor with Künneth, and per-degree cohomology read
//! straight off torus characters.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::bundlecalc::{BundleExpr, IrreducibleBundle};
use crate::character::Character;
use crate::chowring::Ambient;
use crate::error::{CoreError, Result};
use crate::repcore::{bwb_weight, rho, weyl_dim_unchecked, BwbResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CohomEntry {
    Exact(BigInt),
    Bounds { lo: BigInt, hi: BigInt },
}

impl CohomEntry {
    pub fn exact(&self) -> Option<&BigInt> {
        match self {
            CohomEntry::Exact(v) => Some(v),
            CohomEntry::Bounds { .. } => None,
        }
    }

    pub fn lo(&self) -> &BigInt {
        match self {
            CohomEntry::Exact(v) => v,
            CohomEntry::Bounds { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &BigInt {
        match self {
            CohomEntry::Exact(v) => v,
            CohomEntry::Bounds { hi, .. } => hi,
        }
    }
}

/// Per-degree cohomology dimensions with an exact Euler characteristic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomTable {
    pub entries: Vec<CohomEntry>,
    pub euler: BigInt,
}

impl CohomTable {
    pub fn from_exact(values: Vec<BigInt>) -> Self {
        let euler = alternating(&values);
        CohomTable { entries: values.into_iter().map(CohomEntry::Exact).collect(), euler }
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(|e| e.exact().is_some())
    }

    pub fn h(&self, i: usize) -> Option<&BigInt> {
        self.entries.get(i).and_then(|e| e.exact())
    }

    /// Exact values, if every degree is determined.
    pub fn values(&self) -> Option<Vec<BigInt>> {
        self.entries.iter().map(|e| e.exact().cloned()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.hi().is_zero())
    }
}

impl fmt::Display for CohomTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, e) in self.entries.iter().enumerate() {
            let s = match e {
                CohomEntry::Exact(v) if v.is_zero() => continue,
                CohomEntry::Exact(v) => format!("h^{i}={v}"),
                CohomEntry::Bounds { lo, hi } => format!("h^{i} in [{lo},{hi}]"),
            };
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{s}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, "; chi={}", self.euler)
    }
}

fn alternating(v: &[BigInt]) -> BigInt {
    v.iter().enumerate().fold(BigInt::zero(), |acc, (i, x)| if i % 2 == 0 { acc + x } else { acc - x })
}

/// Contribution of a single T-weight on one factor: the cohomological degree
/// (inversions across blocks) and a signed dimension.
fn weight_contribution(blocks: &[usize], w: &[i64]) -> Option<(usize, BigInt)> {
    let n = w.len();
    let r = rho(n);
    let shifted: Vec<i64> = w.iter().zip(&r).map(|(a, b)| a + b).collect();
    let mut within = 0usize;
    let mut across = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if shifted[i] == shifted[j] {
                return None;
            }
            if shifted[i] < shifted[j] {
                if blocks[i] == blocks[j] {
                    within += 1;
                } else {
                    across += 1;
                }
            }
        }
    }
    let mut sorted = shifted;
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let highest: Vec<i64> = sorted.iter().zip(&r).map(|(a, b)| a - b).collect();
    let d = BigInt::from(weyl_dim_unchecked(&highest));
    Some((across, if within % 2 == 0 { d } else { -d }))
}

/// Per-degree cohomology of a completely reducible bundle from its torus
/// character. For a virtual character the result is the signed difference.
pub fn character_cohomology(amb: &Ambient, ch: &Character) -> Vec<BigInt> {
    let dim = amb.dim();
    let factor_blocks: Vec<Vec<usize>> = amb
        .factors()
        .iter()
        .map(|f| (0..f.n()).map(|a| f.block_of(a)).collect())
        .collect();
    let mut memo: Vec<HashMap<Vec<i64>, Option<(usize, BigInt)>>> = vec![HashMap::new(); amb.factors().len()];
    let mut out = vec![BigInt::zero(); dim + 1];
    'terms: for (w, m) in ch.terms() {
        let mut deg = 0;
        let mut val = BigInt::from(*m);
        for (i, blocks) in factor_blocks.iter().enumerate() {
            let slice = &w[amb.factor_range(i)];
            let c = memo[i].entry(slice.to_vec()).or_insert_with(|| weight_contribution(blocks, slice));
            match c {
                None => continue 'terms,
                Some((d, v)) => {
                    deg += *d;
                    val *= &*v;
                }
            }
        }
        out[deg] += val;
    }
    out
}

/// Per-degree cohomology of A ⊗ B without expanding the product: weights are
/// split into factor slices, and the Bott contribution of each pair of slices
/// is computed once.
pub fn tensor_cohomology(amb: &Ambient, a: &Character, b: &Character) -> Vec<BigInt> {
    let nf = amb.factors().len();
    let factor_blocks: Vec<Vec<usize>> = amb
        .factors()
        .iter()
        .map(|f| (0..f.n()).map(|x| f.block_of(x)).collect())
        .collect();
    let intern = |ch: &Character| -> (Vec<(Vec<u32>, i64)>, Vec<Vec<Vec<i64>>>) {
        let mut tables: Vec<HashMap<Vec<i64>, u32>> = vec![HashMap::new(); nf];
        let mut slices: Vec<Vec<Vec<i64>>> = vec![Vec::new(); nf];
        let terms = ch
            .sorted_terms()
            .into_iter()
            .map(|(w, m)| {
                let ids = (0..nf)
                    .map(|i| {
                        let s = &w[amb.factor_range(i)];
                        if let Some(&id) = tables[i].get(s) {
                            return id;
                        }
                        let id = slices[i].len() as u32;
                        slices[i].push(s.to_vec());
                        tables[i].insert(s.to_vec(), id);
                        id
                    })
                    .collect();
                (ids, m)
            })
            .collect();
        (terms, slices)
    };
    let (ta, sa) = intern(a);
    let (tb, sb) = intern(b);
    const UNKNOWN: u8 = u8::MAX;
    const ACYCLIC: u8 = u8::MAX - 1;
    let mut degs: Vec<Vec<u8>> = (0..nf).map(|i| vec![UNKNOWN; sa[i].len() * sb[i].len()]).collect();
    let mut vals: Vec<Vec<i64>> = (0..nf).map(|i| vec![0; sa[i].len() * sb[i].len()]).collect();
    let mut out = vec![0i128; amb.dim() + 1];
    for (ia, ma) in &ta {
        'pairs: for (ib, mb) in &tb {
            let mut deg = 0usize;
            let mut val = (*ma as i128) * (*mb as i128);
            for i in 0..nf {
                let idx = ia[i] as usize * sb[i].len() + ib[i] as usize;
                if degs[i][idx] == UNKNOWN {
                    let w: Vec<i64> = sa[i][ia[i] as usize].iter().zip(&sb[i][ib[i] as usize]).map(|(x, y)| x + y).collect();
                    match weight_contribution(&factor_blocks[i], &w) {
                        None => degs[i][idx] = ACYCLIC,
                        Some((d, v)) => {
                            degs[i][idx] = d as u8;
                            vals[i][idx] = i64::try_from(v).expect("Weyl dimension fits in i64");
                        }
                    }
                }
                match degs[i][idx] {
                    ACYCLIC => continue 'pairs,
                    d => {
                        deg += d as usize;
                        val *= vals[i][idx] as i128;
                    }
                }
            }
            out[deg] += val;
        }
    }
    out.into_iter().map(BigInt::from).collect()
}

/// Borel–Weil–Bott on each factor of a product, combined by Künneth.
pub fn irreducible_cohomology(amb: &Ambient, b: &IrreducibleBundle) -> CohomTable {
    let mut deg = 0;
    let mut val = BigInt::from(1);
    for i in 0..amb.factors().len() {
        match bwb_weight(&b.weight()[amb.factor_range(i)]) {
            BwbResult::Acyclic => return CohomTable::from_exact(vec![BigInt::zero(); amb.dim() + 1]),
            r @ BwbResult::Concentrated { degree, .. } => {
                deg += degree;
                val *= BigInt::from(r.dimension());
            }
        }
    }
    let mut v = vec![BigInt::zero(); amb.dim() + 1];
    v[deg] = val;
    CohomTable::from_exact(v)
}

/// Full cohomology table of a bundle expression.
pub fn cohomology(amb: &Ambient, e: &BundleExpr) -> Result<CohomTable> {
    let ch = e.character(amb);
    let v = character_cohomology(amb, &ch);
    if v.iter().any(|x| x.is_negative()) {
        return Err(CoreError::Inconsistent {
            what: "cohomology dimension".into(),
            left: format!("{v:?}"),
            right: "nonnegative".into(),
        });
    }
    Ok(CohomTable::from_exact(v))
}

/// Euler characteristic, checked against Hirzebruch–Riemann–Roch.
pub fn chi(amb: &Ambient, e: &BundleExpr) -> Result<BigInt> {
    let ch = e.character(amb);
    chi_character(amb, &ch)
}

pub fn chi_character(amb: &Ambient, ch: &Character) -> Result<BigInt> {
    let euler = alternating(&character_cohomology(amb, ch));
    let hrr = amb.chi_hrr(ch);
    if !hrr.is_integer() || hrr.to_integer() != euler {
        return Err(CoreError::Inconsistent { what: "euler characteristic".into(), left: euler.to_string(), right: hrr.to_string() });
    }
    Ok(euler)
}

/// Cohomology of Ω^p of the ambient computed only from the associated graded
/// of its filtration: χ exact, each degree bounded by cancellation with its
/// neighbours.
pub fn omega_power_bounds(amb: &Ambient, p: u32) -> CohomTable {
    let ch = amb.cotangent_character().wedge(p, amb.nvars());
    let c = character_cohomology(amb, &ch);
    let euler = alternating(&c);
    let z = BigInt::zero();
    let entries = (0..c.len())
        .map(|q| {
            let below = if q > 0 { &c[q - 1] } else { &z };
            let above = c.get(q + 1).unwrap_or(&z);
            if below.is_zero() && above.is_zero() {
                CohomEntry::Exact(c[q].clone())
            } else {
                let lo = (&c[q] - below - above).max(BigInt::zero());
                CohomEntry::Bounds { lo, hi: c[q].clone() }
            }
        })
        .collect();
    CohomTable { entries, euler }
}
