//! Homogeneous bundle expressions and their decomposition into irreducible
//! summands.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::One;
use once_cell::sync::Lazy;
use parking_lot::RwLock;

use crate::character::Character;
use crate::chowring::{Ambient, FlagFactor};
use crate::error::{CoreError, Result};
use crate::repcore::{gl_character, is_dominant, lr_product, weyl_dim_unchecked, Partition, Weight};

/// An irreducible homogeneous bundle, given by its weight on the whole
/// ambient (dominant within every block).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrreducibleBundle {
    weight: Weight,
}

/// A multiset of irreducible summands.
pub type Decomposition = BTreeMap<IrreducibleBundle, u64>;

impl IrreducibleBundle {
    pub fn new(amb: &Ambient, weight: Weight) -> Result<Self> {
        if weight.len() != amb.nvars() {
            return Err(CoreError::BadLength { expected: amb.nvars(), got: weight.len() });
        }
        for r in amb.global_blocks() {
            if !is_dominant(&weight[r]) {
                return Err(CoreError::NotDominant(weight));
            }
        }
        Ok(IrreducibleBundle { weight })
    }

    pub fn trivial(amb: &Ambient) -> Self {
        IrreducibleBundle { weight: vec![0; amb.nvars()] }
    }

    pub fn line(amb: &Ambient, twists: &[Vec<i64>]) -> Result<Self> {
        Ok(IrreducibleBundle { weight: amb.line_weight(twists)? })
    }

    pub fn weight(&self) -> &[i64] {
        &self.weight
    }

    pub fn block_weights<'a>(&'a self, amb: &Ambient) -> Vec<&'a [i64]> {
        amb.global_blocks().into_iter().map(|r| &self.weight[r]).collect()
    }

    pub fn is_line(&self, amb: &Ambient) -> bool {
        self.block_weights(amb).iter().all(|b| b.iter().all(|&x| x == b[0]))
    }

    pub fn rank(&self, amb: &Ambient) -> BigUint {
        self.block_weights(amb).iter().fold(BigUint::one(), |acc, b| acc * weyl_dim_unchecked(b))
    }

    pub fn character(&self, amb: &Ambient) -> Character {
        let mut acc: Vec<(Weight, i64)> = vec![(Vec::new(), 1)];
        for b in self.block_weights(amb) {
            let ch = gl_character(b);
            let mut next = Vec::with_capacity(acc.len() * ch.len());
            for (w, m) in &acc {
                for (v, k) in &ch {
                    let mut x = w.clone();
                    x.extend_from_slice(v);
                    next.push((x, m * *k as i64));
                }
            }
            acc = next;
        }
        acc.into_iter().collect()
    }

    pub fn dual(&self, amb: &Ambient) -> IrreducibleBundle {
        let mut w = Vec::with_capacity(self.weight.len());
        for b in self.block_weights(amb) {
            w.extend(b.iter().rev().map(|x| -x));
        }
        IrreducibleBundle { weight: w }
    }

    /// Tensor with a line bundle of weight `l`.
    pub fn twist(&self, l: &[i64]) -> IrreducibleBundle {
        IrreducibleBundle { weight: self.weight.iter().zip(l).map(|(a, b)| a + b).collect() }
    }

    /// Tensor product by Littlewood–Richardson within every block.
    pub fn tensor(&self, amb: &Ambient, other: &IrreducibleBundle) -> Decomposition {
        let mut acc: Vec<(Weight, u64)> = vec![(Vec::new(), 1)];
        for (a, b) in self.block_weights(amb).into_iter().zip(other.block_weights(amb)) {
            let n = a.len();
            let sa = *a.iter().min().unwrap();
            let sb = *b.iter().min().unwrap();
            let pa = Partition::new(a.iter().map(|x| (x - sa) as u32).collect()).expect("dominant");
            let pb = Partition::new(b.iter().map(|x| (x - sb) as u32).collect()).expect("dominant");
            let prod = lr_product(&pa, &pb, n);
            let mut next = Vec::with_capacity(acc.len() * prod.len());
            for (w, m) in &acc {
                for (p, c) in &prod {
                    let mut x = w.clone();
                    x.extend(p.to_weight(n).expect("bounded").into_iter().map(|v| v + sa + sb));
                    next.push((x, m * c));
                }
            }
            acc = next;
        }
        let mut out = Decomposition::new();
        for (w, m) in acc {
            *out.entry(IrreducibleBundle { weight: w }).or_insert(0) += m;
        }
        out
    }

    /// Schur functor S_λ applied to this irreducible, where supported.
    pub fn schur(&self, amb: &Ambient, lambda: &Partition) -> Result<Decomposition> {
        let mut out = Decomposition::new();
        if lambda.is_empty() {
            out.insert(IrreducibleBundle::trivial(amb), 1);
            return Ok(out);
        }
        let k = lambda.size() as i64;
        let blocks = amb.global_blocks();
        if self.is_line(amb) {
            if lambda.len() == 1 {
                out.insert(IrreducibleBundle { weight: self.weight.iter().map(|x| x * k).collect() }, 1);
            }
            return Ok(out);
        }
        // split into a line and fundamental blocks
        let mut line = vec![0; self.weight.len()];
        let mut fund: Vec<(usize, bool)> = Vec::new();
        for (bi, r) in blocks.iter().enumerate() {
            let b = &self.weight[r.clone()];
            let lo = *b.iter().min().unwrap();
            let hi = *b.iter().max().unwrap();
            let c = if lo == hi {
                lo
            } else if b[0] == lo + 1 && b[1..].iter().all(|&x| x == lo) {
                fund.push((bi, true));
                lo
            } else if b[b.len() - 1] == hi - 1 && b[..b.len() - 1].iter().all(|&x| x == hi) {
                fund.push((bi, false));
                hi
            } else {
                return self.schur_generic(amb, lambda);
            };
            for a in r.clone() {
                line[a] = c;
            }
        }
        let line_k: Vec<i64> = line.iter().map(|x| x * k).collect();
        let apply = |w: &mut Weight, bi: usize, up: bool, p: &Partition| -> bool {
            let r = blocks[bi].clone();
            let n = r.len();
            if p.len() > n {
                return false;
            }
            let pw = p.to_weight(n).expect("fits");
            for (i, a) in r.enumerate() {
                w[a] += if up { pw[i] } else { -pw[n - 1 - i] };
            }
            true
        };
        match fund.len() {
            1 => {
                let mut w = line_k.clone();
                if apply(&mut w, fund[0].0, fund[0].1, lambda) {
                    out.insert(IrreducibleBundle { weight: w }, 1);
                }
                Ok(out)
            }
            2 if lambda.len() == 1 || lambda.part(0) == 1 => {
                let column = lambda.part(0) == 1 && lambda.len() > 1;
                for mu in Partition::all_of_size(k as u32) {
                    let other = if column { mu.conjugate() } else { mu.clone() };
                    let mut w = line_k.clone();
                    if apply(&mut w, fund[0].0, fund[0].1, &mu) && apply(&mut w, fund[1].0, fund[1].1, &other) {
                        *out.entry(IrreducibleBundle { weight: w }).or_insert(0) += 1;
                    }
                }
                Ok(out)
            }
            _ => self.schur_generic(amb, lambda),
        }
    }

    fn schur_generic(&self, amb: &Ambient, lambda: &Partition) -> Result<Decomposition> {
        let rank = self.rank(amb);
        let mut out = Decomposition::new();
        if lambda.part(0) == 1 {
            let len = BigUint::from(lambda.len());
            if len > rank {
                return Ok(out);
            }
            if len == rank {
                let det = self.character(amb).det_weight(amb.nvars());
                out.insert(IrreducibleBundle { weight: det }, 1);
                return Ok(out);
            }
            if lambda.len() == 1 {
                out.insert(self.clone(), 1);
                return Ok(out);
            }
        }
        if lambda.len() == 1 && lambda.part(0) == 1 {
            out.insert(self.clone(), 1);
            return Ok(out);
        }
        Err(CoreError::PlethysmUnsupported(format!("S{lambda} of weight {:?}", self.weight)))
    }
}

/// A formal expression in homogeneous bundles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BundleExpr {
    Irr(IrreducibleBundle),
    Sum(Vec<BundleExpr>),
    Tensor(Vec<BundleExpr>),
    Dual(Box<BundleExpr>),
    Sym(u32, Box<BundleExpr>),
    Wedge(u32, Box<BundleExpr>),
    Schur(Partition, Box<BundleExpr>),
    /// Direct sum of `m` copies.
    Multiple(u32, Box<BundleExpr>),
}

type CacheKey = (Vec<FlagFactor>, BundleExpr);

static NORMAL_CACHE: Lazy<RwLock<HashMap<CacheKey, Decomposition>>> = Lazy::new(|| RwLock::new(HashMap::new()));

impl BundleExpr {
    pub fn irr(b: IrreducibleBundle) -> Self {
        BundleExpr::Irr(b)
    }

    pub fn dual(self) -> Self {
        BundleExpr::Dual(Box::new(self))
    }

    /// Torus character, computed structurally from the expression tree.
    pub fn character(&self, amb: &Ambient) -> Character {
        let nv = amb.nvars();
        match self {
            BundleExpr::Irr(b) => b.character(amb),
            BundleExpr::Sum(v) => v.iter().fold(Character::new(), |acc, e| acc.add(&e.character(amb))),
            BundleExpr::Tensor(v) => v.iter().fold(Character::trivial(nv), |acc, e| acc.mul(&e.character(amb))),
            BundleExpr::Dual(e) => e.character(amb).dual(),
            BundleExpr::Sym(k, e) => e.character(amb).sym(*k, nv),
            BundleExpr::Wedge(k, e) => e.character(amb).wedge(*k, nv),
            BundleExpr::Schur(l, e) => e.character(amb).schur(l, nv),
            BundleExpr::Multiple(m, e) => e.character(amb).scale(*m as i64),
        }
    }

    pub fn rank(&self, amb: &Ambient) -> i64 {
        self.character(amb).rank()
    }

    /// Per-factor twists of the determinant.
    pub fn det(&self, amb: &Ambient) -> Vec<Vec<i64>> {
        let w = self.character(amb).det_weight(amb.nvars());
        amb.twists_of(&w).expect("determinant is a line bundle")
    }

    /// Decomposition into irreducible summands.
    pub fn normalize(&self, amb: &Ambient) -> Result<Decomposition> {
        let key = (amb.factors().to_vec(), self.clone());
        if let Some(d) = NORMAL_CACHE.read().get(&key) {
            return Ok(d.clone());
        }
        let d = self.normalize_uncached(amb)?;
        NORMAL_CACHE.write().insert(key, d.clone());
        Ok(d)
    }

    fn normalize_uncached(&self, amb: &Ambient) -> Result<Decomposition> {
        match self {
            BundleExpr::Irr(b) => Ok(Decomposition::from([(b.clone(), 1)])),
            BundleExpr::Sum(v) => {
                let mut out = Decomposition::new();
                for e in v {
                    add_into(&mut out, &e.normalize(amb)?, 1);
                }
                Ok(out)
            }
            BundleExpr::Tensor(v) => {
                let mut out = Decomposition::from([(IrreducibleBundle::trivial(amb), 1)]);
                for e in v {
                    out = tensor_decomp(amb, &out, &e.normalize(amb)?);
                }
                Ok(out)
            }
            BundleExpr::Dual(e) => {
                let mut out = Decomposition::new();
                for (b, m) in e.normalize(amb)? {
                    *out.entry(b.dual(amb)).or_insert(0) += m;
                }
                Ok(out)
            }
            BundleExpr::Multiple(m, e) => {
                let mut out = Decomposition::new();
                add_into(&mut out, &e.normalize(amb)?, *m as u64);
                Ok(out)
            }
            BundleExpr::Sym(k, e) => schur_decomp(amb, &Partition::row(*k), &e.normalize(amb)?),
            BundleExpr::Wedge(k, e) => schur_decomp(amb, &Partition::column(*k), &e.normalize(amb)?),
            BundleExpr::Schur(l, e) => schur_decomp(amb, l, &e.normalize(amb)?),
        }
    }
}

fn add_into(out: &mut Decomposition, d: &Decomposition, scale: u64) {
    for (b, m) in d {
        *out.entry(b.clone()).or_insert(0) += m * scale;
    }
}

fn tensor_decomp(amb: &Ambient, a: &Decomposition, b: &Decomposition) -> Decomposition {
    let mut out = Decomposition::new();
    for (x, mx) in a {
        for (y, my) in b {
            add_into(&mut out, &x.tensor(amb, y), mx * my);
        }
    }
    out
}

/// S_λ of a direct sum, by Littlewood–Richardson branching over summands.
pub fn schur_decomp(amb: &Ambient, lambda: &Partition, d: &Decomposition) -> Result<Decomposition> {
    let list: Vec<&IrreducibleBundle> = d.iter().flat_map(|(b, m)| std::iter::repeat(b).take(*m as usize)).collect();
    let mut memo: HashMap<(Partition, usize), Decomposition> = HashMap::new();
    schur_list(amb, lambda, &list, 0, &mut memo)
}

fn schur_list(
    amb: &Ambient,
    lambda: &Partition,
    list: &[&IrreducibleBundle],
    i: usize,
    memo: &mut HashMap<(Partition, usize), Decomposition>,
) -> Result<Decomposition> {
    if lambda.is_empty() {
        return Ok(Decomposition::from([(IrreducibleBundle::trivial(amb), 1)]));
    }
    if i == list.len() {
        return Ok(Decomposition::new());
    }
    if i + 1 == list.len() {
        return list[i].schur(amb, lambda);
    }
    if let Some(d) = memo.get(&(lambda.clone(), i)) {
        return Ok(d.clone());
    }
    let mut out = Decomposition::new();
    for mu in Partition::in_box(lambda.len(), lambda.part(0)) {
        if !lambda.contains(&mu) {
            continue;
        }
        let head = list[i].schur(amb, &mu)?;
        if head.is_empty() {
            continue;
        }
        let rest_size = lambda.size() - mu.size();
        for nu in Partition::all_of_size(rest_size) {
            if !lambda.contains(&nu) {
                continue;
            }
            let c = lr_product(&mu, &nu, lambda.len()).get(lambda).copied().unwrap_or(0);
            if c == 0 {
                continue;
            }
            let tail = schur_list(amb, &nu, list, i + 1, memo)?;
            if tail.is_empty() {
                continue;
            }
            add_into(&mut out, &tensor_decomp(amb, &head, &tail), c);
        }
    }
    memo.insert((lambda.clone(), i), out.clone());
    Ok(out)
}

/// Associated graded pieces Hom(R_j, R_i), i < j, of the cotangent bundle.
pub fn cotangent_graded(amb: &Ambient) -> Vec<IrreducibleBundle> {
    let mut out = Vec::new();
    for (fi, f) in amb.factors().iter().enumerate() {
        let o = amb.offset(fi);
        let ranges = f.block_ranges();
        for i in 0..ranges.len() {
            for j in i + 1..ranges.len() {
                let mut w = vec![0; amb.nvars()];
                w[o + ranges[i].end - 1] = -1;
                w[o + ranges[j].start] = 1;
                out.push(IrreducibleBundle { weight: w });
            }
        }
    }
    out
}

/// Total rank of a decomposition.
pub fn decomposition_rank(amb: &Ambient, d: &Decomposition) -> BigUint {
    d.iter().fold(BigUint::default(), |acc, (b, m)| acc + b.rank(amb) * BigUint::from(*m))
}

/// Character of a decomposition.
pub fn decomposition_character(amb: &Ambient, d: &Decomposition) -> Character {
    d.iter().fold(Character::new(), |acc, (b, m)| acc.add(&b.character(amb).scale(*m as i64)))
}
