//! Products of flag varieties, their Chow rings in Chern-root presentation,
//! integration of top classes and Hirzebruch–Riemann–Roch.
//!
//! Coordinates: a factor Fl(k₁<…<k_r; n) carries roots x₀,…,x_{n−1}. Block j
//! holds the roots of R_{j+1}^∨ = (U_{j+1}/U_j)^∨ and the last block those of
//! Q^∨. A class is a polynomial in the roots of all factors, symmetric within
//! each block. Integration is done by torus localization at the fixed points.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::OnceCell;

use crate::character::{gbinom, Character};
use crate::error::{CoreError, Result};
use crate::repcore::{validate_steps, Partition, Weight};
use crate::series::{factorial_inv, TSeries};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlagFactor {
    n: usize,
    steps: Vec<usize>,
}

impl FlagFactor {
    pub fn new(n: usize, steps: Vec<usize>) -> Result<Self> {
        validate_steps(n, &steps)?;
        Ok(FlagFactor { n, steps })
    }

    /// P^m = Gr(1, m+1).
    pub fn projective(m: usize) -> Result<Self> {
        Self::new(m + 1, vec![1])
    }

    pub fn grassmannian(k: usize, n: usize) -> Result<Self> {
        Self::new(n, vec![k])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn num_steps(&self) -> usize {
        self.steps.len()
    }

    pub fn is_projective(&self) -> bool {
        self.steps == [1]
    }

    /// Sizes of the blocks k₁, k₂−k₁, …, n−k_r.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut prev = 0;
        for &k in self.steps.iter().chain(std::iter::once(&self.n)) {
            out.push(k - prev);
            prev = k;
        }
        out
    }

    /// Coordinate ranges of the blocks.
    pub fn block_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut prev = 0;
        for &k in self.steps.iter().chain(std::iter::once(&self.n)) {
            out.push(prev..k);
            prev = k;
        }
        out
    }

    pub fn block_of(&self, a: usize) -> usize {
        self.steps.iter().take_while(|&&k| k <= a).count()
    }

    pub fn dim(&self) -> usize {
        let b = self.block_sizes();
        let mut d = 0;
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                d += b[i] * b[j];
            }
        }
        d
    }

    /// Pairs (a, b) with block(a) < block(b); the tangent weights are e_a − e_b.
    pub fn tangent_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.dim());
        for a in 0..self.n {
            for b in 0..self.n {
                if self.block_of(a) < self.block_of(b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Weight of the line bundle O(a₁,…,a_r).
    pub fn line_weight(&self, twist: &[i64]) -> Result<Weight> {
        if twist.len() != self.steps.len() {
            return Err(CoreError::BadLength { expected: self.steps.len(), got: twist.len() });
        }
        let mut w = vec![0; self.n];
        for (j, range) in self.block_ranges().into_iter().enumerate() {
            let v: i64 = twist[j.min(twist.len())..].iter().sum();
            for a in range {
                w[a] = v;
            }
        }
        Ok(w)
    }

    /// The twist (a₁,…,a_r) of a weight that is constant on each block.
    pub fn twist_of(&self, w: &[i64]) -> Option<Vec<i64>> {
        if w.len() != self.n {
            return None;
        }
        let ranges = self.block_ranges();
        let mut vals = Vec::with_capacity(ranges.len());
        for r in &ranges {
            let v = w[r.start];
            if w[r.clone()].iter().any(|&x| x != v) {
                return None;
            }
            vals.push(v);
        }
        Some(vals.windows(2).map(|p| p[0] - p[1]).collect())
    }

    pub fn canonical_weight(&self) -> Weight {
        let mut w = vec![0; self.n];
        for (a, b) in self.tangent_pairs() {
            w[a] -= 1;
            w[b] += 1;
        }
        w
    }

    pub fn canonical_twist(&self) -> Vec<i64> {
        self.twist_of(&self.canonical_weight()).expect("canonical weight is block constant")
    }

    /// Torus fixed points: ordered set partitions of {0,…,n−1} into blocks,
    /// returned as the value of each root, with roots evaluated at x_c = c.
    pub fn fixed_points(&self) -> Vec<Vec<i64>> {
        let sizes = self.block_sizes();
        let mut out = Vec::new();
        let mut used = vec![false; self.n];
        let mut cur = Vec::with_capacity(self.n);
        fill_blocks(&sizes, 0, 0, &mut used, &mut cur, &mut out);
        out
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

fn fill_blocks(
    sizes: &[usize],
    block: usize,
    min: usize,
    used: &mut Vec<bool>,
    cur: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if block == sizes.len() {
        out.push(cur.clone());
        return;
    }
    let start: usize = sizes[..block].iter().sum();
    if cur.len() == start + sizes[block] {
        fill_blocks(sizes, block + 1, 0, used, cur, out);
        return;
    }
    // values within a block are increasing
    for v in min..used.len() {
        if used[v] {
            continue;
        }
        used[v] = true;
        cur.push(v as i64);
        fill_blocks(sizes, block, v + 1, used, cur, out);
        cur.pop();
        used[v] = false;
    }
}

impl fmt::Display for FlagFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_projective() {
            return write!(f, "P({})", self.n - 1);
        }
        let prefix = if self.steps.len() == 1 { "G" } else { "F" };
        write!(f, "{prefix}(")?;
        for k in &self.steps {
            write!(f, "{k},")?;
        }
        write!(f, "{})", self.n)
    }
}

#[derive(Debug)]
struct FixedData {
    points: Vec<Vec<i64>>,
    euler: Vec<BigInt>,
}

/// A product of flag varieties.
#[derive(Debug, Clone)]
pub struct Ambient {
    factors: Vec<FlagFactor>,
    offsets: Vec<usize>,
    fixed: OnceCell<std::sync::Arc<FixedData>>,
    todd: OnceCell<std::sync::Arc<Vec<TSeries>>>,
}

impl PartialEq for Ambient {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}
impl Eq for Ambient {}

impl std::hash::Hash for Ambient {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.factors.hash(state)
    }
}

impl Ambient {
    pub fn new(factors: Vec<FlagFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(CoreError::InvalidFactor("empty ambient".into()));
        }
        let mut offsets = Vec::with_capacity(factors.len());
        let mut o = 0;
        for f in &factors {
            offsets.push(o);
            o += f.n;
        }
        Ok(Ambient { factors, offsets, fixed: OnceCell::new(), todd: OnceCell::new() })
    }

    pub fn factors(&self) -> &[FlagFactor] {
        &self.factors
    }

    pub fn nvars(&self) -> usize {
        self.factors.iter().map(|f| f.n).sum()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).sum()
    }

    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn factor_range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i] + self.factors[i].n
    }

    /// Coordinate ranges of every block of every factor, in order.
    pub fn global_blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            let o = self.offsets[i];
            out.extend(f.block_ranges().into_iter().map(|r| r.start + o..r.end + o));
        }
        out
    }

    /// Number of line-bundle twist parameters (the Picard rank).
    pub fn picard_rank(&self) -> usize {
        self.factors.iter().map(|f| f.num_steps()).sum()
    }

    /// Line bundle weight from per-factor twists.
    pub fn line_weight(&self, twists: &[Vec<i64>]) -> Result<Weight> {
        if twists.len() != self.factors.len() {
            return Err(CoreError::BadLength { expected: self.factors.len(), got: twists.len() });
        }
        let mut w = Vec::with_capacity(self.nvars());
        for (f, t) in self.factors.iter().zip(twists) {
            w.extend(f.line_weight(t)?);
        }
        Ok(w)
    }

    /// Per-factor twists of a weight that is constant on every block.
    pub fn twists_of(&self, w: &[i64]) -> Option<Vec<Vec<i64>>> {
        if w.len() != self.nvars() {
            return None;
        }
        self.factors.iter().enumerate().map(|(i, f)| f.twist_of(&w[self.factor_range(i)])).collect()
    }

    /// Split a twist vector listed step by step across all factors.
    pub fn split_twists(&self, flat: &[i64]) -> Result<Vec<Vec<i64>>> {
        if flat.len() != self.picard_rank() {
            return Err(CoreError::BadLength { expected: self.picard_rank(), got: flat.len() });
        }
        let mut out = Vec::new();
        let mut i = 0;
        for f in &self.factors {
            out.push(flat[i..i + f.num_steps()].to_vec());
            i += f.num_steps();
        }
        Ok(out)
    }

    pub fn canonical_weight(&self) -> Weight {
        self.factors.iter().flat_map(|f| f.canonical_weight()).collect()
    }

    pub fn canonical_twists(&self) -> Vec<Vec<i64>> {
        self.factors.iter().map(|f| f.canonical_twist()).collect()
    }

    /// Torus character of the tangent bundle.
    pub fn tangent_character(&self) -> Character {
        let nv = self.nvars();
        let mut c = Character::new();
        for (i, f) in self.factors.iter().enumerate() {
            let o = self.offsets[i];
            for (a, b) in f.tangent_pairs() {
                let mut w = vec![0; nv];
                w[o + a] = 1;
                w[o + b] = -1;
                c.insert(w, 1);
            }
        }
        c
    }

    pub fn cotangent_character(&self) -> Character {
        self.tangent_character().dual()
    }

    fn fixed_data(&self) -> &FixedData {
        self.fixed.get_or_init(|| {
            let per: Vec<Vec<Vec<i64>>> = self.factors.iter().map(|f| f.fixed_points()).collect();
            let mut points: Vec<Vec<i64>> = vec![Vec::new()];
            for fp in &per {
                let mut next = Vec::with_capacity(points.len() * fp.len());
                for p in &points {
                    for q in fp {
                        let mut v = p.clone();
                        v.extend_from_slice(q);
                        next.push(v);
                    }
                }
                points = next;
            }
            let pairs: Vec<(usize, usize)> = self
                .factors
                .iter()
                .enumerate()
                .flat_map(|(i, f)| {
                    let o = self.offsets[i];
                    f.tangent_pairs().into_iter().map(move |(a, b)| (o + a, o + b))
                })
                .collect();
            let euler = points
                .iter()
                .map(|p| pairs.iter().fold(BigInt::one(), |acc, &(a, b)| acc * BigInt::from(p[a] - p[b])))
                .collect();
            std::sync::Arc::new(FixedData { points, euler })
        })
    }

    /// Root values at each torus fixed point.
    pub fn fixed_points(&self) -> &[Vec<i64>] {
        &self.fixed_data().points
    }

    /// Integral of a top-degree class given by its values at the fixed points.
    pub fn integrate_points(&self, f: impl Fn(&[i64]) -> BigRational) -> BigRational {
        let data = self.fixed_data();
        let mut acc = BigRational::zero();
        for (p, e) in data.points.iter().zip(&data.euler) {
            let v = f(p);
            if !v.is_zero() {
                acc += v / BigRational::from_integer(e.clone());
            }
        }
        acc
    }

    /// Integral of a mixed class presented as a series in t at each point
    /// (the class evaluated at t·p); only the t^dim coefficient contributes.
    pub fn integrate_series(&self, f: impl Fn(&[i64], usize) -> TSeries) -> BigRational {
        let d = self.dim();
        self.integrate_points(|p| f(p, d).coeff(d).clone())
    }

    fn point_todd(&self) -> &[TSeries] {
        self.todd.get_or_init(|| {
            let d = self.dim();
            let tc = self.tangent_character();
            let v: Vec<TSeries> = self
                .fixed_points()
                .iter()
                .map(|p| {
                    let mut s = TSeries::one(d);
                    for (w, m) in tc.terms() {
                        s = s.mul(&TSeries::todd(d, dot(w, p)).pow(*m));
                    }
                    s
                })
                .collect();
            std::sync::Arc::new(v)
        })
    }

    /// χ(E) = ∫ ch(E)·td(T) by localization.
    pub fn chi_hrr(&self, e: &Character) -> BigRational {
        self.chi_hrr_twisted(e, &TSeriesFactor::One)
    }

    /// ∫ ch(E)·td(T)·extra, where `extra` is a multiplicative class given per
    /// point (used for restrictions to zero loci).
    pub fn chi_hrr_twisted(&self, e: &Character, extra: &TSeriesFactor) -> BigRational {
        let d = self.dim();
        let todd = self.point_todd();
        let data = self.fixed_data();
        let mut acc = BigRational::zero();
        for (idx, p) in data.points.iter().enumerate() {
            let mut s = ch_series(e, p, d).mul(&todd[idx]);
            if let TSeriesFactor::KoszulOf(f) = extra {
                s = s.mul(&koszul_series(f, p, d));
            }
            let v = s.coeff(d);
            if !v.is_zero() {
                acc += v / BigRational::from_integer(data.euler[idx].clone());
            }
        }
        acc
    }

    // ---- symbolic classes

    pub fn zero_class(&self) -> ChowClass {
        ChowClass::zero(self.nvars(), self.dim())
    }

    pub fn one_class(&self) -> ChowClass {
        ChowClass::constant(self.nvars(), self.dim(), BigRational::one())
    }

    pub fn constant_class(&self, c: BigRational) -> ChowClass {
        ChowClass::constant(self.nvars(), self.dim(), c)
    }

    /// The linear form Σ w_a x_a, i.e. the first Chern class of the line of weight w.
    pub fn linear_class(&self, w: &[i64]) -> ChowClass {
        ChowClass::linear(self.dim(), w)
    }

    /// c₁ of O(twists).
    pub fn line_class(&self, twists: &[Vec<i64>]) -> Result<ChowClass> {
        Ok(self.linear_class(&self.line_weight(twists)?))
    }

    /// The pullback of O(1) on factor `i` (for multi-step factors, all steps 1).
    pub fn hyperplane(&self, i: usize) -> ChowClass {
        let twists: Vec<Vec<i64>> = self
            .factors
            .iter()
            .enumerate()
            .map(|(j, f)| vec![if i == j { 1 } else { 0 }; f.num_steps()])
            .collect();
        self.line_class(&twists).expect("shape matches")
    }

    pub fn integrate(&self, c: &ChowClass) -> BigRational {
        let top = c.homogeneous(self.dim());
        self.integrate_points(|p| top.eval(p))
    }

    pub fn chern_character(&self, e: &Character) -> ChowClass {
        let mut out = self.zero_class();
        for (w, m) in e.sorted_terms() {
            let l = self.linear_class(&w);
            out = out.add(&l.exp().scale(&BigRational::from_integer(m.into())));
        }
        out
    }

    pub fn chern_class(&self, e: &Character) -> ChowClass {
        let mut out = self.one_class();
        for (w, m) in e.sorted_terms() {
            let l = self.linear_class(&w);
            let mut f = self.zero_class();
            let mut pow = self.one_class();
            for k in 0..=self.dim() as u32 {
                f = f.add(&pow.scale(&BigRational::from_integer(gbinom(m, k).into())));
                pow = pow.mul(&l);
            }
            out = out.mul(&f);
        }
        out
    }

    pub fn todd(&self, e: &Character) -> ChowClass {
        let d = self.dim();
        let mut out = self.one_class();
        for (w, m) in e.sorted_terms() {
            let l = self.linear_class(&w);
            let base = TSeries::todd(d, 1);
            let s = base.pow(m);
            out = out.mul(&l.substitute(&s));
        }
        out
    }

    /// Top Chern class as a symbolic class; the rank must be nonnegative.
    pub fn top_chern(&self, e: &Character) -> ChowClass {
        let r = e.rank();
        self.chern_class(e).homogeneous(r.max(0) as usize)
    }

    /// Schubert-type basis of the degree-d part: per factor and per block j < r,
    /// a partition in a b_j × (b_{j+1}+…+b_r) box.
    pub fn basis(&self, d: usize) -> Vec<BasisLabel> {
        let per_factor: Vec<Vec<Vec<Partition>>> = self
            .factors
            .iter()
            .map(|f| {
                let b = f.block_sizes();
                let mut acc: Vec<Vec<Partition>> = vec![Vec::new()];
                for j in 0..f.num_steps() {
                    let cols: usize = b[j + 1..].iter().sum();
                    let boxes = Partition::in_box(b[j], cols as u32);
                    let mut next = Vec::new();
                    for a in &acc {
                        for p in &boxes {
                            let mut v = a.clone();
                            v.push(p.clone());
                            next.push(v);
                        }
                    }
                    acc = next;
                }
                acc
            })
            .collect();
        let mut out: Vec<BasisLabel> = vec![BasisLabel { parts: Vec::new() }];
        for pf in &per_factor {
            let mut next = Vec::new();
            for a in &out {
                for p in pf {
                    let mut v = a.parts.clone();
                    v.push(p.clone());
                    next.push(BasisLabel { parts: v });
                }
            }
            out = next;
        }
        out.retain(|l| l.degree() == d);
        out
    }

    pub fn basis_class(&self, label: &BasisLabel) -> ChowClass {
        let mut out = self.one_class();
        for (i, f) in self.factors.iter().enumerate() {
            let ranges = f.block_ranges();
            for (j, lam) in label.parts[i].iter().enumerate() {
                let vars: Vec<usize> = ranges[j].clone().map(|a| a + self.offsets[i]).collect();
                out = out.mul(&schur_poly(self.nvars(), self.dim(), &vars, lam));
            }
        }
        out
    }

    /// Coordinates of a class in the Schubert-type basis, as a normal form.
    pub fn coordinates(&self, c: &ChowClass) -> Result<Vec<(BasisLabel, BigRational)>> {
        let dim = self.dim();
        let mut out = Vec::new();
        for d in 0..=dim {
            let part = c.homogeneous(d);
            if part.is_zero() {
                continue;
            }
            let basis = self.basis(d);
            let dual = self.basis(dim - d);
            let bcl: Vec<ChowClass> = basis.iter().map(|l| self.basis_class(l)).collect();
            let dcl: Vec<ChowClass> = dual.iter().map(|l| self.basis_class(l)).collect();
            let n = basis.len();
            // rows: unknown i; columns: dual j. Solve Σ_i x_i G_ij = v_j.
            let mut m: Vec<Vec<BigRational>> = (0..n)
                .map(|j| {
                    let mut row: Vec<BigRational> = (0..n).map(|i| self.integrate(&bcl[i].mul(&dcl[j]))).collect();
                    row.push(self.integrate(&part.mul(&dcl[j])));
                    row
                })
                .collect();
            let x = solve(&mut m).ok_or_else(|| CoreError::Invalid("degenerate pairing".into()))?;
            for (l, v) in basis.into_iter().zip(x) {
                if !v.is_zero() {
                    out.push((l, v));
                }
            }
        }
        Ok(out)
    }

    /// Human-readable normal form, e.g. "2σ(2,1)" or "16h^3".
    pub fn format_class(&self, c: &ChowClass) -> Result<String> {
        let coords = self.coordinates(c)?;
        if coords.is_empty() {
            return Ok("0".into());
        }
        let mut s = String::new();
        for (i, (l, v)) in coords.iter().enumerate() {
            let neg = v.is_negative();
            if i > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let a = v.abs();
            let lab = self.format_label(l);
            if lab.is_empty() {
                s.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    s.push_str(&a.to_string());
                }
                s.push_str(&lab);
            }
        }
        Ok(s)
    }

    pub fn format_label(&self, l: &BasisLabel) -> String {
        let multi = self.factors.len() > 1;
        let mut pieces = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            let parts = &l.parts[i];
            if parts.iter().all(|p| p.is_empty()) {
                continue;
            }
            let idx = if multi { format!("{}", i + 1) } else { String::new() };
            if f.is_projective() {
                let k = parts[0].size();
                pieces.push(if k == 1 { format!("h{idx}") } else { format!("h{idx}^{k}") });
            } else if f.num_steps() == 1 {
                pieces.push(format!("σ{idx}{}", parts[0]));
            } else {
                let inner: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                pieces.push(format!("σ{idx}[{}]", inner.join(";")));
            }
        }
        pieces.join("·")
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Optional multiplicative factor in HRR integrals.
pub enum TSeriesFactor {
    One,
    /// c_top(F)/td(F) for a bundle F, i.e. restriction to the zero locus of a section.
    KoszulOf(Character),
}

pub fn dot(w: &[i64], p: &[i64]) -> i64 {
    w.iter().zip(p).map(|(a, b)| a * b).sum()
}

/// ch(E) at the point t·p.
pub fn ch_series(e: &Character, p: &[i64], prec: usize) -> TSeries {
    let mut by_value: BTreeMap<i64, i64> = BTreeMap::new();
    for (w, m) in e.terms() {
        *by_value.entry(dot(w, p)).or_insert(0) += m;
    }
    let mut s = TSeries::zero(prec);
    for (v, m) in by_value {
        if m != 0 {
            s.add_scaled(&TSeries::exp(prec, v), &BigRational::from_integer(m.into()));
        }
    }
    s
}

/// Π (1 − e^{−tμ·p})^m over the weights of F.
pub fn koszul_series(f: &Character, p: &[i64], prec: usize) -> TSeries {
    let mut s = TSeries::one(prec);
    for (w, m) in f.terms() {
        let v = dot(w, p);
        if v == 0 {
            if *m > 0 {
                return TSeries::zero(prec);
            }
            panic!("inverse of a vanishing Koszul factor");
        }
        s = s.mul(&TSeries::koszul(prec, v).pow(*m));
    }
    s
}

/// Label of a basis element: per factor, per step, a partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub parts: Vec<Vec<Partition>>,
}

impl BasisLabel {
    pub fn degree(&self) -> usize {
        self.parts.iter().flatten().map(|p| p.size() as usize).sum()
    }
}

fn solve(m: &mut [Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = BigRational::one() / m[col][col].clone();
        for k in col..=n {
            m[col][k] = &m[col][k] * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in col..=n {
                    let t = &m[col][k] * &f;
                    m[r][k] -= t;
                }
            }
        }
    }
    Some(m.iter().map(|row| row[n].clone()).collect())
}

/// Complete homogeneous symmetric polynomial h_k in the given variables.
fn complete_poly(nvars: usize, max_deg: usize, vars: &[usize], k: usize) -> ChowClass {
    let mut out = ChowClass::zero(nvars, max_deg);
    if k > max_deg {
        return out;
    }
    fn rec(vars: &[usize], i: usize, rem: usize, exps: &mut Vec<u16>, out: &mut ChowClass) {
        if i == vars.len() - 1 {
            exps[vars[i]] = rem as u16;
            out.terms.insert(exps.clone(), BigRational::one());
            exps[vars[i]] = 0;
            return;
        }
        for e in 0..=rem {
            exps[vars[i]] = e as u16;
            rec(vars, i + 1, rem - e, exps, out);
        }
        exps[vars[i]] = 0;
    }
    if vars.is_empty() {
        if k == 0 {
            return ChowClass::constant(nvars, max_deg, BigRational::one());
        }
        return out;
    }
    let mut exps = vec![0u16; nvars];
    rec(vars, 0, k, &mut exps, &mut out);
    out
}

/// Schur polynomial s_λ in the given variables (Jacobi–Trudi).
pub fn schur_poly(nvars: usize, max_deg: usize, vars: &[usize], lambda: &Partition) -> ChowClass {
    let l = lambda.len();
    if l == 0 {
        return ChowClass::constant(nvars, max_deg, BigRational::one());
    }
    let h = |k: i64| -> ChowClass {
        if k < 0 {
            ChowClass::zero(nvars, max_deg)
        } else {
            complete_poly(nvars, max_deg, vars, k as usize)
        }
    };
    let mut mat: Vec<Vec<ChowClass>> = Vec::with_capacity(l);
    for i in 0..l {
        mat.push((0..l).map(|j| h(lambda.part(i) as i64 - i as i64 + j as i64)).collect());
    }
    determinant(&mat, nvars, max_deg)
}

/// Determinant of a square matrix of classes by cofactor expansion.
pub fn determinant(mat: &[Vec<ChowClass>], nvars: usize, max_deg: usize) -> ChowClass {
    let n = mat.len();
    if n == 0 {
        return ChowClass::constant(nvars, max_deg, BigRational::one());
    }
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut out = ChowClass::zero(nvars, max_deg);
    for j in 0..n {
        if mat[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<ChowClass>> =
            mat[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = mat[0][j].mul(&determinant(&minor, nvars, max_deg));
        out = if j % 2 == 0 { out.add(&term) } else { out.sub(&term) };
    }
    out
}

/// A polynomial in the Chern roots with rational coefficients, truncated
/// above degree `max_deg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowClass {
    nvars: usize,
    max_deg: usize,
    terms: BTreeMap<Vec<u16>, BigRational>,
}

impl ChowClass {
    pub fn zero(nvars: usize, max_deg: usize) -> Self {
        ChowClass { nvars, max_deg, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, max_deg: usize, c: BigRational) -> Self {
        let mut out = Self::zero(nvars, max_deg);
        if !c.is_zero() {
            out.terms.insert(vec![0; nvars], c);
        }
        out
    }

    pub fn linear(max_deg: usize, w: &[i64]) -> Self {
        let nvars = w.len();
        let mut out = Self::zero(nvars, max_deg);
        if max_deg == 0 {
            return out;
        }
        for (i, &c) in w.iter().enumerate() {
            if c != 0 {
                let mut e = vec![0u16; nvars];
                e[i] = 1;
                out.terms.insert(e, BigRational::from_integer(c.into()));
            }
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u16>, BigRational> {
        &self.terms
    }

    fn deg(e: &[u16]) -> usize {
        e.iter().map(|&x| x as usize).sum()
    }

    pub fn homogeneous(&self, d: usize) -> ChowClass {
        ChowClass {
            nvars: self.nvars,
            max_deg: self.max_deg,
            terms: self.terms.iter().filter(|(e, _)| Self::deg(e) == d).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Degree of the lowest nonzero component, if any.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| Self::deg(e)).min()
    }

    pub fn add(&self, o: &ChowClass) -> ChowClass {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn sub(&self, o: &ChowClass) -> ChowClass {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> ChowClass {
        if c.is_zero() {
            return ChowClass::zero(self.nvars, self.max_deg);
        }
        ChowClass { nvars: self.nvars, max_deg: self.max_deg, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn scale_int(&self, c: i64) -> ChowClass {
        self.scale(&BigRational::from_integer(c.into()))
    }

    pub fn mul(&self, o: &ChowClass) -> ChowClass {
        let mut out: BTreeMap<Vec<u16>, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            let d1 = Self::deg(e1);
            for (e2, c2) in &o.terms {
                if d1 + Self::deg(e2) > self.max_deg {
                    continue;
                }
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *out.entry(e).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        ChowClass { nvars: self.nvars, max_deg: self.max_deg, terms: out }
    }

    pub fn pow(&self, k: u32) -> ChowClass {
        let mut out = ChowClass::constant(self.nvars, self.max_deg, BigRational::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Σ a_k · self^k for a series a (self should have no constant term).
    pub fn substitute(&self, s: &TSeries) -> ChowClass {
        let mut out = ChowClass::zero(self.nvars, self.max_deg);
        let mut pow = ChowClass::constant(self.nvars, self.max_deg, BigRational::one());
        for k in 0..=self.max_deg.min(s.prec()) {
            out = out.add(&pow.scale(s.coeff(k)));
            pow = pow.mul(self);
        }
        out
    }

    pub fn exp(&self) -> ChowClass {
        let coeffs = (0..=self.max_deg).map(factorial_inv).collect();
        self.substitute(&TSeries::from_coeffs(self.max_deg, coeffs))
    }

    pub fn eval(&self, p: &[i64]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut v = BigInt::one();
            for (x, &k) in p.iter().zip(e) {
                if k > 0 {
                    v *= num_traits::pow(BigInt::from(*x), k as usize);
                }
            }
            acc += c * BigRational::from_integer(v);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }

    #[test]
    fn dimensions_and_canonical() {
        let p5 = FlagFactor::projective(5).unwrap();
        assert_eq!(p5.dim(), 5);
        assert_eq!(p5.canonical_twist(), vec![-6]);
        let g25 = FlagFactor::grassmannian(2, 5).unwrap();
        assert_eq!(g25.canonical_twist(), vec![-5]);
        let fl = FlagFactor::new(8, vec![1, 3]).unwrap();
        assert_eq!(fl.dim(), 17);
        assert!(FlagFactor::new(4, vec![2, 2]).is_err());
        let a = Ambient::new(vec![FlagFactor::projective(1).unwrap(), g25]).unwrap();
        assert_eq!(a.dim(), 7);
        assert_eq!(a.canonical_twists(), vec![vec![-2], vec![-5]]);
    }

    #[test]
    fn fixed_point_count() {
        let fl = FlagFactor::new(8, vec![1, 3]).unwrap();
        assert_eq!(fl.fixed_points().len(), 8 * 21);
        let g = FlagFactor::grassmannian(2, 4).unwrap();
        assert_eq!(g.fixed_points().len(), 6);
    }

    #[test]
    fn plucker_quadric() {
        let a = Ambient::new(vec![FlagFactor::grassmannian(2, 4).unwrap()]).unwrap();
        let s1 = a.hyperplane(0);
        assert_eq!(a.integrate(&s1.pow(4)), q(2));
    }

    #[test]
    fn hrr_small() {
        let a = Ambient::new(vec![FlagFactor::projective(5).unwrap()]).unwrap();
        let w = a.line_weight(&[vec![3]]).unwrap();
        assert_eq!(a.chi_hrr(&Character::single(w, 1)), q(56));
        let g = Ambient::new(vec![FlagFactor::grassmannian(2, 5).unwrap()]).unwrap();
        let w = g.line_weight(&[vec![1]]).unwrap();
        assert_eq!(g.chi_hrr(&Character::single(w, 1)), q(10));
    }

    #[test]
    fn normal_form_on_gr24() {
        let a = Ambient::new(vec![FlagFactor::grassmannian(2, 4).unwrap()]).unwrap();
        let s1 = a.hyperplane(0);
        assert_eq!(a.format_class(&s1.pow(2)).unwrap(), "σ(2) + σ(1,1)");
        assert_eq!(a.format_class(&s1.pow(4)).unwrap(), "2σ(2,2)");
    }
}
