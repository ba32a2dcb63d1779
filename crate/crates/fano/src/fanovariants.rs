//! Invariants of a zero locus X = Z(Y, F) of a general section of a
//! completely reducible homogeneous bundle F on a product of flag varieties.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use flagcalc::bundlecalc::{BundleExpr, Decomposition, IrreducibleBundle};
use flagcalc::character::Character;
use flagcalc::chowring::{dot, Ambient, TSeriesFactor};
use flagcalc::dsl::{Atom, NodeDisplay, SpecAst};
use flagcalc::repcore::Weight;
use flagcalc::series::TSeries;
use flagcalc::sheafcohom::tensor_cohomology;

use crate::error::{FanoError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicInvariants {
    pub dim_x: usize,
    pub minus_k: Vec<Vec<i64>>,
    pub minus_k_weight: Weight,
    pub h0_minus_k: BigInt,
    pub k_pow: BigInt,
    pub chi_t: BigInt,
}

fn to_integer(what: &str, q: BigRational) -> Result<BigInt> {
    if !q.is_integer() {
        return Err(FanoError::Inconsistent { what: what.into(), left: q.to_string(), right: "an integer".into() });
    }
    Ok(q.to_integer())
}

fn alternating_sum(v: &[BigInt]) -> BigInt {
    v.iter().enumerate().fold(BigInt::zero(), |acc, (i, x)| if i % 2 == 0 { acc + x } else { acc - x })
}

/// χ(X, E|_X) through the Koszul complex, each term by Borel–Weil–Bott.
pub fn chi_koszul(amb: &Ambient, e: &Character, koszul: &[Character]) -> BigInt {
    koszul
        .par_iter()
        .enumerate()
        .map(|(j, l)| {
            let x = alternating_sum(&tensor_cohomology(amb, e, l));
            if j % 2 == 0 {
                x
            } else {
                -x
            }
        })
        .reduce(BigInt::zero, |a, b| a + b)
}

/// Λ^0 F^∨, …, Λ^r F^∨.
pub fn koszul_terms(amb: &Ambient, f: &Character) -> Vec<Character> {
    f.dual().wedge_all(f.rank().max(0) as u32, amb.nvars())
}

pub fn basic_invariants(amb: &Ambient, f: &Character) -> Result<BasicInvariants> {
    let r = f.rank();
    if r < 0 || r as usize > amb.dim() {
        return Err(FanoError::EmptyZeroLocus { rank: r, dim: amb.dim() });
    }
    if !f.is_effective() {
        return Err(FanoError::Invalid("the bundle must be an honest vector bundle".into()));
    }
    let dim_x = amb.dim() - r as usize;
    let nv = amb.nvars();
    let det = f.det_weight(nv);
    let minus_k_weight: Weight = amb.canonical_weight().iter().zip(&det).map(|(a, b)| -(a + b)).collect();
    let minus_k = amb
        .twists_of(&minus_k_weight)
        .ok_or_else(|| FanoError::Invalid("anticanonical weight is not a line".into()))?;
    let koszul = koszul_terms(amb, f);
    let extra = TSeriesFactor::KoszulOf(f.clone());

    let l = Character::single(minus_k_weight.clone(), 1);
    let h0_bwb = chi_koszul(amb, &l, &koszul);
    let h0_hrr = to_integer("HRR value of h0(-K)", amb.chi_hrr_twisted(&l, &extra))?;
    if h0_bwb != h0_hrr {
        return Err(FanoError::Inconsistent { what: "h0(-K) Koszul vs HRR".into(), left: h0_bwb.to_string(), right: h0_hrr.to_string() });
    }

    let k_pow = to_integer(
        "(-K)^n",
        amb.integrate_points(|p| {
            let mut v = BigInt::from(dot(&minus_k_weight, p)).pow(dim_x as u32);
            for (w, m) in f.terms() {
                v *= BigInt::from(dot(w, p)).pow(*m as u32);
            }
            BigRational::from_integer(v)
        }),
    )?;

    let tx = amb.tangent_character().sub(f);
    let chi_t_hrr = to_integer("HRR value of chi(T)", amb.chi_hrr_twisted(&tx, &extra))?;
    let chi_t_bwb = chi_koszul(amb, &tx, &koszul);
    if chi_t_bwb != chi_t_hrr {
        return Err(FanoError::Inconsistent { what: "chi(T) Koszul vs HRR".into(), left: chi_t_bwb.to_string(), right: chi_t_hrr.to_string() });
    }
    Ok(BasicInvariants { dim_x, minus_k, minus_k_weight, h0_minus_k: h0_bwb, k_pow, chi_t: chi_t_hrr })
}

/// Topological Euler characteristic ∫_Y c_{dim X}(T_Y − F)·c_top(F).
pub fn euler_number(amb: &Ambient, f: &Character) -> Result<BigInt> {
    let dim_x = amb.dim() as i64 - f.rank();
    if dim_x < 0 {
        return Err(FanoError::EmptyZeroLocus { rank: f.rank(), dim: amb.dim() });
    }
    let d = dim_x as usize;
    let tc = amb.tangent_character();
    to_integer(
        "Euler number",
        amb.integrate_points(|p| {
            let mut top = BigInt::one();
            for (w, m) in f.terms() {
                top *= BigInt::from(dot(w, p)).pow(*m as u32);
            }
            if top.is_zero() {
                return BigRational::zero();
            }
            let mut s = TSeries::one(d);
            for (w, m) in tc.terms() {
                s = s.mul(&TSeries::linear(d, dot(w, p)).pow(*m));
            }
            for (w, m) in f.terms() {
                s = s.mul(&TSeries::linear(d, dot(w, p)).pow(-*m));
            }
            s.coeff(d) * BigRational::from_integer(top)
        }),
    )
}

/// Whether −K_X is the restriction of a strictly positive line bundle.
pub fn anticanonical_is_ample(minus_k: &[Vec<i64>]) -> bool {
    minus_k.iter().flatten().all(|&t| t > 0)
}

// ---- Hodge numbers

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeEntry {
    pub lo: i64,
    pub hi: i64,
}

impl HodgeEntry {
    pub fn exact(v: i64) -> Self {
        HodgeEntry { lo: v, hi: v }
    }

    pub fn value(&self) -> Option<i64> {
        (self.lo == self.hi).then_some(self.lo)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for HodgeEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "[{},{}]", self.lo, self.hi),
        }
    }
}

/// Place of an E₁ term: `a` indexes the resolution of Ω^p_X coming from the
/// conormal sequence, `j` the Koszul degree in each summand of F.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Position {
    pub a: u32,
    pub j: Vec<u32>,
}

impl Position {
    /// Whether a differential may go from `self` to `other`. Maps in the
    /// conormal direction lower a and may raise Koszul degrees (restrictions
    /// lift to Y only up to higher Koszul terms); at fixed a the Koszul
    /// differential lowers j componentwise.
    pub fn reaches(&self, other: &Position, same_position: bool) -> bool {
        if other.a != self.a {
            return other.a < self.a;
        }
        if other.j == self.j {
            return same_position;
        }
        other.j.iter().zip(&self.j).all(|(x, y)| x <= y)
    }
}

/// E₁ data of the spectral sequence computing H^*(Ω^p_X): dimensions of the
/// terms by total degree q and position. `c` holds the totals per degree for
/// q in `lo..lo+c.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E1Row {
    pub lo: i64,
    pub c: Vec<i64>,
    pub terms: Vec<(i64, Position, i64)>,
    /// Largest cancellation between degrees q and q+1 compatible with
    /// positions, indexed like `c`.
    pub max_cancel: Vec<i64>,
}

/// Maximum flow in a bipartite network with capacities on both sides.
fn bipartite_flow(left: &[i64], right: &[i64], edge: impl Fn(usize, usize) -> bool) -> i64 {
    let (nl, nr) = (left.len(), right.len());
    let src = nl + nr;
    let snk = src + 1;
    let n = snk + 1;
    let mut cap = vec![vec![0i64; n]; n];
    for (i, &c) in left.iter().enumerate() {
        cap[src][i] = c;
        for j in 0..nr {
            if edge(i, j) {
                cap[i][nl + j] = i64::MAX / 4;
            }
        }
    }
    for (j, &c) in right.iter().enumerate() {
        cap[nl + j][snk] = c;
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[src] = src;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if prev[v] == usize::MAX && cap[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[snk] == usize::MAX {
            return flow;
        }
        let mut push = i64::MAX;
        let mut v = snk;
        while v != src {
            push = push.min(cap[prev[v]][v]);
            v = prev[v];
        }
        let mut v = snk;
        while v != src {
            let u = prev[v];
            cap[u][v] -= push;
            cap[v][u] += push;
            v = u;
        }
        flow += push;
    }
}

impl E1Row {
    /// `same_position` allows cancellation inside one position, which happens
    /// when a term is only filtered by homogeneous bundles, not split.
    pub fn new(terms: BTreeMap<(i64, Position), i64>, same_position: bool) -> Self {
        let terms: Vec<(i64, Position, i64)> = terms.into_iter().filter(|(_, v)| *v != 0).map(|((q, s), v)| (q, s, v)).collect();
        let (lo, hi) = match (terms.iter().map(|t| t.0).min(), terms.iter().map(|t| t.0).max()) {
            (Some(a), Some(b)) => (a, b),
            _ => return E1Row { lo: 0, c: Vec::new(), terms, max_cancel: Vec::new() },
        };
        let mut c = vec![0; (hi - lo + 1) as usize];
        for (q, _, v) in &terms {
            c[(q - lo) as usize] += v;
        }
        let layer = |q: i64| -> Vec<(&Position, i64)> { terms.iter().filter(|t| t.0 == q).map(|t| (&t.1, t.2)).collect() };
        let max_cancel = (lo..=hi)
            .map(|q| {
                let (src, dst) = (layer(q), layer(q + 1));
                if src.is_empty() || dst.is_empty() {
                    return 0;
                }
                let l: Vec<i64> = src.iter().map(|t| t.1).collect();
                let r: Vec<i64> = dst.iter().map(|t| t.1).collect();
                bipartite_flow(&l, &r, |i, j| src[i].0.reaches(dst[j].0, same_position))
            })
            .collect();
        E1Row { lo, c, terms, max_cancel }
    }

    pub fn at(&self, q: i64) -> i64 {
        if q < self.lo {
            return 0;
        }
        self.c.get((q - self.lo) as usize).copied().unwrap_or(0)
    }

    pub fn euler(&self) -> i64 {
        self.c.iter().enumerate().map(|(i, &v)| if (self.lo + i as i64) % 2 == 0 { v } else { -v }).sum()
    }

    /// Can `target` be the abutment? Every differential raises the total degree
    /// by one, so h^q = c_q − y_{q−1} − y_q with 0 ≤ y_q ≤ max_cancel_q.
    pub fn feasible(&self, target: impl Fn(i64) -> i64) -> bool {
        let mut prev = 0i64;
        for (i, &c) in self.c.iter().enumerate() {
            let y = c - prev - target(self.lo + i as i64);
            if y < 0 || y > self.max_cancel[i] {
                return false;
            }
            prev = y;
        }
        prev == 0
    }
}

/// All multi-indices with 0 ≤ j_k ≤ bound_k.
fn multi_indices(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out.into_iter().flat_map(|v| (0..=b).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Terms S^aF^∨ ⊗ Λ^{p−a}Ω_Y ⊗ Λ^{j_1}F_1^∨ ⊗ … on Y, in degree t − a − Σj,
/// where F = F_1 ⊕ … is split into `summands`.
pub fn e1_row(amb: &Ambient, summands: &[Character], p: u32) -> E1Row {
    let nv = amb.nvars();
    let f = summands.iter().fold(Character::new(), |acc, x| acc.add(x));
    let omega = amb.cotangent_character().wedge_all(p, nv);
    let sym = f.dual().sym_all(p, nv);
    let wedges: Vec<Vec<Character>> = summands.iter().map(|x| koszul_terms(amb, x)).collect();
    let bounds: Vec<u32> = wedges.iter().map(|w| w.len() as u32 - 1).collect();
    let koszul: Vec<(Vec<u32>, Character)> = multi_indices(&bounds)
        .into_par_iter()
        .map(|js| {
            let ch = js.iter().zip(&wedges).fold(Character::trivial(nv), |acc, (&j, w)| acc.mul(&w[j as usize]));
            (js, ch)
        })
        .collect();
    let bases: Vec<Character> = (0..=p).map(|a| sym[a as usize].mul(&omega[(p - a) as usize])).collect();
    let jobs: Vec<(u32, usize)> = (0..=p).flat_map(|a| (0..koszul.len()).map(move |k| (a, k))).collect();
    let parts: Vec<Vec<((i64, Position), i64)>> = jobs
        .par_iter()
        .map(|&(a, k)| {
            let (js, l) = &koszul[k];
            let s = a as i64 + js.iter().map(|&x| x as i64).sum::<i64>();
            tensor_cohomology(amb, &bases[a as usize], l)
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(t, v)| ((t as i64 - s, Position { a, j: js.clone() }), v.to_i64().expect("dimension fits in i64")))
                .collect()
        })
        .collect();
    let mut total: BTreeMap<(i64, Position), i64> = BTreeMap::new();
    for m in parts {
        for (k, v) in m {
            *total.entry(k).or_insert(0) += v;
        }
    }
    let filtered = p > 0 && amb.factors().iter().any(|f| f.num_steps() > 1);
    E1Row::new(total, filtered)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeDiamond {
    pub dim: usize,
    pub h: Vec<Vec<HodgeEntry>>,
    /// χ(Ω^p_X), always exact.
    pub chi_omega: Vec<i64>,
    /// Number of diamonds consistent with the E₁ data.
    pub candidates: usize,
    /// Whether h^{0,q} = δ_{q,0} was forced by the data rather than imposed.
    pub structure_sheaf_closed: bool,
}

impl HodgeDiamond {
    pub fn get(&self, p: usize, q: usize) -> HodgeEntry {
        self.h[p][q]
    }

    pub fn exact(&self, p: usize, q: usize) -> Option<i64> {
        self.h[p][q].value()
    }

    pub fn is_exact(&self) -> bool {
        self.h.iter().flatten().all(|e| e.is_exact())
    }

    pub fn euler(&self) -> Option<i64> {
        let mut s = 0;
        for (p, row) in self.h.iter().enumerate() {
            for (q, e) in row.iter().enumerate() {
                let v = e.value()?;
                s += if (p + q) % 2 == 0 { v } else { -v };
            }
        }
        Some(s)
    }

    /// max{q − p : h^{p,q} ≠ 0}, if the bounds decide it.
    pub fn level(&self) -> Option<i64> {
        let mut surely = i64::MIN;
        let mut maybe = i64::MIN;
        for (p, row) in self.h.iter().enumerate() {
            for (q, e) in row.iter().enumerate() {
                let d = q as i64 - p as i64;
                if e.lo > 0 {
                    surely = surely.max(d);
                }
                if e.hi > 0 {
                    maybe = maybe.max(d);
                }
            }
        }
        (surely == maybe).then_some(surely)
    }

    pub fn symmetric(&self) -> bool {
        let n = self.dim;
        (0..=n).all(|p| (0..=n).all(|q| self.h[p][q] == self.h[q][p] && self.h[p][q] == self.h[n - p][n - q]))
    }
}

impl fmt::Display for HodgeDiamond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim;
        for s in 0..=2 * n {
            let cells: Vec<String> = (0..=n)
                .filter_map(|p| {
                    let q = s.checked_sub(p)?;
                    (q <= n).then(|| self.h[p][q].to_string())
                })
                .collect();
            let pad = " ".repeat(n.abs_diff(s) * 2);
            writeln!(f, "{pad}{}", cells.join("   "))?;
        }
        Ok(())
    }
}

/// Values of h^{0,*} consistent with the row for Ω⁰, if there are few enough
/// to list.
fn structure_sheaf_candidates(row: &E1Row, n: usize) -> Option<Vec<Vec<i64>>> {
    let bounds: Vec<i64> = (0..=n as i64).map(|q| row.at(q).max(0)).collect();
    let total: i128 = bounds.iter().map(|&b| b as i128 + 1).product();
    if total > 1_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut cur = vec![0i64; n + 1];
    loop {
        if row.feasible(|q| if (0..=n as i64).contains(&q) { cur[q as usize] } else { 0 }) {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i > n {
                return Some(out);
            }
            if cur[i] < bounds[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

fn bounds_only(rows: &[E1Row], n: usize) -> Vec<Vec<HodgeEntry>> {
    rows.iter()
        .map(|r| {
            (0..=n as i64)
                .map(|q| {
                    let c = r.at(q);
                    let lo = (c - r.at(q - 1) - r.at(q + 1)).max(0);
                    HodgeEntry { lo, hi: c.max(lo) }
                })
                .collect()
        })
        .collect()
}

/// Diamond of a fourfold given the E₁ rows for p = 0…3. The unknowns are the
/// orbit representatives h11, h12, h13, h22 under Hodge and Serre symmetry.
pub fn solve_fourfold(rows: &[E1Row]) -> HodgeDiamond {
    let n = 4usize;
    let chi_omega: Vec<i64> = {
        let mut v: Vec<i64> = rows.iter().map(|r| r.euler()).collect();
        v.push(v[0]);
        v
    };
    let zero_closed = matches!(structure_sheaf_candidates(&rows[0], n), Some(c) if c == vec![vec![1, 0, 0, 0, 0]]);
    let diamond = |h11: i64, h12: i64, h13: i64, h22: i64| -> [[i64; 5]; 5] {
        [
            [1, 0, 0, 0, 0],
            [0, h11, h12, h13, 0],
            [0, h12, h22, h12, 0],
            [0, h13, h12, h11, 0],
            [0, 0, 0, 0, 1],
        ]
    };
    let fits = |row: &E1Row, vals: &[i64; 5]| row.feasible(|q| if (0..=4).contains(&q) { vals[q as usize] } else { 0 });
    let r = &rows;
    let b11 = r[1].at(1).min(r[3].at(3)).max(0);
    let b12 = r[1].at(2).min(r[2].at(1)).min(r[2].at(3)).min(r[3].at(2)).max(0);
    let b13 = r[1].at(3).min(r[3].at(1)).max(0);
    let b22 = r[2].at(2).max(0);
    let mut found: Vec<[i64; 4]> = Vec::new();
    for h11 in 0..=b11 {
        for h12 in 0..=b12 {
            for h13 in 0..=b13 {
                let d = diamond(h11, h12, h13, 0);
                if !fits(&r[1], &d[1]) || !fits(&r[3], &d[3]) {
                    continue;
                }
                for h22 in 0..=b22 {
                    let d = diamond(h11, h12, h13, h22);
                    if fits(&r[2], &d[2]) {
                        found.push([h11, h12, h13, h22]);
                    }
                }
            }
        }
    }
    let h = if found.is_empty() {
        bounds_only(rows, n)
            .into_iter()
            .chain(std::iter::once(vec![HodgeEntry::exact(0); 5]))
            .collect()
    } else {
        let span = |i: usize| {
            let lo = found.iter().map(|t| t[i]).min().unwrap();
            let hi = found.iter().map(|t| t[i]).max().unwrap();
            HodgeEntry { lo, hi }
        };
        let (e11, e12, e13, e22) = (span(0), span(1), span(2), span(3));
        let z = HodgeEntry::exact(0);
        let one = HodgeEntry::exact(1);
        vec![
            vec![one, z, z, z, z],
            vec![z, e11, e12, e13, z],
            vec![z, e12, e22, e12, z],
            vec![z, e13, e12, e11, z],
            vec![z, z, z, z, one],
        ]
    };
    HodgeDiamond { dim: n, h, chi_omega, candidates: found.len(), structure_sheaf_closed: zero_closed }
}

/// Hodge numbers of Z(Y, F) with F = ⊕ `summands`.
pub fn hodge_diamond(amb: &Ambient, summands: &[Character]) -> Result<HodgeDiamond> {
    let r: i64 = summands.iter().map(|x| x.rank()).sum();
    if r < 0 || r as usize > amb.dim() {
        return Err(FanoError::EmptyZeroLocus { rank: r, dim: amb.dim() });
    }
    let n = amb.dim() - r as usize;
    if n == 4 {
        let rows: Vec<E1Row> = (0..=3).map(|p| e1_row(amb, summands, p)).collect();
        return Ok(solve_fourfold(&rows));
    }
    let rows: Vec<E1Row> = (0..=n as u32).map(|p| e1_row(amb, summands, p)).collect();
    Ok(solve_general(&rows, n))
}

/// Smallest member of the orbit of (p, q) under Hodge and Serre symmetry.
fn orbit_rep(n: usize, p: usize, q: usize) -> (usize, usize) {
    [(p, q), (q, p), (n - p, n - q), (n - q, n - p)].into_iter().min().unwrap()
}

/// Diamond of a nonempty variety of any dimension from its E₁ rows, using
/// symmetry, h⁰⁰ ≥ 1, the exact χ(Ω^p) and row feasibility. Falls back to
/// symmetrized bounds when the search box is too large.
pub fn solve_general(rows: &[E1Row], n: usize) -> HodgeDiamond {
    const MAX_BOX: u128 = 2_000_000;
    let chi_omega: Vec<i64> = rows.iter().map(|r| r.euler()).collect();
    let zero_closed = matches!(structure_sheaf_candidates(&rows[0], n), Some(c) if c.len() == 1 && c[0].iter().enumerate().all(|(q, &v)| v == i64::from(q == 0)));
    let raw = bounds_only(rows, n);
    let mut reps: Vec<(usize, usize)> = Vec::new();
    let mut bound: BTreeMap<(usize, usize), HodgeEntry> = BTreeMap::new();
    for p in 0..=n {
        for q in 0..=n {
            let r = orbit_rep(n, p, q);
            let e = bound.entry(r).or_insert(HodgeEntry { lo: 0, hi: i64::MAX });
            e.lo = e.lo.max(raw[p][q].lo);
            e.hi = e.hi.min(raw[p][q].hi);
            if !reps.contains(&r) {
                reps.push(r);
            }
        }
    }
    if let Some(e) = bound.get_mut(&(0, 0)) {
        e.lo = e.lo.max(1);
    }
    let sym = |b: &BTreeMap<(usize, usize), HodgeEntry>| -> Vec<Vec<HodgeEntry>> {
        (0..=n).map(|p| (0..=n).map(|q| b[&orbit_rep(n, p, q)]).collect()).collect()
    };
    let size: u128 = reps.iter().map(|r| (bound[r].hi - bound[r].lo + 1).max(0) as u128).try_fold(1u128, |a, b| a.checked_mul(b)).unwrap_or(u128::MAX);
    if bound.values().any(|e| e.lo > e.hi) || size > MAX_BOX {
        let h = if bound.values().any(|e| e.lo > e.hi) { raw } else { sym(&bound) };
        return HodgeDiamond { dim: n, h, chi_omega, candidates: 0, structure_sheaf_closed: zero_closed };
    }
    let mut found: Vec<Vec<i64>> = Vec::new();
    let mut cur: Vec<i64> = reps.iter().map(|r| bound[r].lo).collect();
    loop {
        let val = |p: usize, q: usize| cur[reps.iter().position(|&r| r == orbit_rep(n, p, q)).unwrap()];
        let ok = (0..=n).all(|p| {
            let chi: i64 = (0..=n).map(|q| if q % 2 == 0 { val(p, q) } else { -val(p, q) }).sum();
            chi == chi_omega[p] && rows[p].feasible(|q| if (0..=n as i64).contains(&q) { val(p, q as usize) } else { 0 })
        });
        if ok {
            found.push(cur.clone());
        }
        // odometer over the box
        let mut i = 0;
        loop {
            if i == reps.len() {
                let h = if found.is_empty() {
                    raw
                } else {
                    let mut b = BTreeMap::new();
                    for (k, r) in reps.iter().enumerate() {
                        let lo = found.iter().map(|f| f[k]).min().unwrap();
                        let hi = found.iter().map(|f| f[k]).max().unwrap();
                        b.insert(*r, HodgeEntry { lo, hi });
                    }
                    sym(&b)
                };
                return HodgeDiamond { dim: n, h, chi_omega, candidates: found.len(), structure_sheaf_closed: zero_closed };
            }
            if cur[i] < bound[&reps[i]].hi {
                cur[i] += 1;
                break;
            }
            cur[i] = bound[&reps[i]].lo;
            i += 1;
        }
    }
}

/// Hodge numbers by a second route when F = Q_{P^m} ⊠ L ⊕ G with the P^m
/// factor entering no other summand: then X = Bl_S W for W = Z(B, G) and
/// S = Z(B, G ⊕ L^{m+1}) on the remaining factors B, and
/// h^{p,q}(X) = h^{p,q}(W) + Σ_{i=1}^{m} h^{p−i,q−i}(S).
pub fn blowup_diamond(amb: &Ambient, dec: &Decomposition) -> Result<Option<HodgeDiamond>> {
    let nf = amb.factors().len();
    if nf < 2 {
        return Ok(None);
    }
    let constant = |v: &[i64]| v.windows(2).all(|p| p[0] == p[1]);
    for (i, f) in amb.factors().iter().enumerate() {
        if !f.is_projective() {
            continue;
        }
        let m = f.dim();
        let range = amb.factor_range(i);
        let quot = Atom::Quot(i).weight(amb)?;
        let is_q = |w: &[i64]| {
            let d: Vec<i64> = w[range.clone()].iter().zip(&quot[range.clone()]).map(|(a, b)| a - b).collect();
            constant(&d)
        };
        let Some((qb, _)) = dec.iter().find(|(b, &mult)| mult == 1 && is_q(b.weight())) else {
            continue;
        };
        if dec.keys().any(|b| b != qb && !constant(&b.weight()[range.clone()])) {
            continue;
        }
        let rest = |w: &[i64]| -> Weight { w.iter().enumerate().filter(|(k, _)| !range.contains(k)).map(|(_, &x)| x).collect() };
        let base = Ambient::new(amb.factors().iter().enumerate().filter(|&(k, _)| k != i).map(|(_, g)| g.clone()).collect())?;
        let line = rest(qb.weight());
        if base.twists_of(&line).is_none() {
            continue;
        }
        let mut w_dec = Decomposition::new();
        for (b, &mult) in dec.iter().filter(|(b, _)| *b != qb) {
            *w_dec.entry(IrreducibleBundle::new(&base, rest(b.weight()))?).or_default() += mult;
        }
        let mut s_dec = w_dec.clone();
        *s_dec.entry(IrreducibleBundle::new(&base, line)?).or_default() += m as u64 + 1;
        let s_sum = decomposition_summands(&base, &s_dec);
        let (dw, _) = refined_diamond(&base, &w_dec)?;
        let n = dw.dim;
        let mut h = dw.h.clone();
        let s_rank: i64 = s_sum.iter().map(|c| c.rank()).sum();
        let s_full: Character = s_sum.iter().fold(Character::new(), |acc, c| acc.add(c));
        let s_nonempty = s_rank <= base.dim() as i64 && !base.coordinates(&base.top_chern(&s_full))?.is_empty();
        if s_nonempty {
            let (ds, _) = refined_diamond(&base, &s_dec)?;
            for k in 1..=m {
                for p in k..=n {
                    for q in k..=n {
                        if p - k <= ds.dim && q - k <= ds.dim {
                            let e = ds.h[p - k][q - k];
                            h[p][q].lo += e.lo;
                            h[p][q].hi += e.hi;
                        }
                    }
                }
            }
        }
        return Ok(Some(HodgeDiamond { dim: n, h, chi_omega: dw.chi_omega.clone(), candidates: 0, structure_sheaf_closed: dw.structure_sheaf_closed }));
    }
    Ok(None)
}

fn decomposition_summands(amb: &Ambient, dec: &Decomposition) -> Vec<Character> {
    let mut out = Vec::new();
    for (b, &m) in dec {
        let ch = b.character(amb);
        for _ in 0..m {
            out.push(ch.clone());
        }
    }
    out
}

/// Solver diamond intersected with the blow-up route when it applies; the
/// flag tells whether the second route changed anything.
pub fn refined_diamond(amb: &Ambient, dec: &Decomposition) -> Result<(HodgeDiamond, bool)> {
    let mut hodge = hodge_diamond(amb, &decomposition_summands(amb, dec))?;
    let mut refined = false;
    if let Some(alt) = blowup_diamond(amb, dec)? {
        refined = refine(&mut hodge, &alt)?;
    }
    Ok((hodge, refined))
}

/// Intersect the solver's diamond with one from another route.
fn refine(ours: &mut HodgeDiamond, other: &HodgeDiamond) -> Result<bool> {
    let mut changed = false;
    for p in 0..=ours.dim {
        for q in 0..=ours.dim {
            let (a, b) = (ours.h[p][q], other.h[p][q]);
            let e = HodgeEntry { lo: a.lo.max(b.lo), hi: a.hi.min(b.hi) };
            if e.lo > e.hi {
                return Err(FanoError::Inconsistent { what: format!("h^{{{p},{q}}} from the blow-up description"), left: a.to_string(), right: b.to_string() });
            }
            changed |= e != a;
            ours.h[p][q] = e;
        }
    }
    Ok(changed)
}

// ---- records

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanoRecord {
    pub ambient: String,
    pub bundle: String,
    pub dim_x: usize,
    pub minus_k: Vec<Vec<i64>>,
    pub h0_minus_k: i64,
    pub k_pow: i64,
    pub chi_t: i64,
    pub euler: i64,
    pub hodge: HodgeDiamond,
    pub rho: Option<i64>,
    pub is_fk3: Option<bool>,
    pub level: Option<i64>,
    pub id: String,
    pub annotations: Vec<String>,
    pub flags: Vec<String>,
}

impl FanoRecord {
    pub fn h(&self, p: usize, q: usize) -> Option<i64> {
        self.hodge.exact(p, q)
    }

    pub fn spec(&self) -> String {
        format!("{} ; {}", self.ambient, self.bundle)
    }

    /// Fingerprint used to tell families apart.
    pub fn fingerprint(&self) -> (Option<i64>, i64, i64, Option<i64>, Vec<Vec<HodgeEntry>>, i64) {
        (self.rho, self.h0_minus_k, self.k_pow, self.level, self.hodge.h.clone(), self.chi_t)
    }

    pub fn base_id(&self) -> String {
        let opt = |v: Option<i64>| v.map_or("?".to_string(), |x| x.to_string());
        format!("{}-{}-{}-{}", opt(self.rho), self.h0_minus_k, self.k_pow, opt(self.level))
    }
}

fn small(what: &str, v: &BigInt) -> Result<i64> {
    v.to_i64().ok_or_else(|| FanoError::Invalid(format!("{what} does not fit in 64 bits: {v}")))
}

/// Level, FK3 predicate, Picard rank and the unlettered ID.
pub fn classify(mut rec: FanoRecord) -> FanoRecord {
    rec.level = rec.hodge.level();
    rec.rho = if rec.dim_x >= 2 { rec.hodge.exact(1, 1) } else { None };
    if rec.rho.is_none() && !rec.flags.iter().any(|f| f == "rho-bounded") {
        rec.flags.push("rho-bounded".into());
    }
    rec.is_fk3 = if rec.dim_x == 4 { rec.hodge.exact(3, 1).map(|h| h == 1) } else { None };
    if rec.dim_x == 4 && rec.is_fk3.is_none() {
        rec.flags.push("fk3-undetermined".into());
    }
    rec.id = rec.base_id();
    rec
}

/// Characters of the irreducible summands of F, one per copy.
pub fn irreducible_summands(amb: &Ambient, e: &BundleExpr) -> Result<Vec<Character>> {
    let mut out = Vec::new();
    for (b, m) in e.normalize(amb)? {
        let ch = b.character(amb);
        out.extend(std::iter::repeat(ch).take(m as usize));
    }
    Ok(out)
}

/// Full evaluation of one (ambient, bundle) pair.
/// Whether c_top(F) is zero in the Chow ring. A nonzero degree against a power
/// of an ample class settles it quickly; only otherwise is the class expanded.
fn top_chern_vanishes(amb: &Ambient, f: &Character) -> Result<bool> {
    let d = (amb.dim() as i64 - f.rank()) as u32;
    let ones: Vec<Vec<i64>> = amb.factors().iter().map(|g| vec![1; g.num_steps()]).collect();
    let h = amb.line_weight(&ones)?;
    let deg = amb.integrate_points(|p| {
        let mut v = BigInt::from(dot(&h, p)).pow(d);
        for (w, m) in f.terms() {
            v *= BigInt::from(dot(w, p)).pow(*m as u32);
        }
        BigRational::from_integer(v)
    });
    if !deg.is_zero() {
        return Ok(false);
    }
    Ok(amb.coordinates(&amb.top_chern(f))?.is_empty())
}

pub fn evaluate(spec: &SpecAst) -> Result<FanoRecord> {
    let amb = &spec.ambient;
    let expr = spec.expr()?;
    let f = expr.character(amb);
    if f.rank() <= amb.dim() as i64 && top_chern_vanishes(amb, &f)? {
        return Err(FanoError::VanishingTopChern(NodeDisplay(amb, &spec.bundle).to_string()));
    }
    let basic = basic_invariants(amb, &f)?;
    let (hodge, refined) = refined_diamond(amb, &expr.normalize(amb)?)?;
    let euler = small("Euler number", &euler_number(amb, &f)?)?;
    if let Some(e) = hodge.euler() {
        if e != euler {
            return Err(FanoError::Inconsistent { what: "Euler number from Hodge numbers".into(), left: e.to_string(), right: euler.to_string() });
        }
    }
    for (p, &chi) in hodge.chi_omega.iter().enumerate() {
        let from_h: Option<i64> = (0..=hodge.dim).map(|q| hodge.exact(p, q).map(|v| if q % 2 == 0 { v } else { -v })).sum();
        if let Some(s) = from_h {
            if s != chi {
                return Err(FanoError::Inconsistent { what: format!("chi(Omega^{p})"), left: s.to_string(), right: chi.to_string() });
            }
        }
    }
    let mut flags = Vec::new();
    if !anticanonical_is_ample(&basic.minus_k) {
        flags.push("not-anticanonically-ample".into());
    }
    if !hodge.structure_sheaf_closed {
        flags.push("structure-sheaf-imposed".into());
    }
    if hodge.dim == 4 && hodge.candidates == 0 {
        flags.push("hodge-infeasible".into());
    }
    if refined {
        flags.push("hodge-refined-by-blow-up".into());
    }
    let rec = FanoRecord {
        ambient: amb.to_string(),
        bundle: NodeDisplay(amb, &spec.bundle).to_string(),
        dim_x: basic.dim_x,
        minus_k: basic.minus_k,
        h0_minus_k: small("h0(-K)", &basic.h0_minus_k)?,
        k_pow: small("(-K)^n", &basic.k_pow)?,
        chi_t: small("chi(T)", &basic.chi_t)?,
        euler,
        hodge,
        rho: None,
        is_fk3: None,
        level: None,
        id: String::new(),
        annotations: Vec::new(),
        flags,
    };
    Ok(classify(rec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use flagcalc::dsl::parse_spec;

    fn run(s: &str) -> FanoRecord {
        evaluate(&parse_spec(s).unwrap()).unwrap()
    }

    #[test]
    fn cubic_fourfold() {
        let r = run("P(5) ; O(3)");
        assert_eq!((r.h0_minus_k, r.k_pow, r.chi_t), (55, 243, -20));
        assert_eq!(r.h(3, 1), Some(1));
        assert_eq!(r.h(2, 2), Some(21));
        assert_eq!(r.h(1, 2), Some(0));
        assert_eq!(r.is_fk3, Some(true));
        assert_eq!(r.level, Some(2));
        assert_eq!(r.id, "1-55-243-2");
    }

    #[test]
    fn feasibility_model() {
        let pos = |a: u32, j: u32| Position { a, j: vec![j] };
        let row = |t: &[((i64, (u32, u32)), i64)]| E1Row::new(t.iter().map(|&((q, (a, j)), v)| ((q, pos(a, j)), v)).collect(), false);
        let r = row(&[((1, (0, 0)), 1), ((3, (0, 2)), 1)]);
        assert!(r.feasible(|q| [0, 1, 0, 1, 0][q as usize]));
        assert!(!r.feasible(|q| [0, 0, 0, 1, 0][q as usize]));
        // a class at Koszul degree 2 can kill one at degree 0 one step up
        let r = row(&[((1, (0, 2)), 1), ((2, (0, 0)), 1)]);
        assert!(r.feasible(|q| [0, 0, 0, 0, 0][q as usize]));
        assert!(r.feasible(|q| [0, 1, 1, 0, 0][q as usize]));
        // but not the other way round
        let r = row(&[((1, (0, 0)), 1), ((2, (0, 2)), 1)]);
        assert!(!r.feasible(|q| [0, 0, 0, 0, 0][q as usize]));
        assert_eq!(r.max_cancel, vec![0, 0]);
        // lowering the conormal index allows any Koszul degree
        let r = row(&[((1, (1, 0)), 1), ((2, (0, 2)), 1)]);
        assert!(r.feasible(|q| [0, 0, 0, 0, 0][q as usize]));
    }

    #[test]
    fn ampleness() {
        assert!(anticanonical_is_ample(&[vec![1], vec![2]]));
        assert!(!anticanonical_is_ample(&[vec![1], vec![0]]));
    }
}
