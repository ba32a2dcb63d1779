//! Enumeration of candidate pairs (Y, F), batch evaluation, pattern
//! annotations, deduplication with IDs, and persistence.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use flagcalc::bundlecalc::IrreducibleBundle;
use flagcalc::chowring::{Ambient, FlagFactor};
use flagcalc::dsl::{format_twists, format_weight, parse_spec, split_top_level, Atom, SpecAst};
use flagcalc::repcore::Weight;

use crate::error::{FanoError, Result};
use crate::fanovariants::{anticanonical_is_ample, evaluate, FanoRecord};
use crate::loci::parse_keyvals;

pub const DUPLICATE_FLAG: &str = "possible-duplicate-presentation";
pub const GG_INCONCLUSIVE_FLAG: &str = "global-generation-inconclusive";

/// Kinds of per-factor building blocks allowed in a summand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AtomKind {
    Line,
    Quot,
    SubDual,
    Other,
}

impl AtomKind {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "line" => AtomKind::Line,
            "quot" => AtomKind::Quot,
            "subdual" => AtomKind::SubDual,
            "other" => AtomKind::Other,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_factors: usize,
    /// Largest vector space dimension of a factor.
    pub max_n: usize,
    pub max_steps: usize,
    pub max_ambient_dim: usize,
    pub max_summands: usize,
    /// Largest entry of a per-factor weight normalized to end in 0.
    pub max_twist: i64,
    pub atoms: BTreeSet<AtomKind>,
    pub target_dim: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_factors: 2,
            max_n: 6,
            max_steps: 1,
            max_ambient_dim: 8,
            max_summands: 3,
            max_twist: 3,
            atoms: [AtomKind::Line, AtomKind::Quot, AtomKind::SubDual].into_iter().collect(),
            target_dim: 4,
        }
    }
}

impl SearchConfig {
    /// `key = value` lines; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SearchConfig::default();
        for (key, (line, value)) in parse_keyvals(text)? {
            let num = || -> Result<usize> {
                value.parse::<usize>().map_err(|_| FanoError::Config { line, msg: format!("`{value}` is not a nonnegative integer") })
            };
            match key.as_str() {
                "max_factors" => cfg.max_factors = num()?,
                "max_n" => cfg.max_n = num()?,
                "max_steps" => cfg.max_steps = num()?,
                "max_ambient_dim" => cfg.max_ambient_dim = num()?,
                "max_summands" => cfg.max_summands = num()?,
                "max_twist" => cfg.max_twist = num()? as i64,
                "target_dim" => cfg.target_dim = num()?,
                "atoms" => {
                    cfg.atoms = value
                        .split(',')
                        .map(|s| AtomKind::parse(s.trim()).ok_or_else(|| FanoError::Config { line, msg: format!("unknown atom kind `{}`", s.trim()) }))
                        .collect::<Result<_>>()?;
                }
                _ => return Err(FanoError::Config { line, msg: format!("unknown key `{key}`") }),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bounds = [
            ("max_factors", self.max_factors),
            ("max_n", self.max_n),
            ("max_steps", self.max_steps),
            ("max_ambient_dim", self.max_ambient_dim),
            ("max_summands", self.max_summands),
            ("max_twist", self.max_twist as usize),
            ("target_dim", self.target_dim),
        ];
        for (name, v) in bounds {
            if v < 1 {
                return Err(FanoError::Config { line: 0, msg: format!("{name} must be at least 1") });
            }
        }
        if self.atoms.is_empty() {
            return Err(FanoError::Config { line: 0, msg: "no atom kinds allowed".into() });
        }
        Ok(())
    }
}

fn factor_key(f: &FlagFactor) -> (usize, Vec<usize>) {
    (f.n(), f.steps().to_vec())
}

/// Flag factors with vector space dimension ≤ max_n and at most max_steps
/// steps; Grassmannians G(k,n) only for k ≤ n/2.
pub fn factor_catalogue(cfg: &SearchConfig) -> Vec<FlagFactor> {
    let mut out = Vec::new();
    for n in 2..=cfg.max_n {
        for r in 1..=cfg.max_steps.min(n - 1) {
            let mut steps = Vec::new();
            collect_steps(n, r, 1, &mut steps, &mut |s| {
                if r == 1 && s[0] > n / 2 {
                    return;
                }
                if let Ok(f) = FlagFactor::new(n, s.to_vec()) {
                    out.push(f);
                }
            });
        }
    }
    out.sort_by_key(factor_key);
    out
}

fn collect_steps(n: usize, r: usize, from: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == r {
        f(cur);
        return;
    }
    for k in from..n {
        cur.push(k);
        collect_steps(n, r, k + 1, cur, f);
        cur.pop();
    }
}

/// Products of catalogue factors (as multisets) within the dimension bounds.
pub fn ambients(cfg: &SearchConfig) -> Vec<Ambient> {
    let cat = factor_catalogue(cfg);
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(cat: &[FlagFactor], cfg: &SearchConfig, start: usize, dim: usize, cur: &mut Vec<usize>, out: &mut Vec<Ambient>) {
        if !cur.is_empty() && dim > cfg.target_dim {
            if let Ok(a) = Ambient::new(cur.iter().map(|&i| cat[i].clone()).collect()) {
                out.push(a);
            }
        }
        if cur.len() == cfg.max_factors {
            return;
        }
        for i in start..cat.len() {
            let d = dim + cat[i].dim();
            if d > cfg.max_ambient_dim {
                continue;
            }
            cur.push(i);
            rec(cat, cfg, i, d, cur, out);
            cur.pop();
        }
    }
    rec(&cat, cfg, 0, 0, &mut cur, &mut out);
    out
}

/// Non-increasing weights of length n ending in 0 with first entry ≤ max.
fn dominant_slices(n: usize, max: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, bound: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n - 1 {
            let mut w = cur.clone();
            w.push(0);
            out.push(w);
            return;
        }
        for v in (0..=bound).rev() {
            cur.push(v);
            rec(n, v, cur, out);
            cur.pop();
        }
    }
    rec(n, max, &mut cur, &mut out);
    out
}

/// Recognized shape of one factor slice of a weight: a base atom and a twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub kind: AtomKind,
    pub twist: Vec<i64>,
}

fn slice_base(amb: &Ambient, fi: usize, kind: AtomKind) -> Option<Vec<i64>> {
    let w = match kind {
        AtomKind::Line => return Some(vec![0; amb.factors()[fi].n()]),
        AtomKind::Quot => Atom::Quot(fi).weight(amb).ok()?,
        AtomKind::SubDual => IrreducibleBundle::new(amb, Atom::Sub(fi).weight(amb).ok()?).ok()?.dual(amb).weight().to_vec(),
        AtomKind::Other => return None,
    };
    Some(w[amb.factor_range(fi)].to_vec())
}

/// Classify the slice of `w` on factor `fi`.
pub fn recognize_slice(amb: &Ambient, fi: usize, w: &[i64]) -> Piece {
    let f = &amb.factors()[fi];
    let s = &w[amb.factor_range(fi)];
    for kind in [AtomKind::Line, AtomKind::Quot, AtomKind::SubDual] {
        // on projective spaces the dual of U is a line bundle
        if kind == AtomKind::SubDual && f.is_projective() {
            continue;
        }
        if let Some(b) = slice_base(amb, fi, kind) {
            let diff: Vec<i64> = s.iter().zip(&b).map(|(x, y)| x - y).collect();
            if let Some(t) = f.twist_of(&diff) {
                return Piece { kind, twist: t };
            }
        }
    }
    Piece { kind: AtomKind::Other, twist: vec![0; f.num_steps()] }
}

/// Readable DSL text for an irreducible summand of weight `w`.
pub fn summand_text(amb: &Ambient, w: &[i64]) -> String {
    let pieces: Vec<Piece> = (0..amb.factors().len()).map(|i| recognize_slice(amb, i, w)).collect();
    if pieces.iter().any(|p| p.kind == AtomKind::Other) {
        return format!("W({})", format_weight(amb, w));
    }
    let mut parts = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        match p.kind {
            AtomKind::Quot => parts.push(format!("Q[{}]", i + 1)),
            AtomKind::SubDual => parts.push(format!("dual(U[{}])", i + 1)),
            _ => {}
        }
    }
    let twists: Vec<Vec<i64>> = pieces.iter().map(|p| p.twist.clone()).collect();
    if twists.iter().flatten().any(|&t| t != 0) || parts.is_empty() {
        parts.push(format!("O({})", format_twists(amb, &twists)));
    }
    parts.join("*")
}

/// Globally generated irreducible summands allowed by `cfg`, by the
/// criterion that the weight is dominant on every factor.
pub fn candidate_summands(amb: &Ambient, cfg: &SearchConfig) -> Vec<IrreducibleBundle> {
    let per_factor: Vec<Vec<Vec<i64>>> = amb
        .factors()
        .iter()
        .enumerate()
        .map(|(fi, f)| {
            dominant_slices(f.n(), cfg.max_twist)
                .into_iter()
                .filter(|s| {
                    let mut w = vec![0; amb.nvars()];
                    w[amb.factor_range(fi)].copy_from_slice(s);
                    cfg.atoms.contains(&recognize_slice(amb, fi, &w).kind)
                })
                .collect()
        })
        .collect();
    let max_rank = (amb.dim() - cfg.target_dim) as u64;
    let mut out = Vec::new();
    let mut cur: Vec<i64> = Vec::with_capacity(amb.nvars());
    fn rec(amb: &Ambient, pf: &[Vec<Vec<i64>>], i: usize, cur: &mut Vec<i64>, max_rank: u64, out: &mut Vec<IrreducibleBundle>) {
        if i == pf.len() {
            if cur.iter().all(|&x| x == 0) {
                return;
            }
            if let Ok(b) = IrreducibleBundle::new(amb, cur.clone()) {
                if b.rank(amb) <= max_rank.into() {
                    out.push(b);
                }
            }
            return;
        }
        for s in &pf[i] {
            let len = cur.len();
            cur.extend_from_slice(s);
            rec(amb, pf, i + 1, cur, max_rank, out);
            cur.truncate(len);
        }
    }
    rec(amb, &per_factor, 0, &mut cur, max_rank, &mut out);
    out.sort();
    out
}

/// Whether every summand of the bundle has a weight dominant on each factor
/// (our sufficient criterion for global generation).
pub fn globally_generated(spec: &SpecAst) -> Result<bool> {
    let amb = &spec.ambient;
    let dec = spec.expr()?.normalize(amb)?;
    Ok(dec.keys().all(|b| {
        (0..amb.factors().len()).all(|fi| {
            let s = &b.weight()[amb.factor_range(fi)];
            s.windows(2).all(|p| p[0] >= p[1])
        })
    }))
}

fn minus_k_ample(amb: &Ambient, summands: &[&IrreducibleBundle]) -> bool {
    let nv = amb.nvars();
    let mut w: Weight = amb.canonical_weight().iter().map(|x| -x).collect();
    for b in summands {
        let d = b.character(amb).det_weight(nv);
        for (a, x) in w.iter_mut().zip(&d) {
            *a -= x;
        }
    }
    match amb.twists_of(&w) {
        Some(t) => anticanonical_is_ample(&t),
        None => false,
    }
}

/// Candidate pairs in a deterministic order: each summand globally
/// generated, rank F = dim Y − target_dim, and ω_Y ⊗ det F anti-ample.
pub fn enumerate(cfg: &SearchConfig) -> Vec<SpecAst> {
    let mut out = Vec::new();
    for amb in ambients(cfg) {
        let cands = candidate_summands(&amb, cfg);
        let ranks: Vec<u64> = cands.iter().map(|b| b.rank(&amb).try_into().unwrap_or(u64::MAX)).collect();
        let need = (amb.dim() - cfg.target_dim) as u64;
        let mut chosen: Vec<usize> = Vec::new();
        let mut found: Vec<Vec<usize>> = Vec::new();
        fn rec(ranks: &[u64], start: usize, left: u64, slots: usize, chosen: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) {
            if left == 0 {
                found.push(chosen.clone());
                return;
            }
            if slots == 0 {
                return;
            }
            for i in start..ranks.len() {
                if ranks[i] <= left {
                    chosen.push(i);
                    rec(ranks, i, left - ranks[i], slots - 1, chosen, found);
                    chosen.pop();
                }
            }
        }
        rec(&ranks, 0, need, cfg.max_summands, &mut chosen, &mut found);
        for pick in found {
            let bs: Vec<&IrreducibleBundle> = pick.iter().map(|&i| &cands[i]).collect();
            if !minus_k_ample(&amb, &bs) {
                continue;
            }
            let text = format!("{} ; {}", amb, bs.iter().map(|b| summand_text(&amb, b.weight())).collect::<Vec<_>>().join(" + "));
            if let Ok(spec) = parse_spec(&text) {
                out.push(spec);
            }
        }
    }
    out
}

/// Syntactic template matches on the summands, as annotations.
pub fn recognize_patterns(rec: &FanoRecord) -> Vec<String> {
    let Ok(spec) = parse_spec(&rec.spec()) else {
        return Vec::new();
    };
    let amb = &spec.ambient;
    let Ok(expr) = spec.expr() else {
        return Vec::new();
    };
    let Ok(dec) = expr.normalize(amb) else {
        return Vec::new();
    };
    let nf = amb.factors().len();
    let all: Vec<Vec<Piece>> = dec.keys().map(|b| (0..nf).map(|i| recognize_slice(amb, i, b.weight())).collect()).collect();
    // factor i enters summand s only
    let mult: Vec<u64> = dec.values().copied().collect();
    let isolated = |i: usize, s: usize| {
        mult[s] == 1 && all.iter().enumerate().all(|(t, ps)| t == s || (ps[i].kind == AtomKind::Line && ps[i].twist.iter().all(|&x| x == 0)))
    };
    let mut out = Vec::new();
    for (s, b) in dec.keys().enumerate() {
        let pieces: Vec<Piece> = (0..nf).map(|i| recognize_slice(amb, i, b.weight())).collect();
        let others = |i: usize| -> String {
            (0..nf).filter(|&j| j != i).map(|j| amb.factors()[j].to_string()).collect::<Vec<_>>().join(" x ")
        };
        let twist_text = |i: usize| -> String {
            let t: Vec<Vec<i64>> = pieces.iter().enumerate().map(|(j, p)| if j == i { vec![0; p.twist.len()] } else { p.twist.clone() }).collect();
            format!("O({})", format_twists(amb, &t))
        };
        for (i, p) in pieces.iter().enumerate() {
            let f = &amb.factors()[i];
            let rest_is_line = pieces.iter().enumerate().all(|(j, q)| j == i || q.kind == AtomKind::Line);
            let rest_positive = pieces.iter().enumerate().any(|(j, q)| j != i && q.twist.iter().any(|&t| t > 0));
            if nf < 2 || !rest_is_line || !rest_positive || !isolated(i, s) {
                continue;
            }
            let own_zero = p.twist.iter().all(|&t| t == 0);
            if f.is_projective() && p.kind == AtomKind::Quot && own_zero {
                let m = f.dim();
                out.push(format!(
                    "blow-up: Q[{}]*{} makes X the blow-up of W along W ∩ Z({}^{}), W the zero locus of the other summands on {}",
                    i + 1,
                    twist_text(i),
                    twist_text(i),
                    m + 1,
                    others(i)
                ));
            }
            if f.is_projective() && p.kind == AtomKind::Line && p.twist == [1] {
                out.push(format!(
                    "Cayley trick: O(1) on {} times {} makes X over W a P^{} bundle off W ∩ Z({}^{}) with P^{} fibres there, W the zero locus of the other summands on {}",
                    f,
                    twist_text(i),
                    f.dim() - 1,
                    twist_text(i),
                    f.dim() + 1,
                    f.dim(),
                    others(i)
                ));
            }
        }
        // Q ⊠ U^∨ on a product of Grassmannians
        let q: Vec<usize> = (0..nf).filter(|&i| pieces[i].kind == AtomKind::Quot).collect();
        let u: Vec<usize> = (0..nf).filter(|&i| pieces[i].kind == AtomKind::SubDual).collect();
        if q.len() == 1 && u.len() == 1 && pieces.iter().all(|p| p.twist.iter().all(|&t| t == 0)) {
            out.push(format!(
                "Grassmann bundle: Q[{}]*dual(U[{}]) on {} x {}",
                q[0] + 1,
                u[0] + 1,
                amb.factors()[q[0]],
                amb.factors()[u[0]]
            ));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Records with IDs, sorted canonically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasStore {
    pub records: Vec<FanoRecord>,
}

fn sort_key(r: &FanoRecord) -> (Option<i64>, i64, i64, Option<i64>, String, String) {
    (r.rho, r.h0_minus_k, r.k_pow, r.level, r.ambient.clone(), r.bundle.clone())
}

fn letter(i: usize) -> String {
    let mut s = String::new();
    let mut i = i;
    loop {
        s.insert(0, (b'A' + (i % 26) as u8) as char);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    s
}

impl AtlasStore {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records sharing (ρ, h⁰(−K), (−K)⁴, level).
    pub fn by_key(&self, rho: i64, s: i64, v: i64, level: i64) -> Vec<&FanoRecord> {
        self.records.iter().filter(|r| r.rho == Some(rho) && r.h0_minus_k == s && r.k_pow == v && r.level == Some(level)).collect()
    }

    pub fn get(&self, id: &str) -> Option<&FanoRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    /// FK3 records (exact h^{3,1} = 1) and the rest.
    pub fn split_fk3(&self) -> (Vec<&FanoRecord>, Vec<&FanoRecord>) {
        self.records.iter().partition(|r| r.is_fk3 == Some(true))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// CSV with columns id, rho, h22, h12, h0mK, K4, minus_chiT, ambient,
    /// bundle, annotations.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_csv_rows(self.records.iter(), out)
    }

    /// One JSON record per line.
    pub fn write_ndjson<W: Write>(&self, mut out: W) -> Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_ndjson<R: BufRead>(input: R) -> Result<Vec<FanoRecord>> {
        let mut out = Vec::new();
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            out.push(serde_json::from_str(&line)?);
        }
        Ok(out)
    }
}

pub fn write_csv_rows<'a, W: Write>(records: impl Iterator<Item = &'a FanoRecord>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "rho", "h22", "h12", "h0mK", "K4", "minus_chiT", "ambient", "bundle", "annotations"])?;
    for r in records {
        let opt = |v: Option<i64>| v.map_or("?".to_string(), |x| x.to_string());
        let h = |p: usize, q: usize| if r.dim_x >= p.max(q) { r.hodge.get(p, q).to_string() } else { String::new() };
        w.write_record([
            r.id.clone(),
            opt(r.rho),
            h(2, 2),
            h(1, 2),
            r.h0_minus_k.to_string(),
            r.k_pow.to_string(),
            (-r.chi_t).to_string(),
            r.ambient.clone(),
            r.bundle.clone(),
            r.annotations.join(" | "),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Merge identical presentations, sort, and assign IDs: records sharing
/// (ρ, h⁰(−K), (−K)⁴, level) get letters in canonical order; those whose
/// whole fingerprint coincides are flagged as possible duplicates.
pub fn dedup_and_id(records: Vec<FanoRecord>) -> AtlasStore {
    let mut seen: BTreeMap<(String, String), FanoRecord> = BTreeMap::new();
    for mut r in records {
        r.flags.retain(|f| f != DUPLICATE_FLAG);
        r.id = r.base_id();
        seen.entry((r.ambient.clone(), r.bundle.clone())).or_insert(r);
    }
    let mut recs: Vec<FanoRecord> = seen.into_values().collect();
    recs.sort_by_key(sort_key);
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, r) in recs.iter().enumerate() {
        groups.entry(r.base_id()).or_default().push(i);
    }
    for idx in groups.values() {
        if idx.len() < 2 {
            continue;
        }
        for (n, &i) in idx.iter().enumerate() {
            recs[i].id = format!("{}-{}", recs[i].base_id(), letter(n));
        }
        for &i in idx {
            let fp = recs[i].fingerprint();
            if idx.iter().any(|&j| j != i && recs[j].fingerprint() == fp) {
                recs[i].flags.push(DUPLICATE_FLAG.into());
            }
        }
    }
    AtlasStore { records: recs }
}

/// Evaluate in parallel and annotate; results come back in input order.
pub fn evaluate_all(specs: &[SpecAst]) -> Vec<Result<FanoRecord>> {
    specs
        .par_iter()
        .map(|s| {
            let mut r = evaluate(s)?;
            r.annotations = recognize_patterns(&r);
            if !globally_generated(s)? {
                r.flags.push(GG_INCONCLUSIVE_FLAG.into());
            }
            Ok(r)
        })
        .collect()
}

/// `2-23-80-2-A` -> `2-23-80-2`.
pub fn strip_letter(id: &str) -> &str {
    match id.rsplit_once('-') {
        Some((head, tail)) if !tail.is_empty() && tail.chars().all(|c| c.is_ascii_uppercase()) => head,
        _ => id,
    }
}

/// One row of a seed file: `<ambient> ; <bundle> ; <expected id?>`.
#[derive(Clone, Debug)]
pub struct SeedRow {
    pub line: usize,
    pub spec: SpecAst,
    pub expected_id: Option<String>,
}

pub fn parse_seed(text: &str) -> Result<Vec<SeedRow>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts = split_top_level(line);
        if parts.len() < 2 || parts.len() > 3 {
            return Err(FanoError::Config { line: i + 1, msg: "expected `<ambient> ; <bundle> ; <id?>`".into() });
        }
        let spec = parse_spec(&format!("{};{}", parts[0], parts[1])).map_err(|source| FanoError::Seed { line: i + 1, source })?;
        let expected_id = parts.get(2).map(|s| s.trim().to_string()).filter(|s| !s.is_empty());
        out.push(SeedRow { line: i + 1, spec, expected_id });
    }
    Ok(out)
}

/// Outcome of a batch: the store and the inputs that failed.
#[derive(Debug, Default)]
pub struct BatchResult {
    pub store: AtlasStore,
    pub failures: Vec<(String, FanoError)>,
}

pub fn run_batch(specs: &[SpecAst]) -> BatchResult {
    let mut ok = Vec::new();
    let mut failures = Vec::new();
    for (s, r) in specs.iter().zip(evaluate_all(specs)) {
        match r {
            Ok(rec) => ok.push(rec),
            Err(e) => failures.push((s.to_string(), e)),
        }
    }
    BatchResult { store: dedup_and_id(ok), failures }
}

pub fn search(cfg: &SearchConfig) -> BatchResult {
    run_batch(&enumerate(cfg))
}
