//! Degeneracy loci: Eagon–Northcott resolutions and their Hilbert
//! polynomials, Thom–Porteous classes, discriminants of conic bundles and the
//! canonical section of a dualized Eagon–Northcott complex.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use flagcalc::character::Character;
use flagcalc::chowring::{determinant, Ambient, ChowClass, TSeriesFactor};
use flagcalc::dsl::{parse_ambient, parse_bundle};
use flagcalc::repcore::Weight;

use crate::error::{FanoError, Result};
use crate::fanovariants::{chi_koszul, koszul_terms};

/// A morphism E → F of bundles on Y, or on the complete intersection
/// Z(Y, base) ⊂ Y, together with the polarization used for Hilbert
/// polynomials.
#[derive(Clone, Debug)]
pub struct MorphismData {
    pub ambient: Ambient,
    /// Bundle cutting out the base as a zero locus; empty for Y itself.
    pub base: Character,
    pub source: Character,
    pub target: Character,
    pub twist: Weight,
}

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_keyvals(text: &str) -> Result<BTreeMap<String, (usize, String)>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| FanoError::Config { line: i + 1, msg: "expected key = value".into() })?;
        out.insert(k.trim().to_string(), (i + 1, v.trim().to_string()));
    }
    Ok(out)
}

fn character_of(amb: &Ambient, text: &str, line: usize) -> Result<Character> {
    if text.is_empty() || text == "0" {
        return Ok(Character::new());
    }
    let node = parse_bundle(amb, text).map_err(|source| FanoError::Seed { line, source })?;
    Ok(node.to_expr(amb)?.character(amb))
}

fn line_weight_of(amb: &Ambient, text: &str, line: usize) -> Result<Weight> {
    let ch = character_of(amb, text, line)?;
    let terms = ch.sorted_terms();
    match terms.as_slice() {
        [(w, 1)] => Ok(w.clone()),
        _ => Err(FanoError::Config { line, msg: format!("`{text}` is not a line bundle") }),
    }
}

impl MorphismData {
    pub fn new(ambient: Ambient, base: Character, source: Character, target: Character, twist: Weight) -> Self {
        MorphismData { ambient, base, source, target, twist }
    }

    /// Keys: `ambient`, `base` (optional), `source`, `target`, `twist`
    /// (a line bundle, default the sum of the hyperplane classes).
    pub fn parse(text: &str) -> Result<Self> {
        let kv = parse_keyvals(text)?;
        let get = |k: &str| kv.get(k).cloned();
        let (l, a) = get("ambient").ok_or_else(|| FanoError::Config { line: 0, msg: "missing `ambient`".into() })?;
        let ambient = parse_ambient(&a).map_err(|source| FanoError::Seed { line: l, source })?;
        let field = |k: &str, required: bool| -> Result<Character> {
            match get(k) {
                Some((l, v)) => character_of(&ambient, &v, l),
                None if required => Err(FanoError::Config { line: 0, msg: format!("missing `{k}`") }),
                None => Ok(Character::new()),
            }
        };
        let base = field("base", false)?;
        let source = field("source", true)?;
        let target = field("target", true)?;
        let twist = match get("twist") {
            Some((l, v)) => line_weight_of(&ambient, &v, l)?,
            None => (0..ambient.factors().len()).fold(vec![0; ambient.nvars()], |acc, i| {
                let h = hyperplane_weight(&ambient, i);
                acc.iter().zip(&h).map(|(a, b)| a + b).collect()
            }),
        };
        Ok(MorphismData { ambient, base, source, target, twist })
    }

    pub fn rank_source(&self) -> i64 {
        self.source.rank()
    }

    pub fn rank_target(&self) -> i64 {
        self.target.rank()
    }

    pub fn base_dim(&self) -> i64 {
        self.ambient.dim() as i64 - self.base.rank()
    }

    /// Codimension e − f + 1 of the locus where E → F is not surjective.
    pub fn expected_codim(&self) -> i64 {
        self.rank_source() - self.rank_target() + 1
    }
}

fn hyperplane_weight(amb: &Ambient, i: usize) -> Weight {
    let twists: Vec<Vec<i64>> =
        amb.factors().iter().enumerate().map(|(j, f)| vec![if i == j { 1 } else { 0 }; f.num_steps()]).collect();
    amb.line_weight(&twists).expect("shape matches")
}

/// Terms EN_0 = O, EN_i = Λ^{f+i−1}E ⊗ S^{i−1}F^∨ ⊗ det F^∨ of the
/// Eagon–Northcott resolution of O_Z, Z the degeneracy locus of E → F.
pub fn en_terms(m: &MorphismData) -> Result<Vec<Character>> {
    let (e, f) = (m.rank_source(), m.rank_target());
    if e <= f || f < 0 {
        return Err(FanoError::Invalid(format!("Eagon–Northcott needs rank E > rank F, got {e} and {f}")));
    }
    let nv = m.ambient.nvars();
    let det_dual = Character::single(m.target.det_weight(nv), 1).dual();
    let wedges = m.source.wedge_all(e as u32, nv);
    let syms = m.target.dual().sym_all((e - f) as u32, nv);
    let mut out = vec![Character::trivial(nv)];
    for i in 1..=(e - f + 1) as usize {
        out.push(wedges[f as usize + i - 1].mul(&syms[i - 1]).mul(&det_dual));
    }
    Ok(out)
}

/// Dual complex Hom(EN_•, ω): term i is EN_i^∨ ⊗ ω. Applying it twice
/// returns the original list.
pub fn dualize(terms: &[Character], omega: &[i64]) -> Vec<Character> {
    terms.iter().map(|t| t.dual().shift(omega)).collect()
}

/// Canonical weight of the base Z(Y, G): ω_Y ⊗ det G.
pub fn base_canonical_weight(m: &MorphismData) -> Weight {
    let nv = m.ambient.nvars();
    let g = m.base.det_weight(nv);
    m.ambient.canonical_weight().iter().zip(&g).map(|(a, b)| a + b).collect()
}

/// A polynomial with rational coefficients in one variable k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPolynomial {
    /// Coefficients, constant term first, without trailing zeros.
    pub coeffs: Vec<BigRational>,
}

impl HilbertPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        HilbertPolynomial { coeffs }
    }

    /// From integer numerators over a common denominator.
    pub fn from_ints(num: &[i64], den: i64) -> Self {
        Self::new(num.iter().map(|&a| BigRational::new(a.into(), den.into())).collect())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, k: i64) -> BigRational {
        let x = BigRational::from_integer(k.into());
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    /// Newton interpolation through the given points.
    pub fn interpolate(points: &[(i64, BigRational)]) -> Self {
        let n = points.len();
        let mut dd: Vec<BigRational> = points.iter().map(|p| p.1.clone()).collect();
        for level in 1..n {
            for i in (level..n).rev() {
                let den = BigRational::from_integer((points[i].0 - points[i - level].0).into());
                dd[i] = (&dd[i] - &dd[i - 1]) / den;
            }
        }
        let mut coeffs = vec![BigRational::zero(); n.max(1)];
        for i in (0..n).rev() {
            // coeffs ← coeffs·(k − x_i) + dd[i]
            let xi = BigRational::from_integer(points[i].0.into());
            let mut next = vec![BigRational::zero(); n.max(1)];
            for (d, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if d + 1 < next.len() {
                    next[d + 1] += c;
                }
                next[d] -= c * &xi;
            }
            next[0] += &dd[i];
            coeffs = next;
        }
        Self::new(coeffs)
    }
}

impl fmt::Display for HilbertPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let a = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let coef = if a.is_one() && d > 0 { String::new() } else if a.is_integer() { a.to_string() } else { format!("({a})") };
            match d {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{coef}k")?,
                _ => write!(f, "{coef}k^{d}")?,
            }
        }
        Ok(())
    }
}

fn rational_to_integer(what: &str, q: &BigRational) -> Result<BigInt> {
    if !q.is_integer() {
        return Err(FanoError::Inconsistent { what: what.into(), left: q.to_string(), right: "an integer".into() });
    }
    Ok(q.to_integer())
}

/// χ(O_Z ⊗ L^k) by Borel–Weil–Bott on the terms of the resolution, checked
/// against Riemann–Roch on Y.
pub fn en_chi(m: &MorphismData, terms: &[Character], k: i64) -> Result<BigInt> {
    let lk: Vec<i64> = m.twist.iter().map(|a| a * k).collect();
    let total = terms.iter().enumerate().fold(Character::new(), |acc, (i, t)| {
        let s = t.shift(&lk);
        if i % 2 == 0 {
            acc.add(&s)
        } else {
            acc.sub(&s)
        }
    });
    let bwb = chi_koszul(&m.ambient, &total, &koszul_terms(&m.ambient, &m.base));
    let hrr = m.ambient.chi_hrr_twisted(&total, &TSeriesFactor::KoszulOf(m.base.clone()));
    let hrr = rational_to_integer("Riemann–Roch on a degeneracy locus", &hrr)?;
    if bwb != hrr {
        return Err(FanoError::Inconsistent { what: format!("chi(O_Z({k}))"), left: bwb.to_string(), right: hrr.to_string() });
    }
    Ok(bwb)
}

/// Hilbert polynomial χ(O_Z(k)) of the degeneracy locus, interpolated from
/// the sample points `ks` (at least dim Z + 2 of them).
pub fn en_hilbert(m: &MorphismData, ks: &[i64]) -> Result<HilbertPolynomial> {
    let dim_z = m.base_dim() - m.expected_codim();
    if dim_z < 0 {
        return Err(FanoError::Invalid(format!("degeneracy locus of negative dimension {dim_z}")));
    }
    let mut ks: Vec<i64> = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if (ks.len() as i64) < dim_z + 2 {
        return Err(FanoError::Invalid(format!("{} sample points for a polynomial of degree {dim_z}; need {}", ks.len(), dim_z + 2)));
    }
    let terms = en_terms(m)?;
    let mut points = Vec::with_capacity(ks.len());
    for &k in &ks {
        points.push((k, BigRational::from_integer(en_chi(m, &terms, k)?)));
    }
    let p = HilbertPolynomial::interpolate(&points);
    if p.degree().is_some_and(|d| d as i64 > dim_z) {
        return Err(FanoError::Inconsistent {
            what: "degree of the Hilbert polynomial".into(),
            left: p.degree().unwrap_or(0).to_string(),
            right: format!("dim Z = {dim_z}"),
        });
    }
    for k in -3..=3 {
        let v = p.eval(k);
        if !v.is_integer() {
            return Err(FanoError::Inconsistent { what: format!("Hilbert polynomial at {k}"), left: v.to_string(), right: "an integer".into() });
        }
    }
    Ok(p)
}

/// Thom–Porteous class of {rank(E → F) ≤ r}: det[c_{f−r+j−i}(F − E)] of size
/// e − r, in codimension (e − r)(f − r). The whole space when r ≥ min(e, f).
pub fn porteous(amb: &Ambient, source: &Character, target: &Character, r: i64) -> ChowClass {
    let (e, f) = (source.rank(), target.rank());
    if r >= e.min(f) {
        return amb.one_class();
    }
    let codim = (e - r) * (f - r);
    if codim > amb.dim() as i64 {
        return amb.zero_class();
    }
    let c = amb.chern_class(&target.sub(source));
    let size = (e - r) as usize;
    let entry = |i: usize, j: usize| -> ChowClass {
        let d = f - r + j as i64 - i as i64;
        if d < 0 || d > amb.dim() as i64 {
            amb.zero_class()
        } else {
            c.homogeneous(d as usize)
        }
    };
    let mat: Vec<Vec<ChowClass>> = (0..size).map(|i| (0..size).map(|j| entry(i, j)).collect()).collect();
    determinant(&mat, amb.nvars(), amb.dim()).homogeneous(codim as usize)
}

/// Class of Z in the Chow ring of Y from the leading term of ch(O_Z), read
/// off the resolution: ch(O_Z) = [Z] + higher terms. Used as a second
/// route to Porteous classes.
pub fn class_from_resolution(m: &MorphismData, terms: &[Character]) -> ChowClass {
    let amb = &m.ambient;
    let mut ch = amb.zero_class();
    for (i, t) in terms.iter().enumerate() {
        let c = amb.chern_character(t);
        ch = if i % 2 == 0 { ch.add(&c) } else { ch.sub(&c) };
    }
    ch.homogeneous(m.expected_codim() as usize)
}

/// Input of a conic-bundle discriminant computation: a rank 3 bundle E (or
/// just its Chern classes) and the class k of the line bundle in the quadratic
/// form, on the base Z(Y, base).
#[derive(Clone, Debug)]
pub struct ConicData {
    pub ambient: Ambient,
    pub base: Character,
    /// c₁, c₂, c₃ of E.
    pub chern: [ChowClass; 3],
    pub k: ChowClass,
}

#[derive(Clone, Debug)]
pub struct Discriminant {
    pub delta: ChowClass,
    pub delta_sing: ChowClass,
    /// [Δ] as a multiple of the sum of the hyperplane classes, when it is one.
    pub delta_degree: Option<BigRational>,
    /// ∫ [Δ_sing] over a threefold base.
    pub sing_count: Option<BigInt>,
}

impl ConicData {
    pub fn from_bundle(ambient: Ambient, base: Character, e: &Character, k: ChowClass) -> Result<Self> {
        if e.rank() != 3 {
            return Err(FanoError::Invalid(format!("a conic bundle needs rank 3, got {}", e.rank())));
        }
        let c = ambient.chern_class(e);
        let chern = [c.homogeneous(1), c.homogeneous(2), c.homogeneous(3)];
        Ok(ConicData { ambient, base, chern, k })
    }

    /// Keys: `ambient`, `base`, `k` (a line bundle), and either `bundle`
    /// (with an optional virtual part `minus`) or `chern`, a polynomial in the
    /// hyperplane classes `h` / `h1`, `h2`, … giving the total Chern class.
    pub fn parse(text: &str) -> Result<Self> {
        let kv = parse_keyvals(text)?;
        let (l, a) = kv.get("ambient").cloned().ok_or_else(|| FanoError::Config { line: 0, msg: "missing `ambient`".into() })?;
        let ambient = parse_ambient(&a).map_err(|source| FanoError::Seed { line: l, source })?;
        let base = match kv.get("base") {
            Some((l, v)) => character_of(&ambient, v, *l)?,
            None => Character::new(),
        };
        let k = match kv.get("k") {
            Some((l, v)) => ambient.linear_class(&line_weight_of(&ambient, v, *l)?),
            None => ambient.zero_class(),
        };
        if let Some((l, v)) = kv.get("chern") {
            let c = parse_class(&ambient, v, *l)?;
            let chern = [c.homogeneous(1), c.homogeneous(2), c.homogeneous(3)];
            return Ok(ConicData { ambient, base, chern, k });
        }
        let (l, v) = kv.get("bundle").cloned().ok_or_else(|| FanoError::Config { line: 0, msg: "missing `bundle` or `chern`".into() })?;
        let mut e = character_of(&ambient, &v, l)?;
        if let Some((l, v)) = kv.get("minus") {
            e = e.sub(&character_of(&ambient, v, *l)?);
        }
        Self::from_bundle(ambient, base, &e, k)
    }
}

/// Polynomial in `h` (single factor) or `h1`, `h2`, … with integer
/// coefficients, e.g. `1 + 4h + 7h^2 + 8h^3`.
pub fn parse_class(amb: &Ambient, text: &str, line: usize) -> Result<ChowClass> {
    let bad = |msg: String| FanoError::Config { line, msg };
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = amb.zero_class();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let neg = rest.starts_with('-');
        if rest.starts_with('+') || neg {
            rest = &rest[1..];
        }
        let end = rest[1.min(rest.len())..].find(['+', '-']).map(|i| i + 1).unwrap_or(rest.len());
        let (term, tail) = rest.split_at(end);
        rest = tail;
        let digits: String = term.chars().take_while(|c| c.is_ascii_digit()).collect();
        let coef: i64 = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| bad(format!("bad coefficient in `{term}`")))? };
        let mut cls = amb.constant_class(BigRational::from_integer(if neg { -coef } else { coef }.into()));
        for factor in term[digits.len()..].split(['*', '·']).filter(|x| !x.is_empty()) {
            let (var, exp) = match factor.split_once('^') {
                Some((v, e)) => (v, e.parse::<u32>().map_err(|_| bad(format!("bad exponent in `{factor}`")))?),
                None => (factor, 1),
            };
            let idx = match var.strip_prefix('h') {
                Some("") if amb.factors().len() == 1 => 0,
                Some(n) => n.parse::<usize>().ok().filter(|&i| i >= 1 && i <= amb.factors().len()).map(|i| i - 1).ok_or_else(|| bad(format!("unknown variable `{var}`")))?,
                None => return Err(bad(format!("unknown variable `{var}`"))),
            };
            cls = cls.mul(&amb.hyperplane(idx).pow(exp));
        }
        out = out.add(&cls);
    }
    Ok(out)
}

fn base_integral(amb: &Ambient, base: &Character, c: &ChowClass) -> BigRational {
    amb.integrate(&c.mul(&amb.top_chern(base)))
}

/// [Δ] = 2c₁ + 3k and [Δ_sing] = 4(k³ + 2k²c₁ + kc₁² + kc₂ + c₁c₂ − c₃).
pub fn conic_discriminant(d: &ConicData) -> Discriminant {
    let amb = &d.ambient;
    let [c1, c2, c3] = &d.chern;
    let k = &d.k;
    let delta = c1.scale_int(2).add(&k.scale_int(3));
    let sing = k
        .pow(3)
        .add(&k.pow(2).mul(c1).scale_int(2))
        .add(&k.mul(&c1.pow(2)))
        .add(&k.mul(c2))
        .add(&c1.mul(c2))
        .sub(c3)
        .scale_int(4)
        .homogeneous(3);
    let base_dim = amb.dim() as i64 - d.base.rank();
    let h = (0..amb.factors().len()).fold(amb.zero_class(), |acc, i| acc.add(&amb.hyperplane(i)));
    let delta_degree = if base_dim >= 1 {
        let num = base_integral(amb, &d.base, &delta.mul(&h.pow(base_dim as u32 - 1)));
        let den = base_integral(amb, &d.base, &h.pow(base_dim as u32));
        let q = if den.is_zero() { None } else { Some(num / den) };
        // accept only when [Δ] really is that multiple of H on the base
        let top = amb.top_chern(&d.base);
        q.filter(|q| amb.coordinates(&delta.sub(&h.scale(q)).mul(&top)).map(|c| c.is_empty()).unwrap_or(false))
    } else {
        None
    };
    let sing_count = (base_dim == 3).then(|| base_integral(amb, &d.base, &sing).to_integer());
    Discriminant { delta: delta.homogeneous(1), delta_sing: sing, delta_degree, sing_count }
}

/// Zero locus of the canonical section of ω_Z read off the dualized
/// Eagon–Northcott complex A → B ⊕ O → ω_Z → 0.
#[derive(Clone, Debug)]
pub struct SectionLocus {
    /// Class in the Chow ring of Y (pushed forward from the base).
    pub class: ChowClass,
    pub formatted: String,
    pub description: String,
}

pub fn canonical_section_locus(m: &MorphismData) -> Result<SectionLocus> {
    let amb = &m.ambient;
    let terms = en_terms(m)?;
    let dual = dualize(&terms, &base_canonical_weight(m));
    let c = dual.len() - 1;
    let last = &dual[c];
    // weights are taken up to the determinant of each factor's vector space
    let trivial = last.sorted_terms().into_iter().find(|(w, m)| {
        *m >= 1 && (0..amb.factors().len()).all(|i| w[amb.factor_range(i)].windows(2).all(|p| p[0] == p[1]))
    });
    let Some((tw, _)) = trivial else {
        return Ok(SectionLocus {
            class: amb.zero_class(),
            formatted: "0".into(),
            description: "no trivial summand in the last term: no canonical section".into(),
        });
    };
    let b = last.sub(&Character::single(tw, 1));
    let a = &dual[c - 1];
    let locus = porteous(amb, a, &b, b.rank() - 1);
    let class = locus.mul(&amb.top_chern(&m.base));
    let formatted = amb.format_class(&class)?;
    let coords = amb.coordinates(&class)?;
    let description = if coords.is_empty() {
        "empty: the canonical section vanishes nowhere and ω_Z is trivial".to_string()
    } else {
        let h = (0..amb.factors().len()).fold(amb.zero_class(), |acc, i| acc.add(&amb.hyperplane(i)));
        let codim = coords[0].0.degree();
        let dim = amb.dim() - codim;
        let degree = amb.integrate(&class.mul(&h.pow(dim as u32)));
        if dim == 1 && coords.len() == 1 {
            let (label, mult) = &coords[0];
            let line_deg = amb.integrate(&amb.basis_class(label).mul(&h));
            if line_deg.is_one() && mult.is_integer() && mult.to_integer() > BigInt::one() {
                format!("{mult} times the class of a line: candidate union of {mult} disjoint lines")
            } else if line_deg.is_one() && mult.is_one() {
                "the class of a line".to_string()
            } else {
                format!("curve of degree {degree}")
            }
        } else {
            format!("locus of dimension {dim} and degree {degree}")
        }
    };
    Ok(SectionLocus { class, formatted, description })
}
