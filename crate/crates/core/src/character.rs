//! Torus characters of (virtual) homogeneous bundles on a product of flag
//! varieties. A weight is the concatenation of the factor weights; a
//! multiplicity may be negative for virtual bundles.

use std::collections::HashMap;

use crate::repcore::{Partition, Weight};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Character {
    terms: HashMap<Weight, i64>,
}

/// Generalized binomial coefficient C(m, i) for any integer m.
pub fn gbinom(m: i64, i: u32) -> i64 {
    let mut c: i128 = 1;
    for t in 0..i as i128 {
        c = c * (m as i128 - t) / (t + 1);
    }
    i64::try_from(c).expect("binomial overflow")
}

fn add_weights(a: &[i64], b: &[i64], k: i64) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

impl Character {
    pub fn new() -> Self {
        Self::default()
    }

    /// The trivial line bundle on an ambient with `nvars` coordinates.
    pub fn trivial(nvars: usize) -> Self {
        Self::single(vec![0; nvars], 1)
    }

    pub fn single(w: Weight, m: i64) -> Self {
        let mut c = Self::new();
        c.insert(w, m);
        c
    }

    pub fn insert(&mut self, w: Weight, m: i64) {
        if m == 0 {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(w) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += m;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(m);
            }
        }
    }

    pub fn terms(&self) -> &HashMap<Weight, i64> {
        &self.terms
    }

    /// Terms sorted by weight, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(Weight, i64)> {
        let mut v: Vec<(Weight, i64)> = self.terms.iter().map(|(w, m)| (w.clone(), *m)).collect();
        v.sort();
        v
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every multiplicity is positive (an honest bundle).
    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&m| m > 0)
    }

    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Weight of the determinant line bundle.
    pub fn det_weight(&self, nvars: usize) -> Weight {
        let mut out = vec![0; nvars];
        for (w, m) in &self.terms {
            for (o, x) in out.iter_mut().zip(w) {
                *o += m * x;
            }
        }
        out
    }

    pub fn add(&self, other: &Character) -> Character {
        let mut out = self.clone();
        for (w, m) in &other.terms {
            out.insert(w.clone(), *m);
        }
        out
    }

    pub fn sub(&self, other: &Character) -> Character {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Character {
        if k == 0 {
            return Character::new();
        }
        Character { terms: self.terms.iter().map(|(w, m)| (w.clone(), m * k)).collect() }
    }

    pub fn mul(&self, other: &Character) -> Character {
        let mut acc: HashMap<Weight, i64> = HashMap::with_capacity(self.len() * other.len());
        for (a, ma) in &self.terms {
            for (b, mb) in &other.terms {
                *acc.entry(add_weights(a, b, 1)).or_insert(0) += ma * mb;
            }
        }
        acc.retain(|_, m| *m != 0);
        Character { terms: acc }
    }

    pub fn dual(&self) -> Character {
        Character { terms: self.terms.iter().map(|(w, m)| (w.iter().map(|x| -x).collect(), *m)).collect() }
    }

    /// Tensor with the line bundle of weight `w`.
    pub fn shift(&self, w: &[i64]) -> Character {
        Character { terms: self.terms.iter().map(|(a, m)| (add_weights(a, w, 1), *m)).collect() }
    }

    fn power_levels(&self, max: u32, nvars: usize, coeff: impl Fn(i64, u32) -> i64) -> Vec<Character> {
        let mut levels: Vec<HashMap<Weight, i64>> = vec![HashMap::new(); max as usize + 1];
        levels[0].insert(vec![0; nvars], 1);
        for (w, m) in self.sorted_terms() {
            let mut next: Vec<HashMap<Weight, i64>> = vec![HashMap::new(); max as usize + 1];
            for (k, level) in levels.iter().enumerate() {
                for (base, mb) in level {
                    for i in 0..=(max - k as u32) {
                        let c = coeff(m, i);
                        if c == 0 {
                            if i > 0 {
                                break;
                            }
                            continue;
                        }
                        let e = next[k + i as usize].entry(add_weights(base, &w, i as i64)).or_insert(0);
                        *e += mb * c;
                    }
                }
            }
            for l in next.iter_mut() {
                l.retain(|_, m| *m != 0);
            }
            levels = next;
        }
        levels.into_iter().map(|terms| Character { terms }).collect()
    }

    /// Λ^0, …, Λ^max of this (possibly virtual) character.
    pub fn wedge_all(&self, max: u32, nvars: usize) -> Vec<Character> {
        self.power_levels(max, nvars, gbinom)
    }

    /// S^0, …, S^max of this (possibly virtual) character.
    pub fn sym_all(&self, max: u32, nvars: usize) -> Vec<Character> {
        self.power_levels(max, nvars, |m, i| gbinom(m + i as i64 - 1, i))
    }

    pub fn wedge(&self, k: u32, nvars: usize) -> Character {
        self.wedge_all(k, nvars).pop().unwrap()
    }

    pub fn sym(&self, k: u32, nvars: usize) -> Character {
        self.sym_all(k, nvars).pop().unwrap()
    }

    /// Schur functor by the Jacobi–Trudi determinant in complete symmetric powers.
    pub fn schur(&self, lambda: &Partition, nvars: usize) -> Character {
        let l = lambda.len();
        if l == 0 {
            return Character::trivial(nvars);
        }
        let max = (lambda.part(0) as usize + l) as u32;
        let h = self.sym_all(max, nvars);
        let entry = |i: usize, j: usize| -> Option<&Character> {
            let idx = lambda.part(i) as i64 - i as i64 + j as i64;
            if idx < 0 {
                None
            } else {
                Some(&h[idx as usize])
            }
        };
        let mut out = Character::new();
        let mut perm: Vec<usize> = (0..l).collect();
        loop {
            let sign = perm_sign(&perm);
            let mut term = Some(Character::trivial(nvars));
            for (i, &j) in perm.iter().enumerate() {
                match (term, entry(i, j)) {
                    (Some(t), Some(e)) => term = Some(t.mul(e)),
                    _ => {
                        term = None;
                        break;
                    }
                }
            }
            if let Some(t) = term {
                out = out.add(&t.scale(sign));
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        out
    }
}

pub(crate) fn perm_sign(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

impl FromIterator<(Weight, i64)> for Character {
    fn from_iter<T: IntoIterator<Item = (Weight, i64)>>(iter: T) -> Self {
        let mut c = Character::new();
        for (w, m) in iter {
            c.insert(w, m);
        }
        c
    }
}
