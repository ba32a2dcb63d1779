//! Textual notation for ambients and bundles.
//!
//! Ambient: factors `P(n)`, `G(k,n)`, `F(k1,…,kr,n)` joined by `x`.
//! Bundle atoms: `O(…)`, `U[i]`, `Q[i]` (or `Q[i,j]` with j the last step),
//! `R[i,j]` (or `R[i][j]`), `W(…)` for a raw weight. Combinators: `+`, `*`,
//! `dual(…)`, `Sym^k(…)`, `Wedge^k(…)`, `Schur[λ](…)`, postfix `^m` for an
//! m-fold direct sum, and a postfix twist `E(a,b)` meaning `E*O(a,b)`.
//!
//! Inside `O(…)` twists of different factors may be separated by `;` and the
//! steps of one factor by `,`; a plain comma list is read step by step across
//! all factors.

use std::fmt;

use crate::bundlecalc::{BundleExpr, IrreducibleBundle};
use crate::chowring::{Ambient, FlagFactor};
use crate::error::{CoreError, Result};
use crate::repcore::{Partition, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// Per-factor twists.
    Line(Vec<Vec<i64>>),
    /// Tautological subbundle U₁ of a factor (0-based index).
    Sub(usize),
    /// Universal quotient of a factor.
    Quot(usize),
    /// Graded piece R_j = U_j/U_{j−1} of a factor, j ≥ 1.
    Graded(usize, usize),
    /// Irreducible bundle of the given full weight.
    Weight(Weight),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Atom(Atom),
    Sum(Vec<Node>),
    Tensor(Vec<Node>),
    Dual(Box<Node>),
    Sym(u32, Box<Node>),
    Wedge(u32, Box<Node>),
    Schur(Partition, Box<Node>),
    Multiple(u32, Box<Node>),
}

/// A parsed `ambient ; bundle` pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecAst {
    pub ambient: Ambient,
    pub bundle: Node,
}

impl SpecAst {
    pub fn expr(&self) -> Result<BundleExpr> {
        self.bundle.to_expr(&self.ambient)
    }
}

impl fmt::Display for SpecAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {}", self.ambient, NodeDisplay(&self.ambient, &self.bundle))
    }
}

/// Split at semicolons that are not nested in brackets.
pub fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ';' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

pub fn parse_spec(text: &str) -> Result<SpecAst> {
    let parts = split_top_level(text);
    if parts.len() != 2 {
        return Err(CoreError::Parse { pos: 0, msg: "expected `<ambient> ; <bundle>`".into() });
    }
    let ambient = parse_ambient(parts[0])?;
    let off = parts[0].len() + 1;
    let bundle = parse_bundle_at(&ambient, parts[1], off)?;
    Ok(SpecAst { ambient, bundle })
}

pub fn parse_ambient(text: &str) -> Result<Ambient> {
    let mut p = Parser::new(text, 0);
    let mut factors = Vec::new();
    loop {
        let pos = p.pos();
        let name = p.ident()?;
        p.expect('(')?;
        let nums = p.int_list(&[','])?;
        p.expect(')')?;
        let us = |v: i64| -> Result<usize> {
            usize::try_from(v).map_err(|_| CoreError::Parse { pos, msg: format!("negative size {v}") })
        };
        let f = match (name.as_str(), nums.len()) {
            ("P", 1) => FlagFactor::projective(us(nums[0])?),
            ("G", 2) => FlagFactor::grassmannian(us(nums[0])?, us(nums[1])?),
            ("F", k) if k >= 2 => {
                let v: Result<Vec<usize>> = nums.iter().map(|&x| us(x)).collect();
                let mut v = v?;
                let n = v.pop().unwrap();
                FlagFactor::new(n, v)
            }
            _ => return Err(CoreError::Parse { pos, msg: format!("unknown factor {name} with {} arguments", nums.len()) }),
        }
        .map_err(|e| CoreError::Parse { pos, msg: e.to_string() })?;
        factors.push(f);
        p.skip_ws();
        if p.at_end() {
            break;
        }
        let pos = p.pos();
        let sep = p.ident()?;
        if sep != "x" {
            return Err(CoreError::Parse { pos, msg: format!("expected `x`, found `{sep}`") });
        }
    }
    Ambient::new(factors)
}

pub fn parse_bundle(amb: &Ambient, text: &str) -> Result<Node> {
    parse_bundle_at(amb, text, 0)
}

fn parse_bundle_at(amb: &Ambient, text: &str, offset: usize) -> Result<Node> {
    let mut p = Parser::new(text, offset);
    let node = p.sum(amb)?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err("trailing input"));
    }
    node.to_expr(amb)?;
    Ok(node)
}

struct Parser<'a> {
    chars: Vec<char>,
    i: usize,
    offset: usize,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, offset: usize) -> Self {
        Parser { chars: src.chars().collect(), i: 0, offset, _src: src }
    }

    fn pos(&self) -> usize {
        self.offset + self.i
    }

    fn err(&self, msg: &str) -> CoreError {
        CoreError::Parse { pos: self.pos(), msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.i < self.chars.len() && self.chars[self.i].is_whitespace() {
            self.i += 1;
        }
    }

    fn at_end(&self) -> bool {
        self.i >= self.chars.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.i).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.chars.len() && self.chars[self.i].is_ascii_alphabetic() {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected a name"));
        }
        Ok(self.chars[start..self.i].iter().collect())
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.i;
        if self.i < self.chars.len() && (self.chars[self.i] == '-' || self.chars[self.i] == '+') {
            self.i += 1;
        }
        while self.i < self.chars.len() && self.chars[self.i].is_ascii_digit() {
            self.i += 1;
        }
        let s: String = self.chars[start..self.i].iter().collect();
        s.parse().map_err(|_| {
            self.i = start;
            self.err("expected an integer")
        })
    }

    fn uint(&mut self) -> Result<u32> {
        let pos = self.pos();
        let v = self.int()?;
        u32::try_from(v).map_err(|_| CoreError::Parse { pos, msg: format!("expected a nonnegative integer, found {v}") })
    }

    /// Comma separated integers; stops before any closing bracket.
    fn int_list(&mut self, seps: &[char]) -> Result<Vec<i64>> {
        let mut out = vec![self.int()?];
        while let Some(c) = self.peek() {
            if seps.contains(&c) {
                self.i += 1;
                out.push(self.int()?);
            } else {
                break;
            }
        }
        Ok(out)
    }

    fn index(&mut self, count: usize, what: &str) -> Result<usize> {
        let pos = self.pos();
        let v = self.int()?;
        if v < 1 || v as usize > count {
            return Err(CoreError::Parse { pos, msg: format!("{what} index {v} out of range 1..={count}") });
        }
        Ok(v as usize - 1)
    }

    fn sum(&mut self, amb: &Ambient) -> Result<Node> {
        let mut terms = vec![self.tensor(amb)?];
        while self.eat('+') {
            terms.push(self.tensor(amb)?);
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Node::Sum(terms) })
    }

    fn tensor(&mut self, amb: &Ambient) -> Result<Node> {
        let mut terms = vec![self.postfix(amb)?];
        while self.eat('*') {
            terms.push(self.postfix(amb)?);
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Node::Tensor(terms) })
    }

    fn postfix(&mut self, amb: &Ambient) -> Result<Node> {
        let mut node = self.primary(amb)?;
        loop {
            if self.peek() == Some('(') {
                let pos = self.pos();
                self.i += 1;
                let tw = self.twists(amb, pos)?;
                node = Node::Tensor(vec![node, Node::Atom(Atom::Line(tw))]);
            } else if self.eat('^') {
                let m = self.uint()?;
                node = Node::Multiple(m, Box::new(node));
            } else {
                return Ok(node);
            }
        }
    }

    /// Twist list after the opening parenthesis, through the closing one.
    fn twists(&mut self, amb: &Ambient, pos: usize) -> Result<Vec<Vec<i64>>> {
        let mut groups: Vec<Vec<i64>> = vec![Vec::new()];
        let mut any_semicolon = false;
        if self.eat(')') {
            return Ok(amb.factors().iter().map(|f| vec![0; f.num_steps()]).collect());
        }
        loop {
            groups.last_mut().unwrap().push(self.int()?);
            if self.eat(',') {
                continue;
            }
            if self.eat(';') {
                any_semicolon = true;
                groups.push(Vec::new());
                continue;
            }
            self.expect(')')?;
            break;
        }
        let bad = |msg: String| CoreError::Parse { pos, msg };
        if any_semicolon {
            if groups.len() != amb.factors().len() {
                return Err(bad(format!("{} twist groups for {} factors", groups.len(), amb.factors().len())));
            }
            for (g, f) in groups.iter().zip(amb.factors()) {
                if g.len() != f.num_steps() {
                    return Err(bad(format!("factor {f} needs {} twists, got {}", f.num_steps(), g.len())));
                }
            }
            Ok(groups)
        } else {
            amb.split_twists(&groups[0]).map_err(|e| bad(e.to_string()))
        }
    }

    fn factor_index(&mut self, amb: &Ambient, what: &str) -> Result<Vec<usize>> {
        if self.eat('[') {
            let first = self.index(amb.factors().len(), what)?;
            let mut v = vec![first];
            if self.eat(',') {
                v.push(self.int()? as usize);
            }
            self.expect(']')?;
            if self.eat('[') {
                v.push(self.int()? as usize);
                self.expect(']')?;
            }
            Ok(v)
        } else if amb.factors().len() == 1 {
            Ok(vec![0])
        } else {
            Err(self.err("factor index required on a product"))
        }
    }

    fn primary(&mut self, amb: &Ambient) -> Result<Node> {
        if self.eat('(') {
            let n = self.sum(amb)?;
            self.expect(')')?;
            return Ok(n);
        }
        let pos = self.pos();
        let name = self.ident()?;
        match name.as_str() {
            "O" => {
                if self.peek() == Some('(') {
                    let p = self.pos();
                    self.i += 1;
                    Ok(Node::Atom(Atom::Line(self.twists(amb, p)?)))
                } else {
                    Ok(Node::Atom(Atom::Line(amb.factors().iter().map(|f| vec![0; f.num_steps()]).collect())))
                }
            }
            "U" => {
                let idx = self.factor_index(amb, "factor")?;
                if idx.len() > 1 && idx[1] != 1 {
                    return Err(CoreError::Parse { pos, msg: "only U of the first step is irreducible; use R".into() });
                }
                Ok(Node::Atom(Atom::Sub(idx[0])))
            }
            "Q" => {
                let idx = self.factor_index(amb, "factor")?;
                let f = &amb.factors()[idx[0]];
                if idx.len() > 1 && idx[1] != f.num_steps() {
                    return Err(CoreError::Parse { pos, msg: format!("Q[{},{}] is not irreducible", idx[0] + 1, idx[1]) });
                }
                Ok(Node::Atom(Atom::Quot(idx[0])))
            }
            "R" => {
                let idx = self.factor_index(amb, "factor")?;
                let (fi, step) = match idx.len() {
                    2 => (idx[0], idx[1]),
                    1 if amb.factors().len() == 1 => (0, idx[0] + 1),
                    _ => return Err(CoreError::Parse { pos, msg: "R needs a factor and a step".into() }),
                };
                let f = &amb.factors()[fi];
                if step < 1 || step > f.num_steps() + 1 {
                    return Err(CoreError::Parse { pos, msg: format!("step {step} out of range for {f}") });
                }
                Ok(Node::Atom(Atom::Graded(fi, step)))
            }
            "W" => {
                self.expect('(')?;
                let mut w = Vec::new();
                loop {
                    w.push(self.int()?);
                    if self.eat(',') || self.eat('|') || self.eat(';') {
                        continue;
                    }
                    self.expect(')')?;
                    break;
                }
                if w.len() != amb.nvars() {
                    return Err(CoreError::Parse { pos, msg: format!("weight of length {} on {} coordinates", w.len(), amb.nvars()) });
                }
                Ok(Node::Atom(Atom::Weight(w)))
            }
            "dual" => {
                self.expect('(')?;
                let n = self.sum(amb)?;
                self.expect(')')?;
                Ok(Node::Dual(Box::new(n)))
            }
            "Sym" | "Wedge" => {
                self.expect('^')?;
                let k = self.uint()?;
                self.expect('(')?;
                let n = self.sum(amb)?;
                self.expect(')')?;
                Ok(if name == "Sym" { Node::Sym(k, Box::new(n)) } else { Node::Wedge(k, Box::new(n)) })
            }
            "S" | "L" => {
                // shorthand S2Q(-4), L3Q
                let k = self.uint()?;
                let n = self.primary(amb)?;
                Ok(if name == "S" { Node::Sym(k, Box::new(n)) } else { Node::Wedge(k, Box::new(n)) })
            }
            "Schur" => {
                self.expect('[')?;
                let parts = self.int_list(&[','])?;
                self.expect(']')?;
                let parts: Vec<u32> = parts.iter().map(|&x| x.max(0) as u32).collect();
                let lam = Partition::new(parts).map_err(|e| CoreError::Parse { pos, msg: e.to_string() })?;
                self.expect('(')?;
                let n = self.sum(amb)?;
                self.expect(')')?;
                Ok(Node::Schur(lam, Box::new(n)))
            }
            other => Err(CoreError::Parse { pos, msg: format!("unknown atom `{other}`") }),
        }
    }
}

impl Atom {
    pub fn weight(&self, amb: &Ambient) -> Result<Weight> {
        let block_bottom = |fi: usize, block: usize| -> Weight {
            let mut w = vec![0; amb.nvars()];
            let r = amb.factors()[fi].block_ranges()[block].clone();
            w[amb.offset(fi) + r.end - 1] = -1;
            w
        };
        match self {
            Atom::Line(t) => amb.line_weight(t),
            Atom::Sub(fi) => Ok(block_bottom(*fi, 0)),
            Atom::Quot(fi) => Ok(block_bottom(*fi, amb.factors()[*fi].num_steps())),
            Atom::Graded(fi, j) => Ok(block_bottom(*fi, j - 1)),
            Atom::Weight(w) => Ok(w.clone()),
        }
    }
}

impl Node {
    pub fn to_expr(&self, amb: &Ambient) -> Result<BundleExpr> {
        Ok(match self {
            Node::Atom(a) => BundleExpr::Irr(IrreducibleBundle::new(amb, a.weight(amb)?)?),
            Node::Sum(v) => BundleExpr::Sum(v.iter().map(|n| n.to_expr(amb)).collect::<Result<_>>()?),
            Node::Tensor(v) => BundleExpr::Tensor(v.iter().map(|n| n.to_expr(amb)).collect::<Result<_>>()?),
            Node::Dual(n) => BundleExpr::Dual(Box::new(n.to_expr(amb)?)),
            Node::Sym(k, n) => BundleExpr::Sym(*k, Box::new(n.to_expr(amb)?)),
            Node::Wedge(k, n) => BundleExpr::Wedge(*k, Box::new(n.to_expr(amb)?)),
            Node::Schur(l, n) => BundleExpr::Schur(l.clone(), Box::new(n.to_expr(amb)?)),
            Node::Multiple(m, n) => BundleExpr::Multiple(*m, Box::new(n.to_expr(amb)?)),
        })
    }

    /// Top-level summands, with multiples expanded.
    pub fn summands(&self) -> Vec<&Node> {
        match self {
            Node::Sum(v) => v.iter().flat_map(|n| n.summands()).collect(),
            Node::Multiple(m, n) => (0..*m).flat_map(|_| n.summands()).collect(),
            other => vec![other],
        }
    }
}

/// Canonical printing of a bundle node on an ambient.
pub struct NodeDisplay<'a>(pub &'a Ambient, pub &'a Node);

pub fn format_twists(amb: &Ambient, t: &[Vec<i64>]) -> String {
    let join = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    if amb.factors().iter().all(|f| f.num_steps() == 1) {
        join(&t.iter().flatten().copied().collect::<Vec<_>>())
    } else {
        t.iter().map(|g| join(g)).collect::<Vec<_>>().join(";")
    }
}

/// Weight with `|` between blocks and `;` between factors.
pub fn format_weight(amb: &Ambient, w: &[i64]) -> String {
    let mut s = String::new();
    for (fi, f) in amb.factors().iter().enumerate() {
        if fi > 0 {
            s.push(';');
        }
        let o = amb.offset(fi);
        let blocks: Vec<String> = f
            .block_ranges()
            .into_iter()
            .map(|r| w[r.start + o..r.end + o].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        s.push_str(&blocks.join("|"));
    }
    s
}

impl fmt::Display for NodeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let amb = self.0;
        fn sub<'b>(amb: &'b Ambient, n: &'b Node) -> NodeDisplay<'b> {
            NodeDisplay(amb, n)
        }
        match self.1 {
            Node::Atom(a) => match a {
                Atom::Line(t) => write!(f, "O({})", format_twists(amb, t)),
                Atom::Sub(i) => write!(f, "U[{}]", i + 1),
                Atom::Quot(i) => write!(f, "Q[{}]", i + 1),
                Atom::Graded(i, j) => write!(f, "R[{},{}]", i + 1, j),
                Atom::Weight(w) => write!(f, "W({})", format_weight(amb, w)),
            },
            Node::Sum(v) => {
                for (i, n) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{}", sub(amb, n))?;
                }
                Ok(())
            }
            Node::Tensor(v) => {
                for (i, n) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    if matches!(n, Node::Sum(_)) {
                        write!(f, "({})", sub(amb, n))?;
                    } else {
                        write!(f, "{}", sub(amb, n))?;
                    }
                }
                Ok(())
            }
            Node::Dual(n) => write!(f, "dual({})", sub(amb, n)),
            Node::Sym(k, n) => write!(f, "Sym^{k}({})", sub(amb, n)),
            Node::Wedge(k, n) => write!(f, "Wedge^{k}({})", sub(amb, n)),
            Node::Schur(l, n) => {
                let parts: Vec<String> = l.parts().iter().map(|p| p.to_string()).collect();
                write!(f, "Schur[{}]({})", parts.join(","), sub(amb, n))
            }
            Node::Multiple(m, n) => {
                if matches!(**n, Node::Sum(_) | Node::Tensor(_)) {
                    write!(f, "({})^{m}", sub(amb, n))
                } else {
                    write!(f, "{}^{m}", sub(amb, n))
                }
            }
        }
    }
}

/// Canonical form of an irreducible bundle.
pub fn format_irreducible(amb: &Ambient, b: &IrreducibleBundle) -> String {
    if b.is_line(amb) {
        let t = amb.twists_of(b.weight()).expect("line");
        return format!("O({})", format_twists(amb, &t));
    }
    format!("W({})", format_weight(amb, b.weight()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(s: &str) -> String {
        let a = parse_spec(s).unwrap();
        let printed = a.to_string();
        let b = parse_spec(&printed).unwrap();
        assert_eq!(a, b, "{s} -> {printed}");
        printed
    }

    #[test]
    fn examples_parse() {
        assert_eq!(roundtrip("P(1) x P(5) ; O(0,3) + O(1,1)"), "P(1) x P(5) ; O(0,3) + O(1,1)");
        roundtrip("P(2) x G(2,5) ; dual(U[2])*O(1,0) + O(0,1) + O(0,2)");
        let s = roundtrip("F(1,3,8) ; Q[1,2]^2 + O(1,1) + dual(R[1,2])*O(1,1)");
        assert_eq!(s, "F(1,3,8) ; Q[1]^2 + O(1,1) + dual(R[1,2])*O(1,1)");
        roundtrip("P(1) x F(1,2,6) ; Q[2] + O(0;1,2) + O(1;0,1)");
    }

    #[test]
    fn twist_groups() {
        let a = parse_spec("P(1) x F(1,2,6) ; O(1;0,1)").unwrap();
        let e = a.expr().unwrap();
        assert_eq!(e.rank(&a.ambient), 1);
        assert!(parse_spec("P(1) x F(1,2,6) ; O(1;0)").is_err());
        assert!(parse_spec("P(1) x P(5) ; O(1)").is_err());
    }

    #[test]
    fn errors_are_positioned() {
        match parse_spec("P(4) ; Foo(1)") {
            Err(CoreError::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
        assert!(parse_spec("P(4) ; Q[2]").is_err());
        assert!(parse_spec("G(3,3) ; O(1)").is_err());
    }

    #[test]
    fn shorthand() {
        let a = parse_spec("P(4) ; S2Q(-4)").unwrap();
        let e = a.expr().unwrap();
        assert_eq!(e.rank(&a.ambient), 10);
    }
}
