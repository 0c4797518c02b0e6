//! Terms over the J-algebra / relation algebra signature, the parenthetical
//! tree notation for generators, and series-parallel diagram output.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Zero,
    Top,
    Id,
    GenA,
    GenB,
    Var(String),
    Conv(Box<Term>),
    Comp(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    /// Relation algebras only.
    Join(Box<Term>, Box<Term>),
    /// Relation algebras only.
    Compl(Box<Term>),
}

/// Which operator set a term (or a model) supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Signature {
    J,
    Ra,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("operator `{op}` at offset {pos} needs the relation algebra signature")]
    RaOnlyOperator { pos: usize, op: char },
    #[error("leaf `{0}` occurs more than once")]
    DuplicateLeaf(char),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn conv(t: Term) -> Term {
        Term::Conv(Box::new(t))
    }

    pub fn comp(x: Term, y: Term) -> Term {
        Term::Comp(Box::new(x), Box::new(y))
    }

    pub fn meet(x: Term, y: Term) -> Term {
        Term::Meet(Box::new(x), Box::new(y))
    }

    pub fn join(x: Term, y: Term) -> Term {
        Term::Join(Box::new(x), Box::new(y))
    }

    pub fn compl(t: Term) -> Term {
        Term::Compl(Box::new(t))
    }

    /// Left-nested composition; the empty product is `Id`.
    pub fn comp_all<I: IntoIterator<Item = Term>>(items: I) -> Term {
        items.into_iter().reduce(Term::comp).unwrap_or(Term::Id)
    }

    /// Left-nested meet; the empty meet is `Top`.
    pub fn meet_all<I: IntoIterator<Item = Term>>(items: I) -> Term {
        items.into_iter().reduce(Term::meet).unwrap_or(Term::Top)
    }

    /// `self;self;...;self` (n factors); `Id` when n is 0.
    pub fn power(&self, n: usize) -> Term {
        Term::comp_all(std::iter::repeat_n(self.clone(), n))
    }

    pub fn signature(&self) -> Signature {
        if self.is_j_term() {
            Signature::J
        } else {
            Signature::Ra
        }
    }

    /// True when no `+` or `-` occurs.
    pub fn is_j_term(&self) -> bool {
        match self {
            Term::Join(..) | Term::Compl(_) => false,
            Term::Conv(x) => x.is_j_term(),
            Term::Comp(x, y) | Term::Meet(x, y) => x.is_j_term() && y.is_j_term(),
            _ => true,
        }
    }

    pub fn mentions_generators(&self) -> bool {
        match self {
            Term::GenA | Term::GenB => true,
            Term::Conv(x) | Term::Compl(x) => x.mentions_generators(),
            Term::Comp(x, y) | Term::Meet(x, y) | Term::Join(x, y) => {
                x.mentions_generators() || y.mentions_generators()
            }
            _ => false,
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Conv(x) | Term::Compl(x) => x.collect_vars(out),
            Term::Comp(x, y) | Term::Meet(x, y) | Term::Join(x, y) => {
                x.collect_vars(out);
                y.collect_vars(out);
            }
            _ => {}
        }
    }

    /// Replace variables by terms; unmapped variables are kept.
    pub fn subst(&self, map: &BTreeMap<String, Term>) -> Term {
        self.rewrite(&|t| match t {
            Term::Var(v) => map.get(v).cloned(),
            _ => None,
        })
    }

    /// Replace the fixed generators by the given terms.
    pub fn subst_generators(&self, a: &Term, b: &Term) -> Term {
        self.rewrite(&|t| match t {
            Term::GenA => Some(a.clone()),
            Term::GenB => Some(b.clone()),
            _ => None,
        })
    }

    fn rewrite(&self, f: &dyn Fn(&Term) -> Option<Term>) -> Term {
        if let Some(t) = f(self) {
            return t;
        }
        match self {
            Term::Conv(x) => Term::conv(x.rewrite(f)),
            Term::Compl(x) => Term::compl(x.rewrite(f)),
            Term::Comp(x, y) => Term::comp(x.rewrite(f), y.rewrite(f)),
            Term::Meet(x, y) => Term::meet(x.rewrite(f), y.rewrite(f)),
            Term::Join(x, y) => Term::join(x.rewrite(f), y.rewrite(f)),
            t => t.clone(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Conv(x) | Term::Compl(x) => 1 + x.size(),
            Term::Comp(x, y) | Term::Meet(x, y) | Term::Join(x, y) => 1 + x.size() + y.size(),
            _ => 1,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_term(self))
    }
}

impl std::str::FromStr for Term {
    type Err = TermError;
    fn from_str(s: &str) -> Result<Term, TermError> {
        parse_term(s)
    }
}

// ---------------------------------------------------------------- printing

const PREC_JOIN: u8 = 0;
const PREC_MEET: u8 = 1;
const PREC_COMP: u8 = 2;

pub fn format_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, PREC_JOIN, &mut out);
    out
}

fn write_term(t: &Term, prec: u8, out: &mut String) {
    let binary = |out: &mut String, own: u8, op: &str, x: &Term, y: &Term| {
        let paren = prec > own;
        if paren {
            out.push('(');
        }
        write_term(x, own, out);
        out.push_str(op);
        write_term(y, own + 1, out);
        if paren {
            out.push(')');
        }
    };
    match t {
        Term::Zero => out.push('0'),
        Term::Top => out.push('1'),
        Term::Id => out.push_str("id"),
        Term::GenA => out.push('a'),
        Term::GenB => out.push('b'),
        Term::Var(v) => out.push_str(v),
        Term::Conv(x) => {
            out.push_str("conv(");
            write_term(x, PREC_JOIN, out);
            out.push(')');
        }
        Term::Compl(x) => {
            out.push_str("-(");
            write_term(x, PREC_JOIN, out);
            out.push(')');
        }
        Term::Comp(x, y) => binary(out, PREC_COMP, ";", x, y),
        Term::Meet(x, y) => binary(out, PREC_MEET, " & ", x, y),
        Term::Join(x, y) => binary(out, PREC_JOIN, " + ", x, y),
    }
}

// ----------------------------------------------------------------- parsing

/// Parse a term, accepting the full relation algebra signature.
pub fn parse_term(text: &str) -> Result<Term, TermError> {
    parse_term_in(text, Signature::Ra)
}

/// Parse a term; with `Signature::J` any `+` or `-(..)` is rejected.
pub fn parse_term_in(text: &str, sig: Signature) -> Result<Term, TermError> {
    let mut p = TermParser { s: text.as_bytes(), pos: 0, sig };
    let t = p.sum()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(t)
}

struct TermParser<'a> {
    s: &'a [u8],
    pos: usize,
    sig: Signature,
}

impl<'a> TermParser<'a> {
    fn err(&self, msg: &str) -> TermError {
        TermError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), TermError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn ra_gate(&self, op: char) -> Result<(), TermError> {
        match self.sig {
            Signature::Ra => Ok(()),
            Signature::J => Err(TermError::RaOnlyOperator { pos: self.pos, op }),
        }
    }

    fn sum(&mut self) -> Result<Term, TermError> {
        let mut t = self.meet()?;
        while self.peek() == Some(b'+') {
            self.ra_gate('+')?;
            self.pos += 1;
            t = Term::join(t, self.meet()?);
        }
        Ok(t)
    }

    fn meet(&mut self) -> Result<Term, TermError> {
        let mut t = self.comp()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            t = Term::meet(t, self.comp()?);
        }
        Ok(t)
    }

    fn comp(&mut self) -> Result<Term, TermError> {
        let mut t = self.unary()?;
        while self.peek() == Some(b';') {
            self.pos += 1;
            t = Term::comp(t, self.unary()?);
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term, TermError> {
        match self.peek() {
            Some(b'-') => {
                self.ra_gate('-')?;
                self.pos += 1;
                self.expect(b'(')?;
                let t = self.sum()?;
                self.expect(b')')?;
                Ok(Term::compl(t))
            }
            Some(b'(') => {
                self.pos += 1;
                let t = self.sum()?;
                self.expect(b')')?;
                Ok(t)
            }
            Some(c) if c == b'0' || c == b'1' => {
                self.pos += 1;
                if self.s.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric()) {
                    return Err(self.err("constants are `0` and `1`"));
                }
                Ok(if c == b'0' { Term::Zero } else { Term::Top })
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                match ident {
                    "a" => Ok(Term::GenA),
                    "b" => Ok(Term::GenB),
                    "id" => Ok(Term::Id),
                    "conv" => {
                        self.expect(b'(')?;
                        let t = self.sum()?;
                        self.expect(b')')?;
                        Ok(Term::conv(t))
                    }
                    _ => Ok(Term::Var(ident.to_string())),
                }
            }
            Some(_) => Err(self.err("expected a term")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

// --------------------------------------------------------- tree notation

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TreeExpr {
    Leaf(char),
    Pair(Box<TreeExpr>, Box<TreeExpr>),
}

/// Leaf symbol to path term (`a` for a left step, `b` for a right step).
pub type LeafAssignment = BTreeMap<char, Term>;

impl TreeExpr {
    pub fn pair(l: TreeExpr, r: TreeExpr) -> TreeExpr {
        TreeExpr::Pair(Box::new(l), Box::new(r))
    }

    /// Leaf symbols, left to right, with repetitions.
    pub fn leaves(&self) -> Vec<char> {
        self.leaf_words().into_iter().map(|(c, _)| c).collect()
    }

    /// Each leaf with its root-to-leaf address (0 = left, 1 = right).
    pub fn leaf_words(&self) -> Vec<(char, Vec<u8>)> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.walk(&mut prefix, &mut out);
        out
    }

    fn walk(&self, prefix: &mut Vec<u8>, out: &mut Vec<(char, Vec<u8>)>) {
        match self {
            TreeExpr::Leaf(c) => out.push((*c, prefix.clone())),
            TreeExpr::Pair(l, r) => {
                prefix.push(0);
                l.walk(prefix, out);
                prefix.pop();
                prefix.push(1);
                r.walk(prefix, out);
                prefix.pop();
            }
        }
    }
}

impl fmt::Display for TreeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(e: &TreeExpr, top: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match e {
                TreeExpr::Leaf(c) => write!(f, "{c}"),
                TreeExpr::Pair(l, r) => {
                    if !top {
                        f.write_str("(")?;
                    }
                    go(l, false, f)?;
                    go(r, false, f)?;
                    if !top {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, true, f)
    }
}

/// Parse tree notation such as `0(12)`; every leaf must be distinct.
pub fn parse_tree_expr(text: &str) -> Result<TreeExpr, TermError> {
    let e = parse_tree_expr_shared(text)?;
    let mut seen = BTreeSet::new();
    for c in e.leaves() {
        if !seen.insert(c) {
            return Err(TermError::DuplicateLeaf(c));
        }
    }
    Ok(e)
}

/// Like [`parse_tree_expr`] but a leaf may occur several times, as in `00`
/// (the target of the diagonal map).
pub fn parse_tree_expr_shared(text: &str) -> Result<TreeExpr, TermError> {
    let s: Vec<(usize, u8)> =
        text.bytes().enumerate().filter(|(_, c)| !c.is_ascii_whitespace()).collect();
    let mut pos = 0;
    let e = tree_expr(&s, &mut pos)?;
    if pos != s.len() {
        let at = s.get(pos).map(|p| p.0).unwrap_or(text.len());
        return Err(TermError::Syntax { pos: at, msg: "unexpected `)`".into() });
    }
    Ok(e)
}

fn tree_expr(s: &[(usize, u8)], pos: &mut usize) -> Result<TreeExpr, TermError> {
    let mut items = Vec::new();
    while *pos < s.len() && s[*pos].1 != b')' {
        let (at, c) = s[*pos];
        if c == b'(' {
            *pos += 1;
            let inner = tree_expr(s, pos)?;
            if *pos >= s.len() {
                return Err(TermError::Syntax { pos: at, msg: "unbalanced `(`".into() });
            }
            *pos += 1;
            items.push(inner);
        } else if c.is_ascii_alphanumeric() {
            *pos += 1;
            items.push(TreeExpr::Leaf(c as char));
        } else {
            return Err(TermError::Syntax { pos: at, msg: format!("unexpected `{}`", c as char) });
        }
        if items.len() > 2 {
            return Err(TermError::Syntax {
                pos: at,
                msg: "three or more juxtaposed items must be grouped with parentheses".into(),
            });
        }
    }
    let at = s.get(*pos).map(|p| p.0).unwrap_or(usize::MAX);
    let mut it = items.into_iter();
    match (it.next(), it.next()) {
        (Some(x), None) => Ok(x),
        (Some(x), Some(y)) => Ok(TreeExpr::pair(x, y)),
        _ => Err(TermError::Syntax { pos: at, msg: "empty tree expression".into() }),
    }
}

fn step_term(bit: u8) -> Term {
    if bit == 0 {
        Term::GenA
    } else {
        Term::GenB
    }
}

/// The composition of generators along an address; `Id` for the root.
pub fn path_term(word: &[u8]) -> Term {
    Term::comp_all(word.iter().map(|&b| step_term(b)))
}

/// Each leaf's path; a leaf occurring several times gets the meet of its paths.
pub fn leaf_paths(e: &TreeExpr) -> LeafAssignment {
    let mut out: LeafAssignment = BTreeMap::new();
    for (c, w) in e.leaf_words() {
        let p = path_term(&w);
        let merged = match out.remove(&c) {
            Some(prev) => Term::meet(prev, p),
            None => p,
        };
        out.insert(c, merged);
    }
    out
}

/// The element sending each source leaf to the same leaf of the target:
/// the meet over shared leaves of `path_src ; conv(path_dst)`, with the
/// converse pushed onto single generators. `Top` if no leaf is shared.
pub fn mapsto(src: &TreeExpr, dst: &TreeExpr) -> Term {
    let s = src.leaf_words();
    let d = dst.leaf_words();
    let mut order: Vec<char> = Vec::new();
    for (c, _) in &s {
        if !order.contains(c) {
            order.push(*c);
        }
    }
    let mut shared = false;
    let mut factors = Vec::new();
    for leaf in order {
        let dst_words: Vec<&Vec<u8>> = d.iter().filter(|(c, _)| *c == leaf).map(|(_, w)| w).collect();
        if dst_words.is_empty() {
            continue;
        }
        shared = true;
        for (_, p) in s.iter().filter(|(c, _)| *c == leaf) {
            for q in &dst_words {
                let chain: Vec<Term> = p
                    .iter()
                    .map(|&b| step_term(b))
                    .chain(q.iter().rev().map(|&b| Term::conv(step_term(b))))
                    .collect();
                if !chain.is_empty() {
                    factors.push(Term::comp_all(chain));
                }
            }
        }
    }
    if !shared {
        Term::Top
    } else if factors.is_empty() {
        Term::Id
    } else {
        Term::meet_all(factors)
    }
}

/// Parse `src->dst` and build the corresponding element.
pub fn parse_mapsto(text: &str) -> Result<Term, TermError> {
    let (l, r) = text.split_once("->").ok_or(TermError::Syntax {
        pos: 0,
        msg: "expected `src->dst`".into(),
    })?;
    Ok(mapsto(&parse_tree_expr_shared(l)?, &parse_tree_expr_shared(r)?))
}

// ------------------------------------------------------------------- DOT

/// Series-parallel diagram: `;` is series, `&` is parallel, converse
/// reverses edges and identity merges its two endpoints.
pub fn emit_dot(t: &Term) -> Result<String, TermError> {
    struct G {
        parent: Vec<usize>,
        edges: Vec<(usize, usize, String)>,
    }
    impl G {
        fn node(&mut self) -> usize {
            self.parent.push(self.parent.len());
            self.parent.len() - 1
        }
        fn find(&mut self, x: usize) -> usize {
            let mut r = x;
            while self.parent[r] != r {
                r = self.parent[r];
            }
            self.parent[x] = r;
            r
        }
        fn build(&mut self, t: &Term, s: usize, d: usize) -> Result<(), TermError> {
            match t {
                Term::Id => {
                    let (x, y) = (self.find(s), self.find(d));
                    if x != y {
                        self.parent[x.max(y)] = x.min(y);
                    }
                }
                Term::Top => {}
                Term::Zero => self.edges.push((s, d, "0".into())),
                Term::GenA => self.edges.push((s, d, "a".into())),
                Term::GenB => self.edges.push((s, d, "b".into())),
                Term::Var(v) => self.edges.push((s, d, v.clone())),
                Term::Conv(x) => self.build(x, d, s)?,
                Term::Comp(x, y) => {
                    let m = self.node();
                    self.build(x, s, m)?;
                    self.build(y, m, d)?;
                }
                Term::Meet(x, y) => {
                    self.build(x, s, d)?;
                    self.build(y, s, d)?;
                }
                Term::Join(..) => return Err(TermError::RaOnlyOperator { pos: 0, op: '+' }),
                Term::Compl(_) => return Err(TermError::RaOnlyOperator { pos: 0, op: '-' }),
            }
            Ok(())
        }
    }
    let mut g = G { parent: Vec::new(), edges: Vec::new() };
    let (s, d) = (g.node(), g.node());
    g.build(t, s, d)?;
    // renumber surviving nodes densely
    let mut ids = BTreeMap::new();
    for v in 0..g.parent.len() {
        let r = g.find(v);
        let next = ids.len();
        ids.entry(r).or_insert(next);
    }
    let (src, dst) = (ids[&g.find(s)], ids[&g.find(d)]);
    let mut out = String::from("digraph term {\n  rankdir=LR;\n");
    for i in 0..ids.len() {
        let shape = if i == src || i == dst { "circle" } else { "point" };
        out.push_str(&format!("  n{i} [label=\"\", shape={shape}];\n"));
    }
    let edges: Vec<(usize, usize, String)> = g
        .edges
        .clone()
        .into_iter()
        .map(|(x, y, l)| (ids[&g.find(x)], ids[&g.find(y)], l))
        .collect();
    for (x, y, l) in edges {
        out.push_str(&format!("  n{x} -> n{y} [label=\"{l}\"];\n"));
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        assert_eq!(parse_term("conv(a);b").unwrap(), Term::comp(Term::conv(Term::GenA), Term::GenB));
        let u = parse_term("a;conv(a) & b;conv(b)").unwrap();
        assert_eq!(
            u,
            Term::meet(
                Term::comp(Term::GenA, Term::conv(Term::GenA)),
                Term::comp(Term::GenB, Term::conv(Term::GenB))
            )
        );
        assert!(matches!(
            parse_term_in("x + -(y)", Signature::J),
            Err(TermError::RaOnlyOperator { op: '+', .. })
        ));
        assert!(parse_term("x + -(y)").is_ok());
    }

    #[test]
    fn prints_examples() {
        assert_eq!(format_term(&Term::Id), "id");
        assert_eq!(format_term(&Term::Zero), "0");
        let a = mapsto(&parse_tree_expr("0(12)").unwrap(), &parse_tree_expr("(01)2").unwrap());
        assert_eq!(format_term(&a), "a;conv(a);conv(a) & b;a;conv(b);conv(a) & b;b;conv(b)");
    }

    #[test]
    fn right_nesting_is_parenthesized() {
        let t = Term::comp(Term::GenA, Term::comp(Term::GenB, Term::var("x")));
        assert_eq!(format_term(&t), "a;(b;x)");
        assert_eq!(parse_term("a;(b;x)").unwrap(), t);
        let t = Term::comp(Term::meet(Term::GenA, Term::GenB), Term::Top);
        assert_eq!(format_term(&t), "(a & b);1");
    }

    #[test]
    fn syntax_errors() {
        assert!(parse_term("a;").is_err());
        assert!(parse_term("conv a").is_err());
        assert!(parse_term("(a").is_err());
        assert!(parse_term("01").is_err());
    }

    #[test]
    fn tree_exprs() {
        let l = |c| TreeExpr::Leaf(c);
        assert_eq!(parse_tree_expr("0(12)").unwrap(), TreeExpr::pair(l('0'), TreeExpr::pair(l('1'), l('2'))));
        assert_eq!(parse_tree_expr("0").unwrap(), l('0'));
        assert_eq!(
            parse_tree_expr("(01)(23)").unwrap(),
            TreeExpr::pair(TreeExpr::pair(l('0'), l('1')), TreeExpr::pair(l('2'), l('3')))
        );
        assert!(matches!(parse_tree_expr("012"), Err(TermError::Syntax { .. })));
        assert_eq!(parse_tree_expr("00"), Err(TermError::DuplicateLeaf('0')));
        assert!(parse_tree_expr_shared("00").is_ok());
        assert!(parse_tree_expr("(01").is_err());
        assert!(parse_tree_expr("01)").is_err());
        assert_eq!(parse_tree_expr("3((01)2)").unwrap().to_string(), "3((01)2)");
    }

    #[test]
    fn leaf_path_examples() {
        let p = leaf_paths(&parse_tree_expr("0(12)").unwrap());
        assert_eq!(format_term(&p[&'0']), "a");
        assert_eq!(format_term(&p[&'1']), "b;a");
        assert_eq!(format_term(&p[&'2']), "b;b");
        let p = leaf_paths(&parse_tree_expr("0").unwrap());
        assert_eq!(p[&'0'], Term::Id);
        let p = leaf_paths(&parse_tree_expr("(01)2").unwrap());
        assert_eq!(format_term(&p[&'0']), "a;a");
        assert_eq!(format_term(&p[&'1']), "a;b");
        assert_eq!(format_term(&p[&'2']), "b");
    }

    #[test]
    fn mapsto_examples() {
        assert_eq!(parse_mapsto("01->0").unwrap(), Term::GenA);
        assert_eq!(format_term(&parse_mapsto("0->00").unwrap()), "conv(a) & conv(b)");
        assert_eq!(parse_mapsto("0->1").unwrap(), Term::Top);
        assert_eq!(parse_mapsto("0->0").unwrap(), Term::Id);
        assert_eq!(format_term(&parse_mapsto("01->10").unwrap()), "a;conv(b) & b;conv(a)");
    }

    #[test]
    fn dot_output() {
        let d = emit_dot(&Term::GenA).unwrap();
        assert_eq!(d.matches("->").count(), 1);
        assert!(d.contains("label=\"a\""));
        let d = emit_dot(&Term::meet(Term::Id, Term::Id)).unwrap();
        assert_eq!(d.matches("->").count(), 0);
        assert_eq!(d.matches("shape=").count(), 1);
        assert!(emit_dot(&parse_term("x + y").unwrap()).is_err());
    }
}
