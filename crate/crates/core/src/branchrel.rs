//! Binary relations on infinite binary trees, described by finite sets of
//! subtree-equality constraints and decided exactly.
//!
//! A pair of trees `(s, t)` belongs to a relation when every constraint
//! `X.u = Y.v` holds, where `L.u` is the subtree of `s` at address `u` and
//! `R.v` the subtree of `t` at `v`. The carrier is a set with a bijection
//! onto its square (tree = pair of subtrees), so entailment is closed under
//! symmetry, transitivity, right-append (`x.u = y.v` gives `x.uw = y.vw`)
//! and reassembly (`x.u0 = y.v0` and `x.u1 = y.v1` give `x.u = y.v`).

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use thiserror::Error;

use crate::model::{check_law, eval, Env, Law, LawKind, LawReport, Model, ModelError, Strategy};
use crate::term::{parse_term, Signature, Term};

pub type Address = Vec<u8>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

/// Subtree of the input (`L`) or output (`R`) tree at an address.
/// Ordered by address first, then side.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub addr: Address,
    pub side: Side,
}

impl Point {
    pub fn new(side: Side, addr: &[u8]) -> Point {
        Point { addr: addr.to_vec(), side }
    }
}

/// An equation between two points, stored with `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub lhs: Point,
    pub rhs: Point,
}

impl Constraint {
    pub fn new(p: Point, q: Point) -> Constraint {
        if p <= q {
            Constraint { lhs: p, rhs: q }
        } else {
            Constraint { lhs: q, rhs: p }
        }
    }

    pub fn eq(s1: Side, a1: &[u8], s2: Side, a2: &[u8]) -> Constraint {
        Constraint::new(Point::new(s1, a1), Point::new(s2, a2))
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    fn flipped(&self) -> Constraint {
        Constraint::new(
            Point { addr: self.lhs.addr.clone(), side: self.lhs.side.flip() },
            Point { addr: self.rhs.addr.clone(), side: self.rhs.side.flip() },
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchRelation {
    /// The empty relation.
    Zero,
    /// All pairs satisfying every constraint; the empty set is the full relation.
    Cons(BTreeSet<Constraint>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BranchError {
    #[error("composition could not be closed finitely; partial result {partial}")]
    ProjectionIncomplete { partial: BranchRelation },
    #[error("cannot parse relation: {0}")]
    Parse(String),
}

impl BranchRelation {
    pub fn zero() -> BranchRelation {
        BranchRelation::Zero
    }

    pub fn top() -> BranchRelation {
        BranchRelation::Cons(BTreeSet::new())
    }

    pub fn id() -> BranchRelation {
        BranchRelation::from_constraints([Constraint::eq(Side::L, &[], Side::R, &[])])
    }

    /// Maps a tree to its left subtree.
    pub fn gen_a() -> BranchRelation {
        BranchRelation::from_constraints([Constraint::eq(Side::R, &[], Side::L, &[0])])
    }

    /// Maps a tree to its right subtree.
    pub fn gen_b() -> BranchRelation {
        BranchRelation::from_constraints([Constraint::eq(Side::R, &[], Side::L, &[1])])
    }

    pub fn from_constraints<I: IntoIterator<Item = Constraint>>(cs: I) -> BranchRelation {
        BranchRelation::Cons(cs.into_iter().filter(|c| !c.is_trivial()).collect())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, BranchRelation::Zero)
    }

    pub fn constraints(&self) -> impl Iterator<Item = &Constraint> {
        match self {
            BranchRelation::Zero => None,
            BranchRelation::Cons(cs) => Some(cs.iter()),
        }
        .into_iter()
        .flatten()
    }

    pub fn meet(&self, other: &BranchRelation) -> BranchRelation {
        match (self, other) {
            (BranchRelation::Cons(x), BranchRelation::Cons(y)) => {
                BranchRelation::Cons(x.union(y).cloned().collect())
            }
            _ => BranchRelation::Zero,
        }
    }

    pub fn converse(&self) -> BranchRelation {
        match self {
            BranchRelation::Zero => BranchRelation::Zero,
            BranchRelation::Cons(cs) => BranchRelation::Cons(cs.iter().map(Constraint::flipped).collect()),
        }
    }

    /// Relational composition, `self` first.
    pub fn compose(&self, other: &BranchRelation) -> Result<BranchRelation, BranchError> {
        let (BranchRelation::Cons(c1), BranchRelation::Cons(c2)) = (self, other) else {
            return Ok(BranchRelation::Zero);
        };
        let tag1 = |s: Side| if s == Side::L { TAG_S } else { TAG_M };
        let tag2 = |s: Side| if s == Side::L { TAG_M } else { TAG_T };
        let mut eqs: Vec<(TPoint, TPoint)> = Vec::with_capacity(c1.len() + c2.len());
        for c in c1 {
            eqs.push(((tag1(c.lhs.side), c.lhs.addr.clone()), (tag1(c.rhs.side), c.rhs.addr.clone())));
        }
        for c in c2 {
            eqs.push(((tag2(c.lhs.side), c.lhs.addr.clone()), (tag2(c.rhs.side), c.rhs.addr.clone())));
        }
        let mut full = SaturationIndex::build(&eqs, &[]);
        let projected = full.project();
        let result = BranchRelation::from_constraints(projected);

        // Middle-witness check: the projection alone must induce the same
        // partition of every outer point the combined system mentions.
        let outer: Vec<TPoint> = full.outer_points();
        let g_eqs: Vec<(TPoint, TPoint)> = result.tagged();
        let mut alone = SaturationIndex::build(&g_eqs, &outer);
        let mut pairing: HashMap<usize, usize> = HashMap::new();
        let mut back: HashMap<usize, usize> = HashMap::new();
        for p in &outer {
            let x = full.class_of(p);
            let y = alone.class_of(p);
            if *pairing.entry(x).or_insert(y) != y || *back.entry(y).or_insert(x) != x {
                return Err(BranchError::ProjectionIncomplete { partial: result });
            }
        }
        Ok(result)
    }

    fn tagged(&self) -> Vec<(TPoint, TPoint)> {
        self.constraints()
            .map(|c| ((side_tag(c.lhs.side), c.lhs.addr.clone()), (side_tag(c.rhs.side), c.rhs.addr.clone())))
            .collect()
    }

    /// Whether every pair in the relation satisfies `c`.
    pub fn entails(&self, c: &Constraint) -> bool {
        if self.is_zero() || c.is_trivial() {
            return true;
        }
        let p = (side_tag(c.lhs.side), c.lhs.addr.clone());
        let q = (side_tag(c.rhs.side), c.rhs.addr.clone());
        let mut idx = SaturationIndex::build(&self.tagged(), &[p.clone(), q.clone()]);
        idx.class_of(&p) == idx.class_of(&q)
    }

    /// Entailment by explicit closure over all points with addresses of
    /// length at most `bound`. Sound; complete for derivations that stay
    /// within the bound.
    pub fn entails_bfs(&self, c: &Constraint, bound: usize) -> bool {
        if self.is_zero() {
            return true;
        }
        BoundedClosure::new(self, bound).holds(c)
    }

    pub fn leq(&self, other: &BranchRelation) -> bool {
        match (self, other) {
            (BranchRelation::Zero, _) => true,
            (_, BranchRelation::Zero) => false,
            (BranchRelation::Cons(_), BranchRelation::Cons(cs)) => {
                if cs.is_empty() {
                    return true;
                }
                let pts: Vec<TPoint> = other.tagged().into_iter().flat_map(|(p, q)| [p, q]).collect();
                let mut idx = SaturationIndex::build(&self.tagged(), &pts);
                cs.iter().all(|c| {
                    let p = (side_tag(c.lhs.side), c.lhs.addr.clone());
                    let q = (side_tag(c.rhs.side), c.rhs.addr.clone());
                    idx.class_of(&p) == idx.class_of(&q)
                })
            }
        }
    }

    pub fn equal(&self, other: &BranchRelation) -> bool {
        self.leq(other) && other.leq(self)
    }

    /// Longest address mentioned.
    pub fn depth(&self) -> usize {
        self.constraints().map(|c| c.lhs.addr.len().max(c.rhs.addr.len())).max().unwrap_or(0)
    }
}

fn side_tag(s: Side) -> u8 {
    match s {
        Side::L => TAG_S,
        Side::R => TAG_T,
    }
}

fn write_addr(f: &mut fmt::Formatter<'_>, a: &[u8]) -> fmt::Result {
    if a.is_empty() {
        return f.write_str("^");
    }
    for &b in a {
        f.write_str(if b == 0 { "0" } else { "1" })?;
    }
    Ok(())
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.side == Side::L { "L." } else { "R." })?;
        write_addr(f, &self.addr)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.lhs, self.rhs)
    }
}

impl fmt::Display for BranchRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchRelation::Zero => f.write_str("0"),
            BranchRelation::Cons(cs) => {
                f.write_str("{")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl FromStr for Point {
    type Err = BranchError;
    fn from_str(s: &str) -> Result<Point, BranchError> {
        let bad = || BranchError::Parse(format!("bad point `{s}`"));
        let (side, addr) = s.trim().split_once('.').ok_or_else(bad)?;
        let side = match side {
            "L" => Side::L,
            "R" => Side::R,
            _ => return Err(bad()),
        };
        let addr = if addr == "^" {
            Vec::new()
        } else {
            addr.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(bad()),
                })
                .collect::<Result<Vec<u8>, _>>()?
        };
        if addr.is_empty() && !s.trim().ends_with('^') {
            return Err(bad());
        }
        Ok(Point { addr, side })
    }
}

impl FromStr for BranchRelation {
    type Err = BranchError;
    fn from_str(s: &str) -> Result<BranchRelation, BranchError> {
        let s = s.trim();
        if s == "0" {
            return Ok(BranchRelation::Zero);
        }
        let inner = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| BranchError::Parse(format!("expected `{{...}}`, got `{s}`")))?;
        let mut cs = Vec::new();
        for part in inner.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (l, r) =
                part.split_once('=').ok_or_else(|| BranchError::Parse(format!("bad constraint `{part}`")))?;
            cs.push(Constraint::new(l.parse()?, r.parse()?));
        }
        Ok(BranchRelation::from_constraints(cs))
    }
}

// ------------------------------------------------------------ the engine

const TAG_S: u8 = 0;
const TAG_T: u8 = 1;
const TAG_M: u8 = 2;

type TPoint = (u8, Address);

/// Congruence closure over the tries of mentioned addresses.
///
/// Every mentioned address of every tag is a trie node; an inner node has
/// both children. Nodes are merged by the constraints, merges propagate to
/// children, and classes with the same pair of child classes are merged.
/// The classes with their child links form a finite automaton over address
/// words; a point is equal to another iff both reach the same class.
pub struct SaturationIndex {
    roots: [usize; 3],
    trie: Vec<Option<(usize, usize)>>,
    parent: Vec<usize>,
    kids: Vec<Option<(usize, usize)>>,
}

impl SaturationIndex {
    fn build(eqs: &[(TPoint, TPoint)], extra: &[TPoint]) -> SaturationIndex {
        let mut idx = SaturationIndex {
            roots: [0, 1, 2],
            trie: vec![None; 3],
            parent: Vec::new(),
            kids: Vec::new(),
        };
        let mut pairs = Vec::with_capacity(eqs.len());
        for (p, q) in eqs {
            let x = idx.insert(p);
            let y = idx.insert(q);
            pairs.push((x, y));
        }
        for p in extra {
            idx.insert(p);
        }
        idx.parent = (0..idx.trie.len()).collect();
        idx.kids = idx.trie.clone();
        for (x, y) in pairs {
            idx.union(x, y);
        }
        idx.saturate();
        idx
    }

    fn insert(&mut self, (tag, addr): &TPoint) -> usize {
        let mut n = self.roots[*tag as usize];
        for &bit in addr {
            let (c0, c1) = match self.trie[n] {
                Some(k) => k,
                None => {
                    let c0 = self.trie.len();
                    self.trie.push(None);
                    self.trie.push(None);
                    self.trie[n] = Some((c0, c0 + 1));
                    (c0, c0 + 1)
                }
            };
            n = if bit == 0 { c0 } else { c1 };
        }
        n
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Merge two classes and, recursively, their children.
    fn union(&mut self, x: usize, y: usize) -> bool {
        let mut changed = false;
        let mut work = vec![(x, y)];
        while let Some((x, y)) = work.pop() {
            let (rx, ry) = (self.find(x), self.find(y));
            if rx == ry {
                continue;
            }
            changed = true;
            let (keep, gone) = if rx < ry { (rx, ry) } else { (ry, rx) };
            self.parent[gone] = keep;
            match (self.kids[keep], self.kids[gone]) {
                (Some((a0, a1)), Some((b0, b1))) => {
                    work.push((a0, b0));
                    work.push((a1, b1));
                }
                (None, Some(k)) => self.kids[keep] = Some(k),
                _ => {}
            }
        }
        changed
    }

    /// Merge classes whose child classes coincide, to fixpoint.
    fn saturate(&mut self) {
        loop {
            let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
            let mut merges = Vec::new();
            for n in 0..self.parent.len() {
                if self.parent[n] != n {
                    continue;
                }
                if let Some((k0, k1)) = self.kids[n] {
                    let key = (self.find(k0), self.find(k1));
                    match seen.get(&key) {
                        Some(&m) => merges.push((m, n)),
                        None => {
                            seen.insert(key, n);
                        }
                    }
                }
            }
            let mut changed = false;
            for (x, y) in merges {
                changed |= self.union(x, y);
            }
            if !changed {
                return;
            }
        }
    }

    /// Class of a point that was materialized at build time.
    fn class_of(&mut self, (tag, addr): &TPoint) -> usize {
        let mut n = self.roots[*tag as usize];
        for &bit in addr {
            let (c0, c1) = self.trie[n].expect("point not materialized");
            n = if bit == 0 { c0 } else { c1 };
        }
        self.find(n)
    }

    /// Every trie point of the outer tags.
    fn outer_points(&self) -> Vec<TPoint> {
        let mut out = Vec::new();
        for tag in [TAG_S, TAG_T] {
            let mut stack = vec![(self.roots[tag as usize], Vec::new())];
            while let Some((n, w)) = stack.pop() {
                if let Some((c0, c1)) = self.trie[n] {
                    let mut w0 = w.clone();
                    w0.push(0);
                    let mut w1 = w.clone();
                    w1.push(1);
                    stack.push((c0, w0));
                    stack.push((c1, w1));
                }
                out.push((tag, w));
            }
        }
        out
    }

    /// Constraints over the outer tags that generate exactly the equalities
    /// among outer points: each class reachable from an outer root gets an
    /// access word, and every reachable root and child link is recorded
    /// against those words.
    fn project(&mut self) -> Vec<Constraint> {
        let to_point = |(tag, w): &TPoint| Point { addr: w.clone(), side: if *tag == TAG_S { Side::L } else { Side::R } };
        let mut access: HashMap<usize, TPoint> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut out = Vec::new();
        for tag in [TAG_S, TAG_T] {
            let c = self.find(self.roots[tag as usize]);
            let here = (tag, Vec::new());
            match access.get(&c) {
                Some(acc) => out.push(Constraint::new(to_point(&here), to_point(acc))),
                None => {
                    access.insert(c, here);
                    queue.push_back(c);
                }
            }
        }
        while let Some(c) = queue.pop_front() {
            let Some((k0, k1)) = self.kids[c] else { continue };
            for (bit, k) in [(0u8, k0), (1u8, k1)] {
                let kc = self.find(k);
                let (tag, mut w) = access[&c].clone();
                w.push(bit);
                let here = (tag, w);
                match access.get(&kc) {
                    Some(acc) => {
                        if *acc != here {
                            out.push(Constraint::new(to_point(&here), to_point(acc)));
                        }
                    }
                    None => {
                        access.insert(kc, here);
                        queue.push_back(kc);
                    }
                }
            }
        }
        out
    }
}

/// Explicit closure of the four rules over all points of bounded depth.
/// Independent of [`SaturationIndex`]; used as a test oracle.
pub struct BoundedClosure {
    bound: usize,
    per_side: usize,
    parent: Vec<usize>,
}

impl BoundedClosure {
    pub fn new(r: &BranchRelation, bound: usize) -> BoundedClosure {
        let per_side = (1usize << (bound + 1)) - 1;
        let mut bc = BoundedClosure { bound, per_side, parent: (0..2 * per_side).collect() };
        for c in r.constraints() {
            if let (Some(x), Some(y)) = (bc.index(&c.lhs), bc.index(&c.rhs)) {
                bc.union(x, y);
            }
        }
        bc.close();
        bc
    }

    fn index(&self, p: &Point) -> Option<usize> {
        if p.addr.len() > self.bound {
            return None;
        }
        let mut v = 0usize;
        for &b in &p.addr {
            v = 2 * v + b as usize;
        }
        let side = if p.side == Side::L { 0 } else { self.per_side };
        Some(side + (1usize << p.addr.len()) - 1 + v)
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        self.parent[x] = r;
        r
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        self.parent[rx.max(ry)] = rx.min(ry);
        true
    }

    /// Children of a node in heap numbering, if within the bound.
    fn child(&self, n: usize, bit: usize) -> Option<usize> {
        let (base, local) = if n >= self.per_side { (self.per_side, n - self.per_side) } else { (0, n) };
        let c = 2 * local + 1 + bit;
        (c < self.per_side).then_some(base + c)
    }

    fn close(&mut self) {
        let n = self.parent.len();
        loop {
            let mut changed = false;
            // right-append: all members of a class have equal children
            let mut first: Vec<[usize; 2]> = vec![[usize::MAX; 2]; n];
            for p in 0..n {
                #[allow(clippy::needless_range_loop)]
                for bit in 0..2 {
                    if let Some(c) = self.child(p, bit) {
                        let r = self.find(p);
                        if first[r][bit] == usize::MAX {
                            first[r][bit] = c;
                        } else {
                            let f = first[r][bit];
                            changed |= self.union(f, c);
                        }
                    }
                }
            }
            // reassembly: equal children make equal parents
            let mut by_kids: HashMap<(usize, usize), usize> = HashMap::new();
            for p in 0..n {
                if let (Some(c0), Some(c1)) = (self.child(p, 0), self.child(p, 1)) {
                    let key = (self.find(c0), self.find(c1));
                    match by_kids.get(&key) {
                        Some(&q) => changed |= self.union(p, q),
                        None => {
                            by_kids.insert(key, p);
                        }
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    pub fn holds(&mut self, c: &Constraint) -> bool {
        match (self.index(&c.lhs), self.index(&c.rhs)) {
            (Some(x), Some(y)) => self.find(x) == self.find(y),
            _ => c.is_trivial(),
        }
    }
}

// ------------------------------------------------------------- the model

/// Words over `a`, `b` used in the sample pool, shortest first.
fn words(max_len: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for g in ["a", "b"] {
                next.push(if w.is_empty() { g.to_string() } else { format!("{w};{g}") });
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Texts of the elements the sampler draws from: constants, paths of
/// length at most four and their converses, and a few meets.
pub fn sample_pool_terms() -> Vec<String> {
    let mut t: Vec<String> = ["id", "1", "0"].iter().map(|s| s.to_string()).collect();
    let ws = words(4);
    t.extend(ws.iter().cloned());
    t.extend(ws.iter().map(|w| format!("conv({w})")));
    t.extend(
        [
            "a;conv(b)",
            "b;conv(a)",
            "a;conv(a)",
            "b;conv(b)",
            "a;b;conv(a)",
            "b;conv(a);conv(b)",
            "a & b",
            "conv(a) & conv(b)",
            "a;a & b;b",
            "a;conv(b) & b;conv(a)",
            "a;conv(a) & b;a;conv(b)",
            "a;a;conv(a) & a;b;conv(b)",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    t
}

/// The algebra of relations generated by the two subtree maps.
pub struct BranchModel {
    comp_cache: Mutex<HashMap<(BranchRelation, BranchRelation), BranchRelation>>,
    pool: Vec<(String, BranchRelation)>,
}

impl Default for BranchModel {
    fn default() -> Self {
        BranchModel::new()
    }
}

impl BranchModel {
    pub fn new() -> BranchModel {
        let mut m = BranchModel { comp_cache: Mutex::new(HashMap::new()), pool: Vec::new() };
        let env = Env::new();
        let pool = sample_pool_terms()
            .into_iter()
            .map(|s| {
                let t = parse_term(&s).expect("pool term parses");
                let e = eval(&m, &t, &env).expect("pool term evaluates");
                (s, e)
            })
            .collect();
        m.pool = pool;
        m
    }

    /// Evaluate a closed term.
    pub fn eval_closed(&self, t: &Term) -> Result<BranchRelation, ModelError> {
        eval(self, t, &Env::new())
    }
}

impl Model for BranchModel {
    type Elem = BranchRelation;

    fn signature(&self) -> Signature {
        Signature::J
    }
    fn zero(&self) -> BranchRelation {
        BranchRelation::Zero
    }
    fn top(&self) -> BranchRelation {
        BranchRelation::top()
    }
    fn id(&self) -> BranchRelation {
        BranchRelation::id()
    }
    fn generators(&self) -> Option<(BranchRelation, BranchRelation)> {
        Some((BranchRelation::gen_a(), BranchRelation::gen_b()))
    }
    fn meet(&self, x: &BranchRelation, y: &BranchRelation) -> BranchRelation {
        x.meet(y)
    }
    fn comp(&self, x: &BranchRelation, y: &BranchRelation) -> Result<BranchRelation, ModelError> {
        if x.is_zero() || y.is_zero() {
            return Ok(BranchRelation::Zero);
        }
        let key = (x.clone(), y.clone());
        if let Some(r) = self.comp_cache.lock().expect("cache lock").get(&key) {
            return Ok(r.clone());
        }
        let r = x.compose(y)?;
        self.comp_cache.lock().expect("cache lock").insert(key, r.clone());
        Ok(r)
    }
    fn conv(&self, x: &BranchRelation) -> BranchRelation {
        x.converse()
    }
    fn equal(&self, x: &BranchRelation, y: &BranchRelation) -> bool {
        x.equal(y)
    }
    fn leq(&self, x: &BranchRelation, y: &BranchRelation) -> bool {
        x.leq(y)
    }
    fn sample_pool(&self) -> Option<Vec<(String, BranchRelation)>> {
        Some(self.pool.clone())
    }
}

/// The quasiprojection equations and the relation-level Jonsson-Tarski
/// equations for the two subtree maps.
pub fn qu_suite() -> Result<Vec<LawReport>, ModelError> {
    let m = BranchModel::new();
    let laws = [
        ("qu.conv-a-a", "conv(a);a = id"),
        ("qu.conv-b-b", "conv(b);b = id"),
        ("qu.unicity", "a;conv(a) & b;conv(b) = id"),
        ("qu.conv-a-b", "1 = conv(a);b"),
        ("qu.a-1", "1 = a;1"),
        ("qu.b-1", "1 = b;1"),
        ("jt.left", "(conv(a) & conv(b));a = id"),
        ("jt.right", "(conv(a) & conv(b));b = id"),
        ("jt.pair", "a;conv(a) & b;conv(b) = id"),
    ];
    laws.iter()
        .map(|(id, text)| {
            let law = Law::parse(id, LawKind::Concrete, text)?;
            check_law(&m, &law, Strategy::Sample { n: 1, seed: 0 })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(s: &str) -> BranchRelation {
        s.parse().unwrap()
    }

    fn c(s: &str) -> Constraint {
        let (l, r) = s.split_once('=').unwrap();
        Constraint::new(l.parse().unwrap(), r.parse().unwrap())
    }

    #[test]
    fn text_form() {
        assert_eq!(BranchRelation::gen_a().to_string(), "{R.^=L.0}");
        assert_eq!(BranchRelation::gen_a().converse().to_string(), "{L.^=R.0}");
        assert_eq!(BranchRelation::id().to_string(), "{L.^=R.^}");
        assert_eq!(BranchRelation::top().to_string(), "{}");
        assert_eq!(BranchRelation::Zero.to_string(), "0");
        for r in ["0", "{}", "{R.^=L.0}", "{L.^=L.1; L.01=R.1}"] {
            assert_eq!(rel(r).to_string(), r);
        }
    }

    #[test]
    fn generator_facts() {
        let (a, b) = (BranchRelation::gen_a(), BranchRelation::gen_b());
        assert!(a.converse().compose(&a).unwrap().equal(&BranchRelation::id()));
        assert!(a.converse().compose(&b).unwrap().equal(&BranchRelation::top()));
        let m = a.meet(&b);
        assert_eq!(m.constraints().count(), 2);
        assert!(m.entails(&c("L.0=L.1")));
        assert!(m.entails_bfs(&c("L.0=L.1"), 6));
    }

    #[test]
    fn entailment_examples() {
        let r = rel("{R.^=L.0}");
        assert!(r.entails(&c("R.1=L.01")));
        assert!(!r.entails(&c("R.^=L.1")));
        assert!(r.entails_bfs(&c("R.1=L.01"), 6));
        assert!(!r.entails_bfs(&c("R.^=L.1"), 6));
        let r = rel("{L.0=L.^}");
        assert!(r.entails(&c("L.00=L.^")));
        assert!(r.entails_bfs(&c("L.00=L.^"), 6));
    }

    #[test]
    fn reassembly_gives_unicity() {
        let (a, b) = (BranchRelation::gen_a(), BranchRelation::gen_b());
        let u = a.compose(&a.converse()).unwrap().meet(&b.compose(&b.converse()).unwrap());
        assert!(u.equal(&BranchRelation::id()));
    }

    #[test]
    fn order_basics() {
        let a = BranchRelation::gen_a();
        assert!(BranchRelation::Zero.leq(&a));
        assert!(!BranchRelation::top().leq(&a));
        assert!(a.leq(&BranchRelation::top()));
        assert!(!a.leq(&BranchRelation::Zero));
    }
}
