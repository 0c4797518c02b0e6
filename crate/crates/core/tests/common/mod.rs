#![allow(dead_code)]

use jalg::branchrel::{BranchModel, BranchRelation, Constraint, Point, Side};
use jalg::model::{eval, Env};
use jalg::term::parse_term;
use rand::Rng;

/// The thirteen J-algebra axioms, written out independently of the law catalog.
pub const J_AXIOMS: [(&str, &str, &str); 13] = [
    ("bassoc", "x & (y & z)", "(x & y) & z"),
    ("comm", "x & y", "y & x"),
    ("idem", "x & x", "x"),
    ("assoc", "x;(y;z)", "(x;y);z"),
    ("id", "x;id", "x"),
    ("mon", "(x & y);z", "(x & y);z & y;z"),
    ("conv-conv", "conv(conv(x))", "x"),
    ("conv-comp", "conv(x;y)", "conv(y);conv(x)"),
    ("conv-meet", "conv(x & y)", "conv(x) & conv(y)"),
    ("rot", "x;y & z", "(z;conv(y) & x);(y & conv(x);z) & z"),
    ("zero", "0 & x", "0"),
    ("one", "x & 1", "x"),
    ("norm", "x;0", "0"),
];

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

/// Forty relations generated by the subtree maps: constants, paths of
/// length at most three, their converses, and some meets and mixed words.
pub fn branch_sample_terms() -> Vec<String> {
    let mut t: Vec<String> = ["id", "1", "0"].iter().map(|s| s.to_string()).collect();
    let ws = words(3);
    t.extend(ws.iter().cloned());
    t.extend(ws.iter().map(|w| format!("conv({w})")));
    t.extend(
        [
            "a;conv(b)",
            "b;conv(a)",
            "a;conv(a)",
            "a & b",
            "conv(a) & conv(b)",
            "a;a & b;b",
            "a;conv(b) & b;conv(a)",
            "a;b;conv(a)",
            "a;conv(a) & b;conv(b)",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    assert_eq!(t.len(), 40);
    t
}

pub fn branch_sample(m: &BranchModel) -> Vec<(String, BranchRelation)> {
    branch_sample_terms()
        .into_iter()
        .map(|s| {
            let v = eval(m, &parse_term(&s).unwrap(), &Env::new()).unwrap();
            (s, v)
        })
        .collect()
}

pub fn random_addr<R: Rng>(rng: &mut R, max: usize) -> Vec<u8> {
    let len = rng.gen_range(0..=max);
    (0..len).map(|_| rng.gen_range(0..2u8)).collect()
}

pub fn random_point<R: Rng>(rng: &mut R, max: usize) -> Point {
    let side = if rng.gen_bool(0.5) { Side::L } else { Side::R };
    Point::new(side, &random_addr(rng, max))
}

/// A random constraint set with one to three equations of depth at most three.
pub fn random_relation<R: Rng>(rng: &mut R) -> BranchRelation {
    let k = rng.gen_range(1..=3);
    BranchRelation::from_constraints((0..k).map(|_| Constraint::new(random_point(rng, 3), random_point(rng, 3))))
}

/// A query with addresses of length at most `max`. Half of them are built
/// from a constraint of `r` by extending both sides with a common suffix
/// or rewriting a prefix, so that many are entailed.
pub fn random_query<R: Rng>(rng: &mut R, r: &BranchRelation, max: usize) -> Constraint {
    let cs: Vec<&Constraint> = r.constraints().collect();
    if cs.is_empty() || rng.gen_bool(0.5) {
        return Constraint::new(random_point(rng, max), random_point(rng, max));
    }
    let c = cs[rng.gen_range(0..cs.len())];
    let (from, to) = if rng.gen_bool(0.5) { (&c.lhs, &c.rhs) } else { (&c.rhs, &c.lhs) };
    let room = max - from.addr.len().max(to.addr.len()).min(max);
    let suffix = random_addr(rng, room);
    let mut p = from.clone();
    p.addr.extend(&suffix);
    let mut q = to.clone();
    q.addr.extend(&suffix);
    if rng.gen_bool(0.5) {
        // compare the rewritten point with some other point
        q = if rng.gen_bool(0.5) { p.clone() } else { random_point(rng, max) };
        p = Point { addr: to.addr.iter().chain(&suffix).copied().collect(), side: to.side };
    }
    p.addr.truncate(max);
    q.addr.truncate(max);
    Constraint::new(p, q)
}

/// A pair of 0/1 sequences read as trees: the subtree at address `w` is
/// the subsequence at positions `2^|w| n + c(w)`, where `c(w)` reads `w`
/// as a binary number with its first letter least significant. Pairing
/// is interleaving, so subtree equality is equality of subsequences.
pub struct SeqPair {
    len: usize,
    labels: Vec<u64>,
}

fn offset(addr: &[u8]) -> usize {
    addr.iter().enumerate().map(|(i, &b)| (b as usize) << i).sum()
}

impl SeqPair {
    fn pos(&self, p: &Point, n: usize) -> Option<usize> {
        let i = (n << p.addr.len()) + offset(&p.addr);
        (i < self.len).then(|| if p.side == Side::L { i } else { self.len + i })
    }

    /// Random labels on `len` positions of each sequence, identified
    /// wherever a constraint of `r` forces equality.
    pub fn random<R: Rng>(rng: &mut R, r: &BranchRelation, len: usize) -> SeqPair {
        let mut parent: Vec<usize> = (0..2 * len).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let shell = SeqPair { len, labels: Vec::new() };
        for c in r.constraints() {
            for n in 0..len {
                match (shell.pos(&c.lhs, n), shell.pos(&c.rhs, n)) {
                    (Some(x), Some(y)) => {
                        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                        parent[rx] = ry;
                    }
                    _ => break,
                }
            }
        }
        let class_label: Vec<u64> = (0..2 * len).map(|_| rng.gen()).collect();
        let labels = (0..2 * len).map(|x| class_label[find(&mut parent, x)]).collect();
        SeqPair { len, labels }
    }

    pub fn constant(len: usize) -> SeqPair {
        SeqPair { len, labels: vec![0; 2 * len] }
    }

    /// Whether the two subsequences agree on the positions below `upto`.
    pub fn satisfies(&self, c: &Constraint, upto: usize) -> bool {
        for n in 0.. {
            let (i, j) = ((n << c.lhs.addr.len()) + offset(&c.lhs.addr), (n << c.rhs.addr.len()) + offset(&c.rhs.addr));
            if i >= upto || j >= upto {
                return true;
            }
            let (x, y) = (self.pos(&c.lhs, n).unwrap(), self.pos(&c.rhs, n).unwrap());
            if self.labels[x] != self.labels[y] {
                return false;
            }
        }
        unreachable!()
    }
}
