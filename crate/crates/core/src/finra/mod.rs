//! Finite relation algebras given by atom structures.
//!
//! An element is a set of atoms stored as a `u64` bit mask, so structures
//! have at most 64 atoms; the exhaustive operations need far fewer.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::model::{Model, ModelError};
use crate::term::Signature;

mod enumerate;
mod jlm;
mod rep;

pub use enumerate::{enumerate_integral, parse_signature, IntegralSignature, GATED_SIGNATURES, STRETCH_SIGNATURES};
pub use jlm::{check_jlm, check_k, jlm_profile, profile_tsv, JlmMode, JlmReport, JLM_COLUMNS};
pub use rep::{
    build_stage_rep, extend_comp, extend_join, functional_elements, generated_subalgebra, hat, is_tabular,
    hat_law_violations, tabular_witness, Hat, PartialRep, StageRecord, StageReport,
};

/// An element of a finite relation algebra: a set of atoms.
pub type Elem = u64;

/// Largest structure whose element table is precomputed.
const TABLE_ATOMS: usize = 8;
/// Largest structure whose elements may be listed.
const LISTABLE_ATOMS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinraError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid atom structure: {0}")]
    Invalid(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unsupported signature `{0}`")]
    UnsupportedSignature(String),
    #[error("size {0} is out of range")]
    OutOfRange(usize),
    #[error("exhaustive check needs at most {max} atoms, the structure has {n}")]
    CapExceeded { n: usize, max: usize },
    #[error("the algebra is not tabular")]
    NotTabular,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0}")]
    Io(String),
}

/// Atoms `0..n`, a converse permutation, the identity atoms and the allowed
/// triples: `(a, b, c)` is allowed when atom `c` lies below `a ; b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomStructure {
    names: Vec<String>,
    converse: Vec<usize>,
    identity: Elem,
    /// `table[a * n + b]` is the set of atoms below `a ; b`.
    table: Vec<Elem>,
}

impl AtomStructure {
    /// Build a structure from explicit triples. Only the shape is checked
    /// here; use [`verify_axioms`] for the relation algebra axioms.
    pub fn new(
        names: Vec<String>,
        converse: Vec<usize>,
        identity: &[usize],
        triples: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<AtomStructure, FinraError> {
        let n = names.len();
        if n == 0 || n > 64 {
            return Err(FinraError::OutOfRange(n));
        }
        if converse.len() != n {
            return Err(FinraError::Invalid(format!("converse has {} entries for {n} atoms", converse.len())));
        }
        let mut seen = vec![false; n];
        for &c in &converse {
            if c >= n || seen[c] {
                return Err(FinraError::Invalid("converse is not a permutation".into()));
            }
            seen[c] = true;
        }
        let mut id = 0;
        for &i in identity {
            if i >= n {
                return Err(FinraError::Invalid(format!("identity atom {i} out of range")));
            }
            id |= 1 << i;
        }
        let mut table = vec![0; n * n];
        for (a, b, c) in triples {
            if a >= n || b >= n || c >= n {
                return Err(FinraError::Invalid(format!("triple ({a},{b},{c}) out of range")));
            }
            table[a * n + b] |= 1 << c;
        }
        Ok(AtomStructure { names, converse, identity: id, table })
    }

    /// Add every triple forced by the Peircean rotations of the present ones.
    pub fn peircean_closure(mut self) -> AtomStructure {
        let n = self.n();
        let mut stack = self.triples();
        while let Some((a, b, c)) = stack.pop() {
            for (x, y, z) in [(self.converse[a], c, b), (c, self.converse[b], a)] {
                if !self.allows(x, y, z) {
                    self.table[x * n + y] |= 1 << z;
                    stack.push((x, y, z));
                }
            }
        }
        self
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn converse_atom(&self, a: usize) -> usize {
        self.converse[a]
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn allows(&self, a: usize, b: usize, c: usize) -> bool {
        self.table[a * self.n() + b] >> c & 1 == 1
    }

    /// Atoms below the product of atoms `a` and `b`.
    pub fn atom_product(&self, a: usize, b: usize) -> Elem {
        self.table[a * self.n() + b]
    }

    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in atoms_of(self.table[a * n + b]) {
                    out.push((a, b, c));
                }
            }
        }
        out
    }

    /// Relative product of two elements, computed from the atom table.
    pub fn product(&self, x: Elem, y: Elem) -> Elem {
        let mut out = 0;
        for a in atoms_of(x) {
            for b in atoms_of(y) {
                out |= self.table[a * self.n() + b];
            }
        }
        out
    }

    pub fn converse_of(&self, x: Elem) -> Elem {
        atoms_of(x).fold(0, |acc, a| acc | 1 << self.converse[a])
    }

    /// The same algebra with atom `a` renamed to `perm[a]`.
    pub fn relabel(&self, perm: &[usize]) -> AtomStructure {
        let n = self.n();
        let mut names = vec![String::new(); n];
        let mut converse = vec![0; n];
        for a in 0..n {
            names[perm[a]] = self.names[a].clone();
            converse[perm[a]] = perm[self.converse[a]];
        }
        let mut table = vec![0; n * n];
        for (a, b, c) in self.triples() {
            table[perm[a] * n + perm[b]] |= 1 << perm[c];
        }
        let identity = atoms_of(self.identity).fold(0, |acc, a| acc | 1 << perm[a]);
        AtomStructure { names, converse, identity, table }
    }

    /// Read the text format: a header line
    /// `atoms=<n> identity=<i,j,..> converse=<c0,c1,..> [names=<n0,n1,..>]`
    /// followed by `cycle a b c` lines (indices or names). Peircean closure
    /// is applied to the listed cycles.
    pub fn parse(text: &str) -> Result<AtomStructure, FinraError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(FinraError::Parse { line: 1, msg: "empty file".into() })?;
        let perr = |line: usize, msg: String| FinraError::Parse { line, msg };
        let (mut n, mut identity, mut converse, mut names) = (None, None, None, None);
        for field in header.split_whitespace() {
            let (k, v) = field.split_once('=').ok_or_else(|| perr(hline, format!("bad field `{field}`")))?;
            let nums = |v: &str| -> Result<Vec<usize>, FinraError> {
                v.split(',').map(|s| s.trim().parse().map_err(|_| perr(hline, format!("bad index `{s}`")))).collect()
            };
            match k {
                "atoms" => n = Some(v.parse::<usize>().map_err(|_| perr(hline, format!("bad atom count `{v}`")))?),
                "identity" => identity = Some(nums(v)?),
                "converse" => converse = Some(nums(v)?),
                "names" => names = Some(v.split(',').map(|s| s.trim().to_string()).collect::<Vec<_>>()),
                _ => return Err(perr(hline, format!("unknown field `{k}`"))),
            }
        }
        let n = n.ok_or_else(|| perr(hline, "missing `atoms=`".into()))?;
        let identity = identity.ok_or_else(|| perr(hline, "missing `identity=`".into()))?;
        let converse = converse.ok_or_else(|| perr(hline, "missing `converse=`".into()))?;
        let names = names.unwrap_or_else(|| (0..n).map(|i| format!("a{i}")).collect());
        if names.len() != n {
            return Err(perr(hline, format!("{} names for {n} atoms", names.len())));
        }
        let mut triples = Vec::new();
        for (line, l) in lines {
            let mut parts = l.split_whitespace();
            if parts.next() != Some("cycle") {
                return Err(perr(line, format!("expected `cycle a b c`, got `{l}`")));
            }
            let atoms: Vec<usize> = parts
                .map(|p| {
                    p.parse::<usize>()
                        .ok()
                        .filter(|&i| i < n)
                        .or_else(|| names.iter().position(|m| m == p))
                        .ok_or_else(|| perr(line, format!("unknown atom `{p}`")))
                })
                .collect::<Result<_, _>>()?;
            if atoms.len() != 3 {
                return Err(perr(line, "a cycle has three atoms".into()));
            }
            triples.push((atoms[0], atoms[1], atoms[2]));
        }
        Ok(AtomStructure::new(names, converse, &identity, triples)?.peircean_closure())
    }

    pub fn load(path: &Path) -> Result<AtomStructure, FinraError> {
        let text = std::fs::read_to_string(path).map_err(|e| FinraError::Io(format!("{}: {e}", path.display())))?;
        AtomStructure::parse(&text)
    }

    /// Text form readable by [`AtomStructure::parse`]; one cycle per
    /// Peircean orbit.
    pub fn to_text(&self) -> String {
        let n = self.n();
        let list = |v: Vec<usize>| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let mut out = format!(
            "atoms={n} identity={} converse={} names={}\n",
            list(atoms_of(self.identity).collect()),
            list(self.converse.clone()),
            self.names.join(",")
        );
        let mut done = std::collections::HashSet::new();
        for t in self.triples() {
            if done.contains(&t) {
                continue;
            }
            for o in self.orbit(t) {
                done.insert(o);
            }
            let (a, b, c) = t;
            let _ = writeln!(out, "cycle {} {} {}", self.names[a], self.names[b], self.names[c]);
        }
        out
    }

    /// The triples reachable from `t` by Peircean rotations.
    pub fn orbit(&self, t: (usize, usize, usize)) -> Vec<(usize, usize, usize)> {
        let mut out = vec![t];
        let mut i = 0;
        while i < out.len() {
            let (a, b, c) = out[i];
            for next in [(self.converse[a], c, b), (c, self.converse[b], a)] {
                if !out.contains(&next) {
                    out.push(next);
                }
            }
            i += 1;
        }
        out
    }
}

pub(crate) fn atoms_of(x: Elem) -> impl Iterator<Item = usize> {
    let mut bits = x;
    std::iter::from_fn(move || {
        if bits == 0 {
            None
        } else {
            let a = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(a)
        }
    })
}

/// The first axiom of the relation algebra axioms that fails, if any.
pub fn axiom_violation(s: &AtomStructure) -> Option<String> {
    let n = s.n();
    for a in 0..n {
        if s.converse[s.converse[a]] != a {
            return Some(format!("converse is not an involution at {}", s.names[a]));
        }
    }
    if s.identity == 0 {
        return Some("no identity atom".into());
    }
    for a in atoms_of(s.identity) {
        if s.converse[a] != a {
            return Some(format!("identity atom {} is not symmetric", s.names[a]));
        }
    }
    for (a, b, c) in s.triples() {
        for (x, y, z) in [(s.converse[a], c, b), (c, s.converse[b], a)] {
            if !s.allows(x, y, z) {
                return Some(format!(
                    "Peircean closure: ({},{},{}) allowed but ({},{},{}) not",
                    s.names[a], s.names[b], s.names[c], s.names[x], s.names[y], s.names[z]
                ));
            }
        }
    }
    for a in 0..n {
        let x = 1 << a;
        if s.product(x, s.identity) != x || s.product(s.identity, x) != x {
            return Some(format!("identity law fails at {}", s.names[a]));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = s.atom_product(a, b);
            for c in 0..n {
                if s.product(ab, 1 << c) != s.product(1 << a, s.atom_product(b, c)) {
                    return Some(format!("associativity fails at ({},{},{})", s.names[a], s.names[b], s.names[c]));
                }
            }
        }
    }
    None
}

/// Whether the complex algebra of `s` is a relation algebra.
pub fn verify_axioms(s: &AtomStructure) -> bool {
    axiom_violation(s).is_none()
}

/// The atom structure of the algebra of all relations on `{0,..,n-1}`.
/// Atom `i * n + j` is the singleton relation `{(i, j)}`, named `r<i><j>`.
pub fn make_proper_ra(n: usize) -> Result<AtomStructure, FinraError> {
    if !(1..=4).contains(&n) {
        return Err(FinraError::OutOfRange(n));
    }
    let at = |i: usize, j: usize| i * n + j;
    let mut names = Vec::new();
    let mut converse = Vec::new();
    for i in 0..n {
        for j in 0..n {
            names.push(format!("r{i}{j}"));
            converse.push(at(j, i));
        }
    }
    let identity: Vec<usize> = (0..n).map(|i| at(i, i)).collect();
    let mut triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                triples.push((at(i, j), at(j, k), at(i, k)));
            }
        }
    }
    AtomStructure::new(names, converse, &identity, triples)
}

/// The complex algebra of an atom structure, with precomputed tables when
/// it is small.
#[derive(Clone, Debug)]
pub struct Ra {
    s: AtomStructure,
    top: Elem,
    /// `comp[(x << n) | y]` for all elements, when `n <= TABLE_ATOMS`.
    comp: Option<Vec<Elem>>,
    conv: Option<Vec<Elem>>,
}

impl Ra {
    pub fn new(s: AtomStructure) -> Ra {
        let n = s.n();
        let top = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let (comp, conv) = if n <= TABLE_ATOMS {
            let size = 1usize << n;
            let mut comp = vec![0; size * size];
            for x in 0..size {
                for y in 0..size {
                    comp[(x << n) | y] = s.product(x as Elem, y as Elem);
                }
            }
            let conv = (0..size).map(|x| s.converse_of(x as Elem)).collect();
            (Some(comp), Some(conv))
        } else {
            (None, None)
        };
        Ra { s, top, comp, conv }
    }

    pub fn structure(&self) -> &AtomStructure {
        &self.s
    }

    pub fn n(&self) -> usize {
        self.s.n()
    }

    pub fn top_elem(&self) -> Elem {
        self.top
    }

    pub fn identity(&self) -> Elem {
        self.s.identity
    }

    pub fn compose(&self, x: Elem, y: Elem) -> Elem {
        match &self.comp {
            Some(t) => t[((x as usize) << self.n()) | y as usize],
            None => self.s.product(x, y),
        }
    }

    pub fn converse(&self, x: Elem) -> Elem {
        match &self.conv {
            Some(t) => t[x as usize],
            None => self.s.converse_of(x),
        }
    }

    pub fn is_functional(&self, x: Elem) -> bool {
        self.compose(self.converse(x), x) & !self.identity() == 0
    }

    /// Every element, when there are at most 2^16 of them.
    pub fn all_elements(&self) -> Option<impl Iterator<Item = Elem>> {
        (self.n() <= LISTABLE_ATOMS).then_some(0..=self.top)
    }

    /// `0`, or the names of the atoms of `x` joined by `+`.
    pub fn label(&self, x: Elem) -> String {
        if x == 0 {
            return "0".into();
        }
        atoms_of(x).map(|a| self.s.names[a].as_str()).collect::<Vec<_>>().join("+")
    }

    /// Inverse of [`Ra::label`]; also accepts `1` for the top element and
    /// `id` for the identity.
    pub fn parse_elem(&self, text: &str) -> Result<Elem, FinraError> {
        let mut out = 0;
        for part in text.split('+').map(str::trim) {
            out |= match part {
                "0" => 0,
                "1" => self.top,
                "id" => self.identity(),
                p => match self.s.names.iter().position(|m| m == p) {
                    Some(a) => 1 << a,
                    None => return Err(FinraError::UnknownElement(text.to_string())),
                },
            };
        }
        Ok(out)
    }
}

impl Model for Ra {
    type Elem = Elem;

    fn signature(&self) -> Signature {
        Signature::Ra
    }
    fn zero(&self) -> Elem {
        0
    }
    fn top(&self) -> Elem {
        self.top
    }
    fn id(&self) -> Elem {
        self.identity()
    }
    fn meet(&self, x: &Elem, y: &Elem) -> Elem {
        x & y
    }
    fn comp(&self, x: &Elem, y: &Elem) -> Result<Elem, ModelError> {
        Ok(self.compose(*x, *y))
    }
    fn conv(&self, x: &Elem) -> Elem {
        self.converse(*x)
    }
    fn join(&self, x: &Elem, y: &Elem) -> Result<Elem, ModelError> {
        Ok(x | y)
    }
    fn compl(&self, x: &Elem) -> Result<Elem, ModelError> {
        Ok(self.top & !x)
    }
    fn equal(&self, x: &Elem, y: &Elem) -> bool {
        x == y
    }
    fn leq(&self, x: &Elem, y: &Elem) -> bool {
        x & !y == 0
    }
    fn elements(&self) -> Option<Vec<(String, Elem)>> {
        Some(self.all_elements()?.map(|x| (self.label(x), x)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_atom() -> AtomStructure {
        AtomStructure::new(vec!["1'".into()], vec![0], &[0], [(0, 0, 0)]).unwrap()
    }

    #[test]
    fn small_structures() {
        assert!(verify_axioms(&one_atom()));
        for n in 1..=3 {
            assert!(verify_axioms(&make_proper_ra(n).unwrap()), "Re({n})");
        }
        assert_eq!(make_proper_ra(2).unwrap().n(), 4);
        assert!(make_proper_ra(0).is_err());
        assert!(make_proper_ra(5).is_err());
    }

    #[test]
    fn peircean_breach() {
        // (a,a,1') without its rotations
        let s = AtomStructure::new(
            vec!["1'".into(), "a".into()],
            vec![0, 1],
            &[0],
            [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)],
        )
        .unwrap();
        assert!(verify_axioms(&s));
        let broken = AtomStructure::new(
            vec!["1'".into(), "a".into()],
            vec![0, 1],
            &[0],
            [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)],
        )
        .unwrap();
        assert!(axiom_violation(&broken).unwrap().contains("Peircean"));
    }

    #[test]
    fn text_round_trip() {
        let s = make_proper_ra(2).unwrap();
        let back = AtomStructure::parse(&s.to_text()).unwrap();
        assert_eq!(back, s);
        let ra = Ra::new(s);
        for x in ra.all_elements().unwrap() {
            assert_eq!(ra.parse_elem(&ra.label(x)).unwrap(), x);
        }
        assert_eq!(ra.parse_elem("id").unwrap(), ra.parse_elem("r00+r11").unwrap());
    }
}
