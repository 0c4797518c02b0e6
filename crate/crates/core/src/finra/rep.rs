//! Tabularity and finite stages of the partial-representation construction.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Elem, FinraError, Ra};

/// Elements `x` with `conv(x);x <= 1'`.
pub fn functional_elements(ra: &Ra) -> Vec<Elem> {
    (0..=ra.top_elem()).filter(|&x| ra.is_functional(x)).collect()
}

/// Functional `p, q` with `0 != conv(p);q <= w` and `v & conv(p);q = 0`,
/// the first such pair in numeric order.
pub fn tabular_witness(ra: &Ra, v: Elem, w: Elem) -> Result<(Elem, Elem), FinraError> {
    if v & !w != 0 || v == w {
        return Err(FinraError::Precondition(format!("{} < {} is false", ra.label(v), ra.label(w))));
    }
    let fns = functional_elements(ra);
    for &p in &fns {
        let cp = ra.converse(p);
        for &q in &fns {
            let s = ra.compose(cp, q);
            if s != 0 && s & !w == 0 && s & v == 0 {
                return Ok((p, q));
            }
        }
    }
    Err(FinraError::NotTabular)
}

/// Whether every `v < w` has a witness.
pub fn is_tabular(ra: &Ra) -> bool {
    let fns = functional_elements(ra);
    let mut products: Vec<Elem> = Vec::new();
    for &p in &fns {
        let cp = ra.converse(p);
        for &q in &fns {
            let s = ra.compose(cp, q);
            if s != 0 && !products.contains(&s) {
                products.push(s);
            }
        }
    }
    for w in 1..=ra.top_elem() {
        // proper subsets v of w
        let mut v = w;
        loop {
            v = v.wrapping_sub(1) & w;
            if !products.iter().any(|&s| s & !w == 0 && s & v == 0) {
                return false;
            }
            if v == 0 {
                break;
            }
        }
    }
    true
}

/// A sequence of nonzero functional elements with a common domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialRep {
    pub f: Vec<Elem>,
}

impl PartialRep {
    pub fn new(ra: &Ra, f: Vec<Elem>) -> Result<PartialRep, FinraError> {
        let rep = PartialRep { f };
        match rep.defect(ra) {
            None => Ok(rep),
            Some(msg) => Err(FinraError::Precondition(msg)),
        }
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// Why the sequence is not a partial representation, if it is not.
    pub fn defect(&self, ra: &Ra) -> Option<String> {
        let top = ra.top_elem();
        let dom = self.f.first().map(|&x| ra.compose(x, top));
        for (i, &x) in self.f.iter().enumerate() {
            if x == 0 {
                return Some(format!("f{i} is zero"));
            }
            if !ra.is_functional(x) {
                return Some(format!("f{i} is not functional"));
            }
            if Some(ra.compose(x, top)) != dom {
                return Some(format!("f{i} has a different domain"));
            }
        }
        None
    }

    /// `(i, j)` with `f_j <= f_i ; x`.
    pub fn contains(&self, ra: &Ra, x: Elem, i: usize, j: usize) -> bool {
        self.f[j] & !ra.compose(self.f[i], x) == 0
    }
}

impl fmt::Display for PartialRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.f.iter().map(|x| format!("{x:#x}")).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

/// A binary relation on `0..m` as a bit matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hat {
    m: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Hat {
    fn empty(m: usize) -> Hat {
        let words = m.div_ceil(64).max(1);
        Hat { m, words, bits: vec![0; m * words] }
    }

    fn insert(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i < self.m && j < self.m && self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn pairs(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for i in 0..self.m {
            for j in 0..self.m {
                if self.contains(i, j) {
                    out.insert((i, j));
                }
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Inclusion, reading pairs of a smaller relation as pairs of a larger one.
    pub fn subset_of(&self, other: &Hat) -> bool {
        (0..self.m).all(|i| (0..self.m).all(|j| !self.contains(i, j) || other.contains(i, j)))
    }

    pub fn meet(&self, other: &Hat) -> Hat {
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
        out
    }

    pub fn converse(&self) -> Hat {
        let mut out = Hat::empty(self.m);
        for i in 0..self.m {
            for j in 0..self.m {
                if self.contains(i, j) {
                    out.insert(j, i);
                }
            }
        }
        out
    }

    /// Relational composition `self | other`.
    pub fn then(&self, other: &Hat) -> Hat {
        let mut out = Hat::empty(self.m);
        for i in 0..self.m {
            for k in 0..self.m {
                if self.contains(i, k) {
                    for w in 0..self.words {
                        out.bits[i * self.words + w] |= other.bits[k * self.words + w];
                    }
                }
            }
        }
        out
    }
}

fn hat_matrix(ra: &Ra, f: &PartialRep, x: Elem) -> Hat {
    let m = f.len();
    let mut h = Hat::empty(m);
    for i in 0..m {
        let fx = ra.compose(f.f[i], x);
        for j in 0..m {
            if f.f[j] & !fx == 0 {
                h.insert(i, j);
            }
        }
    }
    h
}

/// `{(i, j) : f_j <= f_i ; x}`.
pub fn hat(ra: &Ra, f: &PartialRep, x: Elem) -> BTreeSet<(usize, usize)> {
    hat_matrix(ra, f, x).pairs()
}

fn check_indices(f: &PartialRep, i: usize, j: usize) -> Result<(), FinraError> {
    if i >= f.len() || j >= f.len() {
        return Err(FinraError::Precondition(format!("index ({i},{j}) outside 0..{}", f.len())));
    }
    Ok(())
}

/// Given `(i, j)` in `hat(f, x + y)`, restrict every `f_k` to a common
/// domain so that `(i, j)` lands in `hat(g, x)` or `hat(g, y)`.
pub fn extend_join(ra: &Ra, f: &PartialRep, i: usize, j: usize, x: Elem, y: Elem) -> Result<PartialRep, FinraError> {
    check_indices(f, i, j)?;
    if !f.contains(ra, x | y, i, j) {
        return Err(FinraError::Precondition(format!("({i},{j}) is not in hat(x+y)")));
    }
    let rx = ra.compose(f.f[i], x) & f.f[j];
    let r = if rx != 0 { rx } else { ra.compose(f.f[i], y) & f.f[j] };
    let dom = ra.compose(r, ra.top_elem());
    Ok(PartialRep { f: f.f.iter().map(|&fk| dom & fk).collect() })
}

/// Given `(i, j)` in `hat(f, x ; y)`, add a new index `m` with
/// `(i, m)` in `hat(g, x)` and `(m, j)` in `hat(g, y)`.
pub fn extend_comp(ra: &Ra, f: &PartialRep, i: usize, j: usize, x: Elem, y: Elem) -> Result<PartialRep, FinraError> {
    check_indices(f, i, j)?;
    if !f.contains(ra, ra.compose(x, y), i, j) {
        return Err(FinraError::Precondition(format!("({i},{j}) is not in hat(x;y)")));
    }
    let fix = ra.compose(f.f[i], x);
    let fjy = ra.compose(f.f[j], ra.converse(y));
    let s = fix & fjy;
    let (p, q) = tabular_witness(ra, 0, s)?;
    let r = q & ra.compose(p, fix) & ra.compose(p, fjy);
    let dom = ra.compose(r, ra.top_elem());
    let mut g: Vec<Elem> = f.f.iter().map(|&fk| dom & ra.compose(p, fk)).collect();
    g.push(dom & q);
    Ok(PartialRep { f: g })
}

/// Violations of the postconditions shared by both extension steps:
/// `hat(f, z) ⊆ hat(g, z)` and preservation of `f_k ; z & f_l = 0`.
fn extension_violations(ra: &Ra, f: &PartialRep, g: &PartialRep, zs: &[Elem]) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(d) = g.defect(ra) {
        out.push(format!("result is not a partial representation: {d}"));
        return out;
    }
    for &z in zs {
        if !hat_matrix(ra, f, z).subset_of(&hat_matrix(ra, g, z)) {
            out.push(format!("hat grows non-monotonically at z={}", ra.label(z)));
        }
        for k in 0..f.len() {
            let fz = ra.compose(f.f[k], z);
            let gz = ra.compose(g.f[k], z);
            for l in 0..f.len() {
                if fz & f.f[l] == 0 && gz & g.f[l] != 0 {
                    out.push(format!("zero product f{k};z&f{l} lost at z={}", ra.label(z)));
                }
            }
        }
    }
    out
}

/// Violations of the representation-like properties of `hat(f, -)` over
/// all pairs drawn from `xs`.
pub fn hat_law_violations(ra: &Ra, f: &PartialRep, xs: &[Elem]) -> Vec<String> {
    let hats: Vec<Hat> = xs.iter().map(|&x| hat_matrix(ra, f, x)).collect();
    let mut out = Vec::new();
    if !hat_matrix(ra, f, 0).is_empty() {
        out.push("hat(0) is not empty".into());
    }
    for (a, &x) in xs.iter().enumerate() {
        if hat_matrix(ra, f, ra.converse(x)) != hats[a].converse() {
            out.push(format!("hat(conv {}) differs from the converse", ra.label(x)));
        }
        for (b, &y) in xs.iter().enumerate() {
            let (hx, hy) = (&hats[a], &hats[b]);
            if x & !y == 0 && !hx.subset_of(hy) {
                out.push(format!("not monotone at {} <= {}", ra.label(x), ra.label(y)));
            }
            if !hx.meet(hy).subset_of(&hat_matrix(ra, f, x & y)) {
                out.push(format!("meet fails at {}, {}", ra.label(x), ra.label(y)));
            }
            if !hx.then(hy).subset_of(&hat_matrix(ra, f, ra.compose(x, y))) {
                out.push(format!("composition fails at {}, {}", ra.label(x), ra.label(y)));
            }
        }
    }
    out
}

/// Closure of `gens` under the operations, stopping once `cap` elements
/// are found; returned in discovery order.
pub fn generated_subalgebra(ra: &Ra, gens: &[Elem], cap: usize) -> Vec<Elem> {
    let top = ra.top_elem();
    let mut out: Vec<Elem> = Vec::new();
    let mut queue: VecDeque<Elem> = [0, top, ra.identity()].into_iter().chain(gens.iter().copied()).collect();
    while let Some(x) = queue.pop_front() {
        if out.contains(&x) {
            continue;
        }
        out.push(x);
        if out.len() >= cap {
            break;
        }
        queue.push_back(ra.converse(x));
        queue.push_back(top & !x);
        for &y in out.clone().iter() {
            queue.extend([x & y, x | y, ra.compose(x, y), ra.compose(y, x)]);
        }
    }
    out
}

/// What happened at one stage of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: usize,
    /// The scheduled quadruple `(i, j, x, y)`.
    pub quad: (usize, usize, Elem, Elem),
    pub join_step: bool,
    pub comp_step: bool,
    pub len: usize,
    /// `(0,1)` in `hat(w)`.
    pub a: bool,
    /// `f_0 ; v & f_1 = 0`.
    pub b: bool,
    /// `hat` of the previous stage is included in this one.
    pub c: bool,
    pub violations: Vec<String>,
}

impl StageRecord {
    pub fn ok(&self) -> bool {
        self.a && self.b && self.c && self.violations.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct StageReport {
    pub v: Elem,
    pub w: Elem,
    pub initial: PartialRep,
    pub stages: Vec<StageRecord>,
    pub rep: PartialRep,
    /// `(0,1)` lies in `hat(w)` but not in `hat(v)` at the end.
    pub separated: bool,
    pub hat_defects: Vec<String>,
    labels: Vec<String>,
}

impl StageReport {
    pub fn ok(&self) -> bool {
        self.separated && self.hat_defects.is_empty() && self.stages.iter().all(StageRecord::ok)
    }
}

impl fmt::Display for StageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lbl = |x: Elem| self.labels[x as usize].as_str();
        writeln!(f, "stage\ti\tj\tx\ty\tjoin\tcomp\tlen\ta\tb\tc")?;
        let yn = |b: bool| if b { "yes" } else { "no" };
        for s in &self.stages {
            let (i, j, x, y) = s.quad;
            writeln!(
                f,
                "{}\t{i}\t{j}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                s.stage,
                lbl(x),
                lbl(y),
                yn(s.join_step),
                yn(s.comp_step),
                s.len,
                yn(s.a),
                yn(s.b),
                yn(s.c)
            )?;
            for v in &s.violations {
                writeln!(f, "# violation: {v}")?;
            }
        }
        for v in &self.hat_defects {
            writeln!(f, "# hat violation: {v}")?;
        }
        write!(
            f,
            "REPRESENT v={} w={} stages={} length={} separated={} {}",
            lbl(self.v),
            lbl(self.w),
            self.stages.len(),
            self.rep.len(),
            yn(self.separated),
            if self.ok() { "pass" } else { "fail" }
        )
    }
}

/// Run `stages` stages of the construction separating `v < w`. Each stage
/// takes the next scheduled `(i, j, x, y)`, applies the join step when
/// `(i, j)` is in `hat(x + y)` and then the composition step when `(i, j)`
/// is in `hat(x ; y)`. Every postcondition is checked as it happens.
pub fn build_stage_rep(ra: &Ra, v: Elem, w: Elem, stages: usize, seed: u64) -> Result<StageReport, FinraError> {
    if stages == 0 {
        return Err(FinraError::Precondition("at least one stage is needed".into()));
    }
    if ra.n() > 16 {
        return Err(FinraError::CapExceeded { n: ra.n(), max: 16 });
    }
    if !is_tabular(ra) {
        return Err(FinraError::NotTabular);
    }
    let (wp, wq) = tabular_witness(ra, v, w)?;
    // conv(q);p <= w with q, p named as in the construction
    let (q, p) = (wp, wq);
    let x0 = ra.compose(p, ra.converse(w)) & q;
    let y0 = p & ra.compose(q, w);
    let mut f = PartialRep::new(ra, vec![x0, y0])?;
    let initial = f.clone();
    let all: Vec<Elem> = (0..=ra.top_elem()).collect();
    let xs = generated_subalgebra(ra, &[v, w], 16);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut queue: VecDeque<(usize, usize, Elem, Elem)> = VecDeque::new();
    let mut records = Vec::with_capacity(stages);

    for stage in 0..stages {
        if queue.is_empty() {
            // one round over everything at the current length
            let m = f.len();
            let mut round = Vec::with_capacity(m * m * xs.len() * xs.len());
            for i in 0..m {
                for j in 0..m {
                    for &x in &xs {
                        for &y in &xs {
                            round.push((i, j, x, y));
                        }
                    }
                }
            }
            round.shuffle(&mut rng);
            queue.extend(round);
        }
        let (i, j, x, y) = queue.pop_front().expect("nonempty round");
        let before = f.clone();
        let mut violations = Vec::new();
        let mut join_step = false;
        let mut comp_step = false;

        if f.contains(ra, x | y, i, j) {
            let g = extend_join(ra, &f, i, j, x, y)?;
            if !(g.contains(ra, x, i, j) || g.contains(ra, y, i, j)) {
                violations.push(format!("join step: ({i},{j}) in neither hat(x) nor hat(y)"));
            }
            violations.extend(extension_violations(ra, &f, &g, &all));
            f = g;
            join_step = true;
        }
        if f.contains(ra, ra.compose(x, y), i, j) {
            let g = extend_comp(ra, &f, i, j, x, y)?;
            let m = f.len();
            if !(g.contains(ra, x, i, m) && g.contains(ra, y, m, j)) {
                violations.push(format!("composition step: no witness {m} for ({i},{j})"));
            }
            violations.extend(extension_violations(ra, &f, &g, &all));
            f = g;
            comp_step = true;
        }
        let c = all.iter().all(|&z| hat_matrix(ra, &before, z).subset_of(&hat_matrix(ra, &f, z)));
        records.push(StageRecord {
            stage,
            quad: (i, j, x, y),
            join_step,
            comp_step,
            len: f.len(),
            a: f.contains(ra, w, 0, 1),
            b: ra.compose(f.f[0], v) & f.f[1] == 0,
            c,
            violations,
        });
    }
    let separated = f.contains(ra, w, 0, 1) && !f.contains(ra, v, 0, 1);
    let hat_defects = hat_law_violations(ra, &f, &xs);
    let labels = all.iter().map(|&x| ra.label(x)).collect();
    Ok(StageReport { v, w, initial, stages: records, rep: f, separated, hat_defects, labels })
}
