//! The formulas (J), (L), (M) quantified over all elements, and (K).

use std::fmt::Write as _;
use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{atoms_of, AtomStructure, Elem, FinraError, Ra};
use crate::model::{check_law, find_law, LawReport, ModelError, Strategy};

/// Failure columns in table order.
pub const JLM_COLUMNS: [&str; 8] = ["JLM", "JL", "JM", "LM", "J", "L", "M", "none"];

const EXHAUSTIVE_ATOMS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JlmMode {
    /// Every variable ranges over every element.
    Exhaustive,
    /// Every variable ranges over the atoms only.
    Atoms,
    Sample { n: usize, seed: u64 },
}

/// A failing assignment for each formula that fails, keyed by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JlmReport {
    pub j: Option<Vec<(&'static str, Elem)>>,
    pub l: Option<Vec<(&'static str, Elem)>>,
    pub m: Option<Vec<(&'static str, Elem)>>,
}

impl JlmReport {
    /// Index into [`JLM_COLUMNS`].
    pub fn column(&self) -> usize {
        match (self.j.is_some(), self.l.is_some(), self.m.is_some()) {
            (true, true, true) => 0,
            (true, true, false) => 1,
            (true, false, true) => 2,
            (false, true, true) => 3,
            (true, false, false) => 4,
            (false, true, false) => 5,
            (false, false, true) => 6,
            (false, false, false) => 7,
        }
    }
}

const J_VARS: [&str; 6] = ["u", "v", "x", "y", "p", "q"];
const L_VARS: [&str; 6] = ["x20", "x03", "x21", "x13", "x24", "x43"];
const M_VARS: [&str; 7] = ["x01", "x02", "x05", "x52", "x21", "x26", "x61"];

/// Element operations by table lookup.
struct Ops<'a> {
    ra: &'a Ra,
}

impl Ops<'_> {
    #[inline]
    fn c(&self, x: Elem, y: Elem) -> Elem {
        self.ra.compose(x, y)
    }
    #[inline]
    fn v(&self, x: Elem) -> Elem {
        self.ra.converse(x)
    }

    /// `conv(u);x & v;conv(y) <= conv(p);q => u;v & x;y <= (u;conv(p) & x;conv(q));(p;v & q;y)`
    fn j_fails(&self, e: [Elem; 6]) -> bool {
        let [u, v, x, y, p, q] = e;
        let h = self.c(self.v(u), x) & self.c(v, self.v(y));
        if h & !self.c(self.v(p), q) != 0 {
            return false;
        }
        let lhs = self.c(u, v) & self.c(x, y);
        let rhs = self.c(self.c(u, self.v(p)) & self.c(x, self.v(q)), self.c(p, v) & self.c(q, y));
        lhs & !rhs != 0
    }

    fn l_fails(&self, e: [Elem; 6]) -> bool {
        let [x20, x03, x21, x13, x24, x43] = e;
        let lhs = self.c(x20, x03) & self.c(x21, x13) & self.c(x24, x43);
        let (x02, x31, x42, x34) = (self.v(x20), self.v(x13), self.v(x24), self.v(x43));
        let t = self.c(x02, x21)
            & self.c(x03, x31)
            & self.c(self.c(x02, x24) & self.c(x03, x34), self.c(x42, x21) & self.c(x43, x31));
        lhs & !self.c(self.c(x20, t), x13) != 0
    }

    fn m_fails(&self, e: [Elem; 7]) -> bool {
        let [x01, x02, x05, x52, x21, x26, x61] = e;
        let lhs = x01 & self.c(x02 & self.c(x05, x52), x21 & self.c(x26, x61));
        lhs & !self.m_rhs(x01, x02, x05, x52, x21, x26, x61) != 0
    }

    #[allow(clippy::too_many_arguments)]
    fn m_rhs(&self, x01: Elem, x02: Elem, x05: Elem, x52: Elem, x21: Elem, x26: Elem, x61: Elem) -> Elem {
        let (x50, x16) = (self.v(x05), self.v(x61));
        let inner = self.c(self.c(x50, x01) & self.c(x52, x21), x16)
            & self.c(x52, x26)
            & self.c(x50, self.c(x01, x16) & self.c(x02, x26));
        self.c(self.c(x05, inner), x61)
    }

    fn search(&self, vals: &[Elem]) -> JlmReport {
        JlmReport {
            j: self.j_search(vals).map(|e| named(J_VARS, e)),
            l: self.l_search(vals).map(|e| named(L_VARS, e)),
            m: self.m_search(vals).map(|e| named(M_VARS, e)),
        }
    }

    fn j_search(&self, vals: &[Elem]) -> Option<[Elem; 6]> {
        for &u in vals {
            let cu = self.v(u);
            for &x in vals {
                let h1 = self.c(cu, x);
                for &v in vals {
                    let uv = self.c(u, v);
                    if uv == 0 {
                        continue;
                    }
                    for &y in vals {
                        let lhs = uv & self.c(x, y);
                        if lhs == 0 {
                            continue;
                        }
                        let h = h1 & self.c(v, self.v(y));
                        for &p in vals {
                            let cp = self.v(p);
                            let (up, pv) = (self.c(u, cp), self.c(p, v));
                            for &q in vals {
                                if h & !self.c(cp, q) != 0 {
                                    continue;
                                }
                                let rhs = self.c(up & self.c(x, self.v(q)), pv & self.c(q, y));
                                if lhs & !rhs != 0 {
                                    return Some([u, v, x, y, p, q]);
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    fn l_search(&self, vals: &[Elem]) -> Option<[Elem; 6]> {
        for &x20 in vals {
            let x02 = self.v(x20);
            for &x03 in vals {
                let a = self.c(x20, x03);
                if a == 0 {
                    continue;
                }
                for &x21 in vals {
                    let t1 = self.c(x02, x21);
                    for &x13 in vals {
                        let l2 = a & self.c(x21, x13);
                        if l2 == 0 {
                            continue;
                        }
                        let x31 = self.v(x13);
                        let core = t1 & self.c(x03, x31);
                        for &x24 in vals {
                            let (s1, s2) = (self.c(x02, x24), self.c(self.v(x24), x21));
                            for &x43 in vals {
                                let lhs = l2 & self.c(x24, x43);
                                if lhs == 0 {
                                    continue;
                                }
                                let x34 = self.v(x43);
                                let t = core & self.c(s1 & self.c(x03, x34), s2 & self.c(x43, x31));
                                if lhs & !self.c(self.c(x20, t), x13) != 0 {
                                    return Some([x20, x03, x21, x13, x24, x43]);
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// The left side of (M) is `x01 & K` with `K` free of `x01`, and the
    /// right side is monotone in `x01`, so (M) fails somewhere iff it fails
    /// with `x01` an atom below `K`. This holds for both ranges of `vals`.
    fn m_search(&self, vals: &[Elem]) -> Option<[Elem; 7]> {
        for &x02 in vals {
            for &x05 in vals {
                for &x52 in vals {
                    let left = x02 & self.c(x05, x52);
                    if left == 0 {
                        continue;
                    }
                    for &x26 in vals {
                        for &x61 in vals {
                            let r = self.c(x26, x61);
                            for &x21 in vals {
                                let k = self.c(left, x21 & r);
                                for a in atoms_of(k) {
                                    let x01 = 1 << a;
                                    if x01 & !self.m_rhs(x01, x02, x05, x52, x21, x26, x61) != 0 {
                                        return Some([x01, x02, x05, x52, x21, x26, x61]);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }
}

fn named<const N: usize>(vars: [&'static str; N], e: [Elem; N]) -> Vec<(&'static str, Elem)> {
    vars.into_iter().zip(e).collect()
}

/// Which of (J), (L), (M) fail in `ra`, with a failing assignment for each.
pub fn check_jlm(ra: &Ra, mode: JlmMode) -> Result<JlmReport, FinraError> {
    let ops = Ops { ra };
    match mode {
        JlmMode::Exhaustive => {
            if ra.n() > EXHAUSTIVE_ATOMS {
                return Err(FinraError::CapExceeded { n: ra.n(), max: EXHAUSTIVE_ATOMS });
            }
            let vals: Vec<Elem> = (0..=ra.top_elem()).collect();
            Ok(ops.search(&vals))
        }
        JlmMode::Atoms => {
            if ra.n() > 2 * EXHAUSTIVE_ATOMS {
                return Err(FinraError::CapExceeded { n: ra.n(), max: 2 * EXHAUSTIVE_ATOMS });
            }
            let vals: Vec<Elem> = (0..ra.n()).map(|a| 1 << a).collect();
            Ok(ops.search(&vals))
        }
        JlmMode::Sample { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let top = ra.top_elem();
            let mut draw = || rng.gen_range(0..=top);
            let mut report = JlmReport::default();
            for _ in 0..n {
                let e = [draw(), draw(), draw(), draw(), draw(), draw()];
                if report.j.is_none() && ops.j_fails(e) {
                    report.j = Some(named(J_VARS, e));
                }
                let e = [draw(), draw(), draw(), draw(), draw(), draw()];
                if report.l.is_none() && ops.l_fails(e) {
                    report.l = Some(named(L_VARS, e));
                }
                let e = [draw(), draw(), draw(), draw(), draw(), draw(), draw()];
                if report.m.is_none() && ops.m_fails(e) {
                    report.m = Some(named(M_VARS, e));
                }
            }
            Ok(report)
        }
    }
}

/// Number of structures in each failure column, checking in parallel.
pub fn jlm_profile(structures: &[AtomStructure], mode: JlmMode) -> Result<[usize; 8], FinraError> {
    let threads = thread::available_parallelism().map(|p| p.get()).unwrap_or(1).min(16);
    let chunk = structures.len().div_ceil(threads).max(1);
    let results: Vec<Result<[usize; 8], FinraError>> = thread::scope(|scope| {
        let handles: Vec<_> = structures
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    let mut counts = [0usize; 8];
                    for s in part {
                        counts[check_jlm(&Ra::new(s.clone()), mode)?.column()] += 1;
                    }
                    Ok(counts)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("profile worker panicked")).collect()
    });
    let mut total = [0usize; 8];
    for r in results {
        for (t, c) in total.iter_mut().zip(r?) {
            *t += c;
        }
    }
    Ok(total)
}

/// One table row as tab-separated values, with a header line.
pub fn profile_tsv(label: &str, total: usize, profile: &[usize; 8]) -> String {
    let mut out = String::from("atoms\ttotal");
    for c in JLM_COLUMNS {
        let _ = write!(out, "\t{c}");
    }
    let _ = write!(out, "\n{label}\t{total}");
    for c in profile {
        let _ = write!(out, "\t{c}");
    }
    out.push('\n');
    out
}

/// Sampled check of the five theorem instances of (K).
pub fn check_k(ra: &Ra, samples: usize, seed: u64) -> Result<Vec<LawReport>, ModelError> {
    ["K.uv-xy", "K.u", "K.v", "K.x", "K.y"]
        .iter()
        .map(|id| {
            let law = find_law(id).expect("K laws are in the catalog");
            check_law(ra, &law, Strategy::Sample { n: samples, seed })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finra::make_proper_ra;

    #[test]
    fn representable_pass() {
        for n in 1..=2 {
            let ra = Ra::new(make_proper_ra(n).unwrap());
            assert_eq!(check_jlm(&ra, JlmMode::Exhaustive).unwrap().column(), 7);
        }
    }

    #[test]
    fn tsv_row() {
        let t = profile_tsv("1'", 1, &[0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(t, "atoms\ttotal\tJLM\tJL\tJM\tLM\tJ\tL\tM\tnone\n1'\t1\t0\t0\t0\t0\t0\t0\t0\t1\n");
    }
}
