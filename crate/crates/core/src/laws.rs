//! The fixed catalog of laws about J-algebras with quasiprojections.
//!
//! `a` and `b` always denote the fixed generators; in a model without
//! fixed generators they become the variables `gen_a`, `gen_b`, so laws
//! whose hypotheses mention them are quantified over all such pairs.

use std::collections::BTreeMap;

use crate::model::{Law, LawKind};
use crate::term::Term;
use crate::thompson::{GeneratorSet, FORK_LAWS, GROUP_RELATIONS, M_INVERTIBILITY, M_REWRITING, PAIRING_LAW, SAME_RELATIONS};

const Q: &str = "conv(a);a <= id, conv(b);b <= id, 1 = conv(a);b";
const D: &str = "1 = a;1, 1 = b;1";
const UNI: &str = "a;conv(a) & b;conv(b) <= id";

fn qdu() -> String {
    format!("{Q}, {D}, {UNI}")
}

fn fnl(x: &str) -> String {
    format!("conv({x});({x}) <= id")
}

fn pml(x: &str) -> String {
    format!("({x});conv({x}) = id, conv({x});({x}) = id")
}

fn nb(x: &str, y: &str) -> String {
    format!("({x});conv(a) & ({y});conv(b)")
}

fn ot(x: &str, y: &str) -> String {
    format!("a;({x});conv(a) & b;({y});conv(b)")
}

fn fk(x: &str, y: &str) -> String {
    format!("a;({x}) & b;({y})")
}

/// Names of generator elements that may appear in law texts.
const NAMED: &[&str] = &[
    "K", "L", "U", "P", "P0", "A", "R", "R0", "B", "C", "pi0", "X2", "X3", "C2", "C3", "pi1", "pi2", "pi3",
];

fn named_env() -> BTreeMap<String, Term> {
    let g = GeneratorSet::standard();
    NAMED.iter().map(|n| (n.to_string(), g.get(n).expect("generator").clone())).collect()
}

struct Builder {
    env: BTreeMap<String, Term>,
    laws: Vec<Law>,
}

impl Builder {
    fn add(&mut self, id: &str, kind: LawKind, text: &str) {
        let law = Law::parse(id, kind, text).unwrap_or_else(|e| panic!("catalog law {id}: {e}"));
        let sub = |t: &Term| t.subst(&self.env);
        let hyps = law.hypotheses.iter().map(|f| subst_formula(f, &sub)).collect();
        let concls = law.conclusions.iter().map(|f| subst_formula(f, &sub)).collect();
        self.laws.push(Law::new(id, kind, hyps, concls));
    }

    fn thm(&mut self, id: &str, text: &str) {
        self.add(id, LawKind::Theorem, text);
    }

    fn note(&mut self, note: &str) {
        let last = self.laws.pop().expect("law to annotate");
        self.laws.push(last.with_note(note));
    }
}

fn subst_formula(f: &crate::model::Formula, sub: &impl Fn(&Term) -> Term) -> crate::model::Formula {
    crate::model::Formula { lhs: sub(&f.lhs), rel: f.rel, rhs: sub(&f.rhs) }
}

/// Every law, in a fixed order with unique ids.
pub fn law_catalog() -> Vec<Law> {
    let mut b = Builder { env: named_env(), laws: Vec::new() };
    let qdu = qdu();

    // order and lattice facts
    b.thm("p1.refl", "x <= x");
    b.thm("p1.trans", "x <= y, y <= z => x <= z");
    b.thm("p1.antisym", "x <= y, y <= x => x = y");
    b.thm("p2", "x & y <= y, x & y <= x");
    b.thm("p3", "x <= y, x <= z => x <= y & z");
    b.thm("p4", "x <= y, u <= v => x & u <= y & v");
    b.thm("p5", "conv(0) = 0, conv(1) = 1, conv(id) = id, 0;x = 0, id;x = x");
    b.thm("p6", "x <= y => conv(x) <= conv(y), x;z <= y;z, z;x <= z;y");
    b.thm("p7", "(u & v);(x & y) <= u;x & v;y");
    b.thm("p8", "x;y & z <= (z;conv(y) & x);y, x;y & z <= x;(y & conv(x);z)");
    b.thm("p9", "x <= x;1, x <= 1;x");
    b.thm("p10", "x <= x;conv(x);x, 1;x;1 = 1;conv(x);1");
    b.thm("cyc1", "(y;z & x);1 = (x;conv(z) & y);1, 1;(y;z & x) = 1;(conv(y);x & z)");
    b.thm("i1", "x;1 & y;z = (x;1 & y);z, y;z & 1;x = y;(z & 1;x)");
    b.thm("icyc", "id & u;v & x;y <= id & (u & conv(v));(conv(u);x & v;conv(y));(y & conv(x))");
    b.thm(
        "exch",
        "id & (u & x);(v & y) = id & (u & conv(v));(conv(x) & y), id & x;y = id & (x & conv(y));(conv(x) & y)",
    );

    // functional and permutational elements
    b.thm("func.zero", "conv(0);0 <= id");
    b.thm("func.id", &format!("{}, {}", fnl("id"), pml("id")));
    b.thm("func.down", &format!("{}, x <= y => {}", fnl("y"), fnl("x")));
    b.thm("func.comp", &format!("{}, {} => {}", fnl("x"), fnl("y"), fnl("x;y")));
    b.thm(
        "func.pm",
        &format!("{}, {} => {}, {}", pml("x"), pml("y"), pml("x;y"), pml("conv(x)")),
    );
    let grp = "e <= id, x;conv(x) = e, conv(x);x = e";
    b.thm(
        "grp.closure",
        &format!("{grp}, y;conv(y) = e, conv(y);y = e => x;y;conv(x;y) = e, conv(x;y);x;y = e"),
    );
    b.note("tested for sampled e only");
    b.thm("grp.identity", &format!("{grp} => e;x = x, x;e = x, e;conv(e) = e, conv(e);e = e"));
    b.note("tested for sampled e only");
    b.thm("grp.inverse", &format!("{grp} => conv(x);conv(conv(x)) = e, conv(conv(x));conv(x) = e"));
    b.note("tested for sampled e only");
    b.thm(
        "f-dist",
        &format!("{} => f;(x & y) = f;x & f;y, (x & y);conv(f) = x;conv(f) & y;conv(f)", fnl("f")),
    );
    b.thm("prop1a", &format!("1 = conv(c);d, {} => conv(c);c = id", fnl("c")));
    b.thm(
        "prop2a",
        "1 = x;1, 1 = y;1, x;conv(x) & y;conv(y) <= id => x;conv(x) & y;conv(y) = id",
    );
    b.thm("f1", &format!("{} => f & (f & x);1 <= x", fnl("f")));
    b.thm("q1", &format!("{}, {}, x <= conv(c);d => x = conv(c);(id & c;x;conv(d));d", fnl("c"), fnl("d")));

    // pairing
    let pr_rhs = "(u;conv(p) & x;conv(q));(p;v & q;y)";
    b.thm("1/2pr", &format!("{}, {} => u;v & x;y >= {pr_rhs}", fnl("p"), fnl("q")));
    b.thm(
        "pair.i",
        &format!("{}, {}, u <= conv(c);d, v;conv(y) <= conv(p);q => u;v & x;y <= {pr_rhs}", fnl("c"), fnl("d")),
    );
    b.thm(
        "pair.ii",
        &format!(
            "{}, {}, {}, {}, u <= conv(c);d, v;conv(y) <= conv(p);q => u;v & x;y = {pr_rhs}",
            fnl("c"),
            fnl("d"),
            fnl("p"),
            fnl("q")
        ),
    );
    let p2h = format!("{}, {}, u;v & x;y <= conv(c);d", fnl("c"), fnl("d"));
    b.thm("pair2.i", &format!("{p2h}, conv(u);x & v;conv(y) <= conv(p);q => u;v & x;y <= {pr_rhs}"));
    b.thm(
        "pair2.ii",
        &format!("{p2h}, {}, {}, conv(u);x & v;conv(y) <= conv(p);q => u;v & x;y = {pr_rhs}", fnl("p"), fnl("q")),
    );
    b.thm("pair2.iii", &format!("{p2h}, {}, {}, 1 = conv(p);q => u;v & x;y = {pr_rhs}", fnl("p"), fnl("q")));
    b.thm("Pr", &format!("{Q} => {}", PAIRING_LAW.1));

    // fork axioms
    let qu = format!("{Q}, {UNI}");
    for (id, text) in FORK_LAWS {
        b.thm(id, &format!("{qu} => {text}"));
    }

    // formulas separating representable algebras
    b.add(
        "J",
        LawKind::Representable,
        "conv(u);x & v;conv(y) <= conv(p);q => u;v & x;y <= (u;conv(p) & x;conv(q));(p;v & q;y)",
    );
    b.add(
        "L",
        LawKind::Representable,
        "x20;x03 & x21;x13 & x24;x43 <= x20;(conv(x20);x21 & x03;conv(x13) \
         & (conv(x20);x24 & x03;conv(x43));(conv(x24);x21 & x43;conv(x13)));x13",
    );
    b.add(
        "M",
        LawKind::Representable,
        "x01 & (x02 & x05;x52);(x21 & x26;x61) <= x05;((conv(x05);x01 & x52;x21);conv(x61) \
         & x52;x26 & conv(x05);(x01;conv(x61) & x02;x26));x61",
    );
    let k_hyps = format!(
        "{}, {}, a;1 = b;1, {UNI}, conv(a);1;b = conv(a);b, {}, {}",
        fnl("a"),
        fnl("b"),
        fnl("c"),
        fnl("d")
    );
    let k_concl = "u;v & x;y = (u;conv(a) & x;conv(b));(a;v & b;y)";
    let k_cover = "conv(u);x & v;conv(y) <= conv(a);b";
    for (suffix, t) in [
        ("uv-xy", "u;v & x;y"),
        ("u", "u & x;y;conv(v)"),
        ("v", "v & conv(u);x;y"),
        ("x", "x & u;v;conv(y)"),
        ("y", "y & conv(x);u;v"),
    ] {
        b.add(
            &format!("K.{suffix}"),
            LawKind::Representable,
            &format!("{k_hyps}, {t} <= conv(c);d, {k_cover} => {k_concl}"),
        );
    }

    // fork-style operations
    b.thm("f-closed", &format!("{}, {}, {UNI}, {}, {} => {}, {}", fnl("a"), fnl("b"), fnl("x"), fnl("y"), fnl(&nb("x", "y")), fnl(&ot("x", "y"))));
    b.thm(
        "fgh-closed",
        &format!(
            "{qu}, {}, {} => {}, {}, {}, {}, {}, {}, {}, {}",
            fnl("x"),
            fnl("y"),
            fnl("0"),
            fnl("id"),
            fnl("a"),
            fnl("b"),
            fnl("x & y"),
            fnl("x;y"),
            fnl(&nb("x", "y")),
            fnl(&ot("x", "y"))
        ),
    );
    b.thm("g-id", &format!("a;conv(a) & b;conv(b) = id => {} = id", ot("id", "id")));
    b.thm(
        "gg-rule",
        &format!(
            "{Q} => ({});({}) = {}, ({});({}) = {}, {} = ({});({})",
            ot("u", "v"),
            ot("x", "y"),
            ot("u;x", "v;y"),
            ot("id", "y"),
            ot("x", "id"),
            ot("x", "y"),
            ot("x", "y"),
            ot("x", "id"),
            ot("id", "y")
        ),
    );
    b.thm("g-closed", &format!("{qdu}, {}, {} => {}", pml("x"), pml("y"), pml(&ot("x", "y"))));
    b.thm(
        "fg-rule",
        &format!(
            "{Q} => ({});({}) = {}, ({});({}) = {}, ({});({}) = {}",
            nb("x", "y"),
            ot("u", "v"),
            nb("x;u", "y;v"),
            nb("x", "y"),
            ot("u", "id"),
            nb("x;u", "y"),
            nb("x", "y"),
            ot("id", "v"),
            nb("x", "y;v")
        ),
    );
    b.thm("fh-rule", &format!("{Q} => ({});({}) = u;x & v;y", nb("u", "v"), fk("x", "y")));
    b.thm("Ux0K", &format!("{Q} => (conv(a) & conv(b));({});a = x", ot("x", "id")));
    b.thm("sub0", &format!("{Q} => (conv(a) & conv(b));a = id, (conv(a) & conv(b));b = id"));
    let qd = format!("{Q}, {D}");
    b.thm("pok.i", &format!("{qd}, 1 = y;1 => ({});a = a;x", ot("x", "y")));
    b.thm("pok.ii", &format!("{qd}, 1 = x;1 => ({});b = b;y", ot("x", "y")));
    b.thm("pok.iii", &format!("{qd}, 1 = y;1 => ({});a = a", ot("id", "y")));
    b.thm("pok.iv", &format!("{qd}, 1 = x;1 => ({});b = b", ot("x", "id")));
    b.thm("pok.v", &format!("{qd} => ({});a = a;x, ({});b = b;y", ot("x", "id"), ot("id", "y")));
    b.thm("swap", &format!("{qd} => P;a = b, P;b = a"));
    b.thm(
        "perms",
        &format!(
            "{qdu} => {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}",
            fnl("K"),
            fnl("L"),
            fnl("U"),
            fnl("conv(U)"),
            pml("P"),
            pml("P0"),
            pml("R"),
            pml("R0"),
            pml("A"),
            pml("B"),
            pml("C"),
            pml("pi0")
        ),
    );
    b.thm(
        "Rg",
        &format!(
            "{qdu} => A;({});conv(A) = {}, conv(A);({});A = {}",
            ot("id", "x"),
            ot("id", &ot("id", "x")),
            ot("x", "id"),
            ot(&ot("x", "id"), "id")
        ),
    );

    // Thompson's groups and monoid
    for (id, eq) in GROUP_RELATIONS {
        b.thm(id, &format!("{qdu} => {eq}"));
    }
    for (id, eq) in M_INVERTIBILITY {
        b.thm(&format!("M.{id}"), &format!("{qdu} => {eq}"));
    }
    b.thm(
        "M.comm",
        &format!("{qdu}, {}, {} => ({});({}) = ({});({})", fnl("x"), fnl("y"), ot("x", "id"), ot("id", "y"), ot("id", "y"), ot("x", "id")),
    );
    b.thm(
        "M.split",
        &format!("{qdu}, {} => x;U = U;({});({})", fnl("x"), ot("x", "id"), ot("id", "x")),
    );
    b.thm(
        "M.rebuild",
        &format!(
            "{qdu}, {} => x = U;({});({});({});({})",
            fnl("x"),
            ot("x", "id"),
            ot("id", "x"),
            ot("K", "id"),
            ot("id", "L")
        ),
    );
    for (id, eq) in M_REWRITING {
        b.thm(&format!("M.{id}"), &format!("{qdu} => {eq}"));
    }
    for (id, eq) in SAME_RELATIONS {
        b.thm(id, &format!("{qdu} => {eq}"));
    }
    b.laws
}

pub fn find_law(id: &str) -> Option<Law> {
    law_catalog().into_iter().find(|l| l.id == id)
}
