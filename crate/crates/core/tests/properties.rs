mod common;

use std::collections::BTreeSet;

use jalg::branchrel::{BranchModel, BranchRelation};
use jalg::finra::{enumerate_integral, functional_elements, hat, make_proper_ra, Elem, PartialRep, Ra};
use jalg::model::{is_functional, is_permutational, Model};
use jalg::term::{format_term, leaf_paths, mapsto, parse_term, Term, TreeExpr};
use jalg::thompson::{otimes, Workbench};
use proptest::prelude::*;

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::Zero),
        Just(Term::Top),
        Just(Term::Id),
        Just(Term::GenA),
        Just(Term::GenB),
        prop::sample::select(vec!["x", "y", "z", "u", "v1"]).prop_map(Term::var),
    ];
    leaf.prop_recursive(8, 96, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::conv),
            inner.clone().prop_map(Term::compl),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::comp(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::meet(x, y)),
            (inner.clone(), inner).prop_map(|(x, y)| Term::join(x, y)),
        ]
    })
}

fn depth(t: &Term) -> usize {
    match t {
        Term::Conv(x) | Term::Compl(x) => 1 + depth(x),
        Term::Comp(x, y) | Term::Meet(x, y) | Term::Join(x, y) => 1 + depth(x).max(depth(y)),
        _ => 0,
    }
}

fn arb_tree(leaves: &'static [char]) -> impl Strategy<Value = TreeExpr> {
    let leaf = prop::sample::select(leaves).prop_map(TreeExpr::Leaf);
    leaf.prop_recursive(5, 24, 2, |inner| (inner.clone(), inner).prop_map(|(l, r)| TreeExpr::pair(l, r)))
}

/// Relabel leaves left to right so that every leaf is distinct.
fn distinct(e: &TreeExpr) -> TreeExpr {
    fn go(e: &TreeExpr, next: &mut u8) -> TreeExpr {
        match e {
            TreeExpr::Leaf(_) => {
                *next += 1;
                TreeExpr::Leaf((b'A' + *next - 1) as char)
            }
            TreeExpr::Pair(l, r) => {
                let l = go(l, next);
                TreeExpr::pair(l, go(r, next))
            }
        }
    }
    go(e, &mut 0)
}

/// Paths by direct recursion on the tree: a leaf maps to the identity and
/// a pair prefixes `a` on the left and `b` on the right.
fn paths_by_recursion(e: &TreeExpr) -> Vec<(char, Term)> {
    match e {
        TreeExpr::Leaf(c) => vec![(*c, Term::Id)],
        TreeExpr::Pair(l, r) => {
            let mut out: Vec<(char, Term)> =
                paths_by_recursion(l).into_iter().map(|(c, p)| (c, Term::comp(Term::GenA, p))).collect();
            out.extend(paths_by_recursion(r).into_iter().map(|(c, p)| (c, Term::comp(Term::GenB, p))));
            out
        }
    }
}

fn branch(m: &BranchModel, t: &Term) -> BranchRelation {
    m.eval_closed(t).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn format_then_parse_is_identity(t in arb_term()) {
        prop_assert!(depth(&t) <= 8);
        let text = format_term(&t);
        prop_assert_eq!(parse_term(&text).unwrap(), t, "{}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn leaf_paths_match_recursion(e in arb_tree(&['p', 'q', 'r', 's'])) {
        let m = BranchModel::new();
        let got = leaf_paths(&e);
        let expected = paths_by_recursion(&e);
        let leaves: BTreeSet<char> = expected.iter().map(|(c, _)| *c).collect();
        prop_assert_eq!(got.keys().copied().collect::<BTreeSet<char>>(), leaves.clone());
        for c in leaves {
            let want = expected
                .iter()
                .filter(|(d, _)| *d == c)
                .map(|(_, p)| p.clone())
                .reduce(Term::meet)
                .unwrap();
            prop_assert!(branch(&m, &got[&c]).equal(&branch(&m, &want)), "leaf {}", c);
        }
    }

    #[test]
    fn mapsto_self_is_identity(e in arb_tree(&['p'])) {
        let e = distinct(&e);
        let m = BranchModel::new();
        prop_assert!(branch(&m, &mapsto(&e, &e)).equal(&BranchRelation::id()), "{}", e);
    }
}

#[test]
fn leq_is_a_partial_order_on_the_sample() {
    let m = BranchModel::new();
    let s = common::branch_sample(&m);
    for (nx, x) in &s {
        assert!(m.leq(x, x), "reflexive at {nx}");
        for (ny, y) in &s {
            if m.leq(x, y) && m.leq(y, x) {
                assert!(m.equal(x, y), "antisymmetric at {nx}, {ny}");
            }
            for (nz, z) in &s {
                if m.leq(x, y) && m.leq(y, z) {
                    assert!(m.leq(x, z), "transitive at {nx}, {ny}, {nz}");
                }
            }
        }
    }
}

fn four_atom_algebras() -> Vec<(String, Ra)> {
    let a = enumerate_integral("1'abb̄").unwrap();
    let b = enumerate_integral("1'abc").unwrap();
    vec![
        ("Re(2)".into(), Ra::new(make_proper_ra(2).unwrap())),
        ("1'abb̄ #0".into(), Ra::new(a[0].clone())),
        ("1'abc #0".into(), Ra::new(b[0].clone())),
        ("1'abc last".into(), Ra::new(b[b.len() - 1].clone())),
    ]
}

/// `(i, j)` with `f_j <= f_i ; x`, computed directly.
fn hat_direct(ra: &Ra, f: &[Elem], x: Elem) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for (i, &fi) in f.iter().enumerate() {
        for (j, &fj) in f.iter().enumerate() {
            if fj & !ra.compose(fi, x) == 0 {
                out.insert((i, j));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hat_respects_order_meet_product_converse_zero(alg in 0usize..4, picks in prop::collection::vec(any::<prop::sample::Index>(), 1..6), x_i in any::<prop::sample::Index>(), y_i in any::<prop::sample::Index>()) {
        let algs = four_atom_algebras();
        let (name, ra) = &algs[alg];
        let top = ra.top_elem();
        let fns: Vec<Elem> = functional_elements(ra).into_iter().filter(|&x| x != 0).collect();
        let first = fns[picks[0].index(fns.len())];
        let same_dom: Vec<Elem> = fns.iter().copied().filter(|&x| ra.compose(x, top) == ra.compose(first, top)).collect();
        let mut f = vec![first];
        f.extend(picks[1..].iter().map(|p| same_dom[p.index(same_dom.len())]));
        let rep = PartialRep::new(ra, f.clone()).unwrap();
        let x = x_i.index(top as usize + 1) as Elem;
        let y = y_i.index(top as usize + 1) as Elem;
        let h = |z: Elem| hat_direct(ra, &f, z);
        prop_assert_eq!(hat(ra, &rep, x), h(x), "{}: library hat differs", name);
        if x & !y == 0 {
            prop_assert!(h(x).is_subset(&h(y)), "{}: monotone", name);
        }
        let both: BTreeSet<_> = h(x).intersection(&h(y)).copied().collect();
        prop_assert!(both.is_subset(&h(x & y)), "{}: meet", name);
        let hx = h(x);
        let hy = h(y);
        let relprod: BTreeSet<(usize, usize)> = hx
            .iter()
            .flat_map(|&(i, k)| hy.iter().filter(move |&&(k2, _)| k2 == k).map(move |&(_, j)| (i, j)))
            .collect();
        prop_assert!(relprod.is_subset(&h(ra.compose(x, y))), "{}: composition", name);
        let conv: BTreeSet<(usize, usize)> = hx.iter().map(|&(i, j)| (j, i)).collect();
        prop_assert_eq!(h(ra.converse(x)), conv, "{}: converse", name);
        prop_assert!(h(0).is_empty(), "{}: zero", name);
    }
}

#[test]
fn exactly_four_generators_are_functional_but_not_permutational() {
    let wb = Workbench::new();
    let m = BranchModel::new();
    let names = ["K", "L", "U", "conv(U)", "P", "P0", "R", "R0", "A", "B", "C", "pi0"];
    let mut odd = Vec::new();
    for n in names {
        let v = wb.value(n).unwrap();
        let f = is_functional(&m, &v).unwrap();
        let p = is_permutational(&m, &v).unwrap();
        assert!(f || p, "{n} is neither");
        if f && !p {
            odd.push(n);
        }
    }
    assert_eq!(odd, ["K", "L", "U", "conv(U)"]);
}

fn g(x: &str) -> Term {
    parse_term(x).unwrap()
}

#[test]
fn rotation_conjugates_deferred_elements() {
    let wb = Workbench::new();
    for x in ["A", "B", "P", "K;conv(K)"] {
        let lhs = Term::comp_all([g("A"), otimes(Term::Id, g(x)), g("conv(A)")]);
        let rhs = otimes(Term::Id, otimes(Term::Id, g(x)));
        let (l, r) = (wb.value(&format_term(&lhs)).unwrap(), wb.value(&format_term(&rhs)).unwrap());
        assert!(l.equal(&r), "x = {x}");
    }
}

const GG_SAMPLE: [&str; 10] = ["id", "a", "b", "conv(a)", "conv(b)", "a;b", "P", "A", "K", "conv(U)"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_of_products_is_product_of_tensors(u in prop::sample::select(&GG_SAMPLE[..]), v in prop::sample::select(&GG_SAMPLE[..]), x in prop::sample::select(&GG_SAMPLE[..]), y in prop::sample::select(&GG_SAMPLE[..])) {
        let wb = Workbench::new();
        let val = |t: &Term| wb.value(&format_term(t)).unwrap();
        let lhs = Term::comp(otimes(g(u), g(v)), otimes(g(x), g(y)));
        let rhs = otimes(Term::comp(g(u), g(x)), Term::comp(g(v), g(y)));
        prop_assert!(val(&lhs).equal(&val(&rhs)));
        let swap = Term::comp(otimes(Term::Id, g(x)), otimes(g(y), Term::Id));
        prop_assert!(val(&swap).equal(&val(&otimes(g(y), g(x)))));
        let split = Term::comp(otimes(g(x), Term::Id), otimes(Term::Id, g(y)));
        prop_assert!(val(&split).equal(&val(&otimes(g(x), g(y)))));
    }
}

/// The second line as printed claims `(1'⊗x);(y⊗1') = x⊗y`; with `x`, `y`
/// distinct that fails, while `y⊗x` holds.
#[test]
fn printed_second_tensor_rule_fails() {
    let wb = Workbench::new();
    let val = |t: &Term| wb.value(&format_term(t)).unwrap();
    let lhs = val(&Term::comp(otimes(Term::Id, g("A")), otimes(g("P"), Term::Id)));
    assert!(!lhs.equal(&val(&otimes(g("A"), g("P")))));
    assert!(lhs.equal(&val(&otimes(g("P"), g("A")))));
}
