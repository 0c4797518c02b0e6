mod common;

use common::{branch_sample, random_query, random_relation, SeqPair, J_AXIOMS};
use jalg::branchrel::{BoundedClosure, BranchModel, BranchRelation};
use jalg::model::{eval, Env, Model};
use jalg::term::parse_term;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn j_axioms_hold_on_every_triple_of_the_sample() {
    let m = BranchModel::new();
    let s = branch_sample(&m);
    for (id, lhs, rhs) in J_AXIOMS {
        let (l, r) = (parse_term(lhs).unwrap(), parse_term(rhs).unwrap());
        let vars: Vec<String> = l.vars().union(&r.vars()).cloned().collect();
        for idx in 0..s.len().pow(vars.len() as u32) {
            let mut env = Env::new();
            let mut i = idx;
            for v in &vars {
                env.insert(v.clone(), s[i % s.len()].1.clone());
                i /= s.len();
            }
            let (a, b) = (eval(&m, &l, &env).unwrap(), eval(&m, &r, &env).unwrap());
            assert!(m.equal(&a, &b), "{id} fails at {:?}", env.keys().map(|k| (k, env[k].to_string())).collect::<Vec<_>>());
        }
    }
}

#[test]
fn converse_is_an_involution_on_constraints() {
    let m = BranchModel::new();
    for (n, x) in branch_sample(&m) {
        assert_eq!(x.converse().converse(), x, "{n}");
    }
}

/// Relations drawn half from random constraint sets and half from
/// products and meets of sample elements.
fn relations(count: usize, seed: u64) -> Vec<BranchRelation> {
    let m = BranchModel::new();
    let s = branch_sample(&m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            if k % 2 == 0 {
                random_relation(&mut rng)
            } else {
                let (x, y) = (&s[rng.gen_range(0..s.len())].1, &s[rng.gen_range(0..s.len())].1);
                if rng.gen_bool(0.5) {
                    m.comp(x, y).unwrap()
                } else {
                    x.meet(y)
                }
            }
        })
        .collect()
}

#[test]
fn saturation_agrees_with_bounded_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut positives = 0;
    for r in relations(400, 7) {
        let mut bc = BoundedClosure::new(&r, 8);
        for _ in 0..50 {
            let q = random_query(&mut rng, &r, 6);
            let fast = r.entails(&q);
            assert_eq!(fast, r.is_zero() || bc.holds(&q), "{r} vs {q:?}");
            assert_eq!(fast, r.entails_bfs(&q, 8), "{r} vs {q:?}");
            positives += fast as usize;
        }
    }
    assert!(positives > 2000, "too few entailed queries: {positives}");
}

/// Interleaved sequences are a concrete bijective carrier, so every
/// entailed equation must hold in any pair of them satisfying the
/// constraints. Checking only a short prefix keeps truncation out of it.
#[test]
fn entailed_constraints_hold_in_random_tree_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for r in relations(120, 11).into_iter().filter(|r| !r.is_zero()) {
        let pair = SeqPair::random(&mut rng, &r, 1 << 18);
        for c in r.constraints() {
            assert!(pair.satisfies(c, 1 << 7), "{r} breaks its own {c:?}");
        }
        for _ in 0..100 {
            let q = random_query(&mut rng, &r, 6);
            if r.entails(&q) {
                assert!(pair.satisfies(&q, 1 << 7), "{r} entails {q:?} but a model breaks it");
            }
        }
    }
}

#[test]
fn constant_pair_satisfies_every_nonzero_value() {
    let pair = SeqPair::constant(1 << 8);
    let m = BranchModel::new();
    let mut all = relations(200, 3);
    all.extend(branch_sample(&m).into_iter().map(|(_, r)| r));
    for r in all.iter().filter(|r| !r.is_zero()) {
        for c in r.constraints() {
            assert!(pair.satisfies(c, 1 << 8), "{r}");
        }
    }
}
