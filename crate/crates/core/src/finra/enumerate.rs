//! Integral relation algebras with a given atom signature, up to isomorphism.

use std::collections::BTreeMap;
use std::thread;

use super::{verify_axioms, AtomStructure, FinraError};

/// Row labels whose counts are checked exactly.
pub const GATED_SIGNATURES: [&str; 7] = ["1'", "1'a", "1'aā", "1'ab", "1'abb̄", "1'abc", "1'aābb̄"];
/// Larger rows; enumerable but slow.
pub const STRETCH_SIGNATURES: [&str; 2] = ["1'abcc̄", "1'abcd"];

/// Atoms of an integral signature: atom 0 is the identity `1'`, the rest are
/// diversity atoms, a non-symmetric atom `x` followed by its converse `x~`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralSignature {
    pub names: Vec<String>,
    pub converse: Vec<usize>,
}

/// Parse a row label such as `1'abb̄`, `1'ab b~` or `1'aābb̄`. A converse
/// mark (`~`, a combining macron, or a precomposed barred letter) must
/// directly follow the letter it pairs with.
pub fn parse_signature(text: &str) -> Result<IntegralSignature, FinraError> {
    let bad = || FinraError::UnsupportedSignature(text.to_string());
    let body = text.trim();
    let body = body.strip_prefix("1'").or_else(|| body.strip_prefix("1’")).ok_or_else(bad)?;
    // (letter, barred) tokens
    let mut tokens: Vec<(char, bool)> = Vec::new();
    for ch in body.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '~' | '\u{0304}' => match tokens.last_mut() {
                Some((_, barred @ false)) => *barred = true,
                _ => return Err(bad()),
            },
            'ā' => tokens.push(('a', true)),
            'ē' => tokens.push(('e', true)),
            'ī' => tokens.push(('i', true)),
            'ō' => tokens.push(('o', true)),
            'ū' => tokens.push(('u', true)),
            c if c.is_ascii_lowercase() => tokens.push((c, false)),
            _ => return Err(bad()),
        }
    }
    let mut names = vec!["1'".to_string()];
    let mut converse = vec![0];
    for (letter, barred) in tokens {
        let prev = names.len() - 1;
        if barred {
            if prev == 0 || names[prev] != letter.to_string() || converse[prev] != prev {
                return Err(bad());
            }
            converse[prev] = prev + 1;
            converse.push(prev);
            names.push(format!("{letter}~"));
        } else {
            if names.iter().any(|n| n.starts_with(letter)) {
                return Err(bad());
            }
            converse.push(names.len());
            names.push(letter.to_string());
        }
    }
    Ok(IntegralSignature { names, converse })
}

/// Every integral relation algebra with the atoms of `signature`, one per
/// isomorphism class, in canonical labelling. Supports up to four
/// diversity atoms.
pub fn enumerate_integral(signature: &str) -> Result<Vec<AtomStructure>, FinraError> {
    let sig = parse_signature(signature)?;
    let n = sig.names.len();
    if n > 5 {
        return Err(FinraError::UnsupportedSignature(signature.to_string()));
    }
    let base = AtomStructure::new(sig.names.clone(), sig.converse.clone(), &[0], (0..n).map(|a| (a, 0, a)))?
        .peircean_closure();

    // Peircean orbits of diversity triples; each is in or out as a unit
    let mut orbits: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    for a in 1..n {
        for b in 1..n {
            for c in 1..n {
                if !orbits.iter().any(|o| o.contains(&(a, b, c))) {
                    orbits.push(base.orbit((a, b, c)));
                }
            }
        }
    }
    let perms = symmetries(&sig.converse);
    let k = orbits.len();
    let total: u64 = 1 << k;
    let threads = thread::available_parallelism().map(|p| p.get()).unwrap_or(1).min(16) as u64;
    let chunk = total.div_ceil(threads);

    let found: BTreeMap<u128, AtomStructure> = thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let (base, orbits, perms) = (&base, &orbits, &perms);
                scope.spawn(move || {
                    let mut local = BTreeMap::new();
                    let mut table = vec![0u64; n * n];
                    for mask in t * chunk..((t + 1) * chunk).min(total) {
                        table.copy_from_slice(&base.table);
                        for (i, o) in orbits.iter().enumerate() {
                            if mask >> i & 1 == 1 {
                                for &(a, b, c) in o {
                                    table[a * n + b] |= 1 << c;
                                }
                            }
                        }
                        if !associative(&table, n) {
                            continue;
                        }
                        let s = AtomStructure { table: table.clone(), ..base.clone() };
                        let (key, best) = canonical(&s, perms);
                        local.entry(key).or_insert_with(|| s.relabel(best));
                    }
                    local
                })
            })
            .collect();
        let mut all = BTreeMap::new();
        for h in handles {
            for (key, s) in h.join().expect("enumeration worker panicked") {
                all.entry(key).or_insert(s);
            }
        }
        all
    });
    let out: Vec<AtomStructure> = found.into_values().collect();
    debug_assert!(out.iter().all(verify_axioms));
    Ok(out)
}

/// Associativity on diversity atoms (identity atoms associate by the
/// identity law, which the forced triples already give).
fn associative(table: &[u64], n: usize) -> bool {
    let prod = |x: u64, y: u64| {
        let mut out = 0;
        for a in super::atoms_of(x) {
            for b in super::atoms_of(y) {
                out |= table[a * n + b];
            }
        }
        out
    };
    for a in 1..n {
        for b in 1..n {
            let ab = table[a * n + b];
            for c in 1..n {
                if prod(ab, 1 << c) != prod(1 << a, table[b * n + c]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Permutations of the atoms fixing `1'` and commuting with converse.
fn symmetries(converse: &[usize]) -> Vec<Vec<usize>> {
    let n = converse.len();
    let mut out = Vec::new();
    let mut perm = vec![0usize; n];
    let mut used = vec![false; n];
    used[0] = true;
    fn go(i: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>, converse: &[usize], out: &mut Vec<Vec<usize>>) {
        let n = converse.len();
        if i == n {
            if (0..n).all(|a| perm[converse[a]] == converse[perm[a]]) {
                out.push(perm.clone());
            }
            return;
        }
        for t in 1..n {
            if !used[t] {
                used[t] = true;
                perm[i] = t;
                go(i + 1, perm, used, converse, out);
                used[t] = false;
            }
        }
    }
    go(1, &mut perm, &mut used, converse, &mut out);
    out
}

/// Smallest triple-set code over all symmetries, and the symmetry reaching it.
fn canonical<'p>(s: &AtomStructure, perms: &'p [Vec<usize>]) -> (u128, &'p [usize]) {
    let n = s.n();
    let triples = s.triples();
    let mut best: Option<(u128, &[usize])> = None;
    for p in perms {
        let mut code = 0u128;
        for &(a, b, c) in &triples {
            code |= 1 << ((p[a] * n + p[b]) * n + p[c]);
        }
        if best.is_none_or(|(b, _)| code < b) {
            best = Some((code, p));
        }
    }
    best.expect("identity symmetry")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signatures() {
        let s = parse_signature("1'abb̄").unwrap();
        assert_eq!(s.names, vec!["1'", "a", "b", "b~"]);
        assert_eq!(s.converse, vec![0, 1, 3, 2]);
        assert_eq!(parse_signature("1'ab b~").unwrap(), s);
        let s = parse_signature("1'aābb̄").unwrap();
        assert_eq!(s.converse, vec![0, 2, 1, 4, 3]);
        assert_eq!(parse_signature("1'").unwrap().names.len(), 1);
        assert!(parse_signature("1'ā").is_err());
        assert!(parse_signature("ab").is_err());
        assert!(parse_signature("1'aa").is_err());
        assert!(parse_signature("1'ab~b").is_err());
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_integral("1'").unwrap().len(), 1);
        assert_eq!(enumerate_integral("1'a").unwrap().len(), 2);
        assert_eq!(enumerate_integral("1'aā").unwrap().len(), 3);
        assert_eq!(enumerate_integral("1'ab").unwrap().len(), 7);
    }
}
