//! Evaluation of terms in arbitrary models and checking of quantified laws.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::branchrel::BranchError;
use crate::term::{parse_term, Signature, Term, TermError};

pub use crate::laws::{find_law, law_catalog};

/// Variable names standing for the fixed generators in models that have none.
pub const GEN_A_VAR: &str = "gen_a";
pub const GEN_B_VAR: &str = "gen_b";

/// Largest number of search nodes an exhaustive check may visit. Nodes
/// below a violated hypothesis are not visited.
pub const EXHAUSTIVE_CAP: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("operator `{0}` is not supported by this model")]
    Unsupported(&'static str),
    #[error(transparent)]
    Branch(#[from] BranchError),
    #[error("strategy unavailable: {0}")]
    StrategyUnavailable(String),
    #[error("exhaustive check of `{law}` visits more than {cap} search nodes")]
    CapExceeded { law: String, cap: u64 },
    #[error(transparent)]
    Term(#[from] TermError),
}

/// Operations of a J-algebra (optionally a relation algebra).
pub trait Model {
    type Elem: Clone + fmt::Debug;

    fn signature(&self) -> Signature;
    fn zero(&self) -> Self::Elem;
    fn top(&self) -> Self::Elem;
    fn id(&self) -> Self::Elem;
    /// The fixed elements denoted by `a` and `b`, if the model has them.
    fn generators(&self) -> Option<(Self::Elem, Self::Elem)> {
        None
    }
    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn comp(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem, ModelError>;
    fn conv(&self, x: &Self::Elem) -> Self::Elem;
    fn join(&self, _x: &Self::Elem, _y: &Self::Elem) -> Result<Self::Elem, ModelError> {
        Err(ModelError::Unsupported("+"))
    }
    fn compl(&self, _x: &Self::Elem) -> Result<Self::Elem, ModelError> {
        Err(ModelError::Unsupported("-"))
    }
    fn equal(&self, x: &Self::Elem, y: &Self::Elem) -> bool;
    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool;
    /// Every element with a printable label, when the model is finite.
    fn elements(&self) -> Option<Vec<(String, Self::Elem)>> {
        None
    }
    /// A fixed pool of labelled elements to draw samples from.
    fn sample_pool(&self) -> Option<Vec<(String, Self::Elem)>> {
        None
    }
}

pub type Env<E> = HashMap<String, E>;

pub fn eval<M: Model>(m: &M, t: &Term, env: &Env<M::Elem>) -> Result<M::Elem, ModelError> {
    Ok(match t {
        Term::Zero => m.zero(),
        Term::Top => m.top(),
        Term::Id => m.id(),
        Term::GenA | Term::GenB => {
            let (a, b) = match m.generators() {
                Some(g) => g,
                None => {
                    let name = if *t == Term::GenA { GEN_A_VAR } else { GEN_B_VAR };
                    let e = env.get(name).ok_or_else(|| ModelError::UnboundVariable(name.into()))?;
                    return Ok(e.clone());
                }
            };
            if *t == Term::GenA {
                a
            } else {
                b
            }
        }
        Term::Var(v) => env.get(v).cloned().ok_or_else(|| ModelError::UnboundVariable(v.clone()))?,
        Term::Conv(x) => m.conv(&eval(m, x, env)?),
        Term::Comp(x, y) => m.comp(&eval(m, x, env)?, &eval(m, y, env)?)?,
        Term::Meet(x, y) => m.meet(&eval(m, x, env)?, &eval(m, y, env)?),
        Term::Join(x, y) => m.join(&eval(m, x, env)?, &eval(m, y, env)?)?,
        Term::Compl(x) => m.compl(&eval(m, x, env)?)?,
    })
}

pub fn is_functional<M: Model>(m: &M, e: &M::Elem) -> Result<bool, ModelError> {
    Ok(m.leq(&m.comp(&m.conv(e), e)?, &m.id()))
}

pub fn is_permutational<M: Model>(m: &M, e: &M::Elem) -> Result<bool, ModelError> {
    let id = m.id();
    Ok(m.equal(&m.comp(e, &m.conv(e))?, &id) && m.equal(&m.comp(&m.conv(e), e)?, &id))
}

// ----------------------------------------------------------------- laws

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Leq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub lhs: Term,
    pub rel: Rel,
    pub rhs: Term,
}

impl Formula {
    pub fn parse(text: &str) -> Result<Formula, TermError> {
        let (lhs, rel, rhs, swap) = if let Some((l, r)) = text.split_once("<=") {
            (l, Rel::Leq, r, false)
        } else if let Some((l, r)) = text.split_once(">=") {
            (l, Rel::Leq, r, true)
        } else if let Some((l, r)) = text.split_once('=') {
            (l, Rel::Eq, r, false)
        } else {
            return Err(TermError::Syntax { pos: 0, msg: format!("no relation in `{text}`") });
        };
        let (l, r) = (parse_term(lhs)?, parse_term(rhs)?);
        Ok(if swap { Formula { lhs: r, rel, rhs: l } } else { Formula { lhs: l, rel, rhs: r } })
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }

    pub fn holds<M: Model>(&self, m: &M, env: &Env<M::Elem>) -> Result<bool, ModelError> {
        let l = eval(m, &self.lhs, env)?;
        let r = eval(m, &self.rhs, env)?;
        Ok(match self.rel {
            Rel::Eq => m.equal(&l, &r),
            Rel::Leq => m.leq(&l, &r),
        })
    }

    fn map(&self, f: impl Fn(&Term) -> Term) -> Formula {
        Formula { lhs: f(&self.lhs), rel: self.rel, rhs: f(&self.rhs) }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.rel == Rel::Eq { "=" } else { "<=" };
        write!(f, "{} {op} {}", self.lhs, self.rhs)
    }
}

/// What a law is expected to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawKind {
    /// Derivable in every J-algebra (every relation algebra for RA laws).
    Theorem,
    /// True in representable algebras but fails in some abstract ones.
    Representable,
    /// About the fixed generators of a model that has them.
    Concrete,
}

#[derive(Clone, Debug)]
pub struct Law {
    pub id: String,
    pub vars: Vec<String>,
    pub hypotheses: Vec<Formula>,
    pub conclusions: Vec<Formula>,
    pub signature: Signature,
    pub kind: LawKind,
    pub note: Option<String>,
}

impl Law {
    /// `hyp, hyp => concl, concl`; each formula is `t = s`, `t <= s` or `t >= s`.
    pub fn parse(id: &str, kind: LawKind, text: &str) -> Result<Law, TermError> {
        let (hyps, concls) = match text.split_once("=>") {
            Some((h, c)) => (h, c),
            None => ("", text),
        };
        let split = |s: &str| -> Result<Vec<Formula>, TermError> {
            s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(Formula::parse).collect()
        };
        let hypotheses = split(hyps)?;
        let conclusions = split(concls)?;
        Ok(Law::new(id, kind, hypotheses, conclusions))
    }

    pub fn new(id: &str, kind: LawKind, hypotheses: Vec<Formula>, conclusions: Vec<Formula>) -> Law {
        let mut vars: Vec<String> = Vec::new();
        for f in hypotheses.iter().chain(&conclusions) {
            for t in [&f.lhs, &f.rhs] {
                push_vars_in_order(t, &mut vars);
            }
        }
        let signature = if hypotheses.iter().chain(&conclusions).all(|f| f.lhs.is_j_term() && f.rhs.is_j_term()) {
            Signature::J
        } else {
            Signature::Ra
        };
        Law { id: id.to_string(), vars, hypotheses, conclusions, signature, kind, note: None }
    }

    pub fn with_note(mut self, note: &str) -> Law {
        self.note = Some(note.to_string());
        self
    }

    pub fn mentions_generators(&self) -> bool {
        self.hypotheses.iter().chain(&self.conclusions).any(|f| f.lhs.mentions_generators() || f.rhs.mentions_generators())
    }

    /// The same law with the fixed generators turned into ordinary variables.
    pub fn generalized(&self) -> Law {
        let (a, b) = (Term::var(GEN_A_VAR), Term::var(GEN_B_VAR));
        let f = |t: &Term| t.subst_generators(&a, &b);
        let hypotheses = self.hypotheses.iter().map(|h| h.map(f)).collect();
        let conclusions = self.conclusions.iter().map(|c| c.map(f)).collect();
        let mut law = Law::new(&self.id, self.kind, hypotheses, conclusions);
        law.note = self.note.clone();
        law
    }
}

fn push_vars_in_order(t: &Term, out: &mut Vec<String>) {
    match t {
        Term::Var(v) => {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        Term::Conv(x) | Term::Compl(x) => push_vars_in_order(x, out),
        Term::Comp(x, y) | Term::Meet(x, y) | Term::Join(x, y) => {
            push_vars_in_order(x, out);
            push_vars_in_order(y, out);
        }
        _ => {}
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Every assignment over the model's finite universe.
    Exhaustive,
    /// `n` assignments that satisfy the hypotheses, drawn from the sample pool.
    Sample { n: usize, seed: u64 },
    /// Exhaustive when the model is finite and the unpruned search fits the
    /// cap, otherwise `Sample`.
    Auto { n: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub id: String,
    pub strategy: String,
    /// Assignments examined, including those violating a hypothesis.
    pub tested: u64,
    /// Assignments that satisfied every hypothesis.
    pub satisfied: u64,
    pub counterexample: Option<Vec<(String, String)>>,
    pub note: Option<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "pass" } else { "fail" };
        write!(f, "LAW {} {verdict} tested={}", self.id, self.tested)?;
        if let Some(cx) = &self.counterexample {
            let parts: Vec<String> = cx.iter().map(|(v, t)| format!("{v}={t}")).collect();
            write!(f, " counterexample: {}", parts.join(";"))?;
        }
        Ok(())
    }
}

/// Check `law` in `m`. An assignment violating a hypothesis passes vacuously.
pub fn check_law<M: Model>(m: &M, law: &Law, strategy: Strategy) -> Result<LawReport, ModelError> {
    check_law_capped(m, law, strategy, EXHAUSTIVE_CAP)
}

/// [`check_law`] with a different limit on exhaustive search nodes.
pub fn check_law_capped<M: Model>(m: &M, law: &Law, strategy: Strategy, cap: u64) -> Result<LawReport, ModelError> {
    let law = if law.mentions_generators() && m.generators().is_none() {
        if law.kind == LawKind::Concrete {
            return Err(ModelError::StrategyUnavailable(format!("`{}` needs a model with fixed generators", law.id)));
        }
        law.generalized()
    } else {
        law.clone()
    };
    if law.signature == Signature::Ra && m.signature() == Signature::J {
        return Err(ModelError::Unsupported("+"));
    }
    let plan = Plan::new(m, &law, strategy, cap)?;
    plan.run(m, &law)
}

/// A term with variables resolved to slots and constants to values.
#[derive(Clone, Debug)]
enum Cx<E> {
    Const(E),
    Slot(usize),
    Conv(Box<Cx<E>>),
    Compl(Box<Cx<E>>),
    Comp(Box<Cx<E>>, Box<Cx<E>>),
    Meet(Box<Cx<E>>, Box<Cx<E>>),
    Join(Box<Cx<E>>, Box<Cx<E>>),
}

fn compile<M: Model>(m: &M, t: &Term, pos: &HashMap<&str, usize>) -> Result<Cx<M::Elem>, ModelError> {
    let b = |x: &Term| compile(m, x, pos).map(Box::new);
    Ok(match t {
        Term::Zero => Cx::Const(m.zero()),
        Term::Top => Cx::Const(m.top()),
        Term::Id => Cx::Const(m.id()),
        Term::GenA | Term::GenB => {
            let (a, g) = m.generators().ok_or_else(|| {
                ModelError::UnboundVariable(if *t == Term::GenA { GEN_A_VAR } else { GEN_B_VAR }.into())
            })?;
            Cx::Const(if *t == Term::GenA { a } else { g })
        }
        Term::Var(v) => Cx::Slot(*pos.get(v.as_str()).ok_or_else(|| ModelError::UnboundVariable(v.clone()))?),
        Term::Conv(x) => Cx::Conv(b(x)?),
        Term::Compl(x) => Cx::Compl(b(x)?),
        Term::Comp(x, y) => Cx::Comp(b(x)?, b(y)?),
        Term::Meet(x, y) => Cx::Meet(b(x)?, b(y)?),
        Term::Join(x, y) => Cx::Join(b(x)?, b(y)?),
    })
}

fn run_cx<M: Model>(m: &M, c: &Cx<M::Elem>, slots: &[M::Elem]) -> Result<M::Elem, ModelError> {
    Ok(match c {
        Cx::Const(e) => e.clone(),
        Cx::Slot(i) => slots[*i].clone(),
        Cx::Conv(x) => m.conv(&run_cx(m, x, slots)?),
        Cx::Compl(x) => m.compl(&run_cx(m, x, slots)?)?,
        Cx::Comp(x, y) => m.comp(&run_cx(m, x, slots)?, &run_cx(m, y, slots)?)?,
        Cx::Meet(x, y) => m.meet(&run_cx(m, x, slots)?, &run_cx(m, y, slots)?),
        Cx::Join(x, y) => m.join(&run_cx(m, x, slots)?, &run_cx(m, y, slots)?)?,
    })
}

#[derive(Clone, Debug)]
struct CFormula<E> {
    lhs: Cx<E>,
    rel: Rel,
    rhs: Cx<E>,
}

impl<E: Clone + fmt::Debug> CFormula<E> {
    fn new<M: Model<Elem = E>>(m: &M, f: &Formula, pos: &HashMap<&str, usize>) -> Result<Self, ModelError> {
        Ok(CFormula { lhs: compile(m, &f.lhs, pos)?, rel: f.rel, rhs: compile(m, &f.rhs, pos)? })
    }

    fn holds<M: Model<Elem = E>>(&self, m: &M, slots: &[E]) -> Result<bool, ModelError> {
        let l = run_cx(m, &self.lhs, slots)?;
        let r = run_cx(m, &self.rhs, slots)?;
        Ok(match self.rel {
            Rel::Eq => m.equal(&l, &r),
            Rel::Leq => m.leq(&l, &r),
        })
    }
}

struct Plan<E> {
    /// Candidate labelled values for each variable, in search order.
    pools: Vec<Vec<(String, E)>>,
    order: Vec<String>,
    /// Hypotheses without variables.
    closed: Vec<CFormula<E>>,
    /// Hypotheses grouped by the search depth at which they become closed.
    staged: Vec<Vec<CFormula<E>>>,
    conclusions: Vec<CFormula<E>>,
    exhaustive: bool,
    n: usize,
    seed: u64,
    cap: u64,
    strategy_name: String,
}

impl<E: Clone + fmt::Debug> Plan<E> {
    fn new<M: Model<Elem = E>>(m: &M, law: &Law, strategy: Strategy, cap: u64) -> Result<Plan<E>, ModelError> {
        let (universe, exhaustive, n, seed) = match strategy {
            Strategy::Exhaustive => {
                let u = m.elements().ok_or_else(|| {
                    ModelError::StrategyUnavailable("exhaustive checking needs a finite model".into())
                })?;
                (u, true, 0, 0)
            }
            Strategy::Sample { n, seed } | Strategy::Auto { n, seed } => {
                let finite = m.elements();
                let u = match (&strategy, finite) {
                    (Strategy::Auto { .. }, Some(all)) => all,
                    (_, all) => m.sample_pool().or(all).ok_or_else(|| {
                        ModelError::StrategyUnavailable("model has no sample generator".into())
                    })?,
                };
                (u, false, n, seed)
            }
        };
        let order = law.vars.clone();
        let pos: HashMap<&str, usize> = order.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut pools = Vec::with_capacity(order.len());
        for v in &order {
            let single: HashMap<&str, usize> = [(v.as_str(), 0usize)].into_iter().collect();
            let mut unary = Vec::new();
            for h in &law.hypotheses {
                let vs = h.vars();
                if vs.len() == 1 && vs.contains(v) {
                    unary.push(CFormula::new(m, h, &single)?);
                }
            }
            let mut pool = Vec::new();
            for (label, e) in &universe {
                let slot = [e.clone()];
                let mut ok = true;
                for h in &unary {
                    if !h.holds(m, &slot)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    pool.push((label.clone(), e.clone()));
                }
            }
            pools.push(pool);
        }
        let mut closed = Vec::new();
        let mut staged = vec![Vec::new(); order.len().max(1)];
        for h in &law.hypotheses {
            let vs = h.vars();
            match vs.len() {
                0 => closed.push(CFormula::new(m, h, &pos)?),
                1 => {}
                _ => {
                    let depth = vs.iter().map(|v| pos[v.as_str()]).max().unwrap_or(0);
                    staged[depth].push(CFormula::new(m, h, &pos)?);
                }
            }
        }
        let conclusions = law.conclusions.iter().map(|c| CFormula::new(m, c, &pos)).collect::<Result<_, _>>()?;
        let size: f64 = pools.iter().map(|p| p.len() as f64).product();
        let mut exhaustive = exhaustive;
        if let Strategy::Auto { .. } = strategy {
            exhaustive = m.elements().is_some() && size <= cap as f64;
        }
        let strategy_name = if exhaustive { "exhaustive".to_string() } else { format!("sample={n} seed={seed}") };
        Ok(Plan { pools, order, closed, staged, conclusions, exhaustive, n, seed, cap, strategy_name })
    }

    fn report(&self, law: &Law, tested: u64, satisfied: u64, cx: Option<Vec<(String, String)>>) -> LawReport {
        LawReport {
            id: law.id.clone(),
            strategy: self.strategy_name.clone(),
            tested,
            satisfied,
            counterexample: cx,
            note: law.note.clone(),
        }
    }

    fn run<M: Model<Elem = E>>(&self, m: &M, law: &Law) -> Result<LawReport, ModelError> {
        // closed hypotheses decide the whole law
        for h in &self.closed {
            if !h.holds(m, &[])? {
                return Ok(self.report(law, 1, 0, None));
            }
        }
        if self.order.is_empty() {
            if !self.conclusions_hold(m, &[])? {
                return Ok(self.report(law, 1, 1, Some(Vec::new())));
            }
            return Ok(self.report(law, 1, 1, None));
        }
        if self.pools.iter().any(|p| p.is_empty()) {
            return Ok(self.report(law, 0, 0, None));
        }
        if self.exhaustive {
            self.run_exhaustive(m, law)
        } else {
            self.run_sample(m, law)
        }
    }

    fn conclusions_hold<M: Model<Elem = E>>(&self, m: &M, slots: &[E]) -> Result<bool, ModelError> {
        for c in &self.conclusions {
            if !c.holds(m, slots)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn stage_holds<M: Model<Elem = E>>(&self, m: &M, depth: usize, slots: &[E]) -> Result<bool, ModelError> {
        for h in &self.staged[depth] {
            if !h.holds(m, slots)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn labels(&self, idx: &[usize]) -> Vec<(String, String)> {
        self.order.iter().cloned().zip(idx.iter().enumerate().map(|(d, &i)| self.pools[d][i].0.clone())).collect()
    }

    fn run_exhaustive<M: Model<Elem = E>>(&self, m: &M, law: &Law) -> Result<LawReport, ModelError> {
        let k = self.order.len();
        let mut idx = vec![0usize; k];
        let mut slots: Vec<E> = self.pools.iter().map(|p| p[0].1.clone()).collect();
        let (mut tested, mut satisfied) = (0u64, 0u64);
        let mut depth = 0usize;
        let mut visited = 0u64;
        // iterative depth-first search over the pools; subtrees below a
        // violated hypothesis are skipped and counted as vacuous passes
        loop {
            if idx[depth] >= self.pools[depth].len() {
                if depth == 0 {
                    break;
                }
                idx[depth] = 0;
                depth -= 1;
                idx[depth] += 1;
                continue;
            }
            visited += 1;
            if visited > self.cap {
                return Err(ModelError::CapExceeded { law: law.id.clone(), cap: self.cap });
            }
            slots[depth] = self.pools[depth][idx[depth]].1.clone();
            if !self.stage_holds(m, depth, &slots)? {
                tested += self.remaining(depth);
                idx[depth] += 1;
                continue;
            }
            if depth + 1 < k {
                depth += 1;
                continue;
            }
            tested += 1;
            satisfied += 1;
            if !self.conclusions_hold(m, &slots)? {
                return Ok(self.report(law, tested, satisfied, Some(self.labels(&idx))));
            }
            idx[depth] += 1;
        }
        Ok(self.report(law, tested, satisfied, None))
    }

    /// Number of full assignments below a pruned node (for the report).
    fn remaining(&self, depth: usize) -> u64 {
        self.pools[depth + 1..].iter().map(|p| p.len() as u64).product::<u64>().max(1)
    }

    fn run_sample<M: Model<Elem = E>>(&self, m: &M, law: &Law) -> Result<LawReport, ModelError> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let max_draws = (self.n as u64).saturating_mul(50).max(1);
        let (mut tested, mut satisfied) = (0u64, 0u64);
        let k = self.order.len();
        let mut idx = vec![0usize; k];
        let mut slots: Vec<E> = self.pools.iter().map(|p| p[0].1.clone()).collect();
        while satisfied < self.n as u64 && tested < max_draws {
            tested += 1;
            let mut ok = true;
            for d in 0..k {
                idx[d] = rng.gen_range(0..self.pools[d].len());
                slots[d] = self.pools[d][idx[d]].1.clone();
                if !self.stage_holds(m, d, &slots)? {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            satisfied += 1;
            if !self.conclusions_hold(m, &slots)? {
                return Ok(self.report(law, tested, satisfied, Some(self.labels(&idx))));
            }
        }
        Ok(self.report(law, tested, satisfied, None))
    }
}
