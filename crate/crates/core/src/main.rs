use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use jalg::branchrel::{BranchModel, BranchRelation};
use jalg::finra::{
    axiom_violation, build_stage_rep, check_jlm, enumerate_integral, jlm_profile, profile_tsv, AtomStructure, JlmMode, Ra,
};
use jalg::model::{check_law_capped, eval, find_law, law_catalog, Env, Strategy, EXHAUSTIVE_CAP};
use jalg::term::{emit_dot, parse_term};
use jalg::thompson::Workbench;

#[derive(Parser)]
#[command(name = "jalg", about = "J-algebra and relation algebra workbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a term and print it in normal form.
    Parse { term: String },
    /// Evaluate a closed term.
    Eval {
        term: String,
        /// `branchrel` or the path of an atom structure file.
        #[arg(long, default_value = "branchrel")]
        model: String,
    },
    /// Check a law from the catalog (`list` prints the ids).
    CheckLaw {
        id: String,
        #[arg(long, default_value = "branchrel")]
        model: String,
        /// `exhaustive`, `sample=N` or `auto=N`.
        #[arg(long, default_value = "sample=200")]
        strategy: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Limit on search nodes for exhaustive checks.
        #[arg(long, default_value_t = EXHAUSTIVE_CAP)]
        max_nodes: u64,
    },
    /// Run a relation suite: qu, perms, F, T, V, M, same, fork, pairing.
    Suite {
        id: String,
        /// Print the generator terms before the results.
        #[arg(long)]
        emit_terms: bool,
    },
    /// Enumerate integral relation algebras with the given atoms.
    Enumerate {
        signature: String,
        /// Print every structure in file format.
        #[arg(long)]
        structures: bool,
    },
    /// Check (J), (L), (M) on a structure file or on every algebra of a signature.
    CheckJlm {
        target: String,
        /// Quantify over every element instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        /// Quantify over atoms only.
        #[arg(long, conflicts_with = "exhaustive")]
        atoms: bool,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build a staged partial representation separating v < w.
    Represent {
        file: PathBuf,
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
        #[arg(long, default_value_t = 50)]
        stages: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print a term tree in Graphviz dot format.
    Dot { term: String },
}

type Outcome = Result<bool, String>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Parse { term } => {
            println!("{}", parse_term(&term).map_err(|e| e.to_string())?);
            Ok(true)
        }
        Command::Dot { term } => {
            let t = parse_term(&term).map_err(|e| e.to_string())?;
            print!("{}", emit_dot(&t).map_err(|e| e.to_string())?);
            Ok(true)
        }
        Command::Eval { term, model } => eval_cmd(&term, &model),
        Command::CheckLaw { id, model, strategy, seed, max_nodes } => {
            check_law_cmd(&id, &model, &strategy, seed, max_nodes)
        }
        Command::Suite { id, emit_terms } => {
            let wb = Workbench::new();
            if emit_terms {
                print!("{}", wb.gens.emit_terms());
            }
            let report = wb.run_suite(&id).map_err(|e| e.to_string())?;
            for (name, ok) in &report.results {
                println!("{name} {}", if *ok { "pass" } else { "fail" });
            }
            println!("{report}");
            Ok(report.passed())
        }
        Command::Enumerate { signature, structures } => {
            let all = enumerate_integral(&signature).map_err(|e| e.to_string())?;
            if structures {
                for s in &all {
                    println!("{}", s.to_text());
                }
            }
            println!("total={}", all.len());
            Ok(true)
        }
        Command::CheckJlm { target, exhaustive, atoms, samples, seed } => {
            let mode = if exhaustive {
                JlmMode::Exhaustive
            } else if atoms {
                JlmMode::Atoms
            } else {
                JlmMode::Sample { n: samples, seed }
            };
            check_jlm_cmd(&target, mode)
        }
        Command::Represent { file, v, w, stages, seed } => {
            let ra = Ra::new(load(&file)?);
            let v = ra.parse_elem(&v).map_err(|e| e.to_string())?;
            let w = ra.parse_elem(&w).map_err(|e| e.to_string())?;
            let report = build_stage_rep(&ra, v, w, stages, seed).map_err(|e| e.to_string())?;
            println!("{report}");
            Ok(report.ok())
        }
    }
}

fn load(path: &Path) -> Result<AtomStructure, String> {
    let s = AtomStructure::load(path).map_err(|e| e.to_string())?;
    match axiom_violation(&s) {
        None => Ok(s),
        Some(v) => Err(format!("{}: not a relation algebra: {v}", path.display())),
    }
}

fn branch_label(r: &BranchRelation) -> String {
    if r.equal(&BranchRelation::top()) {
        "1".into()
    } else if r.equal(&BranchRelation::id()) {
        "id".into()
    } else {
        r.to_string()
    }
}

fn eval_cmd(text: &str, model: &str) -> Outcome {
    let t = parse_term(text).map_err(|e| e.to_string())?;
    if model == "branchrel" {
        let r = BranchModel::new().eval_closed(&t).map_err(|e| e.to_string())?;
        println!("{}", branch_label(&r));
    } else {
        let ra = Ra::new(load(Path::new(model))?);
        let x = eval(&ra, &t, &Env::new()).map_err(|e| e.to_string())?;
        println!("{}", ra.label(x));
    }
    Ok(true)
}

fn parse_strategy(text: &str, seed: u64) -> Result<Strategy, String> {
    let count = |n: &str| n.parse::<usize>().map_err(|_| format!("bad sample count `{n}`"));
    match text.split_once('=') {
        None if text == "exhaustive" => Ok(Strategy::Exhaustive),
        Some(("sample", n)) => Ok(Strategy::Sample { n: count(n)?, seed }),
        Some(("auto", n)) => Ok(Strategy::Auto { n: count(n)?, seed }),
        _ => Err(format!("unknown strategy `{text}`")),
    }
}

fn check_law_cmd(id: &str, model: &str, strategy: &str, seed: u64, cap: u64) -> Outcome {
    if id == "list" {
        for law in law_catalog() {
            println!("{}", law.id);
        }
        return Ok(true);
    }
    let law = find_law(id).ok_or_else(|| format!("unknown law `{id}`"))?;
    let strategy = parse_strategy(strategy, seed)?;
    let report = if model == "branchrel" {
        check_law_capped(&BranchModel::new(), &law, strategy, cap)
    } else {
        check_law_capped(&Ra::new(load(Path::new(model))?), &law, strategy, cap)
    }
    .map_err(|e| e.to_string())?;
    println!("{report}");
    Ok(report.passed())
}

fn check_jlm_cmd(target: &str, mode: JlmMode) -> Outcome {
    let path = Path::new(target);
    if path.is_file() {
        let ra = Ra::new(load(path)?);
        let report = check_jlm(&ra, mode).map_err(|e| e.to_string())?;
        let mut clean = true;
        for (name, cx) in [("J", &report.j), ("L", &report.l), ("M", &report.m)] {
            match cx {
                None => println!("{name} pass"),
                Some(vals) => {
                    clean = false;
                    let parts: Vec<String> = vals.iter().map(|(v, x)| format!("{v}={}", ra.label(*x))).collect();
                    println!("{name} fail counterexample: {}", parts.join(";"));
                }
            }
        }
        return Ok(clean);
    }
    let all = enumerate_integral(target).map_err(|e| e.to_string())?;
    let profile = jlm_profile(&all, mode).map_err(|e| e.to_string())?;
    print!("{}", profile_tsv(target, all.len(), &profile));
    Ok(true)
}
