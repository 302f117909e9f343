use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use posetrace::certificate::{verify_certificate, Certificate, Claim, Evidence};
use posetrace::chains::{
    chain_graphs, check_cycle_label_condition, lubell, lym_check, replay_violation, symmetric_chain_decomposition,
};
use posetrace::constructions::{
    almost_equal_parts, butterfly_lower, consecutive_levels, p_m_family, top_classes, verify_construction, Predicate,
    SizeClaim,
};
use posetrace::embed::{find_copy, l_trace_violation, WitnessJson};
use posetrace::poset::{butterfly, p_m_gadget, parse_poset_arg, vee};
use posetrace::probe::probe_conjecture_1_5;
use posetrace::search::{arrow, solve_la, solve_la_closed, solve_tr, solve_tr_l, Direction};
use posetrace::sets::binomial;
use posetrace::{Family, Kind, Poset, PosetJson, SearchBudget, Status, SymmetryMode};
use serde_json::{json, Value};

use crate::catalog::{self, Catalog, CatalogEntry, WitnessStore, WriteLock};
use crate::output::{emit, Format};

/// Exit code for an exhausted budget.
pub const EXIT_BUDGET: u8 = 2;
/// Exit code for a check that ran and failed.
pub const EXIT_CHECK_FAILED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "posetrace", version, about = "Exact forbidden-subposet and trace computations")]
pub struct Cli {
    /// Worker threads for the searches (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Wall-clock budget in seconds.
    #[arg(long, global = true, value_name = "SECONDS")]
    pub time_limit: Option<f64>,
    /// Shuffles the search order; results do not depend on it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Results catalog to record into and read from.
    #[arg(long, global = true, env = "POSETRACE_CATALOG")]
    pub catalog: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum KindArg {
    Tr,
    TrL,
    La,
    LaD,
    LaU,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SymmetryArg {
    Exact,
    Heuristic,
    Off,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ConstructionName {
    ButterflyLower,
    ModSum,
    #[value(name = "p_m")]
    PM,
    Levels,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Computes an extremal number exactly.
    Solve {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Poset name (butterfly, chain:3, k_rs:2,2, ...), JSON, or a JSON file.
        #[arg(long)]
        poset: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, value_enum, default_value_t = SymmetryArg::Exact)]
        symmetry: SymmetryArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decides (n, m) -> (k, l).
    Arrow {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
    },
    /// Builds a named construction and verifies it.
    Construct {
        #[arg(long, value_enum)]
        name: ConstructionName,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// p_free, trace_free, l_trace_free:L or downward_closed.
        #[arg(long)]
        verify: Option<String>,
        /// Overrides the construction's default poset.
        #[arg(long)]
        poset: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chain decompositions and chain graphs.
    Chains {
        #[command(subcommand)]
        command: ChainsCommand,
    },
    /// Looks for a copy of a poset in a family or one of its l-traces.
    Embed {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        poset: String,
        #[arg(long)]
        l: Option<usize>,
    },
    /// Reads and maintains the results catalog.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// Computes Tr_{n-k}(n, P) next to e(P) - k.
    Probe {
        #[arg(long)]
        conjecture: String,
        #[arg(long)]
        poset: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Replays a certificate without running any search.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum ChainsCommand {
    /// Symmetric chain decomposition of 2^[n].
    Scd {
        #[arg(long)]
        n: usize,
    },
    /// Exact Lubell function of a family.
    Lubell {
        #[arg(long)]
        family: PathBuf,
    },
    /// Builds every chain graph and checks the 4-cycle label condition.
    DiamondAudit {
        #[arg(long)]
        family: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogCommand {
    Show {
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Merges two catalogs into a third, with their witnesses.
    Merge {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replays every stored witness.
    Verify,
}

/// How a successful invocation ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Done,
    BudgetExhausted,
    CheckFailed,
}

impl Outcome {
    fn of_status(s: Status) -> Outcome {
        if s == Status::Exact {
            Outcome::Done
        } else {
            Outcome::BudgetExhausted
        }
    }

    fn of_check(passed: bool) -> Outcome {
        if passed {
            Outcome::Done
        } else {
            Outcome::CheckFailed
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Outcome::Done => 0,
            Outcome::BudgetExhausted => EXIT_BUDGET,
            Outcome::CheckFailed => EXIT_CHECK_FAILED,
        }
    }
}

/// Parses the process arguments and runs; usage and input errors exit with 1.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(o) => ExitCode::from(o.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn budget(cli: &Cli, symmetry: SymmetryMode) -> SearchBudget {
    let workers = cli.workers.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let mut b = SearchBudget::default().with_workers(workers).with_symmetry(symmetry);
    if let Some(t) = cli.time_limit {
        b = b.with_time_limit(Duration::from_secs_f64(t.max(0.0)));
    }
    if let Some(s) = cli.seed {
        b = b.with_seed(s);
    }
    b
}

/// A poset argument: a name, inline JSON, or a path to a JSON file.
pub fn load_poset(arg: &str) -> Result<Poset> {
    let path = Path::new(arg);
    if !arg.trim_start().starts_with('{') && path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        return Ok(parse_poset_arg(&text)?);
    }
    Ok(parse_poset_arg(arg)?)
}

pub fn load_family(path: &Path) -> Result<Family> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Family::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(v)? + "\n").with_context(|| format!("writing {}", path.display()))
}

fn record(cli: &Cli, make: impl FnOnce(&WitnessStore) -> Result<CatalogEntry>) -> Result<Option<String>> {
    let Some(path) = &cli.catalog else { return Ok(None) };
    let lock = WriteLock::acquire(path)?;
    let mut cat = Catalog::load(path)?;
    let entry = make(&WitnessStore::for_catalog(path))?;
    let key = entry.key.to_string();
    cat.put(entry)?;
    cat.save(path, &lock)?;
    Ok(Some(key))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Solve { kind, poset, n, l, symmetry, out } => {
            let p = load_poset(poset)?;
            let sym = match symmetry {
                SymmetryArg::Exact => SymmetryMode::Exact,
                SymmetryArg::Heuristic => SymmetryMode::Heuristic,
                SymmetryArg::Off => SymmetryMode::Off,
            };
            let b = budget(cli, sym);
            let r = match kind {
                KindArg::La => solve_la(*n, &p, &b)?,
                KindArg::LaD => solve_la_closed(*n, &p, Direction::Down, &b)?,
                KindArg::LaU => solve_la_closed(*n, &p, Direction::Up, &b)?,
                KindArg::Tr => solve_tr(*n, &p, &b)?,
                KindArg::TrL => {
                    let l = l.ok_or_else(|| anyhow!("--kind tr_l needs --l"))?;
                    solve_tr_l(*n, l, &p, &b)?
                }
            };
            let check = r.check_witness(&p);
            let sym_name = format!("{sym:?}").to_lowercase();
            let key = record(cli, |store| {
                let hash = r.witness.as_ref().map(|w| store.put(w)).transpose()?;
                Ok(CatalogEntry::from_extremal(&r, &p, &sym_name, hash))
            })?;
            let certificate = r.witness.clone().map(|family| Certificate {
                claim: Claim::Extremal {
                    kind: r.kind,
                    n: r.n,
                    l: r.l,
                    poset: PosetJson::relation_of(&p),
                    value: r.value,
                    exact: r.status == Status::Exact,
                },
                evidence: Evidence::Family { family },
            });
            let v = json!({
                "result": r,
                "witness_check": check.as_ref().map(|_| "pass".to_string()).unwrap_or_else(|e| e.clone()),
                "catalog_key": key,
                "certificate": certificate,
            });
            if let Some(out) = out {
                write_json(out, &v)?;
            }
            emit(&v, cli.format);
            if let Err(e) = check {
                if r.witness.is_some() {
                    bail!("solver witness failed replay: {e}");
                }
            }
            Ok(Outcome::of_status(r.status))
        }
        Command::Arrow { n, m, k, l } => {
            let r = arrow(*n, *m, *k, *l, &budget(cli, SymmetryMode::Exact))?;
            let key = record(cli, |store| {
                let hash = r.counterexample.as_ref().map(|f| store.put(f)).transpose()?;
                Ok(CatalogEntry::from_arrow(&r, hash))
            })?;
            let v = json!({ "result": r, "catalog_key": key });
            emit(&v, cli.format);
            Ok(Outcome::of_status(r.status))
        }
        Command::Construct { name, n, m, s, j, k, verify, poset, out } => {
            let need = |v: &Option<usize>, flag: &str| v.ok_or_else(|| anyhow!("--name {name:?} needs --{flag}"));
            let n = *n;
            let (family, claim, default_pred, default_poset) = match name {
                ConstructionName::ButterflyLower => {
                    (butterfly_lower(n)?, SizeClaim::Exact(3 * n / 2 + 1), Predicate::TraceFree, Some(butterfly()))
                }
                ConstructionName::ModSum => {
                    let s = need(s, "s")?;
                    let want = (s as u64 * binomial(n, n / 2)).div_ceil(n as u64) as usize;
                    let pred = Predicate::LTraceFree { l: n.saturating_sub(1) };
                    (top_classes(n, s)?, SizeClaim::AtLeast(want), pred, Some(vee(s)?))
                }
                ConstructionName::PM => {
                    let m = need(m, "m")?;
                    let size = almost_equal_parts(n, m).iter().map(|a| a + 1).product();
                    (p_m_family(n, m)?, SizeClaim::Exact(size), Predicate::PFree, Some(p_m_gadget(m)?))
                }
                ConstructionName::Levels => {
                    let (j, k) = (need(j, "j")?, need(k, "k")?);
                    let size = (j + 1..=j + k).filter(|&i| i <= n).map(|i| binomial(n, i) as usize).sum();
                    (consecutive_levels(n, j, k)?, SizeClaim::Exact(size), Predicate::PFree, None)
                }
            };
            let pred = match verify {
                Some(v) => parse_predicate(v)?,
                None => default_pred,
            };
            let p = match poset {
                Some(arg) => Some(load_poset(arg)?),
                None => default_poset,
            };
            let report = verify_construction(&family, claim, &pred, p.as_ref());
            let v = json!(report);
            if let Some(out) = out {
                write_json(out, &json!(family))?;
            }
            emit(&v, cli.format);
            Ok(Outcome::of_check(report.passed))
        }
        Command::Chains { command } => run_chains(cli, command),
        Command::Embed { family, poset, l } => {
            let f = load_family(family)?;
            let p = load_poset(poset)?;
            let found = match l {
                Some(l) => l_trace_violation(&f, &p, *l)
                    .map(|v| (WitnessJson::from_witness(&v.witness, Some(v.l_set)), Some(v.preimages))),
                None => find_copy(&f, &p).map(|w| (WitnessJson::from_witness(&w, None), None)),
            };
            let v = match found {
                Some((witness, preimages)) => {
                    let cert = Certificate {
                        claim: Claim::Contains { poset: PosetJson::relation_of(&p) },
                        evidence: Evidence::Embedding { family: f.clone(), witness: witness.clone() },
                    };
                    json!({ "free": false, "poset": p.label(), "l": l, "witness": witness, "preimages": preimages, "certificate": cert })
                }
                None => json!({ "free": true, "poset": p.label(), "l": l }),
            };
            emit(&v, cli.format);
            Ok(Outcome::Done)
        }
        Command::Catalog { command } => run_catalog(cli, command),
        Command::Probe { conjecture, poset, n, k } => {
            if conjecture != "1.5" {
                bail!("only --conjecture 1.5 is supported");
            }
            let p = load_poset(poset)?;
            let r = probe_conjecture_1_5(&p, *n, *k, &budget(cli, SymmetryMode::Exact))?;
            emit(&json!(r), cli.format);
            Ok(Outcome::of_status(r.status))
        }
        Command::Verify { cert } => {
            let text = std::fs::read_to_string(cert).with_context(|| format!("reading {}", cert.display()))?;
            let mut v: Value = serde_json::from_str(&text)?;
            // Accept the full output of `solve` or `embed` as well as a bare certificate.
            if let Some(inner) = v.get_mut("certificate") {
                v = inner.take();
            }
            let c: Certificate = serde_json::from_value(v).context("not a certificate")?;
            let report = verify_certificate(&c);
            emit(&json!(report), cli.format);
            Ok(Outcome::of_check(report.passed))
        }
    }
}

fn parse_predicate(s: &str) -> Result<Predicate> {
    Ok(match s.split_once(':') {
        None => match s {
            "p_free" => Predicate::PFree,
            "trace_free" => Predicate::TraceFree,
            "downward_closed" => Predicate::DownwardClosed,
            _ => bail!("unknown predicate {s:?}"),
        },
        Some(("l_trace_free", l)) => Predicate::LTraceFree { l: l.parse().context("bad l")? },
        Some(_) => bail!("unknown predicate {s:?}"),
    })
}

fn run_chains(cli: &Cli, command: &ChainsCommand) -> Result<Outcome> {
    match command {
        ChainsCommand::Scd { n } => {
            let scd = symmetric_chain_decomposition(*n)?;
            let valid = scd.validate();
            let chains: Vec<Vec<Vec<usize>>> =
                scd.chains.iter().map(|c| c.iter().map(|s| s.elements()).collect()).collect();
            let v = json!({ "n": n, "count": chains.len(), "valid": valid.is_ok(), "chains": chains });
            emit(&v, cli.format);
            Ok(Outcome::of_check(valid.is_ok()))
        }
        ChainsCommand::Lubell { family } => {
            let f = load_family(family)?;
            let lam = lubell(&f);
            let antichain = f.is_antichain();
            let v = json!({
                "n": f.n(),
                "size": f.len(),
                "lubell": lam.to_string(),
                "antichain": antichain,
                "at_most_one": lym_check(&f),
            });
            emit(&v, cli.format);
            Ok(Outcome::Done)
        }
        ChainsCommand::DiamondAudit { family } => {
            let f = load_family(family)?;
            let scd = symmetric_chain_decomposition(f.n())?;
            let graphs = chain_graphs(&f, &scd)?;
            let mut violations = Vec::new();
            for g in &graphs {
                if let Err(cycle) = check_cycle_label_condition(&g.graph) {
                    let replay = match replay_violation(&f, g, &cycle) {
                        Ok(r) => json!({
                            "trace_set": r.trace_set,
                            "sets": r.sets,
                            "diamond": r.witness.map,
                        }),
                        Err(e) => json!({ "error": e }),
                    };
                    violations.push(json!({ "chain": g.chain, "cycle": cycle, "replay": replay }));
                }
            }
            let max_mult = graphs.iter().map(|g| g.max_multiplicity()).max().unwrap_or(0);
            let v = json!({
                "n": f.n(),
                "chains": graphs.len(),
                "edges": graphs.iter().map(|g| g.edges.len()).sum::<usize>(),
                "max_multiplicity": max_mult,
                "violations": violations,
            });
            emit(&v, cli.format);
            Ok(Outcome::of_check(violations.is_empty()))
        }
    }
}

fn catalog_path(cli: &Cli) -> Result<&Path> {
    cli.catalog.as_deref().ok_or_else(|| anyhow!("no catalog: pass --catalog or set POSETRACE_CATALOG"))
}

fn kind_of(k: KindArg) -> Kind {
    match k {
        KindArg::Tr => Kind::Tr,
        KindArg::TrL => Kind::TrL,
        KindArg::La => Kind::La,
        KindArg::LaD => Kind::LaD,
        KindArg::LaU => Kind::LaU,
    }
}

fn run_catalog(cli: &Cli, command: &CatalogCommand) -> Result<Outcome> {
    match command {
        CatalogCommand::Show { kind } => {
            let cat = Catalog::load(catalog_path(cli)?)?;
            let rows: Vec<Value> = cat
                .entries()
                .filter(|e| kind.is_none_or(|k| e.key.kind == kind_of(k)))
                .map(|e| {
                    json!({
                        "key": e.key.to_string(),
                        "poset": e.poset_label,
                        "value": e.value,
                        "status": e.status,
                        "witness": e.witness,
                        "nodes": e.method.nodes,
                    })
                })
                .collect();
            emit(&Value::Array(rows), cli.format);
            Ok(Outcome::Done)
        }
        CatalogCommand::Merge { a, b, out } => {
            let merged = catalog::merge_files(a, b, out)?;
            emit(&json!({ "out": out, "entries": merged.len() }), cli.format);
            Ok(Outcome::Done)
        }
        CatalogCommand::Verify => {
            let path = catalog_path(cli)?;
            let cat = Catalog::load(path)?;
            let checks = catalog::verify_catalog(&cat, &WitnessStore::for_catalog(path));
            let passed = checks.iter().all(|c| c.report.passed);
            emit(&json!({ "passed": passed, "entries": checks }), cli.format);
            Ok(Outcome::of_check(passed))
        }
    }
}
