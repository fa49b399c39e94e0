use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use crnx::domination::{self, check_slc_preservation};
use crnx::engine::{self, AbsorbingStrategy, DomStrategy, SearchConfig, Verdict};
use crnx::forest::{decide_balance, enumerate_forests, BalanceOutcome, BalancingSystem, Nontriviality};
use crnx::graph::{self, EdgeLabel, ReactionGraph};
use crnx::invariants;
use crnx::io::{self, AnalysisReport};
use crnx::lp::{to_primitive_integers, Feasibility};
use crnx::oracle::{self, OracleError};
use crnx::{ReactionNetwork, State};
use num_bigint::BigInt;

mod args;

use args::{parse_absorbing, parse_dom, AbsorbingArg};

#[derive(Parser)]
#[command(name = "crnx", version, about = "Structural extinction analysis for reaction networks")]
struct Cli {
    /// More log output (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum NontrivialityArg {
    TrueReactions,
    Any,
}

impl From<NontrivialityArg> for Nontriviality {
    fn from(a: NontrivialityArg) -> Self {
        match a {
            NontrivialityArg::TrueReactions => Nontriviality::TrueReactions,
            NontrivialityArg::Any => Nontriviality::Any,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Search for an unbalanced exterior forest and report the verdict.
    Analyze {
        file: PathBuf,
        /// `maximal` or `all:N`
        #[arg(long, default_value = "maximal", value_parser = parse_dom)]
        dom: DomStrategy,
        /// `terminal`, `enumerate:N` or `set:"c1,c2"`
        #[arg(long, default_value = "terminal", value_parser = parse_absorbing)]
        absorbing: AbsorbingArg,
        #[arg(long, default_value_t = engine::DEFAULT_FOREST_CAP)]
        forest_cap: usize,
        #[arg(long, value_enum, default_value = "true-reactions")]
        nontriviality: NontrivialityArg,
        /// Write the JSON report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Explore the state space from one state, or from every state up to a total.
    Oracle {
        file: PathBuf,
        /// Initial state such as "X1=2,X2=0"; unnamed species start at 0.
        #[arg(long)]
        init: Option<String>,
        /// Without --init, sweep every state with at most this many molecules.
        #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = oracle::DEFAULT_STATE_CAP)]
        state_cap: usize,
        /// Complexes that should become transient, e.g. "2X1,X1+X2".
        #[arg(long)]
        check_extinction: Option<String>,
    },
    /// Complexes, linkage classes, strong linkage classes, terminals, absorbing sets.
    Structure {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        absorbing_cap: usize,
    },
    /// Conservation verdicts and P-/T-invariants.
    Invariants { file: PathBuf },
    /// The fixpoint dom-CRN and every exterior forest with its balance outcome.
    Forests {
        file: PathBuf,
        #[arg(long, default_value_t = engine::DEFAULT_FOREST_CAP)]
        forest_cap: usize,
        #[arg(long, value_enum, default_value = "true-reactions")]
        nontriviality: NontrivialityArg,
    },
    /// Re-check a JSON report against the network it came from.
    Verify { file: PathBuf, report: PathBuf },
    /// Convert between reaction text and JSON Petri documents.
    #[command(subcommand)]
    Petri(PetriCommand),
}

#[derive(Subcommand)]
enum PetriCommand {
    /// Reaction text to a JSON Petri document.
    Export { file: PathBuf },
    /// JSON Petri document to reaction text.
    Import { file: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    /// Output gathered so far, and what ran out.
    Cap { partial: String, message: String },
    Rejected(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Cap { .. } => 3,
            Failure::Rejected(_) => 1,
        }
    }
}

type Run = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ReactionNetwork, Failure> {
    let text = read(path)?;
    io::parse_crn(&text)
        .map(|d| d.network)
        .map_err(|e| Failure::Input(format!("{}:{e}", path.display())))
}

fn complex_list(net: &ReactionNetwork, list: &str) -> Result<Vec<usize>, Failure> {
    let mut out = BTreeSet::new();
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let c = io::parse_complex(part, net).map_err(|e| Failure::Input(format!("`{part}`: {e}")))?;
        let i = net
            .complex_index(&c)
            .ok_or_else(|| Failure::Input(format!("`{part}` is not a complex of the network")))?;
        out.insert(i);
    }
    Ok(out.into_iter().collect())
}

fn parse_state(net: &ReactionNetwork, spec: &str) -> Result<State, Failure> {
    let mut counts = vec![0u64; net.species_count()];
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Failure::Input(format!("expected NAME=COUNT, got `{part}`")))?;
        let i = net
            .species_index(name.trim())
            .ok_or_else(|| Failure::Input(format!("unknown species `{}`", name.trim())))?;
        counts[i] = value
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("bad count in `{part}`")))?;
    }
    Ok(State::new(counts))
}

fn names(net: &ReactionNetwork, idx: impl IntoIterator<Item = usize>) -> String {
    idx.into_iter().map(|c| net.complex_name(c)).collect::<Vec<_>>().join(", ")
}

fn blocks(net: &ReactionNetwork, b: &[Vec<usize>]) -> String {
    b.iter()
        .map(|blk| format!("{{{}}}", names(net, blk.iter().copied())))
        .collect::<Vec<_>>()
        .join(" ")
}

fn ints(v: &[BigInt]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn label(l: EdgeLabel) -> String {
    match l {
        EdgeLabel::Reaction(k) => format!("R{}", k + 1),
        EdgeLabel::Domination(j) => format!("D{}", j + 1),
    }
}

fn analyze(
    file: &Path,
    dom: DomStrategy,
    absorbing: AbsorbingArg,
    forest_cap: usize,
    nontriviality: Nontriviality,
    json: Option<&Path>,
) -> Run {
    let net = load(file)?;
    let absorbing = match absorbing {
        AbsorbingArg::Terminal => AbsorbingStrategy::Terminal,
        AbsorbingArg::Enumerate(n) => AbsorbingStrategy::Enumerate(n),
        AbsorbingArg::Set(list) => AbsorbingStrategy::Explicit(complex_list(&net, &list)?.into_iter().collect()),
    };
    let cfg = SearchConfig {
        dom,
        absorbing,
        forest_cap,
        nontriviality,
    };
    let verdict = engine::analyze(&net, &cfg).map_err(|e| Failure::Input(e.to_string()))?;
    let report = AnalysisReport::new(&net, &verdict);
    let mut out = report.to_text();
    if let Some(path) = json {
        if path == Path::new("-") {
            out.push_str(&report.to_json());
            out.push('\n');
        } else {
            std::fs::write(path, report.to_json())
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        }
    }
    if let Verdict::Inconclusive { stats } = &verdict {
        if stats.truncated() {
            return Err(Failure::Cap {
                partial: out,
                message: "search stopped at a cap before it was exhausted".into(),
            });
        }
    }
    Ok(out)
}

fn oracle_cmd(file: &Path, init: Option<&str>, budget: u64, state_cap: usize, check: Option<&str>) -> Run {
    let net = load(file)?;
    let yc = check.map(|c| complex_list(&net, c)).transpose()?;
    let cap = |e: OracleError| match e {
        OracleError::CapExceeded { .. } => Failure::Cap {
            partial: String::new(),
            message: e.to_string(),
        },
        other => Failure::Input(other.to_string()),
    };
    let mut out = String::new();
    let Some(init) = init else {
        let yc = yc.unwrap_or_else(|| {
            let t = graph::terminal_complexes(&ReactionGraph::of_network(&net));
            (0..net.complex_count()).filter(|c| !t.contains(c)).collect()
        });
        let sweep = oracle::guaranteed_extinction_on(&net, &yc, budget, state_cap).map_err(cap)?;
        let _ = writeln!(
            out,
            "checked {} initial states with total <= {budget} (largest state space {})",
            sweep.roots_checked, sweep.max_states
        );
        write_extinction(&mut out, &net, &yc, sweep.counterexample.as_ref());
        return Ok(out);
    };
    let root = parse_state(&net, init)?;
    let g = oracle::explore(&net, &root, state_cap).map_err(cap)?;
    let rec = oracle::recurrent_states(&g);
    let _ = writeln!(
        out,
        "{} reachable states, {} recurrent",
        g.len(),
        rec.iter().filter(|&&b| b).count()
    );
    let rc = oracle::recurrent_complexes(&net, &g);
    let _ = writeln!(
        out,
        "recurrent complexes: {}",
        names(&net, (0..net.complex_count()).filter(|&c| rc[c]))
    );
    let _ = writeln!(
        out,
        "transient complexes: {}",
        names(&net, (0..net.complex_count()).filter(|&c| !rc[c]))
    );
    if let Some(yc) = yc {
        let sweep = oracle::extinction_over_roots(&net, &yc, &[root], state_cap).map_err(cap)?;
        write_extinction(&mut out, &net, &yc, sweep.counterexample.as_ref());
    }
    Ok(out)
}

fn write_extinction(out: &mut String, net: &ReactionNetwork, yc: &[usize], cex: Option<&oracle::Counterexample>) {
    let species = net.species_names();
    let show = |x: &State| {
        x.counts()
            .iter()
            .zip(&species)
            .map(|(v, s)| format!("{s}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    };
    match cex {
        None => {
            let _ = writeln!(out, "extinction holds on {{{}}}", names(net, yc.iter().copied()));
        }
        Some(c) => {
            let _ = writeln!(
                out,
                "extinction fails: {} is recurrent from {}",
                net.complex_name(c.complex),
                show(&c.root)
            );
            let _ = writeln!(out, "recurrent witness: {}", show(&c.witness));
            let path: Vec<String> = c.trace.reactions.iter().map(|k| format!("R{}", k + 1)).collect();
            let _ = writeln!(out, "trace: {}", if path.is_empty() { "(start)".into() } else { path.join(" ") });
        }
    }
}

fn structure(file: &Path, absorbing_cap: usize) -> Run {
    let net = load(file)?;
    if absorbing_cap == 0 {
        return Err(Failure::Input("--absorbing-cap must be at least 1".into()));
    }
    let g = ReactionGraph::of_network(&net);
    let mut out = String::new();
    let _ = writeln!(out, "species: {}", net.species_names().join(", "));
    let _ = writeln!(out, "complexes:");
    for c in 0..net.complex_count() {
        let _ = writeln!(out, "  C{}: {}", c + 1, net.complex_name(c));
    }
    let _ = writeln!(out, "reactions:");
    for r in net.reactions() {
        let _ = writeln!(
            out,
            "  R{}: {} -> {}",
            r.index + 1,
            net.complex_name(r.source),
            net.complex_name(r.target)
        );
    }
    let _ = writeln!(out, "stoichiometric matrix:");
    for row in net.stoich_matrix().to_rows() {
        let _ = writeln!(out, "  {}", row.iter().map(|v| format!("{v:>3}")).collect::<String>());
    }
    let _ = writeln!(out, "linkage classes: {}", blocks(&net, graph::linkage_classes(&g).blocks()));
    let _ = writeln!(out, "strong linkage classes: {}", blocks(&net, graph::strong_linkage_classes(&g).blocks()));
    let _ = writeln!(out, "terminal classes: {}", blocks(&net, &graph::terminal_slcs(&g)));
    let sets = graph::enumerate_absorbing_sets(&g, absorbing_cap);
    let _ = writeln!(
        out,
        "absorbing sets ({}{}):",
        sets.sets.len(),
        if sets.truncated { ", truncated" } else { "" }
    );
    for s in &sets.sets {
        let _ = writeln!(out, "  {{{}}}", names(&net, s.iter().copied()));
    }
    Ok(out)
}

fn invariants_cmd(file: &Path) -> Run {
    let net = load(file)?;
    let gamma = net.stoich_matrix();
    let mut out = String::new();
    let lp = |e: crnx::lp::LpError| Failure::Input(e.to_string());
    for (name, f) in [
        ("conservative", invariants::is_conservative(&gamma).map_err(lp)?),
        ("subconservative", invariants::is_subconservative(&gamma).map_err(lp)?),
    ] {
        match f {
            Feasibility::Feasible(c) => {
                let _ = writeln!(out, "{name}: yes, c = ({})", ints(&to_primitive_integers(&c)));
            }
            Feasibility::Infeasible(_) => {
                let _ = writeln!(out, "{name}: no (Farkas witness verified)");
            }
        }
    }
    let p = invariants::p_invariants(&gamma);
    let _ = writeln!(out, "P-invariants ({}):", p.len());
    for r in &p.rays {
        let _ = writeln!(out, "  ({})", ints(r));
    }
    let t = invariants::t_invariants(&gamma);
    let _ = writeln!(out, "T-invariants ({}):", t.len());
    for r in &t.rays {
        let _ = writeln!(out, "  ({})", ints(r));
    }
    Ok(out)
}

fn forests_cmd(file: &Path, forest_cap: usize, reading: Nontriviality) -> Run {
    let net = load(file)?;
    if forest_cap == 0 {
        return Err(Failure::Input("--forest-cap must be at least 1".into()));
    }
    let dc = domination::maximal_admissible(&net);
    let mut out = String::new();
    let _ = writeln!(out, "domination edges:");
    for (j, e) in dc.dom_edges().iter().enumerate() {
        let _ = writeln!(out, "  D{}: {} -> {}", j + 1, net.complex_name(e.from), net.complex_name(e.to));
    }
    let _ = writeln!(out, "absorbing set: {{{}}}", names(&net, dc.absorbing().iter().copied()));
    let sub = invariants::is_subconservative(&net.stoich_matrix())
        .map_err(|e| Failure::Input(e.to_string()))?
        .is_feasible();
    let _ = writeln!(out, "subconservative: {}", if sub { "yes" } else { "no" });
    if let Err(e) = check_slc_preservation(sub, &dc) {
        return Err(Failure::Input(format!("internal check failed: {e}")));
    }
    if dc.exterior().is_empty() {
        let _ = writeln!(out, "no exterior complexes");
        return Ok(out);
    }
    let list = enumerate_forests(&dc, forest_cap).map_err(|e| Failure::Input(e.to_string()))?;
    for (i, f) in list.forests.iter().enumerate() {
        let sys = BalancingSystem::build(&dc, f, reading);
        let outcome = decide_balance(&sys).map_err(|e| Failure::Input(e.to_string()))?;
        let edges: Vec<String> = f.edges().into_iter().map(label).collect();
        let verdict = match &outcome {
            BalanceOutcome::Balanced { alpha, positive_edge } => {
                format!("balanced, alpha = ({}) with {} > 0", ints(alpha), label(*positive_edge))
            }
            BalanceOutcome::Unbalanced { witnesses } => {
                format!("unbalanced, Farkas witness per candidate: {}", witnesses.len())
            }
        };
        let _ = writeln!(out, "forest {}: {}: {verdict}", i + 1, edges.join(" "));
    }
    if list.truncated {
        return Err(Failure::Cap {
            partial: out,
            message: format!("stopped after {forest_cap} forests"),
        });
    }
    Ok(out)
}

fn verify_cmd(file: &Path, report: &Path) -> Run {
    let net = load(file)?;
    let r = AnalysisReport::from_json(&read(report)?).map_err(|e| Failure::Input(e.to_string()))?;
    let verdict = r.to_verdict().map_err(|e| Failure::Input(e.to_string()))?;
    match engine::verify_verdict(&net, &verdict) {
        Ok(()) => Ok(format!("{} verdict verified\n", verdict.kind().replace('_', " "))),
        Err(e) => Err(Failure::Rejected(format!("report rejected: {e}"))),
    }
}

fn petri(cmd: PetriCommand) -> Run {
    match cmd {
        PetriCommand::Export { file } => {
            let net = load(&file)?;
            Ok(io::petri_to_json(&io::petri_export(&net)) + "\n")
        }
        PetriCommand::Import { file } => {
            let doc = io::petri_from_json(&read(&file)?).map_err(|e| Failure::Input(e.to_string()))?;
            let net = io::petri_import(&doc).map_err(|e| Failure::Input(e.to_string()))?;
            Ok(io::print_crn(&net))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match cli.command {
        Command::Analyze {
            file,
            dom,
            absorbing,
            forest_cap,
            nontriviality,
            json,
        } => analyze(&file, dom, absorbing, forest_cap, nontriviality.into(), json.as_deref()),
        Command::Oracle {
            file,
            init,
            budget,
            state_cap,
            check_extinction,
        } => oracle_cmd(&file, init.as_deref(), budget, state_cap, check_extinction.as_deref()),
        Command::Structure { file, absorbing_cap } => structure(&file, absorbing_cap),
        Command::Invariants { file } => invariants_cmd(&file),
        Command::Forests {
            file,
            forest_cap,
            nontriviality,
        } => forests_cmd(&file, forest_cap, nontriviality.into()),
        Command::Verify { file, report } => verify_cmd(&file, &report),
        Command::Petri(cmd) => petri(cmd),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            let code = f.code();
            match f {
                Failure::Input(m) | Failure::Rejected(m) => eprintln!("crnx: {m}"),
                Failure::Cap { partial, message } => {
                    print!("{partial}");
                    eprintln!("crnx: {message}");
                }
            }
            ExitCode::from(code)
        }
    }
}
