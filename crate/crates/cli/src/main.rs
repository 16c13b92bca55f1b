use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use splitrank_core::matgroup::{enumerate_group, GroupKind, DEFAULT_GROUP_CAP};
use splitrank_core::prank::{self, LemmaVariant, SearchConfig, DEFAULT_SEARCH_BUDGET};
use splitrank_core::report::{
    rank_rows_to_csv, threshold_rows_to_csv, CheckResult, RankRow, ThresholdRow, WitnessJson,
};
use splitrank_core::selftest::{self, GridConfig, LemmaCell, PrCell, RankCell};
use splitrank_core::symplectic::{enumerate_lagrangians, SymplecticSpace, DEFAULT_LAGRANGIAN_WORK_CAP};
use splitrank_core::verdict::{galois_rank_bound, sl_rank_bound, threshold, verdict, TheoremParams};
use splitrank_core::{AlgebraPresentation, Error, ExponentVector, ModulusContext, Report, Result};

#[derive(Parser)]
#[command(name = "splitrank", version, about = "Rank bounds for splitting Brauer classes by genus-one curves")]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Print the JSON report.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Print the rank or threshold table as CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Run the rank search on all cores.
    #[arg(long, global = true)]
    parallel: bool,
    /// Abort a rank search after this many search nodes.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: u64,
    /// Refuse to enumerate groups larger than this.
    #[arg(long, global = true, default_value_t = DEFAULT_GROUP_CAP)]
    group_cap: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Sl,
    Gl,
}

impl From<GroupArg> for GroupKind {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Sl => GroupKind::Sl,
            GroupArg::Gl => GroupKind::Gl,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact p-rank of SL_n or GL_n over Z/p^e.
    Prank {
        #[arg(long, value_enum)]
        group: GroupArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        /// Search the unitriangular Sylow p-subgroup instead (e = 1).
        #[arg(long)]
        sylow: bool,
    },
    /// Order-p elements of the congruence kernel lie in H_{e-1}.
    Lemma {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        /// Run the false H_1 variant for p = 2, which must find 3I.
        #[arg(long)]
        probe_h1: bool,
    },
    /// Involutions of SL_2(Z/2^e).
    Involutions {
        #[arg(long)]
        e: u32,
    },
    /// Lagrangian subspaces of the standard symplectic space F_p^{2r}.
    Lagrangians {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Commutator pairing on the value group of the monomial algebra.
    Pairing {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: usize,
    },
    /// Ramification index of the monomial algebra over its centre.
    Index {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: usize,
    },
    /// Least r forcing a contradiction.
    Threshold {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        g: u64,
    },
    /// Compare the lower and upper rank bounds for given (p, g, r).
    Verdict {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        g: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        e: Option<u32>,
    },
    /// Run the verification grid; a JSON grid file overrides the default.
    Selftest {
        #[arg(long)]
        grid: Option<PathBuf>,
    },
}

/// What a subcommand produced: the report plus the tables it can emit as CSV.
struct Output {
    report: Report,
    rank_rows: Vec<RankRow>,
    threshold_rows: Vec<ThresholdRow>,
    /// Extra human-readable lines printed before the check table.
    text: String,
}

impl Output {
    fn new(params: serde_json::Value, results: Vec<CheckResult>, start: Instant) -> Self {
        Output {
            report: Report::new(params, results, start.elapsed().as_millis() as u64),
            rank_rows: Vec::new(),
            threshold_rows: Vec::new(),
            text: String::new(),
        }
    }
}

fn run(command: &Command, out: &OutputArgs) -> Result<Output> {
    let start = Instant::now();
    let cfg = SearchConfig { budget: out.budget, parallel: out.parallel };
    let cap = out.group_cap;
    let output = match *command {
        Command::Prank { group, n, p, e, sylow } => {
            let kind = GroupKind::from(group);
            let params = json!({ "group": kind, "n": n, "p": p, "e": e, "sylow": sylow });
            let (check, row) = if kind == GroupKind::Sl || sylow {
                selftest::rank_check(&RankCell { n, p, e, sylow }, cap, &cfg)?
            } else {
                let g = enumerate_group(kind, n, ModulusContext::new(p, e)?, cap)?;
                let (rank, w) = prank::p_rank(&g, &cfg)?;
                let check = CheckResult::new(
                    format!("rank/gl{n}/p{p}/e{e}"),
                    w.validate().is_ok(),
                    json!({ "rank": rank }),
                    "p-rank-search",
                )
                .with_witness(WitnessJson::from_witness(&w));
                (check, RankRow { p, e, n, rank, bound: None, expected: None })
            };
            let mut o = Output::new(params, vec![check], start);
            o.rank_rows.push(row);
            o
        }
        Command::Lemma { n, p, e, probe_h1 } => {
            let variant = match (p, probe_h1) {
                (2, true) => LemmaVariant::ProbeH1,
                (2, false) => LemmaVariant::Two,
                (_, false) => LemmaVariant::OddP,
                (_, true) => return Err(Error::InvalidParameter("--probe-h1 needs p = 2".into())),
            };
            let results = [GroupKind::Sl, GroupKind::Gl]
                .into_iter()
                .map(|kind| selftest::kernel_lemma_check(&LemmaCell { kind, n, p, e, variant }, cap))
                .collect::<Result<Vec<_>>>()?;
            Output::new(json!({ "n": n, "p": p, "e": e, "variant": variant }), results, start)
        }
        Command::Involutions { e } => {
            let check = selftest::involution_check(e, cap, &cfg)?;
            Output::new(json!({ "e": e }), vec![check], start)
        }
        Command::Lagrangians { p, r, count_only } => {
            let check = selftest::lagrangian_check(&PrCell { p, r }, DEFAULT_LAGRANGIAN_WORK_CAP)?;
            let mut o = Output::new(json!({ "p": p, "r": r, "count_only": count_only }), vec![check], start);
            if !count_only {
                let space = SymplecticSpace::new(p, r)?;
                let lags = enumerate_lagrangians(&space, DEFAULT_LAGRANGIAN_WORK_CAP)?;
                let bases: Vec<_> = lags.iter().map(|l| l.basis().to_vec()).collect();
                for b in &bases {
                    let _ = writeln!(o.text, "{b:?}");
                }
                o.report.results[0].value["lagrangians"] = json!(bases);
            }
            o
        }
        Command::Pairing { p, r } => {
            let check = selftest::pairing_check(&PrCell { p, r })?;
            let pres = AlgebraPresentation::new(p, r)?;
            let basis: Vec<_> = (0..2 * r).map(|i| ExponentVector::unit(2 * r, i)).collect();
            let mut gram = Vec::new();
            for a in &basis {
                let row = basis.iter().map(|b| pres.commutator_pairing(a, b)).collect::<Result<Vec<_>>>()?;
                gram.push(row);
            }
            let mut o = Output::new(json!({ "p": p, "r": r }), vec![check], start);
            for row in &gram {
                let _ = writeln!(o.text, "{}", row.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
            }
            o.report.results[0].value["gram"] = json!(gram);
            o
        }
        Command::Index { p, r } => {
            Output::new(json!({ "p": p, "r": r }), vec![selftest::index_check(&PrCell { p, r })?], start)
        }
        Command::Threshold { p, g } => {
            TheoremParams::new(p, g, 1, None)?;
            let check = selftest::theorem_check(p, g)?;
            let mut o = Output::new(json!({ "p": p, "g": g }), vec![check], start);
            o.threshold_rows.push(ThresholdRow {
                p,
                g,
                sl_bound: sl_rank_bound(p, None, g).value,
                galois_bound: galois_rank_bound(p, None, g),
                threshold: threshold(p, g),
            });
            o
        }
        Command::Verdict { p, g, r, e } => {
            let params = TheoremParams::new(p, g, r, e)?;
            let v = verdict(&params);
            let value = serde_json::to_value(&v).expect("verdict is serializable");
            let check =
                CheckResult::new(format!("verdict/p{p}/g{g}/r{r}"), v.is_consistent(), value, "rank-comparison");
            let mut o = Output::new(serde_json::to_value(params).expect("serializable"), vec![check], start);
            for s in &v.chain {
                let _ = writeln!(
                    o.text,
                    "{:<4} {}{}  [{}]",
                    s.value,
                    s.claim,
                    if s.axiom { " (axiom)" } else { "" },
                    s.anchor
                );
            }
            let _ = writeln!(
                o.text,
                "lower {} vs upper {}: {}",
                v.lower_bound,
                v.upper_bound,
                if v.contradiction { "contradiction, no genus-one curve splits the class" } else { "no contradiction" }
            );
            o.threshold_rows.push(ThresholdRow {
                p,
                g,
                sl_bound: sl_rank_bound(p, e, g).value,
                galois_bound: v.upper_bound,
                threshold: v.threshold,
            });
            o
        }
        Command::Selftest { ref grid } => {
            let mut config = match grid {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
                    serde_json::from_str::<GridConfig>(&text)
                        .map_err(|e| Error::InvalidParameter(format!("bad grid file {}: {e}", path.display())))?
                }
                None => GridConfig::default(),
            };
            if out.budget != DEFAULT_SEARCH_BUDGET {
                config.search_budget = out.budget;
            }
            if out.group_cap != DEFAULT_GROUP_CAP {
                config.group_cap = out.group_cap;
            }
            let (report, rank_rows) = selftest::run_selftest(&config)?;
            let mut o = Output::new(json!(null), Vec::new(), start);
            o.report = report;
            o.rank_rows = rank_rows;
            for p in &config.theorem_primes {
                for g in &config.theorem_genera {
                    o.threshold_rows.push(ThresholdRow {
                        p: *p,
                        g: *g,
                        sl_bound: sl_rank_bound(*p, None, *g).value,
                        galois_bound: galois_rank_bound(*p, None, *g),
                        threshold: threshold(*p, *g),
                    });
                }
            }
            o
        }
    };
    Ok(output)
}

fn render_csv(o: &Output) -> String {
    let mut s = String::new();
    if !o.rank_rows.is_empty() {
        s += &rank_rows_to_csv(&o.rank_rows);
    }
    if !o.threshold_rows.is_empty() {
        if !s.is_empty() {
            s.push('\n');
        }
        s += &threshold_rows_to_csv(&o.threshold_rows);
    }
    if s.is_empty() {
        s += "check_id,status,anchor\n";
        for r in &o.report.results {
            let status = serde_json::to_value(r.status).expect("serializable");
            let _ = writeln!(s, "{},{},{}", r.check_id, status.as_str().unwrap_or_default(), r.anchor);
        }
    }
    s
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli.command, &cli.output) {
        Ok(o) => {
            let text = if cli.output.json {
                serde_json::to_string_pretty(&o.report).expect("report is serializable") + "\n"
            } else if cli.output.csv {
                render_csv(&o)
            } else {
                o.text.clone() + &o.report.to_table()
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(o.report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_infeasible() { 2 } else { 1 })
        }
    }
}
