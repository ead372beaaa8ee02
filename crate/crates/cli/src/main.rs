mod descriptor;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use tritower::artin::{artin_pattern, parse_quadruple, Ati2, Tkt};
use tritower::classify::{classify, detect_state, Length, Signature};
use tritower::families::Tree;
use tritower::ingest::{emit_tree_dot, parse_records, report, Mode};
use tritower::pq::{p_quotient, rank_report, FpPresentation};
use tritower::sigma::{schur_status, SigmaOptions};

use descriptor::{GroupArgs, TreeArg};

#[derive(Parser, Debug)]
#[command(name = "tritower", version, about = "Finite 3-groups, Artin patterns and tower length criteria")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a family group or inspect it
    #[command(subcommand)]
    Group(GroupCommand),
    /// p-quotient of a finitely presented group
    Pq {
        /// File with an `fp n=<ngens>` header and one relator per line
        fp_file: PathBuf,
        /// Bound on the lower exponent-p class
        #[arg(long)]
        class: usize,
        #[arg(long, default_value_t = 3)]
        prime: u8,
        /// Also report generator, relation and nuclear rank
        #[arg(long)]
        ranks: bool,
    },
    /// Transfer kernel type and abelian type invariants
    Pattern {
        #[command(flatten)]
        group: GroupArgs,
        /// Skip the second-order invariants
        #[arg(long)]
        first_order: bool,
    },
    /// Search for an involutory automorphism inverting H^1 (and H^2)
    Sigma {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        check_h2: bool,
        /// Largest logarithmic order searched
        #[arg(long, default_value_t = 10)]
        max_lo: usize,
    },
    /// Tower length verdict from a TKT and second-order invariants
    Classify {
        /// Four digits or a type name
        #[arg(long)]
        tkt: String,
        /// `real` or `imaginary`
        #[arg(long)]
        sig: Signature,
        /// First-order invariants, e.g. `[43,21,21,21]`
        #[arg(long)]
        ati: Option<String>,
        /// File holding second-order invariants
        #[arg(long, conflicts_with = "ati2")]
        ati2_file: Option<PathBuf>,
        /// Second-order invariants inline
        #[arg(long)]
        ati2: Option<String>,
    },
    /// Screen or classify a record file
    Ingest {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "screen")]
        mode: ModeArg,
    },
    /// Descendant tree skeleton as a DOT graph
    TreeDot {
        #[arg(long, value_enum)]
        tree: TreeArg,
        #[arg(long, default_value_t = 8)]
        max_lo: u32,
    },
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    /// Print the pc presentation
    Build(GroupArgs),
    /// Print order, class, coclass and series data
    Info(GroupArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Screen,
    Classify,
    Stats,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Screen => Mode::Screen,
            ModeArg::Classify => Mode::Classify,
            ModeArg::Stats => Mode::Stats,
        }
    }
}

fn emit(format: Format, text: impl FnOnce() -> String, value: impl Serialize) -> Result<()> {
    match format {
        Format::Text => print!("{}", text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value)?),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let fmt = cli.format;
    match cli.command {
        Command::Group(GroupCommand::Build(args)) => {
            let g = args.load()?;
            let text = g.group.to_text();
            emit(fmt, || text.clone(), json!({
                "group": g.label,
                "log_order": g.group.ngens(),
                "presentation": text,
            }))?;
        }
        Command::Group(GroupCommand::Info(args)) => {
            let g = args.load()?;
            let s = g.group.series_and_sizes();
            let consistent = g.group.is_consistent();
            emit(
                fmt,
                || {
                    format!(
                        "group {}\nlog_order {}\nclass {}\ncoclass {}\nderived_length {}\nlower_central {:?}\nderived {:?}\nconsistent {consistent}\n",
                        g.label, s.log_order, s.class, s.coclass, s.derived_length, s.lower_central, s.derived
                    )
                },
                json!({
                    "group": g.label,
                    "descriptor": g.descriptor,
                    "log_order": s.log_order,
                    "class": s.class,
                    "coclass": s.coclass,
                    "derived_length": s.derived_length,
                    "lower_central": s.lower_central,
                    "derived": s.derived,
                    "consistent": consistent,
                }),
            )?;
        }
        Command::Pq { fp_file, class, prime, ranks } => {
            let text = std::fs::read_to_string(&fp_file)
                .with_context(|| format!("reading {}", fp_file.display()))?;
            let fp = FpPresentation::parse(&text)?;
            let g = p_quotient(&fp, prime, class)?;
            let r = if ranks { Some(rank_report(&g)?) } else { None };
            let pc = g.to_text();
            emit(
                fmt,
                || {
                    let mut out = pc.clone();
                    if let Some(r) = r {
                        out.push_str(&format!("# d1={} d2={} nu={}\n", r.d1, r.d2, r.nu));
                    }
                    out
                },
                json!({
                    "log_order": g.ngens(),
                    "class": g.nilpotency_class(),
                    "presentation": pc,
                    "ranks": r,
                }),
            )?;
        }
        Command::Pattern { group, first_order } => {
            let g = group.load()?;
            let p = artin_pattern(&g.group, !first_order)?;
            let name = p.tkt.type_name();
            emit(
                fmt,
                || {
                    let mut out = format!(
                        "group {}\ntkt {} ({})\nati {}\nalpha0 {}\n",
                        g.label,
                        p.tkt,
                        name.unwrap_or("unnamed"),
                        p.ati,
                        p.ati.alpha0
                    );
                    if let Some(a) = &p.ati2 {
                        out.push_str(&format!("ati2 {a}\n"));
                    }
                    out
                },
                json!({
                    "group": g.label,
                    "tkt": p.tkt,
                    "raw_tkt": p.raw_tkt,
                    "type": name,
                    "ati": p.ati.to_string(),
                    "alpha0": p.ati.alpha0.to_string(),
                    "ati2": p.ati2.as_ref().map(|a| a.to_string()),
                }),
            )?;
        }
        Command::Sigma { group, check_h2, max_lo } => {
            let g = group.load()?;
            let opts = SigmaOptions {
                check_h2,
                max_log_order: max_lo,
            };
            let s = schur_status(&g.group, &opts)?;
            emit(
                fmt,
                || format!("sigma {}\nd1 {}\nd2 {}\nnu {}\nclass {:?}\n", s.sigma, s.d1, s.d2, s.nu, s.class),
                s,
            )?;
        }
        Command::Classify { tkt, sig, ati, ati2_file, ati2 } => {
            let k: Tkt = tkt.parse().context("--tkt")?;
            let state = ati
                .as_deref()
                .map(parse_quadruple)
                .transpose()
                .context("--ati")?
                .map(|q| detect_state(&q));
            let ati2_text = match (ati2_file, ati2) {
                (Some(path), _) => Some(
                    std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?,
                ),
                (None, inline) => inline,
            };
            let second: Option<Ati2> = ati2_text
                .map(|t| t.trim().parse())
                .transpose()
                .context("second-order invariants")?;
            let v = classify(&k, sig, second.as_ref())?;
            emit(
                fmt,
                || {
                    let mut out = format!("{} {}", v.length.token(), v.reason);
                    if v.conjectural {
                        out.push_str(" (conjectural for n>=5)");
                    }
                    if let Some(s) = &state {
                        out.push_str(&format!("\nstate {s}"));
                    }
                    out.push('\n');
                    out
                },
                json!({
                    "tkt": k.canonical(),
                    "type": k.type_name(),
                    "verdict": v.length.token(),
                    "reason": v.reason,
                    "conjectural": v.conjectural,
                    "state": state,
                }),
            )?;
            if v.length == Length::Unknown {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Ingest { file, mode } => {
            let text = std::fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            let records = parse_records(&text).with_context(|| format!("in {}", file.display()))?;
            let r = report(&records, mode.into());
            emit(fmt, || r.to_csv(), &r)?;
        }
        Command::TreeDot { tree, max_lo } => {
            let dot = emit_tree_dot(Tree::from(tree), max_lo)?;
            emit(fmt, || dot.clone(), json!({ "dot": dot }))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
