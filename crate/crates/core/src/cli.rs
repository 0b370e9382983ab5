//! Command-line front end. Exit codes: 0 success, 1 mathematical failure, 2 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bridge::{check_z_identities, extend, restrict_to_borel, roundtrip_check};
use crate::error::{Error, Result};
use crate::module_store::{
    detect_profile, evaluation_module, verify_as, AsymmetryPolicy, Representation, Sign,
    VerifyReport,
};
use crate::presentation::{CartanData, PresentationId};
use crate::scalar::Scalar;
use crate::split::{check_split_lemmas, split_node};
use crate::weight::{
    check_central, check_weight_lab, orbit_graph, weight_decomposition, ORBIT_BOUND,
};

#[derive(Parser, Debug)]
#[command(
    name = "qaffine",
    version,
    about = "Exact modules for quantum affine algebras and their Borel subalgebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write an evaluation module of affine sl2.
    Build(BuildArgs),
    /// Check the defining relations of a module file.
    Verify {
        file: PathBuf,
        /// Presentation to check against; defaults to the file's own.
        #[arg(long)]
        presentation: Option<PresentationId>,
    },
    /// U, V and W decompositions of a Borel module at one node, with the structural checks.
    Split {
        file: PathBuf,
        /// Node index, starting at 1.
        #[arg(long)]
        node: usize,
    },
    /// Restrict a full module to the Borel subalgebra and extend it back.
    Roundtrip {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<List<Scalar>>,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<List<Sign>>,
    },
    /// Restrict a full module to a Borel module of type alpha.
    Restrict {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<List<Scalar>>,
    },
    /// Extend an irreducible Borel module to a full module of type eps.
    Extend {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<List<Sign>>,
    },
    /// Weight spaces, orbit graph and central element of a full module.
    Weights { file: PathBuf },
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    pub q: Scalar,
    /// Builtin name `affine-sl2` or a Cartan data JSON file.
    #[arg(long, default_value = "affine-sl2")]
    pub cartan: String,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub a: Scalar,
    #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
    pub eps: List<Sign>,
}

/// Comma-separated list such as `7,1/3` or `-1,1`.
#[derive(Clone, Debug)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr<Err = Error>> FromStr for List<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|x| x.trim().parse())
            .collect::<Result<_>>()
            .map(List)
    }
}

/// Input errors exit with 2, everything else with 1.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::Json(_)
        | Error::Io(_)
        | Error::Presentation { .. }
        | Error::Dimension(_)
        | Error::Domain(_)
        | Error::Cartan(_)
        | Error::Unassigned(_) => 2,
        _ => 1,
    }
}

fn load(path: &Path) -> Result<Representation> {
    Representation::from_json(&fs::read_to_string(path)?)
}

fn load_cartan(spec: &str, q: &Scalar) -> Result<CartanData> {
    if spec == "affine-sl2" {
        return CartanData::affine_sl2(q.clone());
    }
    let cd: CartanData = serde_json::from_str(&fs::read_to_string(spec)?)?;
    cd.with_q(q.clone())
}

struct Output {
    json: Value,
    text: String,
    ok: bool,
}

impl Output {
    fn new(json: Value, text: String, ok: bool) -> Self {
        Output { json, text, ok }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn emit(cli: &Cli, out: &Output) -> Result<()> {
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out.json)? + "\n",
        Format::Text => out.text.clone(),
    };
    match &cli.out {
        Some(p) => fs::write(p, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn report_output(json: Value, report: &VerifyReport) -> Output {
    Output::new(json, report.to_text(), report.overall)
}

fn run_command(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Build(b) => {
            let cd = load_cartan(&b.cartan, &b.q)?;
            if b.eps.0.len() != 2 {
                return Err(Error::Dimension("--eps needs two signs".into()));
            }
            let rep = evaluation_module(b.d, &b.a, [b.eps.0[0], b.eps.0[1]], &cd)?;
            let text = format!("{} module of dimension {}\n", rep.pid().name(), rep.dim());
            Ok(Output::new(to_value(&rep), text, true))
        }
        Command::Verify { file, presentation } => {
            let rep = load(file)?;
            let pid = presentation.unwrap_or(rep.pid());
            let report = verify_as(&rep, pid)?;
            let json = json!({
                "presentation": pid,
                "dim": rep.dim(),
                "report": report,
            });
            Ok(report_output(json, &report))
        }
        Command::Split { file, node } => {
            let rep = load(file)?;
            rep.require_borel()?;
            if *node == 0 || *node > rep.rank() {
                return Err(Error::Domain(format!(
                    "node {node} out of range 1..={}",
                    rep.rank()
                )));
            }
            let i = node - 1;
            let profile = detect_profile(&rep, None, AsymmetryPolicy::default())?;
            let sp = split_node(&rep, i, &profile.nodes[i])?;
            let report = check_split_lemmas(&rep, &sp.u, &sp.v, &sp.w)?;
            let json = json!({
                "node": node,
                "profile": profile,
                "U": sp.u,
                "V": sp.v,
                "W": sp.w,
                "report": report,
            });
            let text = format!(
                "node {node}: U {:?} V {:?} W {:?}\n{}",
                sp.u.dims(),
                sp.v.dims(),
                sp.w.dims(),
                report.to_text()
            );
            Ok(Output::new(json, text, report.overall))
        }
        Command::Roundtrip { file, alpha, eps } => {
            let rep = load(file)?;
            let alpha = alpha
                .clone()
                .map(|l| l.0)
                .unwrap_or_else(|| vec![Scalar::one(); rep.rank()]);
            match roundtrip_check(&rep, &alpha, eps.as_ref().map(|l| l.0.as_slice())) {
                Err(Error::Reducible { witness }) => {
                    let json = json!({
                        "refused": true,
                        "irreducibility": {"verdict": "REDUCIBLE", "witness": witness},
                    });
                    let text = format!(
                        "refused: REDUCIBLE, invariant subspace of dimension {}\n",
                        witness.dim()
                    );
                    Ok(Output::new(json, text, false))
                }
                Err(e) => Err(e),
                Ok(rt) => {
                    let mut text = rt.checks.to_text();
                    for n in &rt.notes {
                        text.push_str(&format!("note: {n}\n"));
                    }
                    Ok(Output::new(to_value(&rt), text, rt.overall()))
                }
            }
        }
        Command::Restrict { file, alpha } => {
            let rep = load(file)?;
            let alpha = alpha
                .clone()
                .map(|l| l.0)
                .unwrap_or_else(|| vec![Scalar::one(); rep.rank()]);
            let borel = restrict_to_borel(&rep, &alpha)?;
            let text = format!(
                "{} module of dimension {}\n",
                borel.pid().name(),
                borel.dim()
            );
            Ok(Output::new(to_value(&borel), text, true))
        }
        Command::Extend { file, eps } => {
            let rep = load(file)?;
            let eps = eps
                .clone()
                .map(|l| l.0)
                .unwrap_or_else(|| Sign::all_plus(rep.rank()));
            let ext = extend(&rep, &eps)?;
            let z = check_z_identities(&ext)?;
            let ok = z.overall;
            let json = json!({
                "module": ext.full,
                "certificate": ext.certificate,
                "z_identities": z,
            });
            let text = format!(
                "extended to {} module of dimension {}{}\n{}",
                ext.full.pid().name(),
                ext.full.dim(),
                if ext.certificate.provisional {
                    " (provisional)"
                } else {
                    ""
                },
                z.to_text()
            );
            Ok(Output::new(json, text, ok))
        }
        Command::Weights { file } => {
            let rep = load(file)?;
            let wd = weight_decomposition(&rep)?;
            let central = check_central(&rep)?;
            let nonzero = wd.weights().filter(|w| !w.is_zero());
            let graph = orbit_graph(nonzero, rep.cartan(), ORBIT_BOUND)?;
            let report = check_weight_lab(&rep)?;
            let mut text = format!("central element acts as {central}\n");
            for ws in &wd.spaces {
                text.push_str(&format!("weight {} dim {}\n", ws.weight, ws.space.dim()));
            }
            text.push_str(&report.to_text());
            let json = json!({
                "eps": wd.eps,
                "central": central,
                "weights": wd.spaces,
                "orbit_graph": graph,
                "report": report,
            });
            Ok(Output::new(json, text, report.overall))
        }
    }
}

pub fn run(cli: &Cli) -> ExitCode {
    match run_command(cli).and_then(|out| emit(cli, &out).map(|_| out.ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

pub fn main() -> ExitCode {
    env_logger::init();
    run(&Cli::parse())
}
