//! `ahp-rsb`: analyse pairwise comparison matrices and hierarchies.
//!
//! Exit status is 0 on success, 2 when the input is rejected and 1 for
//! anything else.

mod render;

use std::fmt::Write as _;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ahp_core::hierarchy::{Action, Selector};
use ahp_core::io::{self, Format, IntervalDoc, IoError};
use ahp_core::report::{InputDigest, Provenance, SCHEMA_VERSION};
use ahp_core::{analyze_matrix, AnalysisReport, Execution, ReversalWeights, WhatIfReport};
use clap::{ArgGroup, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

const NU_VAR: &str = "AHP_RSB_NU";

#[derive(Debug, Parser)]
#[command(
    name = "ahp-rsb",
    version,
    about = "Pairwise comparison analysis without the reciprocal property"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Symmetry breaking, consistency, priorities and reversal degree of one matrix.
    Analyze {
        /// Matrix file (.csv or .json).
        matrix: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a full hierarchy.
    Hierarchy {
        model: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Report the effect of one edit without changing the model file.
    #[command(group(ArgGroup::new("edit").required(true).args(["delete_alt", "add_alt", "delete_crit", "add_crit"])))]
    Whatif {
        model: PathBuf,
        /// Alternative label or 1-based position.
        #[arg(long, value_name = "ALT")]
        delete_alt: Option<String>,
        /// JSON file with `label` and one `judgments` extension per criterion.
        #[arg(long, value_name = "SPEC")]
        add_alt: Option<PathBuf>,
        /// Criterion label or 1-based position.
        #[arg(long, value_name = "CRIT")]
        delete_crit: Option<String>,
        /// JSON file with `label`, `goal` extension and alternative `matrix`.
        #[arg(long, value_name = "SPEC")]
        add_crit: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Every single-alternative deletion, with its guarantee.
    Sweep {
        model: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Convert between pairwise and interval forms and report the uncertainty index.
    Interval {
        /// Pairwise matrix, or a JSON document with `lower` and `upper`.
        matrix: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the session service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Persist sessions under this directory.
        #[arg(long)]
        data: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Internal(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        if e.is_validation() {
            Failure::Invalid(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

impl From<ahp_core::Error> for Failure {
    fn from(e: ahp_core::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

struct Input {
    name: String,
    text: String,
}

impl Input {
    fn read(path: &Path) -> Result<Self, Failure> {
        Ok(Input {
            name: path.display().to_string(),
            text: io::read_text(path)?,
        })
    }

    fn digest(&self) -> InputDigest {
        InputDigest {
            name: self.name.clone(),
            sha256: hex::encode(Sha256::digest(self.text.as_bytes())),
        }
    }
}

fn provenance(inputs: &[&Input]) -> Provenance {
    Provenance {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        inputs: inputs.iter().map(|i| i.digest()).collect(),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn reversal_weights() -> Result<Option<ReversalWeights>, Failure> {
    match std::env::var(NU_VAR) {
        Ok(raw) => {
            let nu: ReversalWeights =
                serde_json::from_str(&raw).map_err(|e| Failure::Invalid(format!("{NU_VAR}: {e}")))?;
            nu.check().map_err(|e| Failure::Invalid(format!("{NU_VAR}: {e}")))?;
            Ok(Some(nu))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Failure::Invalid(format!("{NU_VAR}: {e}"))),
    }
}

fn selector(raw: &str) -> Selector {
    raw.parse()
        .map(Selector::Position)
        .unwrap_or_else(|_| Selector::Label(raw.to_string()))
}

/// Parses an edit spec, filling in the `action` tag when absent.
fn action_spec(input: &Input, tag: &str) -> Result<Action, Failure> {
    let mut value: serde_json::Value =
        serde_json::from_str(&input.text).map_err(|e| Failure::Invalid(format!("{}: {e}", input.name)))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Failure::Invalid(format!("{}: expected a JSON object", input.name)))?;
    match obj.get("action").and_then(|a| a.as_str()) {
        Some(t) if t != tag => {
            return Err(Failure::Invalid(format!(
                "{}: action {t:?} does not match --{}",
                input.name,
                tag.replace('_', "-")
            )))
        }
        Some(_) => {}
        None => {
            obj.insert("action".into(), tag.into());
        }
    }
    serde_json::from_value(value).map_err(|e| Failure::Invalid(format!("{}: {e}", input.name)))
}

#[derive(Serialize)]
struct WhatIfOutput<'a> {
    schema_version: u32,
    whatif: &'a WhatIfReport,
    provenance: Provenance,
}

#[derive(Serialize)]
struct SweepOutput<'a> {
    schema_version: u32,
    deletions: &'a [WhatIfReport],
    provenance: Provenance,
}

#[derive(Serialize)]
struct IntervalOutput {
    schema_version: u32,
    /// `"to_interval"` or `"from_interval"`.
    direction: &'static str,
    labels: Vec<String>,
    lower: Vec<Vec<ahp_core::Cell>>,
    upper: Vec<Vec<ahp_core::Cell>>,
    entries: Vec<Vec<ahp_core::Cell>>,
    uncertainty_index: Option<f64>,
    provenance: Provenance,
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Analyze { matrix, json } => {
            let input = Input::read(&matrix)?;
            let m = io::parse_matrix(&input.text, Format::from_path(&matrix)?)?;
            let report = AnalysisReport::for_matrix(analyze_matrix(&input.name, &m)?, provenance(&[&input]));
            if json {
                to_json(&report)
            } else {
                Ok(render::analysis(&report))
            }
        }
        Command::Hierarchy { model, json } => {
            let input = Input::read(&model)?;
            let nu = reversal_weights()?;
            let h = io::parse_hierarchy_json(&input.text)?;
            let report = AnalysisReport::for_hierarchy(&h, nu.as_ref(), Execution::Sequential, provenance(&[&input]))?;
            if json {
                to_json(&report)
            } else {
                Ok(render::analysis(&report))
            }
        }
        Command::Whatif {
            model,
            delete_alt,
            add_alt,
            delete_crit,
            add_crit,
            json,
        } => {
            let input = Input::read(&model)?;
            let h = io::parse_hierarchy_json(&input.text)?;
            let mut inputs = vec![&input];
            let spec;
            let action = if let Some(sel) = delete_alt {
                Action::DeleteAlternative {
                    alternative: selector(&sel),
                }
            } else if let Some(sel) = delete_crit {
                Action::DeleteCriterion {
                    criterion: selector(&sel),
                }
            } else if let Some(path) = add_alt {
                spec = Input::read(&path)?;
                inputs.push(&spec);
                action_spec(&spec, "add_alternative")?
            } else if let Some(path) = add_crit {
                spec = Input::read(&path)?;
                inputs.push(&spec);
                action_spec(&spec, "add_criterion")?
            } else {
                unreachable!("clap requires one edit")
            };
            let report = h.what_if(&action)?;
            if json {
                to_json(&WhatIfOutput {
                    schema_version: SCHEMA_VERSION,
                    whatif: &report,
                    provenance: provenance(&inputs),
                })
            } else {
                Ok(render::what_if(&report))
            }
        }
        Command::Sweep { model, json } => {
            let input = Input::read(&model)?;
            let h = io::parse_hierarchy_json(&input.text)?;
            let reports = h.deletion_sweep(Execution::Sequential)?;
            if json {
                to_json(&SweepOutput {
                    schema_version: SCHEMA_VERSION,
                    deletions: &reports,
                    provenance: provenance(&[&input]),
                })
            } else {
                let mut out = String::new();
                for (k, r) in reports.iter().enumerate() {
                    if k > 0 {
                        out.push('\n');
                    }
                    out.push_str(&render::what_if(r));
                }
                Ok(out)
            }
        }
        Command::Interval { matrix, json } => {
            let input = Input::read(&matrix)?;
            let format = Format::from_path(&matrix)?;
            let is_interval = format == Format::Json
                && serde_json::from_str::<serde_json::Value>(&input.text)
                    .ok()
                    .is_some_and(|v| v.get("lower").is_some());
            let (direction, labels, interval, pairwise) = if is_interval {
                let (labels, interval) = io::parse_interval_json(&input.text)?;
                let pairwise = interval.to_pairwise(labels.clone())?;
                ("from_interval", labels, interval, pairwise)
            } else {
                let pairwise = io::parse_matrix(&input.text, format)?;
                (
                    "to_interval",
                    pairwise.labels().to_vec(),
                    pairwise.to_interval(),
                    pairwise,
                )
            };
            let ui = if interval.n() >= 2 {
                Some(interval.uncertainty_index()?)
            } else {
                None
            };
            let doc = IntervalDoc::from_interval(&labels, &interval);
            let out = IntervalOutput {
                schema_version: SCHEMA_VERSION,
                direction,
                labels,
                lower: doc.lower,
                upper: doc.upper,
                entries: pairwise.rows(),
                uncertainty_index: ui,
                provenance: provenance(&[&input]),
            };
            if json {
                to_json(&out)
            } else {
                let mut s = String::new();
                writeln!(s, "{direction}: {}", input.name).unwrap();
                s.push_str(&render::intervals(&out.labels, &out.lower, &out.upper));
                writeln!(s, "UI  {}", ui.map_or("n/a".into(), render::num)).unwrap();
                Ok(s)
            }
        }
        Command::Serve { port, host, data } => {
            let nu = reversal_weights()?;
            let state = match data {
                Some(dir) => ahp_service::AppState::persistent(&dir)
                    .map_err(|e| Failure::Internal(format!("{}: {e}", dir.display())))?,
                None => ahp_service::AppState::ephemeral(),
            };
            let state = state.with_reversal_weights(nu);
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Internal(e.to_string()))?;
            rt.block_on(ahp_service::serve(SocketAddr::new(host, port), state))
                .map_err(|e| Failure::Internal(e.to_string()))?;
            Ok(String::new())
        }
    }
}
