//! Command-line front end for `qgames-core`.
//!
//! The binary is a thin wrapper over [`run`]; everything here is also usable
//! as a library, which is how the integration tests drive it.

pub mod document;
pub mod error;
pub mod fixtures;
pub mod report;

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use qgames_core::classify::{classify_emw_seeded, DEFAULT_SEED};
use qgames_core::emw::{emw_bimatrix, EmwConfig};
use qgames_core::game::{quotient_game, BimatrixGame, Player};
use qgames_core::mw::mw_output_game;
use qgames_core::nash::{pure_nash, support_enumeration};
use qgames_core::refined::{classical_recovery_params, refined_output_game};
use serde_json::json;

pub use document::{
    parse_problem, parse_problem_with, serialize_problem, Format, ProblemDocument, Scheme,
};
pub use error::CliError;
pub use fixtures::FixtureId;
pub use report::Report;

use report::{classification_report, equilibria_table, equilibrium_json, game_section};

#[derive(Debug, Parser)]
#[command(name = "qgames", version, about = "Quantum schemes for bimatrix games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Problem document (JSON); standard input when omitted or `-`.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Scheme used to build the game; overrides the document.
    #[arg(long, global = true, value_enum)]
    pub scheme: Option<Scheme>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Numerical tolerance; overrides the document.
    #[arg(long, global = true, value_parser = positive_f64)]
    pub tolerance: Option<f64>,
    /// Largest support size tried by the equilibrium solver.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_support: Option<u64>,
    /// Seed for the random profiles used by `classify`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Output game of the selected scheme (default: mw).
    Transform,
    /// eMW bimatrix and its quotient game.
    Emw,
    /// Classical / non-classical verdict for a single-state 2x2 eMW game.
    Classify,
    /// Equilibria of the input game, or of the selected scheme's game.
    Solve,
    /// Run a built-in example and compare with its expected table.
    Reproduce {
        #[arg(value_enum)]
        id: FixtureId,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

/// A finished command: its report, chosen format and any fixture mismatches.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub format: Format,
    pub mismatches: Vec<String>,
}

impl Outcome {
    pub fn render(&self) -> String {
        self.report.render(self.format)
    }

    pub fn exit_code(&self) -> u8 {
        if self.mismatches.is_empty() {
            0
        } else {
            3
        }
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let text = match cli.command {
        Command::Reproduce { id } => id.problem().as_bytes().to_vec(),
        _ => read_input(cli.input.as_ref())?,
    };
    let doc = parse_problem_with(&text, cli.tolerance)?;
    let tol = cli
        .tolerance
        .or(doc.options.tolerance)
        .unwrap_or(qgames_core::DEFAULT_TOLERANCE);
    qgames_core::set_tolerance(tol);
    let format = cli.format.or(doc.options.format).unwrap_or_default();
    let mut mismatches = Vec::new();

    let report = match cli.command {
        Command::Transform => {
            let scheme = cli.scheme.or(doc.scheme).unwrap_or(Scheme::Mw);
            let g = scheme_game(&doc, scheme)?;
            Report {
                json: json!({"command": "transform", "scheme": scheme.name(), "game": document::game_to_json(&g)}),
                table: game_section(&format!("{} output game", scheme.name()), &g),
            }
        }
        Command::Emw => {
            let g = scheme_game(&doc, Scheme::Emw)?;
            let q = quotient_game(&g);
            Report {
                json: json!({
                    "command": "emw",
                    "game": document::game_to_json(&g),
                    "quotient": document::game_to_json(&q),
                }),
                table: format!(
                    "{}\n{}",
                    game_section("emw bimatrix", &g),
                    game_section("quotient game", &q)
                ),
            }
        }
        Command::Classify => {
            let cfg = EmwConfig::new(doc.game.clone(), doc.states_or_default())?;
            let seed = cli.seed.or(doc.options.seed).unwrap_or(DEFAULT_SEED);
            let c = classify_emw_seeded(&cfg, seed)?;
            let mut r =
                classification_report(&c, &cfg.labels(Player::One), &cfg.labels(Player::Two));
            r.json["command"] = json!("classify");
            r.json["seed"] = json!(seed);
            r
        }
        Command::Solve => {
            let scheme = cli.scheme.or(doc.scheme);
            let g = match scheme {
                Some(s) => scheme_game(&doc, s)?,
                None => doc.game.clone(),
            };
            let limit = g.n_rows().min(g.n_cols());
            let k = cli
                .max_support
                .map(|k| k as usize)
                .or(doc.options.max_support)
                .unwrap_or(limit)
                .min(limit);
            let res = support_enumeration(&g, k)?;
            let mut table = game_section(scheme.map_or("input game", Scheme::name), &g);
            table.push('\n');
            table.push_str(&equilibria_table("equilibria", &g, &res.equilibria));
            if !res.skipped.is_empty() {
                table.push_str(&format!(
                    "skipped {} degenerate support pairs\n",
                    res.skipped.len()
                ));
            }
            Report {
                json: json!({
                    "command": "solve",
                    "scheme": scheme.map(Scheme::name),
                    "max_support": k,
                    "game": document::game_to_json(&g),
                    "equilibria": res.equilibria.iter().map(|e| equilibrium_json(&g, e)).collect::<Vec<_>>(),
                    "skipped_supports": res.skipped.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                }),
                table,
            }
        }
        Command::Reproduce { id } => {
            let scheme = doc.scheme.unwrap_or(Scheme::Mw);
            let g = scheme_game(&doc, scheme)?;
            let expected = fixtures::Expectation::parse(id.expected())?;
            mismatches = expected.mismatches(&g, tol);
            let eqs = pure_nash(&g);
            let status = if mismatches.is_empty() {
                "match"
            } else {
                "mismatch"
            };
            let mut table = game_section(&format!("{} ({} scheme)", id.name(), scheme.name()), &g);
            table.push('\n');
            table.push_str(&equilibria_table("pure equilibria", &g, &eqs));
            table.push_str(&format!("\n{status}\n"));
            for m in &mismatches {
                table.push_str(&format!("  {m}\n"));
            }
            Report {
                json: json!({
                    "command": "reproduce",
                    "fixture": id.name(),
                    "scheme": scheme.name(),
                    "game": document::game_to_json(&g),
                    "pure_equilibria": eqs.iter().map(|e| equilibrium_json(&g, e)).collect::<Vec<_>>(),
                    "status": status,
                    "mismatches": mismatches,
                }),
                table,
            }
        }
    };
    Ok(Outcome {
        report,
        format,
        mismatches,
    })
}

/// The game a scheme induces from a document.
pub fn scheme_game(doc: &ProblemDocument, scheme: Scheme) -> Result<BimatrixGame, CliError> {
    let states = doc.states_or_default();
    Ok(match scheme {
        Scheme::Mw => mw_output_game(&doc.game, single_state(&states)?)?,
        Scheme::Refined => {
            let psi = single_state(&states)?;
            let (p1, p2) = match doc.refined {
                Some(r) => (r.player1, r.player2),
                None => classical_recovery_params(psi)?,
            };
            refined_output_game(&doc.game, psi, p1, p2)?
        }
        Scheme::Emw => emw_bimatrix(&EmwConfig::new(doc.game.clone(), states)?)?,
    })
}

fn single_state(
    states: &[qgames_core::linalg::CVector],
) -> Result<&qgames_core::linalg::CVector, CliError> {
    match states {
        [psi] => Ok(psi),
        _ => Err(CliError::Usage(format!(
            "this scheme takes one state, the document has {}",
            states.len()
        ))),
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<Vec<u8>, CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read(p).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        _ => {
            let mut buf = Vec::new();
            std::io::stdin()
                .read_to_end(&mut buf)
                .map_err(|source| CliError::Io {
                    path: "<stdin>".into(),
                    source,
                })?;
            Ok(buf)
        }
    }
}
