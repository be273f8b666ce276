//! Built-in example problems with their expected output tables.

use clap::ValueEnum;
use qgames_core::game::{BimatrixGame, Player};
use qgames_core::nash::pure_nash;
use serde_json::Value;

use crate::document::{parse_game, parse_json};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FixtureId {
    #[value(name = "diagram7")]
    Diagram7,
    #[value(name = "bos-00-11")]
    Bos0011,
    #[value(name = "bos-01-10")]
    Bos0110,
    #[value(name = "riskgame")]
    Riskgame,
}

impl FixtureId {
    pub const ALL: [FixtureId; 4] = [
        FixtureId::Diagram7,
        FixtureId::Bos0011,
        FixtureId::Bos0110,
        FixtureId::Riskgame,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureId::Diagram7 => "diagram7",
            FixtureId::Bos0011 => "bos-00-11",
            FixtureId::Bos0110 => "bos-01-10",
            FixtureId::Riskgame => "riskgame",
        }
    }

    /// The problem document.
    pub fn problem(self) -> &'static str {
        match self {
            FixtureId::Diagram7 => include_str!("../fixtures/diagram7.json"),
            FixtureId::Bos0011 => include_str!("../fixtures/bos-00-11.json"),
            FixtureId::Bos0110 => include_str!("../fixtures/bos-01-10.json"),
            FixtureId::Riskgame => include_str!("../fixtures/riskgame.json"),
        }
    }

    /// The expected output game and equilibrium constraints.
    pub fn expected(self) -> &'static str {
        match self {
            FixtureId::Diagram7 => include_str!("../fixtures/expected/diagram7.json"),
            FixtureId::Bos0011 => include_str!("../fixtures/expected/bos-00-11.json"),
            FixtureId::Bos0110 => include_str!("../fixtures/expected/bos-01-10.json"),
            FixtureId::Riskgame => include_str!("../fixtures/expected/riskgame.json"),
        }
    }
}

/// A pure profile named by labels, optionally with its payoff.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileClaim {
    pub row: String,
    pub col: String,
    pub payoff: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub game: BimatrixGame,
    pub include: Vec<ProfileClaim>,
    pub exclude: Vec<ProfileClaim>,
}

impl Expectation {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value = parse_json(text.as_bytes())?;
        let game = parse_game(
            value
                .get("game")
                .ok_or_else(|| CliError::schema("/game", "missing"))?,
            "/game",
        )?;
        let claims = |key: &str| -> Result<Vec<ProfileClaim>, CliError> {
            let Some(items) = value.get(key) else {
                return Ok(Vec::new());
            };
            let items = items
                .as_array()
                .ok_or_else(|| CliError::schema(format!("/{key}"), "expected an array"))?;
            items
                .iter()
                .enumerate()
                .map(|(i, item)| claim(item, &format!("/{key}/{i}")))
                .collect()
        };
        Ok(Expectation {
            game,
            include: claims("pure_equilibria_include")?,
            exclude: claims("pure_equilibria_exclude")?,
        })
    }

    /// Differences between `computed` and this expectation, one line each.
    pub fn mismatches(&self, computed: &BimatrixGame, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        let want = &self.game;
        if (computed.n_rows(), computed.n_cols()) != (want.n_rows(), want.n_cols()) {
            out.push(format!(
                "size {}x{}, expected {}x{}",
                computed.n_rows(),
                computed.n_cols(),
                want.n_rows(),
                want.n_cols()
            ));
            return out;
        }
        if computed.row_labels() != want.row_labels() || computed.col_labels() != want.col_labels()
        {
            out.push(format!(
                "labels {:?}/{:?}, expected {:?}/{:?}",
                computed.row_labels(),
                computed.col_labels(),
                want.row_labels(),
                want.col_labels()
            ));
        }
        for r in 0..want.n_rows() {
            for c in 0..want.n_cols() {
                let (got, exp) = (computed.payoff(r, c), want.payoff(r, c));
                if !got.approx_eq(&exp, tol) {
                    out.push(format!(
                        "entry ({}, {}) is {got}, expected {exp}",
                        want.row_labels()[r],
                        want.col_labels()[c]
                    ));
                }
            }
        }
        let eqs = pure_nash(computed);
        let find = |c: &ProfileClaim| {
            let r = computed.index_of(Player::One, &c.row)?;
            let k = computed.index_of(Player::Two, &c.col)?;
            eqs.iter().find(|e| e.pure_profile() == Some((r, k)))
        };
        for c in &self.include {
            match find(c) {
                None => out.push(format!("({}, {}) is not a pure equilibrium", c.row, c.col)),
                Some(eq) => {
                    if let Some((a, b)) = c.payoff {
                        if (eq.payoff.p1 - a).abs() > tol || (eq.payoff.p2 - b).abs() > tol {
                            out.push(format!(
                                "({}, {}) pays {}, expected ({a}, {b})",
                                c.row, c.col, eq.payoff
                            ));
                        }
                    }
                }
            }
        }
        for c in &self.exclude {
            if find(c).is_some() {
                out.push(format!("({}, {}) is a pure equilibrium", c.row, c.col));
            }
        }
        out
    }
}

fn claim(v: &Value, path: &str) -> Result<ProfileClaim, CliError> {
    let text = |key: &str| -> Result<String, CliError> {
        v.get(key)
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| CliError::schema(format!("{path}/{key}"), "expected a string"))
    };
    let payoff = match v.get("payoff") {
        None => None,
        Some(p) => match p
            .as_array()
            .map(|a| a.iter().map(Value::as_f64).collect::<Vec<_>>())
            .as_deref()
        {
            Some([Some(a), Some(b)]) => Some((*a, *b)),
            _ => {
                return Err(CliError::schema(
                    format!("{path}/payoff"),
                    "expected a pair of numbers",
                ))
            }
        },
    };
    Ok(ProfileClaim {
        row: text("row")?,
        col: text("col")?,
        payoff,
    })
}
