//! The JSON problem document: parsing with path-tagged errors, and
//! serialization back to the same schema.
//!
//! ```json
//! {
//!   "game": {
//!     "payoffs": [[[5, 3], [1, 1]], [[1, 1], [3, 5]]],
//!     "row_labels": ["t", "b"],
//!     "col_labels": ["l", "r"]
//!   },
//!   "states": [[[0.7071067811865476, 0], [0.7071067811865476, 0], [0, 0], [0, 0]]],
//!   "scheme": "mw",
//!   "refined": {"player1": {"theta": 0, "phi": 0}, "player2": {"theta": 0, "phi": 0}},
//!   "options": {"tolerance": 1e-9, "format": "table", "max_support": 2, "seed": 7}
//! }
//! ```
//!
//! Only `game.payoffs` is required. A single state may be given as `"state"`
//! instead of `"states"`; amplitudes are `[re, im]` pairs in row-major order
//! over the product basis.

use std::collections::HashSet;

use clap::ValueEnum;
use qgames_core::game::{BimatrixGame, PayoffPair};
use qgames_core::linalg::{c64, CVector};
use qgames_core::refined::UnitaryParams;
use serde_json::{json, Map, Value};

use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    Mw,
    Refined,
    Emw,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Mw => "mw",
            Scheme::Refined => "refined",
            Scheme::Emw => "emw",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    Json,
    #[default]
    Table,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Table => "table",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedParams {
    pub player1: UnitaryParams,
    pub player2: UnitaryParams,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DocumentOptions {
    pub tolerance: Option<f64>,
    pub format: Option<Format>,
    pub max_support: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDocument {
    pub game: BimatrixGame,
    /// `None` means the single state `|0..0>`.
    pub states: Option<Vec<CVector>>,
    pub scheme: Option<Scheme>,
    pub refined: Option<RefinedParams>,
    pub options: DocumentOptions,
}

impl ProblemDocument {
    /// The joint states, defaulting to `|0..0>`.
    pub fn states_or_default(&self) -> Vec<CVector> {
        match &self.states {
            Some(s) => s.clone(),
            None => {
                vec![CVector::basis(self.game.n_rows() * self.game.n_cols(), 0)
                    .expect("non-empty game")]
            }
        }
    }
}

/// Parses a document, validating state norms against the document's own
/// tolerance or the shared default.
pub fn parse_problem(text: &[u8]) -> Result<ProblemDocument> {
    parse_problem_with(text, None)
}

/// Like [`parse_problem`], with a tolerance that overrides the document's.
pub fn parse_problem_with(text: &[u8], tolerance: Option<f64>) -> Result<ProblemDocument> {
    let value = parse_json(text)?;
    let root = object(
        &value,
        "",
        &["game", "state", "states", "scheme", "refined", "options"],
    )?;

    let options = match root.get("options") {
        Some(v) => parse_options(v, "/options")?,
        None => DocumentOptions::default(),
    };
    let tol = tolerance
        .or(options.tolerance)
        .unwrap_or_else(qgames_core::tolerance);

    let game = parse_game(required(root, "", "game")?, "/game")?;
    let dim = game.n_rows() * game.n_cols();
    let states = match (root.get("state"), root.get("states")) {
        (Some(_), Some(_)) => {
            return Err(CliError::schema(
                "/",
                "give either \"state\" or \"states\", not both",
            ))
        }
        (Some(v), None) => Some(vec![parse_state(v, "/state", dim, tol)?]),
        (None, Some(v)) => {
            let items = array(v, "/states")?;
            if items.is_empty() {
                return Err(CliError::schema("/states", "must be a non-empty array"));
            }
            Some(
                items
                    .iter()
                    .enumerate()
                    .map(|(i, s)| parse_state(s, &format!("/states/{i}"), dim, tol))
                    .collect::<Result<Vec<_>>>()?,
            )
        }
        (None, None) => None,
    };
    let scheme = root
        .get("scheme")
        .map(|v| parse_enum::<Scheme>(v, "/scheme"))
        .transpose()?;
    let refined = root
        .get("refined")
        .map(|v| parse_refined(v, "/refined"))
        .transpose()?;

    Ok(ProblemDocument {
        game,
        states,
        scheme,
        refined,
        options,
    })
}

/// Serializes a document to pretty-printed JSON in the parse schema.
pub fn serialize_problem(doc: &ProblemDocument) -> String {
    let mut root = Map::new();
    root.insert("game".into(), game_to_json(&doc.game));
    if let Some(states) = &doc.states {
        root.insert(
            "states".into(),
            Value::Array(states.iter().map(state_to_json).collect()),
        );
    }
    if let Some(s) = doc.scheme {
        root.insert("scheme".into(), json!(s.name()));
    }
    if let Some(r) = doc.refined {
        let p = |u: UnitaryParams| json!({"theta": u.theta(), "phi": u.phi()});
        root.insert(
            "refined".into(),
            json!({"player1": p(r.player1), "player2": p(r.player2)}),
        );
    }
    let o = &doc.options;
    let mut options = Map::new();
    if let Some(t) = o.tolerance {
        options.insert("tolerance".into(), json!(t));
    }
    if let Some(f) = o.format {
        options.insert("format".into(), json!(f.name()));
    }
    if let Some(k) = o.max_support {
        options.insert("max_support".into(), json!(k));
    }
    if let Some(s) = o.seed {
        options.insert("seed".into(), json!(s));
    }
    if !options.is_empty() {
        root.insert("options".into(), Value::Object(options));
    }
    serde_json::to_string_pretty(&Value::Object(root)).expect("JSON values serialize")
}

pub fn game_to_json(g: &BimatrixGame) -> Value {
    let payoffs: Vec<Value> = g
        .rows()
        .iter()
        .map(|row| Value::Array(row.iter().map(|p| json!([p.p1, p.p2])).collect()))
        .collect();
    json!({
        "payoffs": payoffs,
        "row_labels": g.row_labels(),
        "col_labels": g.col_labels(),
    })
}

pub fn state_to_json(psi: &CVector) -> Value {
    Value::Array(psi.entries().iter().map(|z| json!([z.re, z.im])).collect())
}

pub(crate) fn parse_json(text: &[u8]) -> Result<Value> {
    let text =
        std::str::from_utf8(text).map_err(|e| CliError::schema("/", format!("not UTF-8: {e}")))?;
    serde_json::from_str(text).map_err(|e| CliError::schema("/", format!("invalid JSON: {e}")))
}

pub(crate) fn parse_game(v: &Value, path: &str) -> Result<BimatrixGame> {
    let obj = object(v, path, &["payoffs", "row_labels", "col_labels"])?;
    let payoffs_path = format!("{path}/payoffs");
    let rows = array(required(obj, path, "payoffs")?, &payoffs_path)?;
    if rows.is_empty() {
        return Err(CliError::schema(
            payoffs_path,
            "must be a non-empty array of rows",
        ));
    }
    let mut parsed: Vec<Vec<PayoffPair>> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{payoffs_path}/{i}");
        let cells = array(row, &row_path)?;
        if cells.is_empty() {
            return Err(CliError::schema(
                row_path,
                "must be a non-empty array of payoff pairs",
            ));
        }
        if let Some(first) = parsed.first() {
            if cells.len() != first.len() {
                return Err(CliError::Dimension {
                    path: row_path,
                    expected: first.len(),
                    found: cells.len(),
                });
            }
        }
        let pairs = cells
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let (a, b) = pair(c, &format!("{row_path}/{j}"))?;
                Ok(PayoffPair::new(a, b))
            })
            .collect::<Result<Vec<_>>>()?;
        parsed.push(pairs);
    }
    let (n, m) = (parsed.len(), parsed[0].len());
    let game =
        BimatrixGame::new(parsed).map_err(|e| CliError::schema(payoffs_path, e.to_string()))?;
    let row_labels = labels(obj.get("row_labels"), &format!("{path}/row_labels"), n)?;
    let col_labels = labels(obj.get("col_labels"), &format!("{path}/col_labels"), m)?;
    Ok(match (row_labels, col_labels) {
        (None, None) => game,
        (r, c) => {
            let r = r.unwrap_or_else(|| game.row_labels().to_vec());
            let c = c.unwrap_or_else(|| game.col_labels().to_vec());
            game.with_labels(r, c).expect("label counts checked")
        }
    })
}

fn labels(v: Option<&Value>, path: &str, expected: usize) -> Result<Option<Vec<String>>> {
    let Some(v) = v else { return Ok(None) };
    let items = array(v, path)?;
    if items.len() != expected {
        return Err(CliError::Dimension {
            path: path.into(),
            expected,
            found: items.len(),
        });
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let p = format!("{path}/{i}");
        let s = item
            .as_str()
            .ok_or_else(|| CliError::schema(&p, "expected a string"))?;
        if !seen.insert(s) {
            return Err(CliError::schema(p, format!("duplicate label {s:?}")));
        }
        out.push(s.to_string());
    }
    Ok(Some(out))
}

fn parse_state(v: &Value, path: &str, dim: usize, tol: f64) -> Result<CVector> {
    let items = array(v, path)?;
    if items.len() != dim {
        return Err(CliError::Dimension {
            path: path.into(),
            expected: dim,
            found: items.len(),
        });
    }
    let amps = items
        .iter()
        .enumerate()
        .map(|(i, a)| pair(a, &format!("{path}/{i}")).map(|(re, im)| c64(re, im)))
        .collect::<Result<Vec<_>>>()?;
    let psi = CVector::new(amps).map_err(|e| CliError::schema(path, e.to_string()))?;
    let norm_sqr = psi.norm_sqr();
    if (norm_sqr - 1.0).abs() > tol {
        return Err(CliError::Normalization {
            path: path.into(),
            norm_sqr,
        });
    }
    Ok(psi)
}

fn parse_refined(v: &Value, path: &str) -> Result<RefinedParams> {
    let obj = object(v, path, &["player1", "player2"])?;
    let params = |key: &str| -> Result<UnitaryParams> {
        let p = format!("{path}/{key}");
        let o = object(required(obj, path, key)?, &p, &["theta", "phi"])?;
        let theta = number(required(o, &p, "theta")?, &format!("{p}/theta"))?;
        let phi = number(required(o, &p, "phi")?, &format!("{p}/phi"))?;
        UnitaryParams::new(theta, phi).map_err(|e| CliError::schema(p, e.to_string()))
    };
    Ok(RefinedParams {
        player1: params("player1")?,
        player2: params("player2")?,
    })
}

fn parse_options(v: &Value, path: &str) -> Result<DocumentOptions> {
    let obj = object(v, path, &["tolerance", "format", "max_support", "seed"])?;
    let tolerance = match obj.get("tolerance") {
        Some(t) => {
            let p = format!("{path}/tolerance");
            let t = number(t, &p)?;
            if t <= 0.0 {
                return Err(CliError::schema(p, "must be positive"));
            }
            Some(t)
        }
        None => None,
    };
    let format = obj
        .get("format")
        .map(|f| parse_enum::<Format>(f, &format!("{path}/format")))
        .transpose()?;
    let max_support = match obj.get("max_support") {
        Some(k) => {
            let p = format!("{path}/max_support");
            match k.as_u64() {
                Some(k) if k >= 1 => Some(k as usize),
                _ => return Err(CliError::schema(p, "expected a positive integer")),
            }
        }
        None => None,
    };
    let seed = match obj.get("seed") {
        Some(s) => Some(s.as_u64().ok_or_else(|| {
            CliError::schema(format!("{path}/seed"), "expected a non-negative integer")
        })?),
        None => None,
    };
    Ok(DocumentOptions {
        tolerance,
        format,
        max_support,
        seed,
    })
}

fn parse_enum<T: ValueEnum>(v: &Value, path: &str) -> Result<T> {
    let s = v
        .as_str()
        .ok_or_else(|| CliError::schema(path, "expected a string"))?;
    T::from_str(s, false).map_err(|_| {
        let names: Vec<String> = T::value_variants()
            .iter()
            .filter_map(|x| x.to_possible_value().map(|p| p.get_name().to_string()))
            .collect();
        CliError::schema(
            path,
            format!("unknown value {s:?}, expected one of {}", names.join(", ")),
        )
    })
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let shown = if path.is_empty() { "/" } else { path };
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::schema(shown, "expected an object"))?;
    if let Some(key) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(CliError::schema(format!("{path}/{key}"), "unknown field"));
    }
    Ok(obj)
}

fn required<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| CliError::schema(format!("{path}/{key}"), "missing required field"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| CliError::schema(path, "expected an array"))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| CliError::schema(path, "expected a number"))
}

fn pair(v: &Value, path: &str) -> Result<(f64, f64)> {
    match array(v, path)?.as_slice() {
        [a, b] => Ok((
            number(a, &format!("{path}/0"))?,
            number(b, &format!("{path}/1"))?,
        )),
        other => Err(CliError::schema(
            path,
            format!("expected a pair of numbers, found {} entries", other.len()),
        )),
    }
}
