//! Classical bimatrix games and mixed strategies.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use crate::error::{check_dim, Error, Result};

/// A pair of payoffs, first player then second.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PayoffPair {
    pub p1: f64,
    pub p2: f64,
}

impl PayoffPair {
    pub const ZERO: PayoffPair = PayoffPair { p1: 0.0, p2: 0.0 };

    pub fn new(p1: f64, p2: f64) -> Self {
        Self { p1, p2 }
    }

    pub fn get(&self, player: Player) -> f64 {
        match player {
            Player::One => self.p1,
            Player::Two => self.p2,
        }
    }

    pub fn approx_eq(&self, other: &PayoffPair, tol: f64) -> bool {
        (self.p1 - other.p1).abs() <= tol && (self.p2 - other.p2).abs() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.p1.is_finite() && self.p2.is_finite()
    }
}

impl From<(f64, f64)> for PayoffPair {
    fn from((p1, p2): (f64, f64)) -> Self {
        Self { p1, p2 }
    }
}

impl Add for PayoffPair {
    type Output = PayoffPair;

    fn add(self, rhs: PayoffPair) -> PayoffPair {
        PayoffPair::new(self.p1 + rhs.p1, self.p2 + rhs.p2)
    }
}

impl AddAssign for PayoffPair {
    fn add_assign(&mut self, rhs: PayoffPair) {
        self.p1 += rhs.p1;
        self.p2 += rhs.p2;
    }
}

impl Mul<f64> for PayoffPair {
    type Output = PayoffPair;

    fn mul(self, w: f64) -> PayoffPair {
        PayoffPair::new(self.p1 * w, self.p2 * w)
    }
}

impl fmt::Display for PayoffPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p1, self.p2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}

/// Probability vector over a player's pure strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy {
    probs: Vec<f64>,
}

impl MixedStrategy {
    /// Entries must be `>= -tol` and sum to one within the shared tolerance.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let tol = crate::tolerance();
        if probs.is_empty() {
            return Err(Error::InvalidStrategy("empty probability vector".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < -tol) {
            return Err(Error::InvalidStrategy(format!("bad probability {p}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidStrategy(format!(
                "probabilities sum to {sum}"
            )));
        }
        Ok(Self { probs })
    }

    pub fn pure(len: usize, index: usize) -> Result<Self> {
        if index >= len {
            return Err(Error::IndexOutOfRange { index, len });
        }
        let mut probs = vec![0.0; len];
        probs[index] = 1.0;
        Ok(Self { probs })
    }

    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidStrategy("empty probability vector".into()));
        }
        Ok(Self {
            probs: vec![1.0 / len as f64; len],
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Indices with probability above `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.probs.len())
            .filter(|&i| self.probs[i] > tol)
            .collect()
    }

    pub fn approx_eq(&self, other: &MixedStrategy, tol: f64) -> bool {
        self.len() == other.len()
            && self
                .probs
                .iter()
                .zip(&other.probs)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

impl std::ops::Index<usize> for MixedStrategy {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.probs[i]
    }
}

/// Whether a strategy is played on the classical state or on a joint
/// quantum strategy `Q_k` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Classical,
    Quantum(usize),
}

/// A player's pure strategy in an extended game: a mode and a local operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StrategyLabel {
    pub mode: Mode,
    pub local: usize,
}

impl StrategyLabel {
    /// Renders as `C*I`, `Q1*X`, ... for two local operators and `C*U0`,
    /// `Q2*V1`, ... otherwise (`U` for the first player, `V` for the second).
    pub fn render(&self, player: Player, local_count: usize) -> String {
        let mode = match self.mode {
            Mode::Classical => "C".to_string(),
            Mode::Quantum(k) => format!("Q{k}"),
        };
        format!(
            "{mode}*{}",
            local_operator_name(player, self.local, local_count)
        )
    }
}

/// Display name of local operator `index` out of `count`.
pub fn local_operator_name(player: Player, index: usize, count: usize) -> String {
    if count == 2 {
        ["I", "X"][index.min(1)].to_string()
    } else {
        match player {
            Player::One => format!("U{index}"),
            Player::Two => format!("V{index}"),
        }
    }
}

/// An `n x m` game of payoff pairs with strategy labels.
#[derive(Debug, Clone, PartialEq)]
pub struct BimatrixGame {
    n_rows: usize,
    n_cols: usize,
    payoffs: Vec<PayoffPair>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

impl BimatrixGame {
    /// Game from rows of payoff pairs; labels default to `r0, r1, ...` and
    /// `c0, c1, ...`.
    pub fn new(rows: Vec<Vec<PayoffPair>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidGame("game has no strategies".into()));
        }
        for row in &rows {
            check_dim(n_cols, row.len())?;
        }
        let payoffs: Vec<PayoffPair> = rows.into_iter().flatten().collect();
        if let Some(p) = payoffs.iter().find(|p| !p.is_finite()) {
            return Err(Error::NonFinite(p.to_string()));
        }
        Ok(Self {
            n_rows,
            n_cols,
            payoffs,
            row_labels: default_labels("r", n_rows),
            col_labels: default_labels("c", n_cols),
        })
    }

    /// Convenience constructor from `(a, b)` tuples.
    pub fn from_pairs(rows: &[&[(f64, f64)]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&p| PayoffPair::from(p)).collect())
                .collect(),
        )
    }

    pub fn with_labels(mut self, row_labels: Vec<String>, col_labels: Vec<String>) -> Result<Self> {
        check_dim(self.n_rows, row_labels.len())?;
        check_dim(self.n_cols, col_labels.len())?;
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Number of pure strategies of `player`.
    pub fn strategy_count(&self, player: Player) -> usize {
        match player {
            Player::One => self.n_rows,
            Player::Two => self.n_cols,
        }
    }

    pub fn payoff(&self, row: usize, col: usize) -> PayoffPair {
        self.payoffs[row * self.n_cols + col]
    }

    /// All payoffs in row-major order.
    pub fn payoffs(&self) -> &[PayoffPair] {
        &self.payoffs
    }

    pub fn rows(&self) -> Vec<Vec<PayoffPair>> {
        self.payoffs
            .chunks(self.n_cols)
            .map(<[_]>::to_vec)
            .collect()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn labels(&self, player: Player) -> &[String] {
        match player {
            Player::One => &self.row_labels,
            Player::Two => &self.col_labels,
        }
    }

    /// Index of the strategy labelled `label`.
    pub fn index_of(&self, player: Player, label: &str) -> Option<usize> {
        self.labels(player).iter().position(|l| l == label)
    }

    /// Entrywise payoff equality, ignoring labels.
    pub fn same_payoffs(&self, other: &BimatrixGame, tol: f64) -> bool {
        self.n_rows == other.n_rows
            && self.n_cols == other.n_cols
            && self
                .payoffs
                .iter()
                .zip(&other.payoffs)
                .all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn transpose(&self) -> BimatrixGame {
        let mut payoffs = Vec::with_capacity(self.payoffs.len());
        for c in 0..self.n_cols {
            for r in 0..self.n_rows {
                let p = self.payoff(r, c);
                payoffs.push(PayoffPair::new(p.p2, p.p1));
            }
        }
        BimatrixGame {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            payoffs,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    /// Smallest and largest payoff of `player` over all entries.
    pub fn payoff_range(&self, player: Player) -> (f64, f64) {
        self.payoffs
            .iter()
            .map(|p| p.get(player))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                (lo.min(x), hi.max(x))
            })
    }

    /// Sub-game on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> BimatrixGame {
        let payoffs = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
            .map(|(r, c)| self.payoff(r, c))
            .collect();
        BimatrixGame {
            n_rows: rows.len(),
            n_cols: cols.len(),
            payoffs,
            row_labels: rows.iter().map(|&r| self.row_labels[r].clone()).collect(),
            col_labels: cols.iter().map(|&c| self.col_labels[c].clone()).collect(),
        }
    }
}

impl fmt::Display for BimatrixGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.n_rows)
            .map(|r| {
                (0..self.n_cols)
                    .map(|c| {
                        let p = self.payoff(r, c);
                        format!("({}, {})", sig6(p.p1), sig6(p.p2))
                    })
                    .collect()
            })
            .collect();
        let label_w = self.row_labels.iter().map(String::len).max().unwrap_or(0);
        let col_w: Vec<usize> = (0..self.n_cols)
            .map(|c| {
                cells
                    .iter()
                    .map(|row| row[c].len())
                    .chain(std::iter::once(self.col_labels[c].len()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        write!(f, "{:label_w$}", "")?;
        for (c, l) in self.col_labels.iter().enumerate() {
            write!(f, "  {:>w$}", l, w = col_w[c])?;
        }
        writeln!(f)?;
        for (r, row) in cells.iter().enumerate() {
            write!(f, "{:label_w$}", self.row_labels[r])?;
            for (c, cell) in row.iter().enumerate() {
                write!(f, "  {:>w$}", cell, w = col_w[c])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Formats to six significant digits, trimming trailing zeros.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// `sum_ij s1[i] s2[j] payoffs[i][j]`, componentwise.
pub fn expected_payoff(
    g: &BimatrixGame,
    s1: &MixedStrategy,
    s2: &MixedStrategy,
) -> Result<PayoffPair> {
    check_dim(g.n_rows, s1.len())?;
    check_dim(g.n_cols, s2.len())?;
    let mut total = PayoffPair::ZERO;
    for i in 0..g.n_rows {
        if s1[i] == 0.0 {
            continue;
        }
        for j in 0..g.n_cols {
            total += g.payoff(i, j) * (s1[i] * s2[j]);
        }
    }
    Ok(total)
}

/// Whether two pure strategies of `player` yield the same payoff pairs against
/// every pure strategy of the opponent.
pub fn equivalent_strategies(g: &BimatrixGame, player: Player, i: usize, j: usize) -> Result<bool> {
    let len = g.strategy_count(player);
    for idx in [i, j] {
        if idx >= len {
            return Err(Error::IndexOutOfRange { index: idx, len });
        }
    }
    Ok(equivalent_unchecked(g, player, i, j, crate::tolerance()))
}

fn equivalent_unchecked(g: &BimatrixGame, player: Player, i: usize, j: usize, tol: f64) -> bool {
    match player {
        Player::One => (0..g.n_cols).all(|c| g.payoff(i, c).approx_eq(&g.payoff(j, c), tol)),
        Player::Two => (0..g.n_rows).all(|r| g.payoff(r, i).approx_eq(&g.payoff(r, j), tol)),
    }
}

/// Representatives of each equivalence class (lowest index) with the member
/// indices of each class.
fn strategy_classes(g: &BimatrixGame, player: Player, tol: f64) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for s in 0..g.strategy_count(player) {
        match classes
            .iter_mut()
            .find(|class| equivalent_unchecked(g, player, class[0], s, tol))
        {
            Some(class) => class.push(s),
            None => classes.push(vec![s]),
        }
    }
    classes
}

/// Removes equivalent strategies, rows first and then columns.
///
/// Each class is represented by its lowest index; the representative's label
/// becomes the member labels joined with `/`.
pub fn quotient_game(g: &BimatrixGame) -> BimatrixGame {
    let tol = crate::tolerance();
    let row_classes = strategy_classes(g, Player::One, tol);
    let rows: Vec<usize> = row_classes.iter().map(|c| c[0]).collect();
    let all_cols: Vec<usize> = (0..g.n_cols).collect();
    let mut reduced = g.select(&rows, &all_cols);
    reduced.row_labels = merged_labels(&g.row_labels, &row_classes);

    let col_classes = strategy_classes(&reduced, Player::Two, tol);
    let cols: Vec<usize> = col_classes.iter().map(|c| c[0]).collect();
    let all_rows: Vec<usize> = (0..reduced.n_rows).collect();
    let mut out = reduced.select(&all_rows, &cols);
    out.col_labels = merged_labels(&g.col_labels, &col_classes);
    out
}

fn merged_labels(labels: &[String], classes: &[Vec<usize>]) -> Vec<String> {
    classes
        .iter()
        .map(|class| {
            class
                .iter()
                .map(|&i| labels[i].as_str())
                .collect::<Vec<_>>()
                .join("/")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagram_game() -> BimatrixGame {
        BimatrixGame::from_pairs(&[&[(5.0, 3.0), (1.0, 1.0)], &[(1.0, 1.0), (3.0, 5.0)]]).unwrap()
    }

    #[test]
    fn expected_payoff_examples() {
        let g = diagram_game();
        let pure0 = MixedStrategy::pure(2, 0).unwrap();
        assert_eq!(
            expected_payoff(&g, &pure0, &pure0).unwrap(),
            PayoffPair::new(5.0, 3.0)
        );

        let ones = BimatrixGame::from_pairs(&[&[(1.0, 1.0); 2], &[(1.0, 1.0); 2]]).unwrap();
        let u = MixedStrategy::uniform(2).unwrap();
        assert_eq!(
            expected_payoff(&ones, &u, &u).unwrap(),
            PayoffPair::new(1.0, 1.0)
        );

        // Average of the four entries.
        assert_eq!(
            expected_payoff(&g, &u, &u).unwrap(),
            PayoffPair::new(2.5, 2.5)
        );

        let three = MixedStrategy::uniform(3).unwrap();
        assert!(matches!(
            expected_payoff(&g, &three, &u),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn equivalence() {
        let g = diagram_game();
        assert!(!equivalent_strategies(&g, Player::One, 0, 1).unwrap());
        assert!(equivalent_strategies(&g, Player::One, 1, 1).unwrap());
        assert!(equivalent_strategies(&g, Player::Two, 0, 0).unwrap());
        assert!(matches!(
            equivalent_strategies(&g, Player::Two, 0, 2),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn quotient_without_duplicates_is_identity() {
        let g = diagram_game();
        assert_eq!(quotient_game(&g), g);
    }

    #[test]
    fn quotient_of_constant_game_is_one_by_one() {
        let g = BimatrixGame::new(vec![vec![PayoffPair::new(2.0, 7.0); 4]; 4]).unwrap();
        let q = quotient_game(&g);
        assert_eq!((q.n_rows(), q.n_cols()), (1, 1));
        assert_eq!(q.payoff(0, 0), PayoffPair::new(2.0, 7.0));
        assert_eq!(q.row_labels(), ["r0/r1/r2/r3"]);
        assert_eq!(q.col_labels(), ["c0/c1/c2/c3"]);
    }

    #[test]
    fn quotient_merges_labels_and_keeps_lowest_index() {
        let g = BimatrixGame::from_pairs(&[
            &[(1.0, 0.0), (2.0, 0.0), (1.0, 0.0)],
            &[(3.0, 1.0), (4.0, 1.0), (3.0, 1.0)],
            &[(1.0, 0.0), (2.0, 0.0), (1.0, 0.0)],
        ])
        .unwrap();
        let q = quotient_game(&g);
        assert_eq!(q.row_labels(), ["r0/r2", "r1"]);
        assert_eq!(q.col_labels(), ["c0/c2", "c1"]);
        assert_eq!(q.payoff(1, 1), PayoffPair::new(4.0, 1.0));
    }

    #[test]
    fn strategy_validation() {
        assert!(MixedStrategy::new(vec![0.5, 0.5]).is_ok());
        assert!(MixedStrategy::new(vec![0.5, 0.6]).is_err());
        assert!(MixedStrategy::new(vec![1.5, -0.5]).is_err());
        assert!(MixedStrategy::new(vec![]).is_err());
        assert!(MixedStrategy::pure(2, 2).is_err());
    }

    #[test]
    fn labels_render() {
        let l = StrategyLabel {
            mode: Mode::Quantum(1),
            local: 1,
        };
        assert_eq!(l.render(Player::One, 2), "Q1*X");
        let c = StrategyLabel {
            mode: Mode::Classical,
            local: 2,
        };
        assert_eq!(c.render(Player::Two, 3), "C*V2");
    }

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(3.0), "3");
        assert_eq!(sig6(2.0 / 3.0), "0.666667");
        assert_eq!(sig6(-1234.56789), "-1234.57");
        assert_eq!(sig6(4.0000000001), "4");
    }

    #[test]
    fn game_rejects_ragged_rows() {
        let rows = vec![vec![PayoffPair::ZERO; 2], vec![PayoffPair::ZERO; 3]];
        assert!(BimatrixGame::new(rows).is_err());
        assert!(BimatrixGame::new(vec![]).is_err());
    }
}
