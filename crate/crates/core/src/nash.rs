//! Nash equilibria of bimatrix games: best responses, pure equilibria and
//! support enumeration over equal-size supports.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::exec::Execution;
use crate::game::{expected_payoff, BimatrixGame, MixedStrategy, PayoffPair, Player};
use crate::NASH_TOLERANCE;

/// Largest number of strategies per player accepted by support enumeration.
pub const MAX_STRATEGIES: usize = 8;

const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    pub s1: MixedStrategy,
    pub s2: MixedStrategy,
    pub payoff: PayoffPair,
    pub kind: EquilibriumKind,
}

impl Equilibrium {
    fn new(g: &BimatrixGame, s1: MixedStrategy, s2: MixedStrategy) -> Result<Self> {
        let payoff = expected_payoff(g, &s1, &s2)?;
        let kind = if s1.support(NASH_TOLERANCE).len() == 1 && s2.support(NASH_TOLERANCE).len() == 1
        {
            EquilibriumKind::Pure
        } else {
            EquilibriumKind::Mixed
        };
        Ok(Self {
            s1,
            s2,
            payoff,
            kind,
        })
    }

    pub fn support1(&self) -> Vec<usize> {
        self.s1.support(NASH_TOLERANCE)
    }

    pub fn support2(&self) -> Vec<usize> {
        self.s2.support(NASH_TOLERANCE)
    }

    /// `(row, col)` when both players play a pure strategy.
    pub fn pure_profile(&self) -> Option<(usize, usize)> {
        match (self.support1().as_slice(), self.support2().as_slice()) {
            ([r], [c]) => Some((*r, *c)),
            _ => None,
        }
    }

    fn approx_eq(&self, other: &Equilibrium, tol: f64) -> bool {
        self.s1.approx_eq(&other.s1, tol) && self.s2.approx_eq(&other.s2, tol)
    }

    fn sort_key(&self) -> (usize, Vec<usize>, Vec<usize>) {
        let (a, b) = (self.support1(), self.support2());
        (a.len().max(b.len()), a, b)
    }
}

/// Expected payoff of each pure strategy of `player` against `opponent`.
pub fn payoffs_against(
    g: &BimatrixGame,
    player: Player,
    opponent: &MixedStrategy,
) -> Result<Vec<f64>> {
    check_dim(g.strategy_count(player.other()), opponent.len())?;
    let values = match player {
        Player::One => (0..g.n_rows())
            .map(|i| {
                (0..g.n_cols())
                    .map(|j| opponent[j] * g.payoff(i, j).p1)
                    .sum()
            })
            .collect(),
        Player::Two => (0..g.n_cols())
            .map(|j| {
                (0..g.n_rows())
                    .map(|i| opponent[i] * g.payoff(i, j).p2)
                    .sum()
            })
            .collect(),
    };
    Ok(values)
}

/// Pure strategies of `player` maximizing their payoff against `opponent`;
/// values within the solver tolerance of the maximum are all included.
pub fn best_responses(
    g: &BimatrixGame,
    player: Player,
    opponent: &MixedStrategy,
) -> Result<Vec<usize>> {
    let values = payoffs_against(g, player, opponent)?;
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((0..values.len())
        .filter(|&i| values[i] >= best - NASH_TOLERANCE)
        .collect())
}

/// Whether no pure deviation improves either player's payoff by more than `tol`.
pub fn is_nash(g: &BimatrixGame, s1: &MixedStrategy, s2: &MixedStrategy, tol: f64) -> Result<bool> {
    let value = expected_payoff(g, s1, s2)?;
    let dev1 = payoffs_against(g, Player::One, s2)?;
    let dev2 = payoffs_against(g, Player::Two, s1)?;
    Ok(dev1.iter().all(|&v| v <= value.p1 + tol) && dev2.iter().all(|&v| v <= value.p2 + tol))
}

/// All pure equilibria in row-major order.
pub fn pure_nash(g: &BimatrixGame) -> Vec<Equilibrium> {
    let (n, m) = (g.n_rows(), g.n_cols());
    let mut out = Vec::new();
    for i in 0..n {
        let s1 = MixedStrategy::pure(n, i).expect("in range");
        let br2 = best_responses(g, Player::Two, &s1).expect("dims match");
        for j in 0..m {
            if !br2.contains(&j) {
                continue;
            }
            let s2 = MixedStrategy::pure(m, j).expect("in range");
            if best_responses(g, Player::One, &s2)
                .expect("dims match")
                .contains(&i)
            {
                out.push(Equilibrium::new(g, s1.clone(), s2).expect("dims match"));
            }
        }
    }
    out
}

/// Output of [`support_enumeration`].
#[derive(Debug, Clone, PartialEq)]
pub struct SupportEnumeration {
    pub equilibria: Vec<Equilibrium>,
    /// Support pairs whose indifference system was singular.
    pub skipped: Vec<(Vec<usize>, Vec<usize>)>,
}

enum SupportOutcome {
    Found(Equilibrium),
    Rejected,
    Singular,
}

/// Solves `sum_{j in cols} w_j M[r][j] = v` for every `r in rows` together
/// with `sum w = 1`. `M` is indexed `(r, j)`.
fn indifference(
    rows: &[usize],
    cols: &[usize],
    value: impl Fn(usize, usize) -> f64,
) -> Option<Vec<f64>> {
    let k = cols.len();
    let mut a = DMatrix::<f64>::zeros(k + 1, k + 1);
    let mut b = DVector::<f64>::zeros(k + 1);
    for (e, &r) in rows.iter().enumerate() {
        for (u, &c) in cols.iter().enumerate() {
            a[(e, u)] = value(r, c);
        }
        a[(e, k)] = -1.0;
    }
    for u in 0..k {
        a[(k, u)] = 1.0;
    }
    b[k] = 1.0;

    let scale = a.iter().fold(1.0f64, |s, x| s.max(x.abs()));
    let lu = a.lu();
    let min_pivot = lu
        .u()
        .diagonal()
        .iter()
        .fold(f64::INFINITY, |s, x| s.min(x.abs()));
    if min_pivot <= PIVOT_EPS * scale {
        return None;
    }
    let x = lu.solve(&b)?;
    Some(x.iter().take(k).copied().collect())
}

fn embed(len: usize, support: &[usize], weights: &[f64]) -> Option<MixedStrategy> {
    if weights
        .iter()
        .any(|&w| !w.is_finite() || w < -NASH_TOLERANCE)
    {
        return None;
    }
    let mut probs = vec![0.0; len];
    for (&i, &w) in support.iter().zip(weights) {
        probs[i] = w.max(0.0);
    }
    let sum: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= sum);
    MixedStrategy::new(probs).ok()
}

fn solve_support(g: &BimatrixGame, rows: &[usize], cols: &[usize]) -> SupportOutcome {
    // Column player's mix makes the row player indifferent across `rows`.
    let q = indifference(rows, cols, |r, c| g.payoff(r, c).p1);
    let p = indifference(cols, rows, |c, r| g.payoff(r, c).p2);
    let (Some(q), Some(p)) = (q, p) else {
        return SupportOutcome::Singular;
    };
    let (Some(s1), Some(s2)) = (embed(g.n_rows(), rows, &p), embed(g.n_cols(), cols, &q)) else {
        return SupportOutcome::Rejected;
    };
    match is_nash(g, &s1, &s2, NASH_TOLERANCE) {
        Ok(true) => SupportOutcome::Found(Equilibrium::new(g, s1, s2).expect("dims match")),
        _ => SupportOutcome::Rejected,
    }
}

pub fn support_enumeration(g: &BimatrixGame, max_support: usize) -> Result<SupportEnumeration> {
    support_enumeration_with(g, max_support, Execution::default())
}

/// Equilibria whose supports have equal size at most `max_support`, sorted by
/// support size and then lexicographically by supports. Duplicates (within
/// the solver tolerance) are dropped.
pub fn support_enumeration_with(
    g: &BimatrixGame,
    max_support: usize,
    exec: Execution,
) -> Result<SupportEnumeration> {
    let (n, m) = (g.n_rows(), g.n_cols());
    if n > MAX_STRATEGIES || m > MAX_STRATEGIES {
        return Err(Error::Unsupported(format!(
            "support enumeration is limited to {MAX_STRATEGIES}x{MAX_STRATEGIES} games, got {n}x{m}"
        )));
    }
    if max_support == 0 || max_support > n.min(m) {
        return Err(Error::IndexOutOfRange {
            index: max_support,
            len: n.min(m) + 1,
        });
    }

    let pairs: Vec<(Vec<usize>, Vec<usize>)> = (1..=max_support)
        .flat_map(|k| {
            (0..n)
                .combinations(k)
                .cartesian_product((0..m).combinations(k).collect::<Vec<_>>())
        })
        .collect();
    let outcomes = exec.map_slice(&pairs, |(rows, cols)| solve_support(g, rows, cols));

    let mut equilibria: Vec<Equilibrium> = Vec::new();
    let mut skipped = Vec::new();
    for (pair, outcome) in pairs.into_iter().zip(outcomes) {
        match outcome {
            SupportOutcome::Found(eq) => {
                if !equilibria.iter().any(|e| e.approx_eq(&eq, NASH_TOLERANCE)) {
                    equilibria.push(eq);
                }
            }
            SupportOutcome::Singular => skipped.push(pair),
            SupportOutcome::Rejected => {}
        }
    }
    equilibria.sort_by_key(Equilibrium::sort_key);
    Ok(SupportEnumeration {
        equilibria,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn game(rows: &[&[(f64, f64)]]) -> BimatrixGame {
        BimatrixGame::from_pairs(rows).unwrap()
    }

    fn bos(a: f64, b: f64, c: f64) -> BimatrixGame {
        game(&[&[(a, b), (c, c)], &[(c, c), (b, a)]])
    }

    #[test]
    fn constant_game_all_best_responses() {
        let g = game(&[&[(1.0, 1.0); 3], &[(1.0, 1.0); 3]]);
        let u = MixedStrategy::uniform(3).unwrap();
        assert_eq!(best_responses(&g, Player::One, &u).unwrap(), vec![0, 1]);
        let u2 = MixedStrategy::uniform(2).unwrap();
        assert_eq!(best_responses(&g, Player::Two, &u2).unwrap(), vec![0, 1, 2]);
        assert!(best_responses(&g, Player::Two, &u).is_err());
    }

    #[test]
    fn strictly_dominant_profile() {
        let g = game(&[&[(3.0, 3.0), (2.0, 1.0)], &[(1.0, 2.0), (0.0, 0.0)]]);
        let eqs = pure_nash(&g);
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0].pure_profile(), Some((0, 0)));
        assert_eq!(eqs[0].kind, EquilibriumKind::Pure);
    }

    #[test]
    fn matching_pennies_unique_mixed() {
        let g = game(&[&[(1.0, -1.0), (-1.0, 1.0)], &[(-1.0, 1.0), (1.0, -1.0)]]);
        assert!(pure_nash(&g).is_empty());
        let res = support_enumeration(&g, 2).unwrap();
        assert_eq!(res.equilibria.len(), 1);
        let eq = &res.equilibria[0];
        assert!(eq.s1.approx_eq(&MixedStrategy::uniform(2).unwrap(), 1e-12));
        assert!(eq.s2.approx_eq(&MixedStrategy::uniform(2).unwrap(), 1e-12));
        assert_eq!(eq.kind, EquilibriumKind::Mixed);
    }

    #[test]
    fn battle_of_sexes_mixed_equilibrium() {
        // Player 1 mixes to make player 2 indifferent: p*b + (1-p)*c = p*c + (1-p)*a
        // gives p = (a - c) / (a + b - 2c) = 4/6.
        let (a, b, c) = (5.0, 3.0, 1.0);
        let res = support_enumeration(&bos(a, b, c), 2).unwrap();
        assert_eq!(res.equilibria.len(), 3);
        let mixed = &res.equilibria[2];
        assert!((mixed.s1[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((mixed.s2[0] - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(res.equilibria[0].pure_profile(), Some((0, 0)));
        assert_eq!(res.equilibria[1].pure_profile(), Some((1, 1)));
    }

    #[test]
    fn quantum_block_has_uniform_mixed_equilibrium() {
        let h = 4.0;
        let g = game(&[&[(h, h), (1.0, 1.0)], &[(1.0, 1.0), (h, h)]]);
        let res = support_enumeration(&g, 2).unwrap();
        let uniform = MixedStrategy::uniform(2).unwrap();
        assert!(res
            .equilibria
            .iter()
            .any(|e| e.s1.approx_eq(&uniform, 1e-12) && e.s2.approx_eq(&uniform, 1e-12)));
    }

    #[test]
    fn one_by_one_game() {
        let g = game(&[&[(2.0, -3.0)]]);
        let res = support_enumeration(&g, 1).unwrap();
        assert_eq!(res.equilibria.len(), 1);
        assert_eq!(res.equilibria[0].payoff, PayoffPair::new(2.0, -3.0));
        assert_eq!(pure_nash(&g).len(), 1);
    }

    #[test]
    fn degenerate_supports_are_skipped_not_fatal() {
        let g = game(&[&[(1.0, 1.0); 2], &[(1.0, 1.0); 2]]);
        let res = support_enumeration(&g, 2).unwrap();
        assert_eq!(res.skipped, vec![(vec![0, 1], vec![0, 1])]);
        assert_eq!(res.equilibria.len(), 4);
    }

    #[test]
    fn argument_validation() {
        let g = bos(5.0, 3.0, 1.0);
        assert!(support_enumeration(&g, 0).is_err());
        assert!(support_enumeration(&g, 3).is_err());
        let big = BimatrixGame::new(vec![vec![PayoffPair::ZERO; 9]; 2]).unwrap();
        assert!(matches!(
            support_enumeration(&big, 1),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn execution_modes_agree() {
        let g = game(&[
            &[(3.0, 1.0), (0.0, 2.0), (1.0, 0.5), (2.0, 2.0)],
            &[(1.0, 3.0), (2.0, 0.0), (0.0, 1.0), (1.5, 0.0)],
            &[(0.5, 0.0), (1.0, 1.0), (3.0, 2.0), (0.0, 1.0)],
            &[(2.0, 2.0), (1.0, 0.0), (0.0, 3.0), (1.0, 1.0)],
        ]);
        let a = support_enumeration_with(&g, 4, Execution::Sequential).unwrap();
        let b = support_enumeration_with(&g, 4, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
