//! The extended MW scheme.
//!
//! Besides a local operator, each player picks a mode: `C` (classical) or
//! `Q_k` for one of the available joint quantum strategies `|psi_k>`. The
//! local operators act on `|psi_k>` only when both players pick the same
//! `Q_k`; any other combination applies them to `|0...0>`.
//!
//! Pure strategies are laid out mode-major: `(C, op_0), (C, op_1), ...,
//! (Q_1, op_0), (Q_1, op_1), ...`. With one joint state and two qubits this
//! is `C*I, C*X, Q1*I, Q1*X`.

use crate::classify::diagonal_mixture;
use crate::error::{check_dim, Error, Result};
use crate::exec::Execution;
use crate::game::{BimatrixGame, MixedStrategy, Mode, PayoffPair, Player, StrategyLabel};
use crate::linalg::{conjugate_unchecked, outer, tensor, CMatrix, CVector};
use crate::mw::{
    canonical_operators, local_dims, payoff_operator_from, LocalOperator, PayoffOperator,
};

/// A mixed strategy over the extended pure strategies.
pub type EmwStrategy = MixedStrategy;

/// A joint quantum strategy.
#[derive(Debug, Clone, PartialEq)]
pub enum JointState {
    Pure(CVector),
    /// Replaced by its diagonal in the product basis, which yields the same
    /// payoffs under any basis-diagonal measurement.
    Mixed(CMatrix),
}

impl From<CVector> for JointState {
    fn from(v: CVector) -> Self {
        JointState::Pure(v)
    }
}

#[derive(Debug, Clone)]
pub struct EmwConfig {
    input_game: BimatrixGame,
    joint_states: Vec<JointState>,
    local_ops1: Vec<LocalOperator>,
    local_ops2: Vec<LocalOperator>,
    payoff_operator: PayoffOperator,
    // conjugated[s][k * ops2 + l] = (A_k (x) B_l) rho_s (A_k (x) B_l)^dagger,
    // with s = 0 the classical state |0...0>.
    conjugated: Vec<Vec<CMatrix>>,
}

impl EmwConfig {
    /// Configuration with the canonical shift operators as local actions.
    pub fn new(input_game: BimatrixGame, joint_states: Vec<CVector>) -> Result<Self> {
        let ops1 = canonical_operators(input_game.n_rows());
        let ops2 = canonical_operators(input_game.n_cols());
        Self::with_operators(
            input_game,
            joint_states.into_iter().map(JointState::Pure).collect(),
            ops1,
            ops2,
        )
    }

    pub fn with_operators(
        input_game: BimatrixGame,
        joint_states: Vec<JointState>,
        local_ops1: Vec<LocalOperator>,
        local_ops2: Vec<LocalOperator>,
    ) -> Result<Self> {
        if joint_states.is_empty() {
            return Err(Error::InvalidGame(
                "at least one joint quantum strategy is required".into(),
            ));
        }
        let dim = input_game.n_rows() * input_game.n_cols();
        let (d1, d2) = local_dims(&local_ops1, &local_ops2, dim)?;
        check_dim(input_game.n_rows(), d1)?;
        check_dim(input_game.n_cols(), d2)?;

        let tol = crate::tolerance();
        let mut densities = vec![outer(&CVector::basis(dim, 0)?)];
        for state in &joint_states {
            let rho = match state {
                JointState::Pure(psi) => {
                    check_dim(dim, psi.dim())?;
                    psi.check_normalized(tol)?;
                    outer(psi)
                }
                JointState::Mixed(rho) => {
                    check_dim(dim, rho.rows())?;
                    CMatrix::diag(diagonal_mixture(rho)?.weights())
                }
            };
            densities.push(rho);
        }

        let products: Vec<CMatrix> = local_ops1
            .iter()
            .flat_map(|a| {
                local_ops2
                    .iter()
                    .map(move |b| tensor(a.matrix(), b.matrix()))
            })
            .collect();
        let conjugated = densities
            .iter()
            .map(|rho| {
                products
                    .iter()
                    .map(|u| conjugate_unchecked(u, rho))
                    .collect()
            })
            .collect();

        Ok(Self {
            payoff_operator: payoff_operator_from(&input_game),
            input_game,
            joint_states,
            local_ops1,
            local_ops2,
            conjugated,
        })
    }

    pub fn input_game(&self) -> &BimatrixGame {
        &self.input_game
    }

    pub fn joint_states(&self) -> &[JointState] {
        &self.joint_states
    }

    /// Number of modes: `C` plus one per joint state.
    pub fn mode_count(&self) -> usize {
        self.joint_states.len() + 1
    }

    pub fn local_count(&self, player: Player) -> usize {
        match player {
            Player::One => self.local_ops1.len(),
            Player::Two => self.local_ops2.len(),
        }
    }

    /// Length of a player's extended strategy vector.
    pub fn strategy_len(&self, player: Player) -> usize {
        self.mode_count() * self.local_count(player)
    }

    /// Position of `(mode, local)` in a player's strategy vector.
    pub fn strategy_index(&self, player: Player, label: StrategyLabel) -> Result<usize> {
        let ops = self.local_count(player);
        let mode = match label.mode {
            Mode::Classical => 0,
            Mode::Quantum(k) if k >= 1 && k < self.mode_count() => k,
            Mode::Quantum(k) => {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    len: self.mode_count(),
                })
            }
        };
        if label.local >= ops {
            return Err(Error::IndexOutOfRange {
                index: label.local,
                len: ops,
            });
        }
        Ok(mode * ops + label.local)
    }

    pub fn strategy_label(&self, player: Player, index: usize) -> StrategyLabel {
        let ops = self.local_count(player);
        let mode = match index / ops {
            0 => Mode::Classical,
            k => Mode::Quantum(k),
        };
        StrategyLabel {
            mode,
            local: index % ops,
        }
    }

    pub fn labels(&self, player: Player) -> Vec<String> {
        let ops = self.local_count(player);
        (0..self.strategy_len(player))
            .map(|i| self.strategy_label(player, i).render(player, ops))
            .collect()
    }
}

/// `rho_ext = sum_{i,j} rho_ij` over mode pairs, where `rho_ij` mixes the
/// local-operator conjugations of `|psi_i>` when `i == j != 0` and of
/// `|0...0>` otherwise.
pub fn emw_final_state(cfg: &EmwConfig, t1: &EmwStrategy, t2: &EmwStrategy) -> Result<CMatrix> {
    check_dim(cfg.strategy_len(Player::One), t1.len())?;
    check_dim(cfg.strategy_len(Player::Two), t2.len())?;
    let (ops1, ops2) = (cfg.local_ops1.len(), cfg.local_ops2.len());
    let modes = cfg.mode_count();
    let dim = cfg.input_game.n_rows() * cfg.input_game.n_cols();

    let mut rho = CMatrix::zeros(dim, dim);
    for i in 0..modes {
        for j in 0..modes {
            let source = if i == j { i } else { 0 };
            for k in 0..ops1 {
                let pk = t1[i * ops1 + k];
                if pk == 0.0 {
                    continue;
                }
                for l in 0..ops2 {
                    let w = pk * t2[j * ops2 + l];
                    if w != 0.0 {
                        rho.add_scaled(w, &cfg.conjugated[source][k * ops2 + l])?;
                    }
                }
            }
        }
    }
    Ok(rho)
}

/// `tr(X rho_ext)`.
pub fn emw_payoff(cfg: &EmwConfig, t1: &EmwStrategy, t2: &EmwStrategy) -> Result<PayoffPair> {
    let rho = emw_final_state(cfg, t1, t2)?;
    cfg.payoff_operator.evaluate(&rho)
}

/// The bimatrix of all pure-profile payoffs, labelled `C*I`, `Q1*X`, ...
pub fn emw_bimatrix(cfg: &EmwConfig) -> Result<BimatrixGame> {
    emw_bimatrix_with(cfg, Execution::default())
}

pub fn emw_bimatrix_with(cfg: &EmwConfig, exec: Execution) -> Result<BimatrixGame> {
    let n = cfg.strategy_len(Player::One);
    let m = cfg.strategy_len(Player::Two);
    let cells = exec.map_indexed(n * m, |idx| {
        let t1 = MixedStrategy::pure(n, idx / m)?;
        let t2 = MixedStrategy::pure(m, idx % m)?;
        emw_payoff(cfg, &t1, &t2)
    });
    let cells = cells.into_iter().collect::<Result<Vec<_>>>()?;
    BimatrixGame::new(cells.chunks(m).map(<[_]>::to_vec).collect())?
        .with_labels(cfg.labels(Player::One), cfg.labels(Player::Two))
}
