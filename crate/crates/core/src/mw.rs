//! The Marinatto-Weber protocol.
//!
//! Each player applies one of their local unitaries, chosen at random with
//! their mixed strategy, to their share of a fixed joint state `|psi_in>`.
//! The payoff pair is read off the final state with a measurement operator
//! that is diagonal in the product basis. For an `n x m` game the local
//! operators are the cyclic shifts `U_k |i> = |i + k mod n>`, which reduce to
//! `{1, sigma_x}` for two qubits.

use crate::error::{check_dim, Error, Result};
use crate::exec::Execution;
use crate::game::{local_operator_name, BimatrixGame, MixedStrategy, PayoffPair, Player};
use crate::linalg::{outer, tensor, trace_product, CMatrix, CVector};

/// Measurement operator `X = sum_ij (a_ij, b_ij) |ij><ij|`, stored as its
/// diagonal in row-major basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffOperator {
    entries: Vec<PayoffPair>,
}

impl PayoffOperator {
    pub fn entries(&self) -> &[PayoffPair] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Diagonal of one player's payoff observable.
    pub fn diagonal(&self, player: Player) -> Vec<f64> {
        self.entries.iter().map(|p| p.get(player)).collect()
    }

    /// `tr(X rho)` for both players.
    pub fn evaluate(&self, rho: &CMatrix) -> Result<PayoffPair> {
        Ok(PayoffPair::new(
            trace_product(&self.diagonal(Player::One), rho)?,
            trace_product(&self.diagonal(Player::Two), rho)?,
        ))
    }
}

pub fn payoff_operator_from(g: &BimatrixGame) -> PayoffOperator {
    PayoffOperator {
        entries: g.payoffs().to_vec(),
    }
}

/// A unitary acting on one player's subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOperator {
    matrix: CMatrix,
}

impl LocalOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        let defect = matrix.unitarity_defect();
        if defect > crate::tolerance() {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim),
        }
    }

    pub fn sigma_x() -> Self {
        Self {
            matrix: CMatrix::pauli_x(),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// Cyclic shift `|i> -> |i + k mod dim>`.
pub fn shift_operator(k: usize, dim: usize) -> Result<LocalOperator> {
    if k >= dim {
        return Err(Error::IndexOutOfRange { index: k, len: dim });
    }
    let mut m = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        m.set((i + k) % dim, i, crate::linalg::c64(1.0, 0.0));
    }
    Ok(LocalOperator { matrix: m })
}

/// The shifts `U_0, ..., U_{dim-1}`; `{1, sigma_x}` when `dim == 2`.
pub fn canonical_operators(dim: usize) -> Vec<LocalOperator> {
    (0..dim)
        .map(|k| shift_operator(k, dim).expect("k < dim"))
        .collect()
}

/// Checks that the operator sets act on a space of `psi_dim` and returns
/// the two local dimensions.
pub(crate) fn local_dims(
    ops1: &[LocalOperator],
    ops2: &[LocalOperator],
    psi_dim: usize,
) -> Result<(usize, usize)> {
    let d1 = ops1
        .first()
        .map(LocalOperator::dim)
        .ok_or(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        })?;
    let d2 = ops2
        .first()
        .map(LocalOperator::dim)
        .ok_or(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        })?;
    for op in ops1 {
        check_dim(d1, op.dim())?;
    }
    for op in ops2 {
        check_dim(d2, op.dim())?;
    }
    check_dim(d1 * d2, psi_dim)?;
    Ok((d1, d2))
}

/// `rho_fin = sum_kl p[k] q[l] (A_k (x) B_l) rho_in (A_k (x) B_l)^dagger`
/// for `rho_in = |psi_in><psi_in|`.
pub fn mw_final_state(
    psi_in: &CVector,
    p: &MixedStrategy,
    q: &MixedStrategy,
    ops1: &[LocalOperator],
    ops2: &[LocalOperator],
) -> Result<CMatrix> {
    psi_in.check_normalized(crate::tolerance())?;
    check_dim(ops1.len(), p.len())?;
    check_dim(ops2.len(), q.len())?;
    local_dims(ops1, ops2, psi_in.dim())?;

    let dim = psi_in.dim();
    let mut rho = CMatrix::zeros(dim, dim);
    for (k, a) in ops1.iter().enumerate() {
        for (l, b) in ops2.iter().enumerate() {
            let w = p[k] * q[l];
            if w == 0.0 {
                continue;
            }
            let phi = tensor(a.matrix(), b.matrix()).mul_vec(psi_in)?;
            rho.add_scaled(w, &outer(&phi))?;
        }
    }
    Ok(rho)
}

/// Payoff pair `tr(X rho_fin)` with the canonical shift operators.
pub fn mw_payoff(
    g: &BimatrixGame,
    psi_in: &CVector,
    p: &MixedStrategy,
    q: &MixedStrategy,
) -> Result<PayoffPair> {
    check_dim(g.n_rows() * g.n_cols(), psi_in.dim())?;
    let ops1 = canonical_operators(g.n_rows());
    let ops2 = canonical_operators(g.n_cols());
    let rho = mw_final_state(psi_in, p, q, &ops1, &ops2)?;
    payoff_operator_from(g).evaluate(&rho)
}

/// The output game of the MW protocol: entry `(k, l)` is the payoff when the
/// players apply `U_k` and `V_l` with certainty.
pub fn mw_output_game(g: &BimatrixGame, psi_in: &CVector) -> Result<BimatrixGame> {
    mw_output_game_with(g, psi_in, Execution::default())
}

pub fn mw_output_game_with(
    g: &BimatrixGame,
    psi_in: &CVector,
    exec: Execution,
) -> Result<BimatrixGame> {
    let (n, m) = (g.n_rows(), g.n_cols());
    check_dim(n * m, psi_in.dim())?;
    psi_in.check_normalized(crate::tolerance())?;
    let ops1 = canonical_operators(n);
    let ops2 = canonical_operators(m);
    let x = payoff_operator_from(g);

    let cells = exec.map_indexed(n * m, |idx| {
        let (k, l) = (idx / m, idx % m);
        let p = MixedStrategy::pure(n, k)?;
        let q = MixedStrategy::pure(m, l)?;
        let rho = mw_final_state(psi_in, &p, &q, &ops1, &ops2)?;
        x.evaluate(&rho)
    });
    let cells = cells.into_iter().collect::<Result<Vec<_>>>()?;
    let rows = cells.chunks(m).map(<[_]>::to_vec).collect();
    BimatrixGame::new(rows)?.with_labels(
        (0..n)
            .map(|k| local_operator_name(Player::One, k, n))
            .collect(),
        (0..m)
            .map(|l| local_operator_name(Player::Two, l, m))
            .collect(),
    )
}
