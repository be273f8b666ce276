//! MW protocol with two-parameter local unitaries.
//!
//! A player's strategy is a triple `(p, theta, phi)`: with probability `p`
//! they apply `U(theta, phi)` and otherwise the companion `V = U(pi - theta,
//! phi - pi)`. For a separable initial state each player can pick the angles
//! of their own qubit so that `U` rotates it onto `|0>` and `V` onto `|1>`,
//! which recovers the classical game.

use std::f64::consts::{PI, TAU};

use crate::classify::is_separable_pure;
use crate::error::{check_dim, Error, Result};
use crate::game::{BimatrixGame, MixedStrategy, PayoffPair};
use crate::linalg::{c64, CMatrix, CVector, C64};
use crate::mw::{mw_final_state, payoff_operator_from, LocalOperator};

const RANGE_SLACK: f64 = 1e-12;

fn check_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
    if value.is_finite() && value >= min - RANGE_SLACK && value <= max + RANGE_SLACK {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            name,
            value,
            min,
            max,
        })
    }
}

/// Angles of `U(theta, phi)`, `theta in [0, pi]`, `phi in [0, 2 pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryParams {
    theta: f64,
    phi: f64,
}

impl UnitaryParams {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        check_range("theta", theta, 0.0, PI)?;
        check_range("phi", phi, 0.0, TAU)?;
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Angles of a single qubit `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
pub type SeparableQubitParams = UnitaryParams;

impl UnitaryParams {
    /// The qubit `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
    pub fn qubit_state(&self) -> CVector {
        let (s, c) = (self.theta / 2.0).sin_cos();
        CVector::new(vec![c64(c, 0.0), C64::from_polar(s, self.phi)]).expect("finite amplitudes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedStrategy {
    p: f64,
    params: UnitaryParams,
}

impl RefinedStrategy {
    /// `p` is the probability of applying `U`; the rest goes to `V`.
    pub fn new(p: f64, params: UnitaryParams) -> Result<Self> {
        check_range("p", p, 0.0, 1.0)?;
        Ok(Self {
            p: p.clamp(0.0, 1.0),
            params,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn params(&self) -> UnitaryParams {
        self.params
    }
}

/// `[[cos(t/2), e^{-i phi} sin(t/2)], [e^{i phi} sin(t/2), -cos(t/2)]]`.
pub fn two_param_unitary(params: UnitaryParams) -> LocalOperator {
    let (s, c) = (params.theta / 2.0).sin_cos();
    let m = CMatrix::new(
        2,
        2,
        vec![
            c64(c, 0.0),
            C64::from_polar(s, -params.phi),
            C64::from_polar(s, params.phi),
            c64(-c, 0.0),
        ],
    )
    .expect("2x2 data");
    LocalOperator::new(m).expect("U(theta, phi) is unitary")
}

/// `V = U(pi - theta, phi - pi)`, with `phi - pi` wrapped into `[0, 2 pi)`.
pub fn companion_operator(params: UnitaryParams) -> LocalOperator {
    let theta = (PI - params.theta).clamp(0.0, PI);
    let phi = (params.phi - PI).rem_euclid(TAU);
    two_param_unitary(UnitaryParams { theta, phi })
}

/// The four-term mixture
/// `pq U1(x)U2 + p(1-q) U1(x)V2 + (1-p)q V1(x)U2 + (1-p)(1-q) V1(x)V2`
/// applied to `|psi_in><psi_in|`.
pub fn refined_final_state(
    psi_in: &CVector,
    s1: &RefinedStrategy,
    s2: &RefinedStrategy,
) -> Result<CMatrix> {
    check_dim(4, psi_in.dim())?;
    psi_in.check_normalized(crate::tolerance())?;
    let ops1 = [two_param_unitary(s1.params), companion_operator(s1.params)];
    let ops2 = [two_param_unitary(s2.params), companion_operator(s2.params)];
    let p = MixedStrategy::new(vec![s1.p, 1.0 - s1.p])?;
    let q = MixedStrategy::new(vec![s2.p, 1.0 - s2.p])?;
    mw_final_state(psi_in, &p, &q, &ops1, &ops2)
}

pub fn refined_payoff(
    g: &BimatrixGame,
    psi_in: &CVector,
    s1: &RefinedStrategy,
    s2: &RefinedStrategy,
) -> Result<PayoffPair> {
    check_dim(2, g.n_rows())?;
    check_dim(2, g.n_cols())?;
    let rho = refined_final_state(psi_in, s1, s2)?;
    payoff_operator_from(g).evaluate(&rho)
}

/// The 2x2 game over `{U, V}` for fixed angles of both players.
pub fn refined_output_game(
    g: &BimatrixGame,
    psi_in: &CVector,
    params1: UnitaryParams,
    params2: UnitaryParams,
) -> Result<BimatrixGame> {
    let mut rows = Vec::with_capacity(2);
    for p in [1.0, 0.0] {
        let mut row = Vec::with_capacity(2);
        for q in [1.0, 0.0] {
            let s1 = RefinedStrategy::new(p, params1)?;
            let s2 = RefinedStrategy::new(q, params2)?;
            row.push(refined_payoff(g, psi_in, &s1, &s2)?);
        }
        rows.push(row);
    }
    BimatrixGame::new(rows)?.with_labels(vec!["U".into(), "V".into()], vec!["U".into(), "V".into()])
}

fn qubit_params(a0: C64, a1: C64) -> SeparableQubitParams {
    let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
    let (m0, m1) = (a0.norm() / norm, a1.norm() / norm);
    let theta = (2.0 * m1.atan2(m0)).clamp(0.0, PI);
    let tol = crate::tolerance();
    let phi = if m0 <= tol || m1 <= tol {
        0.0
    } else {
        let phi = (a1.arg() - a0.arg()).rem_euclid(TAU);
        if phi >= TAU {
            0.0
        } else {
            phi
        }
    };
    UnitaryParams { theta, phi }
}

/// Per-qubit angles of a separable two-qubit state.
///
/// With these angles and `p = q = 1` the refined final state is `|00><00|`.
/// The state is factored through its largest-magnitude amplitude; when a
/// qubit is a basis state its phase is undefined and returned as 0.
pub fn classical_recovery_params(
    psi_in: &CVector,
) -> Result<(SeparableQubitParams, SeparableQubitParams)> {
    check_dim(4, psi_in.dim())?;
    psi_in.check_normalized(crate::tolerance())?;
    if !is_separable_pure(psi_in, 2, 2)? {
        return Err(Error::NotSeparable);
    }
    let amps = psi_in.entries();
    let pivot = (0..4)
        .max_by(|&a, &b| amps[a].norm_sqr().total_cmp(&amps[b].norm_sqr()))
        .expect("four amplitudes");
    let (i, j) = (pivot / 2, pivot % 2);
    let first = qubit_params(amps[j], amps[2 + j]);
    let second = qubit_params(amps[2 * i], amps[2 * i + 1]);
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::outer;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn params(theta: f64, phi: f64) -> UnitaryParams {
        UnitaryParams::new(theta, phi).unwrap()
    }

    fn matrix(rows: &[&[C64]]) -> CMatrix {
        CMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn unitary_special_cases() {
        let u = two_param_unitary(params(0.0, 0.0));
        assert!(u.matrix().approx_eq(&CMatrix::diag(&[1.0, -1.0]), 1e-15));

        let u = two_param_unitary(params(PI, 0.0));
        assert!(u.matrix().approx_eq(&CMatrix::pauli_x(), 1e-15));

        let h = FRAC_1_SQRT_2;
        let u = two_param_unitary(params(FRAC_PI_2, 0.0));
        let want = matrix(&[&[c64(h, 0.0), c64(h, 0.0)], &[c64(h, 0.0), c64(-h, 0.0)]]);
        assert!(u.matrix().approx_eq(&want, 1e-15));
    }

    #[test]
    fn companion_special_cases() {
        let v = companion_operator(params(PI, PI));
        assert!(v.matrix().approx_eq(&CMatrix::diag(&[1.0, -1.0]), 1e-15));
        let v = companion_operator(params(0.0, PI));
        assert!(v.matrix().approx_eq(&CMatrix::pauli_x(), 1e-15));
    }

    #[test]
    fn rotations_onto_basis_states() {
        for &theta in &[0.0, 0.3, 1.0, FRAC_PI_2, 2.5, PI] {
            for &phi in &[0.0, 0.7, PI, 4.0, TAU] {
                let prm = params(theta, phi);
                let qubit = prm.qubit_state();
                let u = two_param_unitary(prm).matrix().mul_vec(&qubit).unwrap();
                let v = companion_operator(prm).matrix().mul_vec(&qubit).unwrap();
                assert!(
                    u[1].norm() < 1e-12,
                    "U leaves |1> component at {theta},{phi}"
                );
                assert!(
                    v[0].norm() < 1e-12,
                    "V leaves |0> component at {theta},{phi}"
                );
            }
        }
    }

    #[test]
    fn parameter_ranges_enforced() {
        assert!(matches!(
            UnitaryParams::new(-0.1, 0.0),
            Err(Error::ParamOutOfRange { name: "theta", .. })
        ));
        assert!(UnitaryParams::new(0.0, 7.0).is_err());
        assert!(UnitaryParams::new(f64::NAN, 0.0).is_err());
        assert!(RefinedStrategy::new(1.2, params(0.0, 0.0)).is_err());
    }

    #[test]
    fn refined_final_state_examples() {
        let ket00 = CVector::basis(4, 0).unwrap();
        let s = RefinedStrategy::new(1.0, params(0.0, 0.0)).unwrap();
        let rho = refined_final_state(&ket00, &s, &s).unwrap();
        assert!(rho.approx_eq(&outer(&ket00), 1e-15));

        let psi = CVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0]).unwrap();
        let s2 = RefinedStrategy::new(1.0, params(FRAC_PI_2, 0.0)).unwrap();
        let rho = refined_final_state(&psi, &s, &s2).unwrap();
        assert!(rho.approx_eq(&outer(&ket00), 1e-15));
    }

    #[test]
    fn refined_final_state_rejects_bad_states() {
        let s = RefinedStrategy::new(1.0, params(0.0, 0.0)).unwrap();
        assert!(matches!(
            refined_final_state(&CVector::basis(9, 0).unwrap(), &s, &s),
            Err(Error::DimensionMismatch { .. })
        ));
        let unnormalized = CVector::from_real(&[1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            refined_final_state(&unnormalized, &s, &s),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn recovery_params_examples() {
        let (a, b) = classical_recovery_params(&CVector::basis(4, 0).unwrap()).unwrap();
        assert_eq!(
            (a.theta(), a.phi(), b.theta(), b.phi()),
            (0.0, 0.0, 0.0, 0.0)
        );

        let plus_zero = CVector::from_real(&[FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0]).unwrap();
        let (a, b) = classical_recovery_params(&plus_zero).unwrap();
        assert!((a.theta() - FRAC_PI_2).abs() < 1e-12 && a.phi().abs() < 1e-12);
        assert!(b.theta().abs() < 1e-12 && b.phi() == 0.0);

        let zero_plus_i = CVector::from_pairs(&[
            (FRAC_1_SQRT_2, 0.0),
            (0.0, FRAC_1_SQRT_2),
            (0.0, 0.0),
            (0.0, 0.0),
        ])
        .unwrap();
        let (a, b) = classical_recovery_params(&zero_plus_i).unwrap();
        assert!(a.theta().abs() < 1e-12);
        assert!((b.theta() - FRAC_PI_2).abs() < 1e-12);
        assert!((b.phi() - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn recovery_rejects_entangled() {
        let bell = CVector::from_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).unwrap();
        assert!(matches!(
            classical_recovery_params(&bell),
            Err(Error::NotSeparable)
        ));
        let unnormalized = CVector::from_real(&[2.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            classical_recovery_params(&unnormalized),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn recovered_params_with_global_phase() {
        let a = params(1.1, 5.0).qubit_state();
        let b = params(2.0, 0.4).qubit_state();
        let psi = a.kron(&b).scale(C64::from_polar(1.0, 2.2));
        let (pa, pb) = classical_recovery_params(&psi).unwrap();
        assert!((pa.theta() - 1.1).abs() < 1e-12 && (pa.phi() - 5.0).abs() < 1e-12);
        assert!((pb.theta() - 2.0).abs() < 1e-12 && (pb.phi() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn refined_output_game_recovers_input() {
        let g = BimatrixGame::from_pairs(&[&[(5.0, 3.0), (1.0, 1.0)], &[(1.0, 1.0), (3.0, 5.0)]])
            .unwrap();
        let psi = CVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0]).unwrap();
        let (a, b) = classical_recovery_params(&psi).unwrap();
        let out = refined_output_game(&g, &psi, a, b).unwrap();
        assert!(out.same_payoffs(&g, 1e-12));
    }
}
