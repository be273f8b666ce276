//! Payoff-equivalent states and the classical / non-classical classifier.
//!
//! Under a measurement that is diagonal in the product basis, a density
//! matrix is indistinguishable from the mixture of its diagonal, and from the
//! pure state whose amplitudes are the square roots of that diagonal. An eMW
//! game is classical (its quotient equals the input game) exactly when the
//! final state of every strategy profile is equivalent in this sense to a
//! separable pure state.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::emw::{emw_final_state, EmwConfig};
use crate::error::{check_dim, Error, Result};
use crate::exec::Execution;
use crate::game::{MixedStrategy, Player};
use crate::linalg::{CMatrix, CVector};

/// Number of pseudo-random profiles tested after the three fixed ones.
pub const RANDOM_PROFILES: usize = 64;

/// Seed used when the caller does not supply a generator.
pub const DEFAULT_SEED: u64 = 0x5EED_0E3A;

/// Classical mixture `sum_ij w_ij |ij><ij|`, indexed by product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalMixture {
    weights: Vec<f64>,
}

impl DiagonalMixture {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn to_density(&self) -> CMatrix {
        CMatrix::diag(&self.weights)
    }
}

/// The diagonal of a density matrix as a probability vector.
pub fn diagonal_mixture(rho: &CMatrix) -> Result<DiagonalMixture> {
    rho.check_density(crate::tolerance())?;
    let weights = rho.diagonal().iter().map(|z| z.re.max(0.0)).collect();
    Ok(DiagonalMixture { weights })
}

/// Pure state `sum_ij sqrt(rho_ij,ij) |ij>` with the same diagonal as `rho`.
pub fn equivalent_pure_state(rho: &CMatrix) -> Result<CVector> {
    let mix = diagonal_mixture(rho)?;
    CVector::from_real(&mix.weights.iter().map(|w| w.sqrt()).collect::<Vec<_>>())
}

/// Largest `|l_ij l_kl - l_il l_kj|` over the 2x2 minors of the `n x m`
/// amplitude matrix of the normalized `psi`. Zero exactly for product states.
pub fn separability_defect(psi: &CVector, n: usize, m: usize) -> Result<f64> {
    check_dim(n * m, psi.dim())?;
    let norm = psi.norm_sqr().sqrt();
    if norm == 0.0 {
        return Err(Error::NotNormalized(0.0));
    }
    let a = |i: usize, j: usize| psi[i * m + j] / norm;
    let mut worst = 0.0f64;
    for i in 0..n {
        for k in i + 1..n {
            for j in 0..m {
                for l in j + 1..m {
                    let minor = a(i, j) * a(k, l) - a(i, l) * a(k, j);
                    worst = worst.max(minor.norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Whether `psi` in `C^n (x) C^m` is a product state; for two qubits this is
/// `|l_00 l_11 - l_01 l_10| <= tol`.
pub fn is_separable_pure(psi: &CVector, n: usize, m: usize) -> Result<bool> {
    Ok(separability_defect(psi, n, m)? <= crate::tolerance())
}

/// Where a tested profile came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileSource {
    /// One of the three fixed profiles, 0-based.
    Mandatory(usize),
    Random(usize),
    Custom,
}

/// Evidence gathered for one strategy profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileEvidence {
    pub source: ProfileSource,
    pub t1: MixedStrategy,
    pub t2: MixedStrategy,
    pub mixture: DiagonalMixture,
    pub equivalent_state: CVector,
    pub defect: f64,
}

impl ProfileEvidence {
    pub fn is_separable(&self) -> bool {
        self.defect <= crate::tolerance()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    Classical {
        profiles_checked: usize,
    },
    NonClassical {
        /// First violating profile, fixed profiles before random ones.
        witness: ProfileEvidence,
        /// Every violating profile among those tested.
        violations: Vec<ProfileEvidence>,
        profiles_checked: usize,
    },
}

impl Classification {
    pub fn is_classical(&self) -> bool {
        matches!(self, Classification::Classical { .. })
    }

    pub fn witness(&self) -> Option<&ProfileEvidence> {
        match self {
            Classification::Classical { .. } => None,
            Classification::NonClassical { witness, .. } => Some(witness),
        }
    }
}

/// The three profiles on which the separability condition alone forces
/// `eta_00 = 1`, over `(C*I, C*X, Q*I, Q*X)`:
/// `p1 = p4 = q1 = q3 = 1/2`, `p1 = p3 = q1 = q4 = 1/2`, `p1 = p3 = q1 = q3 = 1/2`.
pub fn mandatory_profiles() -> [(MixedStrategy, MixedStrategy); 3] {
    let s = |v: [f64; 4]| MixedStrategy::new(v.to_vec()).expect("valid profile");
    [
        (s([0.5, 0.0, 0.0, 0.5]), s([0.5, 0.0, 0.5, 0.0])),
        (s([0.5, 0.0, 0.5, 0.0]), s([0.5, 0.0, 0.0, 0.5])),
        (s([0.5, 0.0, 0.5, 0.0]), s([0.5, 0.0, 0.5, 0.0])),
    ]
}

fn random_strategy<R: Rng + ?Sized>(rng: &mut R, len: usize) -> MixedStrategy {
    // Exponential draws normalized to the simplex (flat Dirichlet).
    let draws: Vec<f64> = (0..len)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let sum: f64 = draws.iter().sum();
    MixedStrategy::new(draws.iter().map(|d| d / sum).collect()).expect("normalized draw")
}

/// Separability evidence for a single profile of a two-qubit eMW game.
pub fn profile_evidence(
    cfg: &EmwConfig,
    t1: &MixedStrategy,
    t2: &MixedStrategy,
    source: ProfileSource,
) -> Result<ProfileEvidence> {
    let g = cfg.input_game();
    let rho = emw_final_state(cfg, t1, t2)?;
    let mixture = diagonal_mixture(&rho)?;
    let equivalent_state = equivalent_pure_state(&rho)?;
    let defect = separability_defect(&equivalent_state, g.n_rows(), g.n_cols())?;
    Ok(ProfileEvidence {
        source,
        t1: t1.clone(),
        t2: t2.clone(),
        mixture,
        equivalent_state,
        defect,
    })
}

/// Classifies a single-state 2x2 eMW game using a fresh generator seeded with
/// `seed`.
pub fn classify_emw_seeded(cfg: &EmwConfig, seed: u64) -> Result<Classification> {
    classify_emw(cfg, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn classify_emw<R: Rng + ?Sized>(cfg: &EmwConfig, rng: &mut R) -> Result<Classification> {
    classify_emw_with(cfg, rng, Execution::default())
}

/// Tests the three fixed profiles and [`RANDOM_PROFILES`] draws from `rng`.
///
/// Profiles are drawn sequentially, so the outcome depends only on the
/// generator state, never on `exec`.
pub fn classify_emw_with<R: Rng + ?Sized>(
    cfg: &EmwConfig,
    rng: &mut R,
    exec: Execution,
) -> Result<Classification> {
    let g = cfg.input_game();
    if g.n_rows() != 2 || g.n_cols() != 2 || cfg.joint_states().len() != 1 {
        return Err(Error::Unsupported(
            "classification needs a 2x2 game with a single joint state".into(),
        ));
    }
    let n1 = cfg.strategy_len(Player::One);
    let n2 = cfg.strategy_len(Player::Two);
    let mut profiles: Vec<(MixedStrategy, MixedStrategy, ProfileSource)> = mandatory_profiles()
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| (a, b, ProfileSource::Mandatory(i)))
        .collect();
    for i in 0..RANDOM_PROFILES {
        let a = random_strategy(rng, n1);
        let b = random_strategy(rng, n2);
        profiles.push((a, b, ProfileSource::Random(i)));
    }

    let evidence = exec.map_slice(&profiles, |(a, b, src)| profile_evidence(cfg, a, b, *src));
    let evidence = evidence.into_iter().collect::<Result<Vec<_>>>()?;
    let profiles_checked = evidence.len();
    let violations: Vec<ProfileEvidence> =
        evidence.into_iter().filter(|e| !e.is_separable()).collect();
    Ok(match violations.first() {
        None => Classification::Classical { profiles_checked },
        Some(first) => Classification::NonClassical {
            witness: first.clone(),
            violations,
            profiles_checked,
        },
    })
}
