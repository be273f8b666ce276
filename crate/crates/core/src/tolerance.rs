use std::sync::atomic::{AtomicU64, Ordering};

/// Shared tolerance for equality, unitarity, normalization and separability.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Looser tolerance for equilibrium deviation checks; linear solves
/// accumulate more error than the entrywise comparisons.
pub const NASH_TOLERANCE: f64 = 1e-7;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Current shared tolerance.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

/// Overrides the shared tolerance for the whole process.
///
/// Panics if `tol` is not a positive finite number.
pub fn set_tolerance(tol: f64) {
    assert!(tol.is_finite() && tol > 0.0, "tolerance must be positive");
    TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_bits_match_constant() {
        assert_eq!(f64::from_bits(0x3E11_2E0B_E826_D695), DEFAULT_TOLERANCE);
    }
}
