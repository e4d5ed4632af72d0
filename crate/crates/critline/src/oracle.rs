//! Reference ordinates of the first zeros, computed independently with
//! mpmath, used to validate Turing constants and by the self-test.

use std::sync::OnceLock;

use critline_core::certify::{TuringConstants, ValidatedConstants};
use critline_core::rigor::Context;
use critline_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ZEROS_TEXT: &str = include_str!("../data/zeros_5000.txt");

/// Every zero ordinate in (0, 5000], ascending.
pub fn reference_zeros() -> &'static [f64] {
    static Z: OnceLock<Vec<f64>> = OnceLock::new();
    Z.get_or_init(|| {
        ZEROS_TEXT
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.trim().parse().expect("embedded zero table"))
            .collect()
    })
}

/// Height up to which the table is complete.
pub const TABLE_HEIGHT: f64 = 5000.0;

/// Oracle N(t) for `t <= 5000`.
pub fn count_below(t: f64) -> usize {
    assert!(t <= TABLE_HEIGHT, "reference table ends at {TABLE_HEIGHT}");
    reference_zeros().partition_point(|&g| g <= t)
}

/// `count` random windows `[t1, t2]` inside `[lo, hi]`.
pub fn random_windows(count: usize, lo: f64, hi: f64, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = rng.gen_range(lo..hi);
            let b = rng.gen_range(lo..hi);
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

pub const VALIDATION_WINDOWS: usize = 100;
pub const VALIDATION_SEED: u64 = 0x7475_7269_6e67;

/// Validate Turing constants on 100 seeded windows in [50, 5000].
pub fn validate(constants: TuringConstants) -> Result<ValidatedConstants, Error> {
    let cx = Context::new(64);
    let w = random_windows(VALIDATION_WINDOWS, 50.0, TABLE_HEIGHT, VALIDATION_SEED);
    constants.validate(reference_zeros(), &w, &cx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shape() {
        let z = reference_zeros();
        assert_eq!(z.len(), 4520);
        assert!((z[0] - 14.134725141734693).abs() < 1e-12);
        assert!(z.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(count_below(100.0), 29);
        assert_eq!(count_below(50.0), 10);
    }
}
