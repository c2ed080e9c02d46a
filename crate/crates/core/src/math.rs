use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `ln C(n, k)` through log-gamma; `-inf` when `k > n`.
pub(crate) fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if k == 0 || k == n {
        return 0.0;
    }
    let (n, k) = (n as f64, k as f64);
    libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
}

/// Ceiling that forgives floating-point noise just above an integer.
pub(crate) fn ceil_tolerant(x: f64) -> f64 {
    let rounded = x.round();
    if (x - rounded).abs() <= 1e-9 * x.abs().max(1.0) {
        rounded
    } else {
        x.ceil()
    }
}

/// Seeded stream; distinct `stream` values give independent sequences for
/// the same seed.
pub(crate) fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Independent child seed for a labelled sub-task (splitmix64 finaliser).
pub(crate) fn derive_seed(seed: u64, label: u64) -> u64 {
    let mut z = seed ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact binomial coefficient, saturating at `u128::MAX`.
    fn binomial(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        for i in 0..k {
            // acc * (n - i) / (i + 1) stays integral at every step
            match acc.checked_mul((n - i) as u128) {
                Some(v) => acc = v / (i as u128 + 1),
                None => return u128::MAX,
            }
        }
        acc
    }

    #[test]
    fn ln_binomial_matches_exact_values() {
        for n in 0..60u64 {
            for k in 0..=n {
                let exact = (binomial(n, k) as f64).ln();
                assert!((ln_binomial(n, k) - exact).abs() < 1e-9, "C({n},{k})");
            }
        }
    }

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(20, 5), 15504);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(200, 5), 2_535_650_040);
    }

    #[test]
    fn ceil_tolerant_absorbs_noise() {
        assert_eq!(ceil_tolerant(2.0000000000000004), 2.0);
        assert_eq!(ceil_tolerant(2.01), 3.0);
        assert_eq!(ceil_tolerant(0.0), 0.0);
    }
}
