//! Deterministic seed derivation: every randomized stage draws from one root
//! seed combined with stable string labels, so a single integer reproduces a
//! whole corpus run.

/// SplitMix64 finalizer; stable across platforms.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xCBF29CE484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001B3);
    }
    h
}

/// Derive a child seed from a root seed and a path of labels, e.g.
/// `derive_seed(root, &["aave", "resilience", "trial:3"])`.
pub fn derive_seed(root: u64, labels: &[&str]) -> u64 {
    let mut state = splitmix64(root);
    for label in labels {
        state = splitmix64(state ^ fnv1a(label.as_bytes()));
    }
    state
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_stable_and_label_sensitive() {
        let a = derive_seed(42, &["x", "y"]);
        let b = derive_seed(42, &["x", "y"]);
        let c = derive_seed(42, &["x", "z"]);
        let d = derive_seed(43, &["x", "y"]);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn known_value_regression() {
        // frozen so that seed derivation never drifts silently
        assert_eq!(splitmix64(0), 0xE220A8397B1DCDAF);
    }
}
