//! Reference binary triples with known information structure.

use super::Distribution3;

/// Three independent fair bits.
pub fn independent_triple() -> Distribution3 {
    Distribution3::new([2, 2, 2], vec![0.125; 8]).expect("uniform table")
}

/// X, Y independent fair bits and Z = X xor Y.
pub fn xor_triple() -> Distribution3 {
    Distribution3::from_observations([2, 2, 2], [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]])
        .expect("xor table")
}

/// X = Y = Z, a single fair bit.
pub fn copy_triple() -> Distribution3 {
    Distribution3::from_observations([2, 2, 2], [[0, 0, 0], [1, 1, 1]]).expect("copy table")
}
