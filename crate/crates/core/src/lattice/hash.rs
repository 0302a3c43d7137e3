//! Counter-based edge sampling.
//!
//! Edge `i` of sample `k` under master seed `s` is open iff
//! `mix64(key(s, k) + (i + 1) * GOLDEN) < p * 2^64`. The mixer is the
//! SplitMix64 finalizer. The rule is frozen: changing it breaks the
//! committed test vectors.

pub const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const SAMPLE_MUL: u64 = 0xD1B5_4A32_D192_ED03;

#[inline]
pub const fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-sample key.
#[inline]
pub const fn sample_key(master_seed: u64, sample_id: u64) -> u64 {
    mix64(mix64(master_seed) ^ sample_id.wrapping_mul(SAMPLE_MUL))
}

#[inline]
pub const fn edge_word(key: u64, index: u64) -> u64 {
    mix64(key.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// `p * 2^64`, saturating at `2^64` so that `p = 1` opens every edge.
pub fn threshold(p: f64) -> u128 {
    if p >= 1.0 {
        1u128 << 64
    } else if p <= 0.0 {
        0
    } else {
        // Exact: scaling by a power of two only moves the exponent.
        (p * 18_446_744_073_709_551_616.0) as u128
    }
}

#[inline]
pub fn is_open(key: u64, index: u64, threshold: u128) -> bool {
    (edge_word(key, index) as u128) < threshold
}

/// Derives an independent master seed for a named sub-stream.
pub const fn derive_seed(master_seed: u64, tag: u64) -> u64 {
    mix64(master_seed ^ mix64(tag.wrapping_add(GOLDEN)))
}
