//! Deterministic key derivation for per-agent random streams and stub jitter.
//!
//! The platform hasher is deliberately avoided: traces must be bit-identical
//! across runs, platforms, and thread counts, so every derived seed comes from
//! a fixed FNV-1a/splitmix pipeline over explicit byte material.

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// FNV-1a over one chunk, continuing from `state`.
fn fnv1a(mut state: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        state ^= u64::from(b);
        state = state.wrapping_mul(FNV_PRIME);
    }
    state
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Mix a run seed with a label and arbitrary text/number parts into one key.
pub(crate) fn stream_key(seed: u64, label: &str, text: &str, n: u64) -> u64 {
    let mut h = fnv1a(FNV_OFFSET, &seed.to_le_bytes());
    h = fnv1a(h, label.as_bytes());
    h = fnv1a(h, &[0]);
    h = fnv1a(h, text.as_bytes());
    h = fnv1a(h, &[0]);
    h = fnv1a(h, &n.to_le_bytes());
    splitmix(h)
}

/// Uniform draw in `[0, 1)` from a derived key.
pub(crate) fn unit_f64(key: u64) -> f64 {
    // 53 mantissa bits.
    (key >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Symmetric jitter in `[-bound, +bound]`.
pub(crate) fn jitter(key: u64, bound: f64) -> f64 {
    (unit_f64(key) * 2.0 - 1.0) * bound
}
