//! Shared fixtures for the benchmarks.

use posetrace::Family;

/// Deterministic pseudo-random family of `size` distinct subsets of `[n]`.
pub fn scrambled_family(n: usize, size: usize, seed: u64) -> Family {
    let top = 1u64 << n;
    let mut state = seed | 1;
    let mut masks = Vec::with_capacity(size);
    while masks.len() < size.min(top as usize) {
        // xorshift64
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let m = (state % top) as u32;
        if !masks.contains(&m) {
            masks.push(m);
        }
    }
    Family::new(n, masks).expect("masks inside [n]")
}
