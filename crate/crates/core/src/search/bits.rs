//! Families of subsets of `[n]`, `n <= 8`, as 256-bit sets indexed by mask.

use std::ops::{BitAnd, BitOr, Not};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct LatticeBits(pub [u64; 4]);

impl LatticeBits {
    pub const EMPTY: LatticeBits = LatticeBits([0; 4]);

    #[inline]
    pub fn has(&self, m: u32) -> bool {
        self.0[(m >> 6) as usize] >> (m & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, m: u32) {
        self.0[(m >> 6) as usize] |= 1 << (m & 63);
    }

    #[inline]
    pub fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    #[inline]
    pub fn and_count(&self, other: &LatticeBits) -> u32 {
        (0..4).map(|i| (self.0[i] & other.0[i]).count_ones()).sum()
    }

    /// Members in increasing mask order.
    pub fn masks(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.count() as usize);
        for (w, &word) in self.0.iter().enumerate() {
            let mut b = word;
            while b != 0 {
                out.push((w as u32) << 6 | b.trailing_zeros());
                b &= b - 1;
            }
        }
        out
    }

    /// `2^S`: all subsets of `s`.
    pub fn down_of(s: u32) -> Self {
        let mut out = LatticeBits::EMPTY;
        let mut sub = s;
        loop {
            out.set(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & s;
        }
        out
    }

    /// All supersets of `s` inside `[n]`.
    pub fn up_of(s: u32, n: usize) -> Self {
        let rest = !s & ((1u32 << n) - 1);
        let mut out = LatticeBits::EMPTY;
        let mut sub = rest;
        loop {
            out.set(s | sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        out
    }
}

impl BitOr for LatticeBits {
    type Output = LatticeBits;
    #[inline]
    fn bitor(self, o: LatticeBits) -> LatticeBits {
        LatticeBits([self.0[0] | o.0[0], self.0[1] | o.0[1], self.0[2] | o.0[2], self.0[3] | o.0[3]])
    }
}

impl BitAnd for LatticeBits {
    type Output = LatticeBits;
    #[inline]
    fn bitand(self, o: LatticeBits) -> LatticeBits {
        LatticeBits([self.0[0] & o.0[0], self.0[1] & o.0[1], self.0[2] & o.0[2], self.0[3] & o.0[3]])
    }
}

impl Not for LatticeBits {
    type Output = LatticeBits;
    #[inline]
    fn not(self) -> LatticeBits {
        LatticeBits([!self.0[0], !self.0[1], !self.0[2], !self.0[3]])
    }
}

/// Per-mask closures for one ground set.
pub(crate) struct Closures {
    pub down: Vec<LatticeBits>,
    pub up: Vec<LatticeBits>,
}

impl Closures {
    pub fn new(n: usize) -> Self {
        let total = 1u32 << n;
        Closures {
            down: (0..total).map(LatticeBits::down_of).collect(),
            up: (0..total).map(|s| LatticeBits::up_of(s, n)).collect(),
        }
    }
}
