//! Ground sets and subsets.
//!
//! A [`Subset`] is a bit mask over a ground set of at most [`MAX_GROUND`]
//! elements. Enumeration runs in ascending mask order, which is the
//! canonical tie-breaking order everywhere else in the crate.
//!
//! Seeded sampling uses ChaCha8, a counter-based generator. A seed value
//! selects the key; [`rng_for`] selects an independent stream under that key
//! via the ChaCha stream id, and [`derive_seed`] maps `(seed, index)` to a
//! fresh 64-bit seed with SplitMix64 so per-trial seeds can be printed and
//! replayed individually.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 128;

/// Default cap on `n` for full `2^n` enumeration.
pub const DEFAULT_ENUMERATION_GUARD: usize = 24;

/// Environment variable overriding [`DEFAULT_ENUMERATION_GUARD`].
pub const GUARD_ENV: &str = "RATIOLAB_GUARD_N";

/// Current enumeration guard, honoring `RATIOLAB_GUARD_N` when set.
pub fn enumeration_guard() -> usize {
    std::env::var(GUARD_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|g| g.min(MAX_GROUND))
        .unwrap_or(DEFAULT_ENUMERATION_GUARD)
}

/// Fails with [`Error::GuardExceeded`] when `n` is too large to enumerate.
pub fn check_guard(n: GroundSize) -> Result<()> {
    let guard = enumeration_guard();
    if n.get() > guard {
        return Err(Error::GuardExceeded { n: n.get(), guard });
    }
    Ok(())
}

/// Size of the ground set `E = {0, .., n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSize(u8);

impl GroundSize {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::Parameter(format!(
                "ground size must be in 1..={MAX_GROUND}, got {n}"
            )));
        }
        Ok(GroundSize(n as u8))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// `floor(n / 2)`.
    #[inline]
    pub fn half(self) -> usize {
        self.get() / 2
    }

    /// Mask with the low `n` bits set.
    #[inline]
    pub fn full_mask(self) -> u128 {
        if self.0 as usize == MAX_GROUND {
            u128::MAX
        } else {
            (1u128 << self.0) - 1
        }
    }
}

impl fmt::Display for GroundSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A subset of a ground set, stored as a membership mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset {
    mask: u128,
    n: GroundSize,
}

impl Subset {
    /// Builds a subset from a raw mask; bits at positions `>= n` are rejected.
    pub fn from_mask(n: GroundSize, mask: u128) -> Result<Self> {
        if mask & !n.full_mask() != 0 {
            return Err(Error::Parameter(format!(
                "mask {mask:#x} has bits outside a ground set of size {n}"
            )));
        }
        Ok(Subset { mask, n })
    }

    pub fn empty(n: GroundSize) -> Self {
        Subset { mask: 0, n }
    }

    pub fn full(n: GroundSize) -> Self {
        Subset {
            mask: n.full_mask(),
            n,
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: GroundSize, indices: I) -> Result<Self> {
        let mut mask = 0u128;
        for i in indices {
            if i >= n.get() {
                return Err(Error::Parameter(format!(
                    "element {i} outside ground set of size {n}"
                )));
            }
            mask |= 1u128 << i;
        }
        Ok(Subset { mask, n })
    }

    #[inline]
    pub fn mask(self) -> u128 {
        self.mask
    }

    #[inline]
    pub fn ground(self) -> GroundSize {
        self.n
    }

    /// `|S|`.
    #[inline]
    pub fn cardinality(self) -> usize {
        self.mask.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < self.n.get() && self.mask >> i & 1 == 1
    }

    /// `E \ S`.
    #[inline]
    pub fn complement(self) -> Self {
        Subset {
            mask: !self.mask & self.n.full_mask(),
            n: self.n,
        }
    }

    /// `S ∪ {i}`. Panics if `i` is outside the ground set.
    #[inline]
    pub fn with(self, i: usize) -> Self {
        assert!(i < self.n.get(), "element {i} outside ground set");
        Subset {
            mask: self.mask | 1u128 << i,
            n: self.n,
        }
    }

    /// `S \ {i}`.
    #[inline]
    pub fn without(self, i: usize) -> Self {
        if i >= self.n.get() {
            return self;
        }
        Subset {
            mask: self.mask & !(1u128 << i),
            n: self.n,
        }
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Subset {
            mask: self.mask | other.mask,
            n: self.n,
        }
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Subset {
            mask: self.mask & other.mask,
            n: self.n,
        }
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Subset {
            mask: self.mask & !other.mask,
            n: self.n,
        }
    }

    #[inline]
    pub fn is_subset_of(self, other: Self) -> bool {
        self.mask & !other.mask == 0
    }

    /// Member indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut rest = self.mask;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        })
    }

    /// Non-members in ascending order.
    pub fn non_members(self) -> impl Iterator<Item = usize> {
        self.complement().indices()
    }

    /// Lower-case hex mask with a `0x` prefix, as used in CSV output.
    pub fn to_hex(self) -> String {
        format!("{:#x}", self.mask)
    }

    /// Parses `0x..` hex masks.
    pub fn from_hex(n: GroundSize, s: &str) -> Result<Self> {
        let digits = s.trim().trim_start_matches("0x").trim_start_matches("0X");
        let mask = u128::from_str_radix(digits, 16)
            .map_err(|e| Error::Parse(format!("bad hex mask {s:?}: {e}")))?;
        Self::from_mask(n, mask)
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Ascending mask order.
impl Ord for Subset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.mask.cmp(&other.mask).then(self.n.cmp(&other.n))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subset(n={}, {})", self.n, self)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.indices().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// Serialized as a sorted list of element indices.
impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.indices())
    }
}

/// Element lists carry no ground size, so deserialization yields a
/// [`SubsetSpec`] that is bound to a ground set later.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetSpec(pub Vec<usize>);

impl SubsetSpec {
    pub fn bind(&self, n: GroundSize) -> Result<Subset> {
        let mut seen = std::collections::BTreeSet::new();
        for &i in &self.0 {
            if !seen.insert(i) {
                return Err(Error::Parameter(format!("duplicate element {i} in subset")));
            }
        }
        Subset::from_indices(n, self.0.iter().copied())
    }
}

impl<'de> Deserialize<'de> for GroundSize {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = usize::deserialize(d)?;
        GroundSize::new(n).map_err(D::Error::custom)
    }
}

impl Serialize for GroundSize {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.0 as u64)
    }
}

/// All subsets of `E` in ascending mask order, or only those of cardinality
/// `k` when `filter` is given.
///
/// Unfiltered enumeration is refused above the enumeration guard. Filtered
/// enumeration is lazy (Gosper's hack) and has no guard, since callers such
/// as plant search typically stop early.
pub fn enumerate_subsets(
    n: GroundSize,
    filter: Option<usize>,
) -> Result<Box<dyn Iterator<Item = Subset>>> {
    match filter {
        None => {
            check_guard(n)?;
            let end = 1u128 << n.get();
            Ok(Box::new((0..end).map(move |mask| Subset { mask, n })))
        }
        Some(k) => {
            if k > n.get() {
                return Err(Error::Parameter(format!(
                    "cardinality filter {k} exceeds ground size {n}"
                )));
            }
            Ok(Box::new(KSubsets::new(n, k)))
        }
    }
}

/// Fixed-cardinality subsets in ascending mask order.
#[derive(Debug, Clone)]
pub struct KSubsets {
    n: GroundSize,
    next: Option<u128>,
}

impl KSubsets {
    pub fn new(n: GroundSize, k: usize) -> Self {
        let next = if k > n.get() {
            None
        } else if k == 0 {
            Some(0)
        } else if k == MAX_GROUND {
            Some(u128::MAX)
        } else {
            Some((1u128 << k) - 1)
        };
        KSubsets { n, next }
    }
}

impl Iterator for KSubsets {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        let n = self.n;
        self.next = if cur == 0 {
            None
        } else {
            // Gosper's hack; overflow or a bit past n ends the sequence.
            let c = cur & cur.wrapping_neg();
            match cur.checked_add(c) {
                None => None,
                Some(r) => {
                    let nxt = (((r ^ cur) >> 2) / c) | r;
                    (nxt & !n.full_mask() == 0).then_some(nxt)
                }
            }
        };
        Some(Subset { mask: cur, n })
    }
}

/// SplitMix64 finalizer over `seed + (index + 1) * golden`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// ChaCha8 keyed by `seed`, positioned at the start of `stream`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform `k`-subset drawn from an existing generator.
pub fn sample_k_subset<R: Rng + ?Sized>(n: GroundSize, k: usize, rng: &mut R) -> Result<Subset> {
    if k > n.get() {
        return Err(Error::Parameter(format!(
            "cannot draw {k} elements from a ground set of size {n}"
        )));
    }
    let picks = rand::seq::index::sample(rng, n.get(), k);
    Subset::from_indices(n, picks)
}

/// Uniform `k`-subset; identical for identical `(n, k, seed)`.
pub fn random_k_subset(n: GroundSize, k: usize, seed: u64) -> Result<Subset> {
    sample_k_subset(n, k, &mut rng_for(seed, 0))
}

/// Uniform nonempty subset (rejection on the empty mask).
pub fn sample_nonempty<R: Rng + ?Sized>(n: GroundSize, rng: &mut R) -> Subset {
    let full = n.full_mask();
    loop {
        let mask = rng.gen::<u128>() & full;
        if mask != 0 {
            return Subset { mask, n };
        }
    }
}

/// `C(n, k)` for `n <= 128`; saturates at `u128::MAX` (never reached for
/// `n <= 128` since `C(128, 64) < 2^127`).
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is always an integer; split to avoid overflow
        let num = (n - i) as u128;
        let den = (i + 1) as u128;
        let g = num_integer::gcd(acc, den);
        acc = (acc / g).saturating_mul(num / (den / g));
    }
    acc
}
