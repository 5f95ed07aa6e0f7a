//! Exact dyadic coordinates and rational squared distances.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::NetError;

pub const MAX_DIM: usize = 4;
pub const MIN_DIM: usize = 2;
/// Deepest grid level any coordinate may live on. Squared distances at this
/// level still fit in a `u64` numerator.
pub const MAX_LEVEL: u32 = 30;

pub(crate) fn check_dim(dim: usize) -> Result<(), NetError> {
    if (MIN_DIM..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(NetError::Dimension(dim))
    }
}

pub(crate) fn check_level(level: u32) -> Result<(), NetError> {
    if level <= MAX_LEVEL {
        Ok(())
    } else {
        Err(NetError::Level(level))
    }
}

/// A non-negative dyadic rational `num / 2^level`, kept in canonical form
/// (odd numerator, or level 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: u64,
    level: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, level: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, level: 0 };

    pub fn new(num: u64, level: u32) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let shift = num.trailing_zeros().min(level);
        Dyadic {
            num: num >> shift,
            level: level - shift,
        }
    }

    /// `2^-k` for `k >= 0`, `2^|k|` otherwise.
    pub fn pow2(k: i32) -> Self {
        if k >= 0 {
            Dyadic::new(1, k as u32)
        } else {
            Dyadic::new(1u64 << k.unsigned_abs(), 0)
        }
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    /// Level of the canonical form, i.e. the coarsest grid holding this value.
    pub fn level(self) -> u32 {
        self.level
    }

    /// Numerator at the given level, if the value lies on that grid.
    pub fn at_level(self, level: u32) -> Option<u64> {
        if level < self.level {
            return None;
        }
        self.num
            .checked_shl(level - self.level)
            .filter(|v| v >> (level - self.level) == self.num)
    }

    pub fn square(self) -> Ratio<u64> {
        Ratio::new(self.num * self.num, 1u64 << (2 * self.level))
    }

    fn scaled(self, level: u32) -> u128 {
        (self.num as u128) << (level - self.level)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let level = self.level.max(other.level);
        self.scaled(level).cmp(&other.scaled(level))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.level)
    }
}

impl FromStr for Dyadic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (num, level) = s
            .split_once("/2^")
            .ok_or_else(|| format!("expected `num/2^level`, found `{s}`"))?;
        let num: u64 = num.parse().map_err(|_| format!("bad numerator in `{s}`"))?;
        let level: u32 = level.parse().map_err(|_| format!("bad level in `{s}`"))?;
        if level > MAX_LEVEL {
            return Err(format!("level {level} exceeds {MAX_LEVEL}"));
        }
        Ok(Dyadic::new(num, level))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of `[0,1]^D` with dyadic coordinates. Unused trailing axes are zero.
///
/// Ordering is lexicographic by coordinate value, axis 0 first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicPoint {
    dim: u8,
    coords: [Dyadic; MAX_DIM],
}

impl DyadicPoint {
    pub fn new(coords: &[Dyadic]) -> Result<Self, NetError> {
        check_dim(coords.len())?;
        let mut out = [Dyadic::ZERO; MAX_DIM];
        for (slot, &c) in out.iter_mut().zip(coords) {
            check_level(c.level)?;
            if c > Dyadic::ONE {
                return Err(NetError::OutOfRange(c.to_string()));
            }
            *slot = c;
        }
        Ok(DyadicPoint {
            dim: coords.len() as u8,
            coords: out,
        })
    }

    /// Point with integer grid coordinates `grid / 2^level`.
    pub fn from_grid(grid: &[u64], level: u32) -> Result<Self, NetError> {
        check_level(level)?;
        let coords: Vec<Dyadic> = grid.iter().map(|&g| Dyadic::new(g, level)).collect();
        Self::new(&coords)
    }

    /// The centre `(1/2, ..., 1/2)` of the unit cube.
    pub fn center(dim: usize) -> Result<Self, NetError> {
        Self::new(&vec![Dyadic::new(1, 1); dim])
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[Dyadic] {
        &self.coords[..self.dim()]
    }

    /// Smallest level whose grid contains this point.
    pub fn level(&self) -> u32 {
        self.coords().iter().map(|c| c.level).max().unwrap_or(0)
    }

    /// Integer coordinates on the level-`level` grid, if the point lies on it.
    pub fn grid_coords(&self, level: u32) -> Option<[u64; MAX_DIM]> {
        let mut out = [0u64; MAX_DIM];
        for (slot, c) in out.iter_mut().zip(self.coords()) {
            *slot = c.at_level(level)?;
        }
        Some(out)
    }

    pub fn sq_dist(&self, other: &DyadicPoint) -> SquaredDistance {
        debug_assert_eq!(self.dim, other.dim);
        let level = self.level().max(other.level());
        let mut sum: u64 = 0;
        for (a, b) in self.coords().iter().zip(other.coords()) {
            let (a, b) = (a.scaled(level) as u64, b.scaled(level) as u64);
            let d = a.abs_diff(b);
            sum += d * d;
        }
        SquaredDistance::new(sum, 1u64 << (2 * level))
    }
}

impl fmt::Display for DyadicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for DyadicPoint {
    type Err = NetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coords = s
            .split_whitespace()
            .map(|t| t.parse::<Dyadic>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(NetError::Malformed)?;
        DyadicPoint::new(&coords)
    }
}

impl Serialize for DyadicPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DyadicPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exact non-negative rational squared distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquaredDistance(Ratio<u64>);

impl SquaredDistance {
    pub fn new(numer: u64, denom: u64) -> Self {
        SquaredDistance(Ratio::new(numer, denom))
    }

    pub fn zero() -> Self {
        Self::new(0, 1)
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<u64> {
        self.0
    }

    pub fn quarter(self) -> Self {
        SquaredDistance(self.0 * Ratio::new(1, 4))
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl From<Ratio<u64>> for SquaredDistance {
    fn from(r: Ratio<u64>) -> Self {
        SquaredDistance(r)
    }
}

impl fmt::Display for SquaredDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for SquaredDistance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let n: u64 = n
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in `{s}`"))?;
        let d: u64 = d
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in `{s}`"))?;
        if d == 0 {
            return Err(format!("zero denominator in `{s}`"));
        }
        Ok(Self::new(n, d))
    }
}

impl Serialize for SquaredDistance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SquaredDistance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
