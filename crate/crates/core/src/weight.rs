use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_traits::{NumCast, Signed};

/// Numeric type carried by edge weights.
///
/// Signed types are required because the S-node range tables store offset
/// keys that may go negative; graph weights themselves are validated to be
/// nonnegative.
pub trait Scalar:
    Copy
    + Send
    + Sync
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Signed
    + NumCast
    + FromStr
    + 'static
{
    /// True when addition is exact (integers).
    const EXACT: bool;
    /// Tag stored in persisted indexes.
    const KIND: ScalarKind;

    fn to_bits(self) -> u64;
    fn from_bits(bits: u64) -> Self;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarKind {
    I32 = 0,
    I64 = 1,
    F32 = 2,
    F64 = 3,
}

impl ScalarKind {
    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(ScalarKind::I32),
            1 => Some(ScalarKind::I64),
            2 => Some(ScalarKind::F32),
            3 => Some(ScalarKind::F64),
            _ => None,
        }
    }
}

impl Scalar for i32 {
    const EXACT: bool = true;
    const KIND: ScalarKind = ScalarKind::I32;
    fn to_bits(self) -> u64 {
        self as i64 as u64
    }
    fn from_bits(bits: u64) -> Self {
        bits as i64 as i32
    }
}

impl Scalar for i64 {
    const EXACT: bool = true;
    const KIND: ScalarKind = ScalarKind::I64;
    fn to_bits(self) -> u64 {
        self as u64
    }
    fn from_bits(bits: u64) -> Self {
        bits as i64
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
    const KIND: ScalarKind = ScalarKind::F32;
    fn to_bits(self) -> u64 {
        f32::to_bits(self) as u64
    }
    fn from_bits(bits: u64) -> Self {
        f32::from_bits(bits as u32)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const KIND: ScalarKind = ScalarKind::F64;
    fn to_bits(self) -> u64 {
        f64::to_bits(self)
    }
    fn from_bits(bits: u64) -> Self {
        f64::from_bits(bits)
    }
}

/// A path length or the `Inf` sentinel.
///
/// The derived ordering places every finite value below `Inf`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum Weight<T> {
    Finite(T),
    Inf,
}

impl<T: Scalar> Weight<T> {
    pub fn zero() -> Self {
        Weight::Finite(T::zero())
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Weight::Finite(_))
    }

    pub fn finite(self) -> Option<T> {
        match self {
            Weight::Finite(v) => Some(v),
            Weight::Inf => None,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `self - rhs` when both are finite, `Inf` otherwise.
    pub fn sub_finite(self, rhs: T) -> Self {
        match self {
            Weight::Finite(v) => Weight::Finite(v - rhs),
            Weight::Inf => Weight::Inf,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Weight::Finite(v) => v.to_f64().unwrap_or(f64::NAN),
            Weight::Inf => f64::INFINITY,
        }
    }

    /// Equality up to `rel` relative error (exact for `Inf`).
    pub fn approx_eq(self, other: Self, rel: f64) -> bool {
        match (self, other) {
            (Weight::Inf, Weight::Inf) => true,
            (Weight::Finite(a), Weight::Finite(b)) => {
                if T::EXACT {
                    return a == b;
                }
                let (a, b) = (a.to_f64().unwrap_or(0.0), b.to_f64().unwrap_or(0.0));
                (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
            }
            _ => false,
        }
    }

    /// Parses a decimal value or the token `inf`.
    pub fn parse(token: &str) -> Option<Self> {
        if token.eq_ignore_ascii_case("inf") {
            return Some(Weight::Inf);
        }
        token.parse::<T>().ok().map(Weight::Finite)
    }
}

impl<T: Scalar> Add for Weight<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Weight::Finite(a), Weight::Finite(b)) => Weight::Finite(a + b),
            _ => Weight::Inf,
        }
    }
}

impl<T: Scalar> From<T> for Weight<T> {
    fn from(v: T) -> Self {
        Weight::Finite(v)
    }
}

impl<T: Scalar> fmt::Display for Weight<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(v) => write!(f, "{v}"),
            Weight::Inf => f.write_str("inf"),
        }
    }
}

/// Total order for heaps; weights never hold NaN.
pub(crate) fn cmp_weight<T: Scalar>(a: &Weight<T>, b: &Weight<T>) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// Distance and beer distance between an ordered vertex pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistPair<T> {
    pub dist: Weight<T>,
    pub beer: Weight<T>,
}

impl<T: Scalar> DistPair<T> {
    pub fn new(dist: Weight<T>, beer: Weight<T>) -> Self {
        DistPair { dist, beer }
    }

    pub fn unreachable() -> Self {
        DistPair { dist: Weight::Inf, beer: Weight::Inf }
    }

    /// The empty walk at a vertex: distance 0, beer distance 0 iff the
    /// vertex itself is a beer vertex.
    pub fn at_vertex(is_beer: bool) -> Self {
        DistPair {
            dist: Weight::zero(),
            beer: if is_beer { Weight::zero() } else { Weight::Inf },
        }
    }

    pub fn min(self, other: Self) -> Self {
        DistPair { dist: self.dist.min(other.dist), beer: self.beer.min(other.beer) }
    }

    pub fn approx_eq(self, other: Self, rel: f64) -> bool {
        self.dist.approx_eq(other.dist, rel) && self.beer.approx_eq(other.beer, rel)
    }
}

impl<T: Scalar> fmt::Display for DistPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.dist, self.beer)
    }
}
