//! Numeric backends for combined-input arithmetic.
//!
//! Integer weights are aggregated in `i64` and compared exactly; anything
//! else goes through `f64` with a relative tolerance of [`REAL_TOLERANCE`].

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Relative comparison tolerance used when weights are not all integers.
pub const REAL_TOLERANCE: f64 = 1e-9;

pub trait Scalar:
    Copy
    + Send
    + Sync
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + 'static
{
    const ZERO: Self;

    fn from_score(s: i8) -> Self;
    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;

    /// `self == other` under this backend's comparison rule.
    fn same(self, other: Self) -> bool;

    /// `self < other` beyond tolerance.
    fn below(self, other: Self) -> bool;

    /// `self > other` beyond tolerance.
    fn above(self, other: Self) -> bool {
        other.below(self)
    }
}

impl Scalar for i64 {
    const ZERO: Self = 0;

    fn from_score(s: i8) -> Self {
        s as i64
    }
    fn from_f64(v: f64) -> Self {
        v as i64
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
    fn abs(self) -> Self {
        i64::abs(self)
    }
    fn same(self, other: Self) -> bool {
        self == other
    }
    fn below(self, other: Self) -> bool {
        self < other
    }
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;

    fn from_score(s: i8) -> Self {
        s as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn same(self, other: Self) -> bool {
        (self - other).abs() <= tolerance(self, other)
    }
    fn below(self, other: Self) -> bool {
        other - self > tolerance(self, other)
    }
}

fn tolerance(a: f64, b: f64) -> f64 {
    REAL_TOLERANCE * 1f64.max(a.abs()).max(b.abs())
}

/// Dense row-major `n x n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Copy> SquareMatrix<T> {
    pub fn filled(n: usize, value: T) -> Self {
        SquareMatrix {
            n,
            data: vec![value; n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        SquareMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}
