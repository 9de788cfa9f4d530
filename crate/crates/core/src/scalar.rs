//! Scalar abstractions shared by the numerical modules.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, SubAssign};
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, NumAssign, ToPrimitive};

/// Floating point type used for embedding vectors: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + Sum
    + Debug
    + Display
    + Default
    + FromStr
    + Send
    + Sync
    + AtomicScalar
    + 'static
{
    /// Lossy conversion from `f64`, used for hyper-parameters.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("representable constant")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Scalars storable in a lock-free cell through their bit pattern.
///
/// Parallel training shares weight rows between workers with relaxed loads
/// and stores; lost updates are tolerated.
pub trait AtomicScalar: Copy {
    type Cell: Send + Sync;

    fn new_cell(value: Self) -> Self::Cell;
    fn load(cell: &Self::Cell) -> Self;
    fn store(cell: &Self::Cell, value: Self);
}

impl AtomicScalar for f32 {
    type Cell = AtomicU32;

    fn new_cell(value: Self) -> Self::Cell {
        AtomicU32::new(value.to_bits())
    }
    fn load(cell: &Self::Cell) -> Self {
        f32::from_bits(cell.load(Ordering::Relaxed))
    }
    fn store(cell: &Self::Cell, value: Self) {
        cell.store(value.to_bits(), Ordering::Relaxed)
    }
}

impl AtomicScalar for f64 {
    type Cell = AtomicU64;

    fn new_cell(value: Self) -> Self::Cell {
        AtomicU64::new(value.to_bits())
    }
    fn load(cell: &Self::Cell) -> Self {
        f64::from_bits(cell.load(Ordering::Relaxed))
    }
    fn store(cell: &Self::Cell, value: Self) {
        cell.store(value.to_bits(), Ordering::Relaxed)
    }
}

/// Edge weight type for bipartite matching: floating point or exact
/// rational.
pub trait Weight: Num + NumAssign + Copy + PartialOrd + Debug {
    /// Whether two accumulated weights are equal for tie-breaking purposes.
    /// Exact types compare exactly; floats allow rounding slack.
    fn near(self, other: Self) -> bool;
}

impl Weight for f64 {
    fn near(self, other: Self) -> bool {
        (self - other).abs() <= 1e-9 * (1.0 + self.abs().max(other.abs()))
    }
}

impl Weight for f32 {
    fn near(self, other: Self) -> bool {
        (self - other).abs() <= 1e-5 * (1.0 + self.abs().max(other.abs()))
    }
}

macro_rules! exact_weight {
    ($($t:ty),*) => {$(
        impl Weight for $t {
            fn near(self, other: Self) -> bool {
                self == other
            }
        }
    )*};
}

exact_weight!(i32, i64, Ratio<i32>, Ratio<i64>);

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// `y += alpha * x`
pub(crate) fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Logistic function.
pub fn sigmoid<T: Real>(x: T) -> T {
    T::one() / (T::one() + (-x).exp())
}

/// `ln σ(x)` computed without overflow for large |x|.
pub fn log_sigmoid<T: Real>(x: T) -> T {
    if x >= T::zero() {
        -((-x).exp().ln_1p())
    } else {
        x - x.exp().ln_1p()
    }
}
