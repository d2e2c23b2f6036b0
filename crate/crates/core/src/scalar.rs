//! Scalar abstractions.
//!
//! Polytope work runs over an exact ordered field ([`Scalar`]); the quantum
//! backend runs over IEEE floats ([`Real`]).

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact ordered field.
///
/// Every comparison made by the geometry modules (is this weight positive,
/// does this functional reach 1) is a yes/no question, so implementors must
/// compute without rounding. `Display`/`FromStr` use the `"p/q"` (or `"p"`)
/// text form.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + FromStr
    + Ord
    + Num
    + Signed
    + Send
    + Sync
    + 'static
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
{
    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Exact value of a finite float (every finite `f64` is a dyadic rational).
    fn from_f64_exact(value: f64) -> Option<Self>;

    fn as_f64(&self) -> f64;

    fn to_big(&self) -> BigRational;

    fn parse(text: &str) -> Result<Self> {
        text.trim()
            .parse::<Self>()
            .map_err(|_| Error::input(format!("not a rational number: {text:?}")))
    }
}

macro_rules! impl_scalar_for_ratio {
    ($int:ty) => {
        impl Scalar for Ratio<$int> {
            fn from_ratio(numer: i64, denom: i64) -> Self {
                Ratio::new(<$int>::from(numer), <$int>::from(denom))
            }

            fn from_f64_exact(value: f64) -> Option<Self> {
                let exact = BigRational::from_float(value)?;
                let numer = <$int>::try_from(exact.numer().clone()).ok()?;
                let denom = <$int>::try_from(exact.denom().clone()).ok()?;
                Some(Ratio::new(numer, denom))
            }

            fn as_f64(&self) -> f64 {
                ratio_to_f64(self.numer(), self.denom())
            }

            fn to_big(&self) -> BigRational {
                BigRational::new_raw(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
            }
        }
    };
}

impl_scalar_for_ratio!(i64);
impl_scalar_for_ratio!(i128);

impl Scalar for BigRational {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn from_f64_exact(value: f64) -> Option<Self> {
        BigRational::from_float(value)
    }

    fn as_f64(&self) -> f64 {
        ratio_to_f64(self.numer(), self.denom())
    }

    fn to_big(&self) -> BigRational {
        self.clone()
    }
}

fn ratio_to_f64<I: ToPrimitive + Clone + Into<BigInt>>(numer: &I, denom: &I) -> f64 {
    let n: BigInt = numer.clone().into();
    let d: BigInt = denom.clone().into();
    // Shift so both fit in f64 range before dividing.
    let shift = n.bits().max(d.bits()).saturating_sub(1000) as usize;
    let n = (&n >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (&d >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Exact-arithmetic default used throughout the toolkit.
pub type ExactScalar = BigRational;

/// Fixed-width rational, faster than [`ExactScalar`] but panics on overflow.
pub type SmallRational = Ratio<i128>;

/// Twelve significant digits, the decimal companion of every exact value we print.
pub fn decimal<T: Scalar>(value: &T) -> String {
    let v = value.as_f64();
    if v == 0.0 {
        return "0".to_string();
    }
    let digits = (11 - v.abs().log10().floor() as i32).max(0) as usize;
    let s = format!("{v:.digits$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Parses a comma-separated coordinate list such as `"1/2,0,-3/4"`.
pub fn parse_vector<T: Scalar>(text: &str) -> Result<Vec<T>> {
    if text.trim().is_empty() {
        return Err(Error::input("empty coordinate list"));
    }
    text.split(',').map(T::parse).collect()
}

/// Floating-point scalar for the quantum backend.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Tolerance applied when constructing states and matrices.
    const CONSTRUCTION_TOL: f64;
    /// Tolerance applied when checking identities.
    const ASSERT_TOL: f64;
    /// Smallest admissible eigenvalue of a density matrix.
    const PSD_TOL: f64;

    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("float literal")
    }
}

impl Real for f64 {
    const CONSTRUCTION_TOL: f64 = 1e-12;
    const ASSERT_TOL: f64 = 1e-9;
    const PSD_TOL: f64 = 1e-10;
}

impl Real for f32 {
    const CONSTRUCTION_TOL: f64 = 1e-5;
    const ASSERT_TOL: f64 = 1e-4;
    const PSD_TOL: f64 = 1e-5;
}

/// Exact division; a zero divisor is reported, never turned into a value.
pub fn checked_div<T: Scalar>(numer: &T, denom: &T) -> Result<T> {
    if denom.is_zero() {
        return Err(Error::input("division by zero"));
    }
    let mut out = numer.clone();
    out /= denom;
    Ok(out)
}

pub(crate) fn zero<T: Zero>() -> T {
    T::zero()
}
