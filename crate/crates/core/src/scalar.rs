//! Exact coefficient fields.
//!
//! Everything in this crate is generic over [`Scalar`]: exact fields with
//! decidable equality. The workhorse is [`BigRational`]; [`Rational64`] is a
//! cheap stand-in for small computations and [`Fp`] gives prime fields for
//! modular screening.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::linalg::{self, SparseMatrix, Subspace};

/// An exact field.
///
/// Floating point types deliberately do not implement this trait: kernels and
/// subspace equality are decided by exact comparison with zero.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Num
    + Neg<Output = Self>
    + FromPrimitive
    + Send
    + Sync
    + 'static
{
    /// Null space of `m`, in canonical form.
    ///
    /// The default is plain elimination over the field. A field may override
    /// it with a faster route as long as the returned space is exact.
    fn kernel(m: &SparseMatrix<Self>) -> Subspace<Self> {
        linalg::kernel_by_elimination(m)
    }

    /// Text encoding used by the JSON formats.
    fn encode(&self) -> String;

    fn decode(s: &str) -> Option<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("every field contains the integers' image")
    }
}

impl Scalar for BigRational {
    fn kernel(m: &SparseMatrix<Self>) -> Subspace<Self> {
        linalg::modular::certified_kernel(m)
    }

    fn encode(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn decode(s: &str) -> Option<Self> {
        parse_ratio(s, |t| BigInt::from_str(t).ok())
    }
}

impl Scalar for Rational64 {
    fn encode(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn decode(s: &str) -> Option<Self> {
        parse_ratio(s, |t| i64::from_str(t).ok())
    }
}

/// Accepts `n`, `n/d`, and the typographic minus sign.
fn parse_ratio<T>(s: &str, int: impl Fn(&str) -> Option<T>) -> Option<num_rational::Ratio<T>>
where
    T: Clone + Integer + Signed,
{
    let s = s.trim().replace('\u{2212}', "-");
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (int(n.trim())?, int(d.trim())?),
        None => (int(&s)?, T::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(num_rational::Ratio::new(n, d))
}

/// The prime field of order `P`. `P` must be a prime below `2^32`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u64>(u64);

/// 31-bit primes used for modular screening, largest first.
pub const SCREENING_PRIMES: [u64; 8] = [
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549, 2147483543, 2147483497,
];

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn residue(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Fp(acc)
    }

    pub fn inverse(self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(P));
        Fp(r.to_u64().expect("reduced residue fits"))
    }

    /// Reduction of a rational; `None` when `P` divides the denominator.
    pub fn from_ratio(q: &BigRational) -> Option<Self> {
        let d = Self::from_bigint(q.denom()).inverse()?;
        Some(Self::from_bigint(q.numer()) * d)
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + P - rhs.0
        })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(self.0 * rhs.0 % P)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero in Fp")
    }
}

impl<const P: u64> Rem for Fp<P> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        // every nonzero element is a unit
        assert!(rhs.0 != 0, "remainder by zero in Fp");
        Fp(0)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1)
    }
}

impl<const P: u64> Num for Fp<P> {
    type FromStrRadixErr = std::num::ParseIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        i64::from_str_radix(s, radix).map(|n| Self::from_i64(n).unwrap())
    }
}

impl<const P: u64> FromPrimitive for Fp<P> {
    fn from_i64(n: i64) -> Option<Self> {
        let r = n.rem_euclid(P as i64);
        Some(Fp(r as u64))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Fp(n % P))
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn encode(&self) -> String {
        self.0.to_string()
    }

    fn decode(s: &str) -> Option<Self> {
        let s = s.trim().replace('\u{2212}', "-");
        match s.split_once('/') {
            Some((n, d)) => {
                let n = Self::from_i64(n.trim().parse().ok()?)?;
                let d = Self::from_i64(d.trim().parse().ok()?)?;
                Some(n * d.inverse()?)
            }
            None => Self::from_i64(s.parse().ok()?),
        }
    }
}
