//! Exact scalar fields.
//!
//! Everything in the crate is computed over `Q` (arbitrary precision
//! rationals). A few constructions need a single square root adjoined, for
//! instance a real two-plane with a prescribed Kähler angle whose tangent is
//! irrational; those run over [`RealQuadratic`], the field `Q(√d)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary precision rational number.
pub type Q = BigRational;

/// An exact field the linear algebra layer can run over.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_rational(q: &Q) -> Self;

    /// Returns the value as a rational if it lies in `Q`.
    fn to_rational(&self) -> Option<Q>;
}

impl Scalar for Q {
    fn from_rational(q: &Q) -> Self {
        q.clone()
    }

    fn to_rational(&self) -> Option<Q> {
        Some(self.clone())
    }
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `"p/q"` (or `"p"` for integers).
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"0.25"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().ok()?;
        let mag = int_part.abs() * &scale + frac_part;
        let num = if neg { -mag } else { mag };
        return Some(Q::new(num, scale));
    }
    let n: BigInt = s.parse().ok()?;
    Some(Q::from_integer(n))
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = integer_sqrt(x.numer())?;
    let d = integer_sqrt(x.denom())?;
    Some(Q::new(n, d))
}

fn integer_sqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Writes a positive rational as `r² · d` with `d` a squarefree integer.
pub fn square_free_decomposition(x: &Q) -> Option<(Q, u64)> {
    if !x.is_positive() {
        return None;
    }
    // x = p/q = p·q / q²
    let pq = x.numer() * x.denom();
    let mut rest: u64 = pq.try_into().ok()?;
    let mut square_part: u64 = 1;
    let mut free: u64 = 1;
    let mut f = 2u64;
    while f * f <= rest {
        let mut e = 0;
        while rest % f == 0 {
            rest /= f;
            e += 1;
        }
        square_part *= f.pow(e / 2);
        if e % 2 == 1 {
            free *= f;
        }
        f += 1;
    }
    free *= rest;
    let r = Q::new(BigInt::from(square_part), x.denom().clone());
    Some((r, free))
}

/// Element `a + b·√d` of a real quadratic field.
///
/// `d` is a squarefree integer greater than one, fixed per computation. Pure
/// rationals carry `b = 0` and may leave `d` unset (`0`); mixing two
/// elements with different nonzero radicands panics.
#[derive(Clone, Debug)]
pub struct RealQuadratic {
    a: Q,
    b: Q,
    d: u64,
}

impl RealQuadratic {
    pub fn new(a: Q, b: Q, d: u64) -> Self {
        assert!(d > 1, "radicand must be a squarefree integer > 1");
        let mut x = RealQuadratic { a, b, d };
        x.normalize();
        x
    }

    pub fn rational(a: Q) -> Self {
        RealQuadratic { a, b: Q::zero(), d: 0 }
    }

    /// `√d` itself.
    pub fn sqrt_of(d: u64) -> Self {
        Self::new(Q::zero(), Q::one(), d)
    }

    pub fn rational_part(&self) -> &Q {
        &self.a
    }

    pub fn radical_part(&self) -> &Q {
        &self.b
    }

    pub fn radicand(&self) -> Option<u64> {
        (self.d > 1).then_some(self.d)
    }

    fn normalize(&mut self) {
        if self.b.is_zero() {
            self.d = 0;
        }
    }

    fn merged_radicand(&self, other: &Self) -> u64 {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => 0,
            (false, true) => self.d,
            (true, false) => other.d,
            (false, false) => {
                assert_eq!(self.d, other.d, "mixed quadratic fields");
                self.d
            }
        }
    }

    fn d_q(d: u64) -> Q {
        Q::from_integer(BigInt::from(d))
    }
}

impl PartialEq for RealQuadratic {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.d == other.d)
    }
}

impl fmt::Display for RealQuadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_q(&self.a));
        }
        let radical = if self.b.is_one() {
            format!("sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", fmt_q(&self.b), self.d)
        };
        if self.a.is_zero() {
            write!(f, "{radical}")
        } else {
            write!(f, "{}+{}", fmt_q(&self.a), radical)
        }
    }
}

impl Zero for RealQuadratic {
    fn zero() -> Self {
        Self::rational(Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for RealQuadratic {
    fn one() -> Self {
        Self::rational(Q::one())
    }
}

impl Add for RealQuadratic {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let d = self.merged_radicand(&rhs);
        let mut x = RealQuadratic { a: self.a + rhs.a, b: self.b + rhs.b, d };
        x.normalize();
        x
    }
}

impl Sub for RealQuadratic {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for RealQuadratic {
    type Output = Self;
    fn neg(self) -> Self {
        RealQuadratic { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Mul for RealQuadratic {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let d = self.merged_radicand(&rhs);
        let cross = if d == 0 {
            Q::zero()
        } else {
            &self.b * &rhs.b * Self::d_q(d)
        };
        let mut x = RealQuadratic {
            a: &self.a * &rhs.a + cross,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            d,
        };
        x.normalize();
        x
    }
}

impl Div for RealQuadratic {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        if rhs.b.is_zero() {
            let mut x = RealQuadratic { a: self.a / &rhs.a, b: self.b / &rhs.a, d: self.d };
            x.normalize();
            return x;
        }
        // (a + b√d)^{-1} = (a - b√d) / (a² - d b²); the norm is nonzero since d is not a square
        let d = rhs.d;
        let norm = &rhs.a * &rhs.a - &rhs.b * &rhs.b * Self::d_q(d);
        let inv = RealQuadratic { a: rhs.a / &norm, b: -rhs.b / &norm, d };
        self * inv
    }
}

impl Scalar for RealQuadratic {
    fn from_rational(q: &Q) -> Self {
        Self::rational(q.clone())
    }

    fn to_rational(&self) -> Option<Q> {
        self.b.is_zero().then(|| self.a.clone())
    }
}
