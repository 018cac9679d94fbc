//! Exact scalar arithmetic: arbitrary-precision rationals plus quadratic
//! surds of the form `r + c*sqrt(m)`.
//!
//! Every comparison in the library is exact. Surds show up only through
//! square roots of rational squared distances (the diagonal-shift extension
//! lifts points by a Euclidean distance), so a single quadratic extension per
//! value is enough; mixing two different extensions in one sum is rejected
//! rather than approximated.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `p/q`; panics on `q == 0` (callers validate).
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Canonical text form: `"n"` for integers, `"p/q"` otherwise.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"n"` or `"p/q"` (denominator positive, nonzero).
pub fn rat_from_str(s: &str) -> Result<Rat> {
    let bad = || Error::Invalid(format!("malformed rational: {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
    let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(p, q))
}

/// Splits a nonnegative integer into `s^2 * m` with `m` squarefree.
fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(!n.is_negative());
    if n.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut d = BigInt::from(2);
    while &d * &d <= rest {
        let mut count = 0u32;
        while (&rest % &d).is_zero() {
            rest /= &d;
            count += 1;
        }
        if count > 0 {
            for _ in 0..count / 2 {
                square *= &d;
            }
            if count % 2 == 1 {
                free *= &d;
            }
        }
        d += 1;
    }
    // rest is prime or 1 here
    free *= rest;
    (square, free)
}

/// Exact value `r + c*sqrt(m)`.
///
/// Invariant: either `c == 0` and `m == 1` (a plain rational), or `c != 0`
/// and `m >= 2` is squarefree. This makes the representation canonical, so
/// derived equality is value equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    r: Rat,
    c: Rat,
    m: BigInt,
}

impl Scalar {
    pub fn from_rat(r: Rat) -> Self {
        Scalar {
            r,
            c: Rat::zero(),
            m: BigInt::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rat(rat_int(n))
    }

    fn surd(r: Rat, c: Rat, m: BigInt) -> Self {
        if c.is_zero() || m.is_one() {
            Scalar::from_rat(r + c)
        } else {
            Scalar { r, c, m }
        }
    }

    /// Exact square root of a nonnegative rational.
    pub fn sqrt_rat(x: &Rat) -> Result<Self> {
        if x.is_negative() {
            return Err(Error::Invalid("square root of a negative value".into()));
        }
        // sqrt(p/q) = sqrt(p*q)/q
        let n = x.numer() * x.denom();
        let (s, m) = squarefree_split(&n);
        let c = Rat::new(s, x.denom().clone());
        Ok(Scalar::surd(Rat::zero(), c, m))
    }

    pub fn is_rational(&self) -> bool {
        self.c.is_zero()
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.r)
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.c.is_zero()
    }

    /// Exact sign: -1, 0, or 1.
    pub fn signum(&self) -> i32 {
        sign2(&self.r, &self.c, &self.m)
    }

    pub fn add_rat(&self, x: &Rat) -> Self {
        Scalar {
            r: &self.r + x,
            c: self.c.clone(),
            m: self.m.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Scalar {
            r: -&self.r,
            c: -&self.c,
            m: self.m.clone(),
        }
    }

    fn same_field(&self, other: &Scalar) -> bool {
        self.c.is_zero() || other.c.is_zero() || self.m == other.m
    }

    /// Sum; fails when both sides carry surds over different roots.
    pub fn checked_add(&self, other: &Scalar) -> Result<Self> {
        if !self.same_field(other) {
            return Err(Error::Incommensurable);
        }
        let m = if self.c.is_zero() {
            other.m.clone()
        } else {
            self.m.clone()
        };
        Ok(Scalar::surd(&self.r + &other.r, &self.c + &other.c, m))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    /// Product; fails when both sides carry surds over different roots.
    pub fn checked_mul(&self, other: &Scalar) -> Result<Self> {
        if !self.same_field(other) {
            return Err(Error::Incommensurable);
        }
        let m = if self.c.is_zero() {
            other.m.clone()
        } else {
            self.m.clone()
        };
        let rad = Rat::from_integer(m.clone());
        let r = &self.r * &other.r + &self.c * &other.c * &rad;
        let c = &self.r * &other.c + &self.c * &other.r;
        Ok(Scalar::surd(r, c, m))
    }

    /// `self^2`; always representable.
    pub fn square(&self) -> Self {
        self.checked_mul(self).expect("same field")
    }

    /// A rational lower bound, within `2^-bits` of the true value.
    pub fn lower_bound(&self, bits: u32) -> Rat {
        if self.c.is_zero() {
            return self.r.clone();
        }
        let scale = BigInt::one() << (2 * bits);
        let lo = Rat::new((&self.m * &scale).sqrt(), BigInt::one() << bits);
        let hi = &lo + Rat::new(BigInt::one(), BigInt::one() << bits);
        // c >= 0 wants the root rounded down, c < 0 rounded up
        let root = if self.c.is_negative() { hi } else { lo };
        &self.r + &self.c * root
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rat> for Scalar {
    fn from(r: Rat) -> Self {
        Scalar::from_rat(r)
    }
}

/// Sign of `a + b*sqrt(m)`.
fn sign2(a: &Rat, b: &Rat, m: &BigInt) -> i32 {
    let sa = sign_rat(a);
    let sb = sign_rat(b);
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    // opposite signs: compare a^2 with b^2 * m
    let a2 = a * a;
    let b2m = b * b * Rat::from_integer(m.clone());
    match a2.cmp(&b2m) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

/// Sign of `a + b*sqrt(m1) + c*sqrt(m2)` with `m1 != m2`, `b, c != 0`.
fn sign3(a: &Rat, b: &Rat, m1: &BigInt, c: &Rat, m2: &BigInt) -> i32 {
    // compare L = a + b*sqrt(m1) against R = -c*sqrt(m2)
    let neg_c = -c;
    let sl = sign2(a, b, m1);
    let sr = sign_rat(&neg_c);
    if sl == 0 {
        return -sr;
    }
    if sl != sr {
        return sl;
    }
    // equal nonzero signs: decide by squares
    // L^2 = (a^2 + b^2 m1) + 2ab*sqrt(m1), R^2 = c^2 m2
    let l2_r = a * a + b * b * Rat::from_integer(m1.clone());
    let l2_c = Rat::from_integer(BigInt::from(2)) * a * b;
    let r2 = c * c * Rat::from_integer(m2.clone());
    let sq = sign2(&(l2_r - r2), &l2_c, m1);
    if sl > 0 {
        sq
    } else {
        -sq
    }
}

fn sign_rat(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        let s = if self.same_field(other) {
            sign2(
                &(&self.r - &other.r),
                &(&self.c - &other.c),
                if self.c.is_zero() { &other.m } else { &self.m },
            )
        } else {
            sign3(
                &(&self.r - &other.r),
                &self.c,
                &self.m,
                &(-&other.c),
                &other.m,
            )
        };
        s.cmp(&0)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_zero() {
            return write!(f, "{}", rat_to_string(&self.r));
        }
        let abs = self.c.abs();
        let coef = if abs.is_one() {
            format!("sqrt({})", self.m)
        } else {
            format!("{}*sqrt({})", rat_to_string(&abs), self.m)
        };
        if self.r.is_zero() {
            if self.c.is_negative() {
                write!(f, "-{coef}")
            } else {
                write!(f, "{coef}")
            }
        } else {
            let sep = if self.c.is_negative() { '-' } else { '+' };
            write!(f, "{}{}{}", rat_to_string(&self.r), sep, coef)
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("malformed scalar: {s:?}"));
        let Some(pos) = s.find("sqrt(") else {
            return Ok(Scalar::from_rat(rat_from_str(s)?));
        };
        let tail = &s[pos..];
        let inner = tail
            .strip_prefix("sqrt(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let m = BigInt::from_str(inner).map_err(|_| bad())?;
        if m.is_negative() {
            return Err(bad());
        }
        let mut head = &s[..pos];
        // optional nonnegative coefficient "c*"
        let mut coef = Rat::one();
        if let Some(h) = head.strip_suffix('*') {
            let split = h
                .rfind(|ch: char| !(ch.is_ascii_digit() || ch == '/'))
                .map(|i| i + 1)
                .unwrap_or(0);
            coef = rat_from_str(&h[split..])?;
            head = &h[..split];
        }
        // remaining head is "", "-", or "<rat>+"/"<rat>-"
        let (r, sign) = match head {
            "" => (Rat::zero(), 1),
            "-" => (Rat::zero(), -1),
            _ if head.ends_with('+') => (rat_from_str(&head[..head.len() - 1])?, 1),
            _ if head.ends_with('-') => (rat_from_str(&head[..head.len() - 1])?, -1),
            _ => return Err(bad()),
        };
        if sign < 0 {
            coef = -coef;
        }
        let root = Scalar::sqrt_rat(&Rat::from_integer(m))?;
        let scaled = root.checked_mul(&Scalar::from_rat(coef))?;
        Ok(scaled.add_rat(&r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_splits() {
        let cases = [(0, 0, 1), (1, 1, 1), (4, 2, 1), (8, 2, 2), (45, 3, 5), (49, 7, 1)];
        for (n, s, m) in cases {
            let (gs, gm) = squarefree_split(&BigInt::from(n));
            assert_eq!((gs, gm), (BigInt::from(s), BigInt::from(m)), "n={n}");
        }
    }

    #[test]
    fn sqrt_of_perfect_square_is_rational() {
        let s = Scalar::sqrt_rat(&rat(9, 4)).unwrap();
        assert_eq!(s.as_rat(), Some(&rat(3, 2)));
    }

    #[test]
    fn sqrt_two_is_not_rational() {
        let s = Scalar::sqrt_rat(&rat_int(2)).unwrap();
        assert!(!s.is_rational());
        assert!(s > Scalar::from_rat(rat(141, 100)));
        assert!(s < Scalar::from_rat(rat(142, 100)));
    }

    #[test]
    fn ordering_across_different_roots() {
        let r2 = Scalar::sqrt_rat(&rat_int(2)).unwrap();
        let r3 = Scalar::sqrt_rat(&rat_int(3)).unwrap();
        assert!(r2 < r3);
        // 1 + sqrt(2) < sqrt(3) + 1/2 is false: 2.414 vs 2.232
        let lhs = r2.add_rat(&rat_int(1));
        let rhs = r3.add_rat(&rat(1, 2));
        assert!(lhs > rhs);
        // sqrt(2) + sqrt(2) = 2*sqrt(2) < 3
        let twice = r2.checked_add(&r2).unwrap();
        assert!(twice < Scalar::from_int(3));
        assert!(twice > Scalar::from_int(2));
    }

    #[test]
    fn incommensurable_sum_is_rejected() {
        let r2 = Scalar::sqrt_rat(&rat_int(2)).unwrap();
        let r3 = Scalar::sqrt_rat(&rat_int(3)).unwrap();
        assert_eq!(r2.checked_add(&r3), Err(Error::Incommensurable));
    }

    #[test]
    fn squares_return_to_rational() {
        let s = Scalar::sqrt_rat(&rat_int(5)).unwrap().add_rat(&rat_int(1));
        // (1 + sqrt 5)^2 = 6 + 2 sqrt 5
        let sq = s.square();
        let expect = Scalar::sqrt_rat(&rat_int(20)).unwrap().add_rat(&rat_int(6));
        assert_eq!(sq, expect);
    }

    #[test]
    fn signum_cases() {
        let s = Scalar::sqrt_rat(&rat_int(2)).unwrap().add_rat(&rat_int(-2));
        assert_eq!(s.signum(), -1); // sqrt(2) - 2 < 0
        let t = Scalar::sqrt_rat(&rat_int(2)).unwrap().add_rat(&rat_int(-1));
        assert_eq!(t.signum(), 1); // sqrt(2) - 1 > 0
        assert_eq!(Scalar::from_int(0).signum(), 0);
    }

    #[test]
    fn lower_bound_brackets_value() {
        let s = Scalar::sqrt_rat(&rat_int(2)).unwrap();
        let lb = s.lower_bound(20);
        assert!(Scalar::from_rat(lb.clone()) <= s);
        assert!(&lb * &lb <= rat_int(2));
        let neg = s.neg();
        let lb2 = neg.lower_bound(20);
        assert!(Scalar::from_rat(lb2) <= neg);
    }

    #[test]
    fn display_parse_round_trip() {
        let vals = [
            Scalar::from_int(-3),
            Scalar::from_rat(rat(7, 2)),
            Scalar::sqrt_rat(&rat_int(2)).unwrap(),
            Scalar::sqrt_rat(&rat_int(8)).unwrap().add_rat(&rat(-1, 3)),
            Scalar::sqrt_rat(&rat_int(5)).unwrap().neg().add_rat(&rat_int(2)),
        ];
        for v in vals {
            let text = v.to_string();
            let back: Scalar = text.parse().unwrap();
            assert_eq!(back, v, "round trip of {text}");
        }
        assert_eq!("3/4".parse::<Scalar>().unwrap(), Scalar::from_rat(rat(3, 4)));
        assert_eq!(
            "2*sqrt(9)".parse::<Scalar>().unwrap(),
            Scalar::from_int(6)
        );
        assert!("sqrt(2".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
    }
}
