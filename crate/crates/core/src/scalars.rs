//! Exact involutive coefficient rings.
//!
//! Four rings ship: the integers, the rationals, the integers with a prime
//! `P` inverted, and the Gaussian rationals `Q(i)`. Every ring implements
//! [`Scalar`]; the two fields additionally implement [`FieldScalar`].
//! All arithmetic is arbitrary precision.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingKind {
    Integers,
    Rationals,
    IntegersLocalizedAt(u64),
    GaussianRationals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Involution {
    Identity,
    ComplexConjugation,
}

/// Runtime description of a coefficient ring and its involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    kind: RingKind,
    involution: Involution,
}

impl RingDescriptor {
    pub fn new(kind: RingKind, involution: Involution) -> Result<Self> {
        match (kind, involution) {
            (RingKind::GaussianRationals, Involution::ComplexConjugation) => {}
            (RingKind::GaussianRationals, Involution::Identity) => {
                return Err(Error::invalid(
                    "Q(i) carries complex conjugation as its involution",
                ))
            }
            (_, Involution::ComplexConjugation) => {
                return Err(Error::invalid(
                    "complex conjugation is only available on Q(i)",
                ))
            }
            (_, Involution::Identity) => {}
        }
        if let RingKind::IntegersLocalizedAt(p) = kind {
            if !is_prime(p) {
                return Err(Error::invalid(format!("{p} is not prime")));
            }
        }
        Ok(RingDescriptor { kind, involution })
    }

    /// The natural involution for a ring kind.
    pub fn of_kind(kind: RingKind) -> Result<Self> {
        let involution = match kind {
            RingKind::GaussianRationals => Involution::ComplexConjugation,
            _ => Involution::Identity,
        };
        Self::new(kind, involution)
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn involution(&self) -> Involution {
        self.involution
    }

    /// Parses the command-line ring names `Z`, `Q`, `Z[1/p]` and `Q(i)`.
    pub fn parse(s: &str) -> Result<Self> {
        let kind = match s.trim() {
            "Z" => RingKind::Integers,
            "Q" => RingKind::Rationals,
            "Q(i)" => RingKind::GaussianRationals,
            other => {
                let p = other
                    .strip_prefix("Z[1/")
                    .and_then(|rest| rest.strip_suffix(']'))
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::parse(1, 1, format!("unknown ring `{other}`")))?;
                RingKind::IntegersLocalizedAt(p)
            }
        };
        Self::of_kind(kind)
    }
}

impl Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::Integers => write!(f, "Z"),
            RingKind::Rationals => write!(f, "Q"),
            RingKind::IntegersLocalizedAt(p) => write!(f, "Z[1/{p}]"),
            RingKind::GaussianRationals => write!(f, "Q(i)"),
        }
    }
}

pub const fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of an exact involutive ring.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Fraction field used for linear algebra over this ring.
    type Field: FieldScalar;

    fn descriptor() -> RingDescriptor;

    /// The involution: additive, reverses products, squares to the identity.
    fn star(&self) -> Self;

    /// `1/n` when `n` is a unit of the ring.
    fn inv_nat(n: u64) -> Option<Self>;

    fn from_i64(n: i64) -> Self;

    /// Parses the canonical text form (see the crate README for the grammar).
    fn parse(s: &str) -> Result<Self>;

    fn to_field(&self) -> Self::Field;

    /// Inverse of [`Scalar::to_field`]; `None` when the value leaves the ring.
    fn from_field(f: &Self::Field) -> Option<Self>;

    /// Exact rational upper bound for the absolute value (exact for real rings).
    fn abs_bound(&self) -> BigRational;

    fn to_complex(&self) -> Complex<f64>;

    /// A small random element, used by the seeded randomized suites.
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

pub trait FieldScalar: Scalar<Field = Self> {
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|o| self.clone() * o)
    }
}

pub fn inv_nat_in(ring: RingDescriptor, n: u64) -> Option<BigRational> {
    if n == 0 {
        return None;
    }
    let inverse = BigRational::new(BigInt::one(), BigInt::from(n));
    match ring.kind() {
        RingKind::Integers => (n == 1).then_some(inverse),
        RingKind::Rationals | RingKind::GaussianRationals => Some(inverse),
        RingKind::IntegersLocalizedAt(p) => is_power_of(n, p).then_some(inverse),
    }
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::parse(1, 1, format!("malformed rational `{s}`"));
    if s.is_empty() || s.contains(char::is_whitespace) || s.starts_with('+') {
        return Err(bad());
    }
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((n, d)) => {
            let n = n.parse::<BigInt>().map_err(|_| bad())?;
            if d.starts_with('-') || d.starts_with('+') {
                return Err(bad());
            }
            let d = d.parse::<BigInt>().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::parse(1, 1, format!("zero denominator in `{s}`")));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

fn sample_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    let n: i64 = rng.gen_range(-3..=3);
    let d: i64 = rng.gen_range(1..=3);
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar for BigInt {
    type Field = BigRational;

    fn descriptor() -> RingDescriptor {
        RingDescriptor {
            kind: RingKind::Integers,
            involution: Involution::Identity,
        }
    }

    fn star(&self) -> Self {
        self.clone()
    }

    fn inv_nat(n: u64) -> Option<Self> {
        (n == 1).then(BigInt::one)
    }

    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }

    fn parse(s: &str) -> Result<Self> {
        if s.starts_with('+') {
            return Err(Error::parse(1, 1, format!("malformed integer `{s}`")));
        }
        s.parse::<BigInt>()
            .map_err(|_| Error::parse(1, 1, format!("malformed integer `{s}`")))
    }

    fn to_field(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }

    fn from_field(f: &BigRational) -> Option<Self> {
        f.is_integer().then(|| f.numer().clone())
    }

    fn abs_bound(&self) -> BigRational {
        BigRational::from_integer(self.abs())
    }

    fn to_complex(&self) -> Complex<f64> {
        Complex::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        BigInt::from(rng.gen_range(-3i64..=3))
    }
}

impl Scalar for BigRational {
    type Field = BigRational;

    fn descriptor() -> RingDescriptor {
        RingDescriptor {
            kind: RingKind::Rationals,
            involution: Involution::Identity,
        }
    }

    fn star(&self) -> Self {
        self.clone()
    }

    fn inv_nat(n: u64) -> Option<Self> {
        (n != 0).then(|| BigRational::new(BigInt::one(), BigInt::from(n)))
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn parse(s: &str) -> Result<Self> {
        parse_rational(s)
    }

    fn to_field(&self) -> BigRational {
        self.clone()
    }

    fn from_field(f: &BigRational) -> Option<Self> {
        Some(f.clone())
    }

    fn abs_bound(&self) -> BigRational {
        self.abs()
    }

    fn to_complex(&self) -> Complex<f64> {
        Complex::new(rational_to_f64(self), 0.0)
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        sample_rational(rng)
    }
}

impl FieldScalar for BigRational {
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

/// `num / P^exp`, kept with `P ∤ num` unless `exp == 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalizedInt<const P: u64> {
    num: BigInt,
    exp: u32,
}

impl<const P: u64> LocalizedInt<P> {
    const PRIME_CHECK: () = assert!(is_prime(P), "localization requires a prime");

    pub fn new(num: BigInt, exp: u32) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::PRIME_CHECK;
        let p = BigInt::from(P);
        let mut num = num;
        let mut exp = exp;
        if num.is_zero() {
            return LocalizedInt { num, exp: 0 };
        }
        while exp > 0 && num.is_multiple_of(&p) {
            num /= &p;
            exp -= 1;
        }
        LocalizedInt { num, exp }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        let p = BigInt::from(P);
        let exp = self.exp.max(other.exp);
        let a = &self.num * num_traits::pow(p.clone(), (exp - self.exp) as usize);
        let b = &other.num * num_traits::pow(p, (exp - other.exp) as usize);
        (a, b, exp)
    }
}

impl<const P: u64> Display for LocalizedInt<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp {
            0 => write!(f, "{}", self.num),
            1 => write!(f, "{}/{}", self.num, P),
            k => write!(f, "{}/{}^{}", self.num, P, k),
        }
    }
}

impl<const P: u64> Zero for LocalizedInt<P> {
    fn zero() -> Self {
        Self::new(BigInt::zero(), 0)
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<const P: u64> One for LocalizedInt<P> {
    fn one() -> Self {
        Self::new(BigInt::one(), 0)
    }
}

impl<const P: u64> Add for LocalizedInt<P> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (a, b, exp) = self.aligned(&rhs);
        Self::new(a + b, exp)
    }
}

impl<const P: u64> Sub for LocalizedInt<P> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        let (a, b, exp) = self.aligned(&rhs);
        Self::new(a - b, exp)
    }
}

impl<const P: u64> Mul for LocalizedInt<P> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self::new(self.num * rhs.num, self.exp + rhs.exp)
    }
}

impl<const P: u64> Neg for LocalizedInt<P> {
    type Output = Self;

    fn neg(self) -> Self {
        LocalizedInt {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl<const P: u64> Scalar for LocalizedInt<P> {
    type Field = BigRational;

    fn descriptor() -> RingDescriptor {
        RingDescriptor::of_kind(RingKind::IntegersLocalizedAt(P)).expect("prime checked")
    }

    fn star(&self) -> Self {
        self.clone()
    }

    fn inv_nat(n: u64) -> Option<Self> {
        if !is_power_of(n, P) {
            return None;
        }
        let mut exp = 0;
        let mut m = n;
        while m > 1 {
            m /= P;
            exp += 1;
        }
        Some(Self::new(BigInt::one(), exp))
    }

    fn from_i64(n: i64) -> Self {
        Self::new(BigInt::from(n), 0)
    }

    fn parse(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::parse(1, 1, format!("malformed Z[1/{P}] element `{s}`: {why}"));
        match s.split_once('/') {
            None => Ok(Self::new(BigInt::parse(s)?, 0)),
            Some((n, d)) => {
                let num = BigInt::parse(n)?;
                let (base, exp) = match d.split_once('^') {
                    Some((b, e)) => (
                        b.parse::<u64>().map_err(|_| bad("bad base"))?,
                        e.parse::<u32>().map_err(|_| bad("bad exponent"))?,
                    ),
                    None => {
                        let d = d.parse::<u64>().map_err(|_| bad("bad denominator"))?;
                        if !is_power_of(d, P) {
                            return Err(bad("denominator is not a power of the prime"));
                        }
                        let mut e = 0;
                        let mut m = d;
                        while m > 1 {
                            m /= P;
                            e += 1;
                        }
                        (P, e)
                    }
                };
                if base != P {
                    return Err(bad("denominator base is not the prime"));
                }
                Ok(Self::new(num, exp))
            }
        }
    }

    fn to_field(&self) -> BigRational {
        BigRational::new(
            self.num.clone(),
            num_traits::pow(BigInt::from(P), self.exp as usize),
        )
    }

    fn from_field(f: &BigRational) -> Option<Self> {
        let mut d = f.denom().clone();
        let p = BigInt::from(P);
        let mut exp = 0u32;
        while d.is_multiple_of(&p) {
            d /= &p;
            exp += 1;
        }
        d.is_one().then(|| Self::new(f.numer().clone(), exp))
    }

    fn abs_bound(&self) -> BigRational {
        self.to_field().abs()
    }

    fn to_complex(&self) -> Complex<f64> {
        Complex::new(rational_to_f64(&self.to_field()), 0.0)
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(BigInt::from(rng.gen_range(-3i64..=3)), rng.gen_range(0..=2))
    }
}

/// `re + im·i` with rational parts; the involution is complex conjugation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |f: &mut fmt::Formatter<'_>, v: &BigRational| {
            if v.is_one() {
                write!(f, "i")
            } else {
                write!(f, "{v}i")
            }
        };
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            if self.im == -BigRational::one() {
                return write!(f, "-i");
            }
            return imag(f, &self.im);
        }
        write!(f, "{}", self.re)?;
        if self.im.is_negative() {
            write!(f, "-")?;
        } else {
            write!(f, "+")?;
        }
        imag(f, &self.im.abs())
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
}

impl Add for GaussianRational {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for GaussianRational {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Scalar for GaussianRational {
    type Field = GaussianRational;

    fn descriptor() -> RingDescriptor {
        RingDescriptor {
            kind: RingKind::GaussianRationals,
            involution: Involution::ComplexConjugation,
        }
    }

    fn star(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    fn inv_nat(n: u64) -> Option<Self> {
        BigRational::inv_nat(n).map(|r| Self::new(r, BigRational::zero()))
    }

    fn from_i64(n: i64) -> Self {
        Self::from_ints(n, 0)
    }

    fn parse(s: &str) -> Result<Self> {
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::new(parse_rational(s)?, BigRational::zero()));
        };
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let imag = |t: &str| -> Result<BigRational> {
            match t {
                "" | "+" => Ok(BigRational::one()),
                "-" => Ok(-BigRational::one()),
                t => parse_rational(t.strip_prefix('+').unwrap_or(t)),
            }
        };
        match split {
            Some(i) => {
                let re = parse_rational(&body[..i])?;
                let im_text = &body[i..];
                if im_text.len() > 1 && im_text[1..].starts_with(['+', '-']) {
                    return Err(Error::parse(1, 1, format!("malformed Gaussian rational `{s}`")));
                }
                Ok(Self::new(re, imag(im_text)?))
            }
            None => Ok(Self::new(BigRational::zero(), imag(body)?)),
        }
    }

    fn to_field(&self) -> Self {
        self.clone()
    }

    fn from_field(f: &Self) -> Option<Self> {
        Some(f.clone())
    }

    fn abs_bound(&self) -> BigRational {
        self.re.abs() + self.im.abs()
    }

    fn to_complex(&self) -> Complex<f64> {
        Complex::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(sample_rational(rng), sample_rational(rng))
    }
}

impl FieldScalar for GaussianRational {
    fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }
}

/// Sum of a list of scalars.
pub fn sum<S: Scalar, I: IntoIterator<Item = S>>(items: I) -> S {
    items.into_iter().fold(S::zero(), |acc, x| acc + x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn star_examples() {
        assert_eq!(q(3, 2).star(), q(3, 2));
        let z = GaussianRational::parse("2+i").unwrap();
        assert_eq!(z.star().to_string(), "2-i");
        let w = GaussianRational::parse("1+3i").unwrap();
        assert_eq!(w.star().star(), w);
    }

    #[test]
    fn inv_nat_examples() {
        assert_eq!(LocalizedInt::<2>::inv_nat(2).unwrap().to_string(), "1/2");
        assert_eq!(BigInt::inv_nat(2), None);
        assert_eq!(BigRational::inv_nat(6), Some(q(1, 6)));
        assert_eq!(LocalizedInt::<3>::inv_nat(2), None);
        assert_eq!(LocalizedInt::<3>::inv_nat(9).unwrap().to_string(), "1/3^2");
        let z2 = RingDescriptor::parse("Z[1/2]").unwrap();
        assert_eq!(inv_nat_in(z2, 4), Some(q(1, 4)));
        assert_eq!(inv_nat_in(z2, 6), None);
    }

    #[test]
    fn descriptor_invariants() {
        assert!(RingDescriptor::new(RingKind::Rationals, Involution::ComplexConjugation).is_err());
        assert!(RingDescriptor::new(RingKind::IntegersLocalizedAt(6), Involution::Identity).is_err());
        assert!(RingDescriptor::parse("Z[1/5]").is_ok());
        assert!(RingDescriptor::parse("Z[1/4]").is_err());
        for name in ["Z", "Q", "Z[1/3]", "Q(i)"] {
            assert_eq!(RingDescriptor::parse(name).unwrap().to_string(), name);
        }
    }

    #[test]
    fn localized_canonical_form() {
        let x = LocalizedInt::<2>::new(BigInt::from(12), 3);
        assert_eq!(x.numerator(), &BigInt::from(3));
        assert_eq!(x.exponent(), 1);
        assert_eq!(x.to_string(), "3/2");
        assert_eq!(LocalizedInt::<2>::parse("3/8").unwrap().to_string(), "3/2^3");
        assert_eq!(LocalizedInt::<2>::parse("6/2^2").unwrap().to_string(), "3/2");
        assert!(LocalizedInt::<2>::parse("1/3").is_err());
        assert!(LocalizedInt::<2>::parse("1/3^2").is_err());
    }

    #[test]
    fn gaussian_text_forms() {
        for (text, canon) in [
            ("i", "i"),
            ("-i", "-i"),
            ("1i", "i"),
            ("0", "0"),
            ("3/2", "3/2"),
            ("-1/2-3/4i", "-1/2-3/4i"),
            ("2+1i", "2+i"),
            ("5/3i", "5/3i"),
        ] {
            assert_eq!(GaussianRational::parse(text).unwrap().to_string(), canon, "{text}");
        }
        assert!(GaussianRational::parse("1+-2i").is_err());
        assert!(GaussianRational::parse("x").is_err());
    }

    fn ring_axioms<S: Scalar>(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let a = S::sample(&mut rng);
            let b = S::sample(&mut rng);
            let c = S::sample(&mut rng);
            assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            assert_eq!(
                a.clone() * (b.clone() + c.clone()),
                a.clone() * b.clone() + a.clone() * c.clone()
            );
            assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
            assert_eq!((a.clone() + b.clone()).star(), a.star() + b.star());
            assert_eq!((a.clone() * b.clone()).star(), b.star() * a.star());
            assert_eq!(a.star().star(), a);
            assert_eq!(a.clone() - a.clone(), S::zero());
            assert_eq!(S::parse(&a.to_string()).unwrap(), a);
            assert_eq!(S::from_field(&a.to_field()), Some(a.clone()));
        }
    }

    #[test]
    fn ring_axioms_all_rings() {
        ring_axioms::<BigInt>(1);
        ring_axioms::<BigRational>(2);
        ring_axioms::<LocalizedInt<2>>(3);
        ring_axioms::<LocalizedInt<3>>(4);
        ring_axioms::<GaussianRational>(5);
    }

    proptest::proptest! {
        #[test]
        fn gaussian_parse_print_roundtrip(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20) {
            let z = GaussianRational::new(q(a, b), q(c, d));
            let printed = z.to_string();
            let parsed = GaussianRational::parse(&printed).unwrap();
            proptest::prop_assert_eq!(&parsed, &z);
            proptest::prop_assert_eq!(parsed.to_string(), printed);
        }

        #[test]
        fn localized_parse_print_roundtrip(n in -1000i64..1000, e in 0u32..6) {
            let x = LocalizedInt::<3>::new(BigInt::from(n), e);
            let again = LocalizedInt::<3>::parse(&x.to_string()).unwrap();
            proptest::prop_assert_eq!(again, x);
        }
    }
}
