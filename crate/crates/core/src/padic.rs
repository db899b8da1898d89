//! Capped relative-precision arithmetic in Q_p.
//!
//! A nonzero element is stored as `p^v * u` with `u` a unit known modulo
//! `p^N`. Zero is the only element with infinite valuation. Sums whose
//! leading digits cancel lose relative precision; when every known digit
//! cancels the checked API reports [`Error::PrecisionExhausted`] and the
//! operator impls return zero.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Precision used when a caller does not pick one.
pub const DEFAULT_PRECISION: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `true` when the valuation is at least `bound` (always for zero).
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Serialized as an integer, or the string `"inf"` for zero.
impl serde::Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => serializer.serialize_i64(*v),
            Valuation::Infinite => serializer.serialize_str("inf"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

thread_local! {
    static POWERS: RefCell<HashMap<(u64, u32), Rc<BigUint>>> = RefCell::new(HashMap::new());
}

/// `p^n`, cached per thread.
fn prime_power(p: u64, n: u32) -> Rc<BigUint> {
    POWERS.with(|cache| {
        cache
            .borrow_mut()
            .entry((p, n))
            .or_insert_with(|| Rc::new(BigUint::from(p).pow(n)))
            .clone()
    })
}

/// Strips factors of `p`, returning the count removed.
fn strip_prime(n: &mut BigUint, p: u64) -> i64 {
    let mut v = 0;
    while !n.is_zero() && (&*n % p).is_zero() {
        *n /= p;
        v += 1;
    }
    v
}

fn strip_prime_signed(n: &mut BigInt, p: u64) -> i64 {
    let mut v = 0;
    let pb = BigInt::from(p);
    while !n.is_zero() && (&*n % &pb).is_zero() {
        *n /= &pb;
        v += 1;
    }
    v
}

/// Inverse of `a` modulo `m`; `a` must be coprime to `m`.
fn mod_inverse(a: &BigUint, m: &BigUint) -> BigUint {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let egcd = a.extended_gcd(&m);
    debug_assert!(egcd.gcd.is_one());
    egcd.x.mod_floor(&m).to_biguint().expect("mod_floor is nonnegative")
}

fn reduce_signed(n: &BigInt, m: &BigUint) -> BigUint {
    n.mod_floor(&BigInt::from(m.clone()))
        .to_biguint()
        .expect("mod_floor is nonnegative")
}

/// Prime and working precision of a family of p-adic numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicContext {
    prime: u64,
    precision: u32,
}

impl PadicContext {
    pub fn new(prime: u64, precision: u32) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        if precision < 1 {
            return Err(Error::InvalidPrecision(precision));
        }
        Ok(Self { prime, precision })
    }

    pub fn with_default_precision(prime: u64) -> Result<Self> {
        Self::new(prime, DEFAULT_PRECISION)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn zero(&self) -> PadicNumber {
        PadicNumber::zero(self.prime, self.precision)
    }

    pub fn one(&self) -> PadicNumber {
        self.integer(1)
    }

    pub fn integer(&self, n: i64) -> PadicNumber {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> PadicNumber {
        PadicNumber::from_parts_unchecked(self.prime, self.precision, n, &BigInt::one())
    }

    pub fn ratio(&self, num: i64, den: i64) -> Result<PadicNumber> {
        self.from_ratio(&BigInt::from(num), &BigInt::from(den))
    }

    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<PadicNumber> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(PadicNumber::from_parts_unchecked(self.prime, self.precision, num, den))
    }

    pub fn from_rational(&self, q: &BigRational) -> PadicNumber {
        PadicNumber::from_parts_unchecked(self.prime, self.precision, q.numer(), q.denom())
    }

    /// `p^k` as an element.
    pub fn prime_power(&self, k: i64) -> PadicNumber {
        PadicNumber {
            prime: self.prime,
            valuation: Valuation::Finite(k),
            unit: BigUint::one(),
            precision: self.precision,
        }
    }

    /// Parses `"a/b"` or `"a"`.
    pub fn parse(&self, text: &str) -> Result<PadicNumber> {
        let q = parse_rational(text)?;
        Ok(self.from_rational(&q))
    }
}

/// Parses an exact rational literal `"a/b"` or `"a"`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {text:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {text:?}")))?;
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(num, den))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug)]
pub struct PadicNumber {
    prime: u64,
    valuation: Valuation,
    /// Unit part reduced modulo `p^precision`; zero only for the zero element.
    unit: BigUint,
    precision: u32,
}

/// Image of `numerator / denominator` in Q_p with `precision` significant digits.
pub fn make_padic(
    numerator: &BigInt,
    denominator: &BigInt,
    prime: u64,
    precision: u32,
) -> Result<PadicNumber> {
    PadicContext::new(prime, precision)?.from_ratio(numerator, denominator)
}

/// Checked binary operation with the precision-exhaustion error.
pub fn arith(x: &PadicNumber, y: &PadicNumber, op: ArithOp) -> Result<PadicNumber> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

impl PadicNumber {
    pub fn zero(prime: u64, precision: u32) -> Self {
        Self {
            prime,
            valuation: Valuation::Infinite,
            unit: BigUint::zero(),
            precision,
        }
    }

    fn from_parts_unchecked(prime: u64, precision: u32, num: &BigInt, den: &BigInt) -> Self {
        if num.is_zero() {
            return Self::zero(prime, precision);
        }
        let mut n = num.clone();
        let mut d = den.clone();
        let v = strip_prime_signed(&mut n, prime) - strip_prime_signed(&mut d, prime);
        let modulus = prime_power(prime, precision);
        let n = reduce_signed(&n, &modulus);
        let d = reduce_signed(&d, &modulus);
        let unit = (n * mod_inverse(&d, &modulus)) % &*modulus;
        Self {
            prime,
            valuation: Valuation::Finite(v),
            unit,
            precision,
        }
    }

    /// Builds `p^valuation * unit`; `unit` must not be divisible by `p`.
    pub fn from_unit(prime: u64, precision: u32, valuation: i64, unit: &BigUint) -> Result<Self> {
        let ctx = PadicContext::new(prime, precision)?;
        let unit = unit % &*prime_power(prime, precision);
        if (&unit % prime).is_zero() {
            return Err(Error::Parse("unit part divisible by p".into()));
        }
        Ok(Self {
            prime: ctx.prime,
            valuation: Valuation::Finite(valuation),
            unit,
            precision,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn context(&self) -> PadicContext {
        PadicContext {
            prime: self.prime,
            precision: self.precision,
        }
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.valuation == Valuation::Infinite
    }

    /// `v >= 0`.
    pub fn is_integral(&self) -> bool {
        self.valuation.at_least(0)
    }

    /// `|x|_p = p^{-v}`, or 0 for zero.
    pub fn norm(&self) -> BigRational {
        match self.valuation {
            Valuation::Infinite => BigRational::zero(),
            Valuation::Finite(v) => {
                let pv = BigInt::from(self.prime).pow(v.unsigned_abs() as u32);
                if v >= 0 {
                    BigRational::new(BigInt::one(), pv)
                } else {
                    BigRational::from_integer(pv)
                }
            }
        }
    }

    /// Absolute precision `v + N`; `None` for zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        self.valuation.finite().map(|v| v + self.precision as i64)
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch {
                left: self.prime,
                right: other.prime,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let (va, vb) = match (self.valuation, other.valuation) {
            (Valuation::Infinite, _) => return Ok(other.clone()),
            (_, Valuation::Infinite) => return Ok(self.clone()),
            (Valuation::Finite(a), Valuation::Finite(b)) => (a, b),
        };
        let (lo, hi, vlo, vhi) = if va <= vb {
            (self, other, va, vb)
        } else {
            (other, self, vb, va)
        };
        let abs = (vlo + lo.precision as i64).min(vhi + hi.precision as i64);
        let rel = (abs - vlo) as u32;
        let shift = vhi - vlo;
        let modulus = prime_power(self.prime, rel);
        if shift >= rel as i64 {
            return Ok(Self {
                prime: self.prime,
                valuation: Valuation::Finite(vlo),
                unit: &lo.unit % &*modulus,
                precision: rel,
            });
        }
        let shifted = &hi.unit * &*prime_power(self.prime, shift as u32);
        let mut sum = (&lo.unit + shifted) % &*modulus;
        if sum.is_zero() {
            return Err(Error::PrecisionExhausted);
        }
        let lost = strip_prime(&mut sum, self.prime);
        Ok(Self {
            prime: self.prime,
            valuation: Valuation::Finite(vlo + lost),
            unit: sum,
            precision: rel - lost as u32,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.clone().neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let precision = self.precision.min(other.precision);
        match (self.valuation, other.valuation) {
            (Valuation::Finite(a), Valuation::Finite(b)) => {
                let modulus = prime_power(self.prime, precision);
                Ok(Self {
                    prime: self.prime,
                    valuation: Valuation::Finite(a + b),
                    unit: (&self.unit * &other.unit) % &*modulus,
                    precision,
                })
            }
            _ => Ok(Self::zero(self.prime, precision)),
        }
    }

    pub fn checked_inv(&self) -> Result<Self> {
        let v = self.valuation.finite().ok_or(Error::DivisionByZero)?;
        let modulus = prime_power(self.prime, self.precision);
        Ok(Self {
            prime: self.prime,
            valuation: Valuation::Finite(-v),
            unit: mod_inverse(&self.unit, &modulus),
            precision: self.precision,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let inv = other.checked_inv()?;
        self.checked_mul(&inv)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self {
            prime: self.prime,
            valuation: Valuation::Finite(0),
            unit: BigUint::one(),
            precision: self.precision,
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            base = base.clone() * &base;
            e >>= 1;
        }
        acc
    }

    /// Truncates to at most `precision` significant digits.
    pub fn with_precision(&self, precision: u32) -> Self {
        let precision = precision.max(1).min(self.precision);
        let unit = &self.unit % &*prime_power(self.prime, precision);
        Self {
            prime: self.prime,
            valuation: self.valuation,
            unit,
            precision,
        }
    }

    /// Residue of an integral element modulo `p^k` as a nonnegative integer.
    pub fn residue(&self, k: u32) -> Result<BigUint> {
        match self.valuation {
            Valuation::Infinite => Ok(BigUint::zero()),
            Valuation::Finite(v) if v < 0 => Err(Error::NotIntegral(v)),
            Valuation::Finite(v) => {
                if v >= k as i64 {
                    return Ok(BigUint::zero());
                }
                let m = prime_power(self.prime, k);
                Ok((&self.unit * &*prime_power(self.prime, v as u32)) % &*m)
            }
        }
    }

    /// Base-p digits `a_0, ..., a_{N-1}` with `sum a_i p^i == x (mod p^N)`.
    pub fn digit_expansion(&self) -> Result<Vec<u64>> {
        let mut r = self.residue(self.precision)?;
        let mut digits = Vec::with_capacity(self.precision as usize);
        for _ in 0..self.precision {
            let d = (&r % self.prime).to_u64().expect("digit below p");
            digits.push(d);
            r /= self.prime;
        }
        Ok(digits)
    }

    /// Reassembles `sum a_i p^i` at precision `digits.len()`.
    pub fn from_digits(prime: u64, digits: &[u64]) -> Result<Self> {
        let ctx = PadicContext::new(prime, digits.len() as u32)?;
        let mut acc = BigInt::zero();
        for &d in digits.iter().rev() {
            if d >= prime {
                return Err(Error::Parse(format!("digit {d} out of range for p = {prime}")));
            }
            acc = acc * prime + d;
        }
        Ok(ctx.from_bigint(&acc))
    }

    /// `"...d3 d2 d1 d0 (base p)"`; integral elements only.
    pub fn digit_string(&self) -> Result<String> {
        let digits = self.digit_expansion()?;
        let body: Vec<String> = digits.iter().rev().map(|d| d.to_string()).collect();
        Ok(format!("...{} (base {})", body.join(" "), self.prime))
    }

    /// Smallest-height rational congruent to this element at its precision.
    pub fn to_rational(&self) -> BigRational {
        let v = match self.valuation {
            Valuation::Infinite => return BigRational::zero(),
            Valuation::Finite(v) => v,
        };
        let modulus = prime_power(self.prime, self.precision);
        let (a, b) = rational_reconstruction(&self.unit, &modulus, self.prime);
        let pv = BigInt::from(self.prime).pow(v.unsigned_abs() as u32);
        if v >= 0 {
            BigRational::new(a * pv, b)
        } else {
            BigRational::new(a, b * pv)
        }
    }

    /// `"a/b"` (or `"a"`) that parses back to this element.
    pub fn rational_string(&self) -> String {
        let q = self.to_rational();
        if q.denom().is_one() {
            q.numer().to_string()
        } else {
            format!("{}/{}", q.numer(), q.denom())
        }
    }
}

/// Finds `a/b == u (mod m)` with `|a|, |b| <= sqrt(m/2)` and `p` not dividing `b`,
/// falling back to the balanced residue of `u`.
fn rational_reconstruction(u: &BigUint, m: &BigUint, p: u64) -> (BigInt, BigInt) {
    let bound = (m / 2u32).sqrt();
    let bound = BigInt::from(bound);
    let mut r0 = BigInt::from(m.clone());
    let mut r1 = BigInt::from(u.clone());
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let pb = BigInt::from(p);
    if !t1.is_zero() && t1.abs() <= bound && r1.gcd(&t1).is_one() && !(&t1 % &pb).is_zero() {
        let (mut a, mut b) = (r1, t1);
        if b.sign() == Sign::Minus {
            a = -a;
            b = -b;
        }
        return (a, b);
    }
    let big_m = BigInt::from(m.clone());
    let mut a = BigInt::from(u.clone());
    if &a * 2 > big_m {
        a -= &big_m;
    }
    (a, BigInt::one())
}

impl PartialEq for PadicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.prime != other.prime || self.valuation != other.valuation {
            return false;
        }
        if self.is_zero() {
            return true;
        }
        let common = self.precision.min(other.precision);
        let m = prime_power(self.prime, common);
        (&self.unit % &*m) == (&other.unit % &*m)
    }
}

impl fmt::Display for PadicNumber {
    /// `"p^v * u (mod p^N)"`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation {
            Valuation::Infinite => write!(f, "0 (mod {}^{})", self.prime, self.precision),
            Valuation::Finite(v) => write!(
                f,
                "{}^{} * {} (mod {}^{})",
                self.prime, v, self.unit, self.prime, self.precision
            ),
        }
    }
}

impl Neg for PadicNumber {
    type Output = PadicNumber;

    fn neg(mut self) -> PadicNumber {
        if !self.is_zero() {
            let m = prime_power(self.prime, self.precision);
            self.unit = &*m - &self.unit;
        }
        self
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;

    fn neg(self) -> PadicNumber {
        self.clone().neg()
    }
}

fn total_add(a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
    match a.checked_add(b) {
        Ok(s) => s,
        Err(Error::PrecisionExhausted) => {
            PadicNumber::zero(a.prime, a.precision.min(b.precision))
        }
        Err(e) => panic!("p-adic addition failed: {e}"),
    }
}

fn total_mul(a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
    a.checked_mul(b)
        .unwrap_or_else(|e| panic!("p-adic multiplication failed: {e}"))
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: PadicNumber) -> PadicNumber {
                $body(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: &'a PadicNumber) -> PadicNumber {
                $body(&self, rhs)
            }
        }
        impl<'a> $tr<&'a PadicNumber> for &'a PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: &'a PadicNumber) -> PadicNumber {
                $body(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, total_add);
forward_binop!(Sub, sub, |a: &PadicNumber, b: &PadicNumber| total_add(a, &-b));
forward_binop!(Mul, mul, total_mul);
forward_binop!(Div, div, |a: &PadicNumber, b: &PadicNumber| a
    .checked_div(b)
    .unwrap_or_else(|e| panic!("p-adic division failed: {e}")));

impl Scalar for PadicNumber {
    type Context = PadicContext;

    fn context(&self) -> PadicContext {
        PadicNumber::context(self)
    }

    fn zero_in(ctx: &PadicContext) -> Self {
        ctx.zero()
    }

    fn one_in(ctx: &PadicContext) -> Self {
        ctx.one()
    }

    fn from_ratio(ctx: &PadicContext, num: &BigInt, den: &BigInt) -> Result<Self> {
        ctx.from_ratio(num, den)
    }

    fn is_zero(&self) -> bool {
        PadicNumber::is_zero(self)
    }

    fn checked_inv(&self) -> Option<Self> {
        PadicNumber::checked_inv(self).ok()
    }

    fn same_field(a: &PadicContext, b: &PadicContext) -> bool {
        a.prime == b.prime
    }
}
