//! Exact arithmetic in real quadratic rings of integers and their fraction
//! fields.
//!
//! A [`Field`] fixes a generator `ω` of the ring of integers of `Q(√D)`:
//! `ω = √D` when `D ≢ 1 (mod 4)` and `ω = (1+√D)/2` otherwise. Elements of the
//! ring are [`QuadInt`] values `a + bω`; elements of the field are [`FieldVal`]
//! values `(p + qω)/d` in lowest terms. For `D = 2` this is exactly `Z[√2]`
//! with the Galois conjugation `a + b√2 ↦ a − b√2`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real quadratic ring of integers `Z[ω]` with `ω² = pω + q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Field {
    p: i64,
    q: i64,
}

impl Field {
    /// `Z[√2]`, the ring of the silver-mean family.
    pub const SQRT2: Field = Field { p: 0, q: 2 };
    /// `Z[φ]` with `φ = (1+√5)/2`.
    pub const GOLDEN: Field = Field { p: 1, q: 1 };

    /// Ring of integers of `Q(√d)` for a squarefree `d > 1`.
    pub fn real_quadratic(d: i64) -> Result<Field> {
        if d <= 1 || squarefree_part(d) != d {
            return Err(Error::Parse(format!("{d} is not a squarefree integer > 1")));
        }
        Ok(if d.rem_euclid(4) == 1 {
            Field {
                p: 1,
                q: (d - 1) / 4,
            }
        } else {
            Field { p: 0, q: d }
        })
    }

    /// The field generated by the roots of a quadratic with the given
    /// discriminant.
    pub fn from_discriminant(disc: i64) -> Result<Field> {
        if disc <= 0 {
            return Err(Error::Parse(format!("discriminant {disc} is not positive")));
        }
        let d = squarefree_part(disc);
        if d == 1 {
            return Err(Error::RationalField(disc));
        }
        Field::real_quadratic(d)
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Squarefree `D` with `Q(ω) = Q(√D)`.
    pub fn radicand(&self) -> i64 {
        if self.p == 0 {
            self.q
        } else {
            self.ring_discriminant()
        }
    }

    /// `(ω − ω⋆)²`, the discriminant of the ring.
    pub fn ring_discriminant(&self) -> i64 {
        self.p * self.p + 4 * self.q
    }

    /// `ω` as a float.
    pub fn generator(&self) -> f64 {
        (self.p as f64 + (self.ring_discriminant() as f64).sqrt()) / 2.0
    }

    /// `ω⋆ = p − ω` as a float.
    pub fn generator_conj(&self) -> f64 {
        (self.p as f64 - (self.ring_discriminant() as f64).sqrt()) / 2.0
    }

    /// Low-order correction so that `generator() + generator_lo()` carries
    /// roughly twice the working precision.
    fn generator_lo(&self, hi: f64) -> f64 {
        // residual of ω² − pω − q at the rounded root, divided by the derivative
        let r = hi.mul_add(hi, -(self.p as f64) * hi - self.q as f64);
        -r / (2.0 * hi - self.p as f64)
    }

    /// Name of the generator in textual output.
    pub fn symbol(&self) -> String {
        match (self.p, self.q) {
            (0, q) => format!("sqrt{q}"),
            (1, 1) => "phi".to_string(),
            _ => format!("w{}", self.radicand()),
        }
    }
}

impl Default for Field {
    fn default() -> Self {
        Field::SQRT2
    }
}

fn squarefree_part(mut n: i64) -> i64 {
    let mut out = 1;
    let mut f = 2;
    while f * f <= n {
        let mut e = 0;
        while n % f == 0 {
            n /= f;
            e += 1;
        }
        if e % 2 == 1 {
            out *= f;
        }
        f += 1;
    }
    out * n
}

/// Exact element `a + bω` of `Z[ω]`.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadInt {
    a: BigInt,
    b: BigInt,
    field: Field,
}

impl Hash for QuadInt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl QuadInt {
    pub fn new(field: Field, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        QuadInt {
            a: a.into(),
            b: b.into(),
            field,
        }
    }

    pub fn zero(field: Field) -> Self {
        QuadInt::new(field, 0, 0)
    }

    pub fn one(field: Field) -> Self {
        QuadInt::new(field, 1, 0)
    }

    pub fn integer(field: Field, n: impl Into<BigInt>) -> Self {
        QuadInt::new(field, n, 0)
    }

    /// The generator `ω`.
    pub fn generator(field: Field) -> Self {
        QuadInt::new(field, 0, 1)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Coordinates as machine integers, if they fit.
    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.a.to_i64()?, self.b.to_i64()?))
    }

    /// Galois conjugate: `ω ↦ p − ω`.
    pub fn star(&self) -> QuadInt {
        let p = self.field.p;
        QuadInt {
            a: &self.a + &self.b * p,
            b: -&self.b,
            field: self.field,
        }
    }

    /// Field norm `x · x⋆`.
    pub fn norm(&self) -> BigInt {
        let (p, q) = (self.field.p, self.field.q);
        &self.a * &self.a + &self.a * &self.b * p - &self.b * &self.b * q
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs().is_one()
    }

    /// Inverse of a unit, itself a unit.
    pub fn unit_inverse(&self) -> Result<QuadInt> {
        let n = self.norm();
        if n.is_one() {
            Ok(self.star())
        } else if (-&n).is_one() {
            Ok(-self.star())
        } else {
            Err(Error::NotAUnit(self.to_string()))
        }
    }

    /// Exact quotient by a unit.
    pub fn div_by_unit(&self, u: &QuadInt) -> Result<QuadInt> {
        Ok(self * &u.unit_inverse()?)
    }

    /// Exact quotient `self / y` when it lies in the ring.
    pub fn checked_div(&self, y: &QuadInt) -> Option<QuadInt> {
        let n = y.norm();
        if n.is_zero() {
            return None;
        }
        let t = self * &y.star();
        let (qa, ra) = t.a.div_rem(&n);
        let (qb, rb) = t.b.div_rem(&n);
        (ra.is_zero() && rb.is_zero()).then(|| QuadInt::new(self.field, qa, qb))
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> QuadInt {
        let k = k.into();
        QuadInt::new(self.field, &self.a * &k, &self.b * &k)
    }

    /// Exact sign of the real number `a + bω`.
    pub fn signum(&self) -> Ordering {
        let (p, q) = (self.field.p, self.field.q);
        // 2(a + bω) = u + b·√Δ
        let u: BigInt = &self.a * 2 + &self.b * p;
        let b = &self.b;
        let su = u.sign();
        let sb = b.sign();
        use num_bigint::Sign::*;
        match (su, sb) {
            (NoSign, NoSign) => Ordering::Equal,
            (_, NoSign) => sign_to_ord(su),
            (NoSign, _) => sign_to_ord(sb),
            _ if su == sb => sign_to_ord(su),
            _ => {
                let delta = p * p + 4 * q;
                let lhs = &u * &u;
                let rhs = b * b * delta;
                if lhs > rhs {
                    sign_to_ord(su)
                } else {
                    sign_to_ord(sb)
                }
            }
        }
    }

    pub fn abs(&self) -> QuadInt {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// `a + bω` rounded to a float, avoiding cancellation.
    pub fn embed(&self) -> f64 {
        embed_parts(&self.a, &self.b, self.field, false)
    }

    /// `(a + bω)⋆` rounded to a float.
    pub fn embed_star(&self) -> f64 {
        embed_parts(&self.a, &self.b, self.field, true)
    }

    /// Parse `a+b*sqrt2`, `3`, `-sqrt2`, `2*phi`, ... for the given field.
    pub fn parse(field: Field, text: &str) -> Result<QuadInt> {
        let fv = FieldVal::parse(field, text)?;
        fv.to_quad_int()
            .ok_or_else(|| Error::Parse(format!("'{text}' is not an algebraic integer")))
    }
}

fn sign_to_ord(s: num_bigint::Sign) -> Ordering {
    match s {
        num_bigint::Sign::Minus => Ordering::Less,
        num_bigint::Sign::NoSign => Ordering::Equal,
        num_bigint::Sign::Plus => Ordering::Greater,
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

fn embed_parts(a: &BigInt, b: &BigInt, field: Field, conj: bool) -> f64 {
    let hi = if conj {
        field.generator_conj()
    } else {
        field.generator()
    };
    let lo = field.generator_lo(hi);
    let af = big_to_f64(a);
    let bf = big_to_f64(b);
    if b.is_zero() {
        return af;
    }
    // ω and ω⋆ have opposite signs; cancellation happens when a and bω do.
    let cancels = !a.is_zero() && (af > 0.0) != (bf * hi > 0.0);
    if !cancels {
        return bf.mul_add(hi, af) + bf * lo;
    }
    let other = if conj {
        field.generator()
    } else {
        field.generator_conj()
    };
    let other_lo = field.generator_lo(other);
    let denom = bf.mul_add(other, af) + bf * other_lo;
    let q = field.q;
    let p = field.p;
    let norm = a * a + a * b * p - b * b * q;
    big_to_f64(&norm) / denom
}

impl Ord for QuadInt {
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.field, other.field, "field mismatch");
        (self - other).signum()
    }
}

impl PartialOrd for QuadInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.field.symbol();
        if self.b.is_negative() {
            write!(f, "{}-{}*{}", self.a, -&self.b, sym)
        } else {
            write!(f, "{}+{}*{}", self.a, self.b, sym)
        }
    }
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for QuadInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $ty:ty) => {
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty {
                (&self).$m(rhs)
            }
        }
        impl $tr<$ty> for &$ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                self.$m(&rhs)
            }
        }
    };
}

impl Add<&QuadInt> for &QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: &QuadInt) -> QuadInt {
        assert_eq!(self.field, rhs.field, "field mismatch");
        QuadInt::new(self.field, &self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub<&QuadInt> for &QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: &QuadInt) -> QuadInt {
        assert_eq!(self.field, rhs.field, "field mismatch");
        QuadInt::new(self.field, &self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul<&QuadInt> for &QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: &QuadInt) -> QuadInt {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let (p, q) = (self.field.p, self.field.q);
        let bb = &self.b * &rhs.b;
        let a = &self.a * &rhs.a + &bb * q;
        let b = &self.a * &rhs.b + &rhs.a * &self.b + bb * p;
        QuadInt::new(self.field, a, b)
    }
}

forward_binop!(Add, add, QuadInt);
forward_binop!(Sub, sub, QuadInt);
forward_binop!(Mul, mul, QuadInt);

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(self.field, -&self.a, -&self.b)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(self.field, -self.a, -self.b)
    }
}

impl AddAssign<&QuadInt> for QuadInt {
    fn add_assign(&mut self, rhs: &QuadInt) {
        assert_eq!(self.field, rhs.field, "field mismatch");
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&QuadInt> for QuadInt {
    fn sub_assign(&mut self, rhs: &QuadInt) {
        assert_eq!(self.field, rhs.field, "field mismatch");
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

/// Exact element `(p + qω)/d` of `Q(ω)` in lowest terms with `d ≥ 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldVal {
    num: QuadInt,
    den: BigInt,
}

impl FieldVal {
    /// Builds `num / den` and reduces it.
    pub fn new(num: QuadInt, den: impl Into<BigInt>) -> Result<FieldVal> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldVal::reduced(num, den))
    }

    fn reduced(num: QuadInt, den: BigInt) -> FieldVal {
        let g = num.a.gcd(&num.b).gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (QuadInt::new(num.field, &num.a / &g, &num.b / &g), den / &g)
        };
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        FieldVal { num, den }
    }

    pub fn from_parts(field: Field, p: i64, q: i64, d: i64) -> Result<FieldVal> {
        FieldVal::new(QuadInt::new(field, p, q), d)
    }

    pub fn zero(field: Field) -> FieldVal {
        FieldVal::from(QuadInt::zero(field))
    }

    pub fn one(field: Field) -> FieldVal {
        FieldVal::from(QuadInt::one(field))
    }

    pub fn integer(field: Field, n: impl Into<BigInt>) -> FieldVal {
        FieldVal::from(QuadInt::integer(field, n))
    }

    pub fn field(&self) -> Field {
        self.num.field
    }

    pub fn numerator(&self) -> &QuadInt {
        &self.num
    }

    pub fn p(&self) -> &BigInt {
        &self.num.a
    }

    pub fn q(&self) -> &BigInt {
        &self.num.b
    }

    pub fn d(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        self.num.signum()
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> FieldVal {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn star(&self) -> FieldVal {
        FieldVal {
            num: self.num.star(),
            den: self.den.clone(),
        }
    }

    pub fn to_quad_int(&self) -> Option<QuadInt> {
        self.den.is_one().then(|| self.num.clone())
    }

    pub fn inverse(&self) -> Result<FieldVal> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.num.norm();
        FieldVal::new(self.num.star().scale(self.den.clone()), n)
    }

    pub fn embed(&self) -> f64 {
        let d = big_to_f64(&self.den);
        self.num.embed() / d
    }

    pub fn embed_star(&self) -> f64 {
        let d = big_to_f64(&self.den);
        self.num.embed_star() / d
    }

    pub fn min(self, other: FieldVal) -> FieldVal {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: FieldVal) -> FieldVal {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Parse `(p+q*sqrt2)/d`, `p+q*sqrt2`, `q*sqrt2`, `p/d`, with optional
    /// whitespace.
    pub fn parse(field: Field, text: &str) -> Result<FieldVal> {
        let err = || Error::Parse(format!("cannot parse '{text}'"));
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err());
        }
        let (numer, denom) = match s.rfind('/') {
            Some(pos) if s[pos + 1..].chars().all(|c| c.is_ascii_digit() || c == '-') => {
                (&s[..pos], Some(&s[pos + 1..]))
            }
            _ => (s.as_str(), None),
        };
        let numer = numer
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(numer);
        let den: BigInt = match denom {
            Some(d) => d.parse().map_err(|_| err())?,
            None => BigInt::one(),
        };
        let sym = field.symbol();
        let mut a = BigInt::zero();
        let mut b = BigInt::zero();
        // split into signed terms
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = numer.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'*' {
                terms.push(&numer[start..i]);
                start = i;
            }
        }
        terms.push(&numer[start..]);
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'+') => (false, &term[1..]),
                Some(b'-') => (true, &term[1..]),
                _ => (false, term),
            };
            if body.is_empty() {
                return Err(err());
            }
            let (coef, is_gen) = if let Some(c) = body.strip_suffix(sym.as_str()) {
                let c = c.strip_suffix('*').unwrap_or(c);
                let c: BigInt = if c.is_empty() {
                    BigInt::one()
                } else {
                    c.parse().map_err(|_| err())?
                };
                (c, true)
            } else {
                (body.parse::<BigInt>().map_err(|_| err())?, false)
            };
            let coef = if neg { -coef } else { coef };
            if is_gen {
                b += coef;
            } else {
                a += coef;
            }
        }
        FieldVal::new(QuadInt::new(field, a, b), den)
    }
}

impl From<QuadInt> for FieldVal {
    fn from(num: QuadInt) -> Self {
        FieldVal {
            num,
            den: BigInt::one(),
        }
    }
}

impl From<&QuadInt> for FieldVal {
    fn from(num: &QuadInt) -> Self {
        FieldVal::from(num.clone())
    }
}

impl fmt::Display for FieldVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/{}", self.num, self.den)
    }
}

impl fmt::Debug for FieldVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for FieldVal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Ord for FieldVal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl PartialOrd for FieldVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&FieldVal> for &FieldVal {
    type Output = FieldVal;
    fn add(self, rhs: &FieldVal) -> FieldVal {
        if self.den == rhs.den {
            return FieldVal::reduced(&self.num + &rhs.num, self.den.clone());
        }
        let num = self.num.scale(rhs.den.clone()) + rhs.num.scale(self.den.clone());
        FieldVal::reduced(num, &self.den * &rhs.den)
    }
}

impl Sub<&FieldVal> for &FieldVal {
    type Output = FieldVal;
    fn sub(self, rhs: &FieldVal) -> FieldVal {
        self + &(-rhs)
    }
}

impl Mul<&FieldVal> for &FieldVal {
    type Output = FieldVal;
    fn mul(self, rhs: &FieldVal) -> FieldVal {
        FieldVal::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div<&FieldVal> for &FieldVal {
    type Output = FieldVal;
    /// Panics on division by zero; use [`FieldVal::inverse`] to handle it.
    fn div(self, rhs: &FieldVal) -> FieldVal {
        self * &rhs.inverse().expect("division by zero")
    }
}

forward_binop!(Add, add, FieldVal);
forward_binop!(Sub, sub, FieldVal);
forward_binop!(Mul, mul, FieldVal);
forward_binop!(Div, div, FieldVal);

impl Neg for &FieldVal {
    type Output = FieldVal;
    fn neg(self) -> FieldVal {
        FieldVal {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for FieldVal {
    type Output = FieldVal;
    fn neg(self) -> FieldVal {
        FieldVal {
            num: -self.num,
            den: self.den,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s2(a: i64, b: i64) -> QuadInt {
        QuadInt::new(Field::SQRT2, a, b)
    }

    #[test]
    fn star_examples() {
        assert_eq!(s2(1, 1).star(), s2(1, -1));
        assert_eq!(s2(5, 0).star(), s2(5, 0));
        assert_eq!(s2(3, -2).star().star(), s2(3, -2));
    }

    #[test]
    fn golden_star_is_conjugation() {
        let phi = QuadInt::generator(Field::GOLDEN);
        // φ⋆ = 1 − φ
        assert_eq!(phi.star(), QuadInt::new(Field::GOLDEN, 1, -1));
        assert_eq!(&phi * &phi, QuadInt::new(Field::GOLDEN, 1, 1));
        assert!((phi.embed() - 1.618_033_988_749_895).abs() < 1e-15);
        assert!((phi.embed_star() + 0.618_033_988_749_895).abs() < 1e-15);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(s2(1, 1) * s2(1, 1), s2(3, 2));
        assert_eq!(s2(1, 1) * s2(-1, 1), s2(1, 0));
        assert_eq!(s2(7, -3) * s2(1, 0), s2(7, -3));
    }

    #[test]
    fn div_by_unit_examples() {
        let lam = s2(1, 1);
        assert_eq!(s2(3, 2).div_by_unit(&lam).unwrap(), lam);
        assert_eq!(s2(0, 0).div_by_unit(&lam).unwrap(), s2(0, 0));
        assert_eq!(s2(1, 0).div_by_unit(&lam).unwrap(), s2(-1, 1));
        assert!(matches!(
            s2(1, 0).div_by_unit(&s2(2, 0)),
            Err(Error::NotAUnit(_))
        ));
        assert!(matches!(
            s2(1, 0).div_by_unit(&s2(0, 0)),
            Err(Error::NotAUnit(_))
        ));
    }

    #[test]
    fn embed_examples() {
        assert!((s2(1, 1).embed() - 2.414_213_562_373_095).abs() < 1e-15);
        assert!((s2(1, 1).embed_star() + 0.414_213_562_373_095).abs() < 1e-15);
        assert_eq!(s2(0, 0).embed(), 0.0);
        assert_eq!(s2(0, 0).embed_star(), 0.0);
        assert!((s2(3, 2).embed() - 5.828_427_124_746_19).abs() < 1e-14);
        assert!((s2(3, 2).embed_star() - 0.171_572_875_253_809_9).abs() < 1e-15);
    }

    #[test]
    fn embed_without_cancellation_error() {
        // 665857 − 470832√2 = 1/(665857 + 470832√2), a unit close to 0
        let x = s2(665_857, -470_832);
        let exact = 1.0 / (665_857.0 + 470_832.0 * std::f64::consts::SQRT_2);
        assert!((x.embed() - exact).abs() / exact < 1e-14);
    }

    #[test]
    fn cmp_examples() {
        assert_eq!(s2(1, 1).cmp(&s2(2, 0)), Ordering::Greater);
        assert_eq!(s2(0, 0).cmp(&s2(0, 0)), Ordering::Equal);
        assert_eq!(s2(3, -2).cmp(&s2(0, 0)), Ordering::Greater);
        assert_eq!(s2(-3, 2).cmp(&s2(0, 0)), Ordering::Less);
        assert_eq!(s2(1, -1).signum(), Ordering::Less);
    }

    #[test]
    fn field_from_discriminant() {
        assert_eq!(Field::from_discriminant(8).unwrap(), Field::SQRT2);
        assert_eq!(Field::from_discriminant(32).unwrap(), Field::SQRT2);
        assert_eq!(Field::from_discriminant(5).unwrap(), Field::GOLDEN);
        assert_eq!(Field::from_discriminant(20).unwrap(), Field::GOLDEN);
        assert_eq!(Field::from_discriminant(12).unwrap().radicand(), 3);
        assert_eq!(Field::from_discriminant(13).unwrap().radicand(), 13);
        assert!(matches!(
            Field::from_discriminant(9),
            Err(Error::RationalField(9))
        ));
    }

    #[test]
    fn field_val_reduction_and_text() {
        let f = Field::SQRT2;
        let v = FieldVal::from_parts(f, -6, 2, -4).unwrap();
        assert_eq!(
            (v.p().clone(), v.q().clone(), v.d().clone()),
            (3.into(), (-1).into(), 2.into())
        );
        assert_eq!(v.to_string(), "(3-1*sqrt2)/2");
        assert_eq!(FieldVal::parse(f, &v.to_string()).unwrap(), v);
        assert_eq!(
            FieldVal::parse(f, "( -1 + 1*sqrt2 )/1").unwrap(),
            FieldVal::from(s2(-1, 1))
        );
        assert_eq!(QuadInt::parse(f, "3+2*sqrt2").unwrap(), s2(3, 2));
        assert_eq!(QuadInt::parse(f, "-sqrt2").unwrap(), s2(0, -1));
        assert_eq!(QuadInt::parse(f, "7").unwrap(), s2(7, 0));
        assert!(QuadInt::parse(f, "1/2").is_err());
        assert!(FieldVal::parse(f, "x+1").is_err());
        assert_eq!(
            QuadInt::parse(Field::GOLDEN, "2-3*phi").unwrap(),
            QuadInt::new(Field::GOLDEN, 2, -3)
        );
    }

    #[test]
    fn field_val_division() {
        let f = Field::SQRT2;
        let lam = FieldVal::from(s2(1, 1));
        let inv = lam.inverse().unwrap();
        assert_eq!(inv, FieldVal::from(s2(-1, 1)));
        let x = FieldVal::from_parts(f, 3, -7, 5).unwrap();
        let y = FieldVal::from_parts(f, -2, 9, 4).unwrap();
        assert_eq!(&(&x * &y) / &y, x);
        assert!(FieldVal::zero(f).inverse().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn quad(field: Field) -> impl Strategy<Value = QuadInt> {
            (-1_000_000i64..=1_000_000, -1_000_000i64..=1_000_000)
                .prop_map(move |(a, b)| QuadInt::new(field, a, b))
        }

        fn frac() -> impl Strategy<Value = FieldVal> {
            (-10_000i64..10_000, -10_000i64..10_000, 1i64..500)
                .prop_map(|(p, q, d)| FieldVal::from_parts(Field::SQRT2, p, q, d).unwrap())
        }

        proptest! {
            #[test]
            fn star_is_a_ring_automorphism(x in quad(Field::SQRT2), y in quad(Field::SQRT2)) {
                prop_assert_eq!((&x + &y).star(), &x.star() + &y.star());
                prop_assert_eq!((&x * &y).star(), &x.star() * &y.star());
                prop_assert_eq!(x.star().star(), x);
            }

            #[test]
            fn norm_is_multiplicative(x in quad(Field::GOLDEN), y in quad(Field::GOLDEN)) {
                prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
            }

            #[test]
            fn embeddings_multiply_to_the_norm(x in quad(Field::SQRT2)) {
                let n = x.norm().to_f64().unwrap();
                let prod = x.embed() * x.embed_star();
                prop_assert!((prod - n).abs() <= 1e-12 * n.abs().max(1.0), "{} vs {}", prod, n);
            }

            #[test]
            fn comparison_matches_embedding(x in quad(Field::SQRT2), y in quad(Field::SQRT2)) {
                let (ex, ey) = (x.embed(), y.embed());
                if (ex - ey).abs() > 1e-6 {
                    prop_assert_eq!(x.cmp(&y), ex.partial_cmp(&ey).unwrap());
                }
            }

            #[test]
            fn field_arithmetic_is_exact(x in frac(), y in frac()) {
                prop_assert_eq!(&(&x + &y) - &y, x.clone());
                if !y.is_zero() {
                    prop_assert_eq!(&(&x * &y) / &y, x);
                }
            }

            #[test]
            fn text_round_trips(x in frac()) {
                prop_assert_eq!(FieldVal::parse(Field::SQRT2, &x.to_string()).unwrap(), x);
            }
        }
    }
}
