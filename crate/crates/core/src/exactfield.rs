//! Exact scalars: prime fields F_p with p odd, and the rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest supported prime modulus.
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldCtx {
    Prime(u64),
    Rational,
}

impl FieldCtx {
    pub fn prime(p: u64) -> Result<Self> {
        if p < 3 || p > MAX_PRIME || p % 2 == 0 || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(FieldCtx::Prime(p))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldCtx::Prime(p) => p,
            FieldCtx::Rational => 0,
        }
    }

    pub fn modulus(self) -> Result<u64> {
        match self {
            FieldCtx::Prime(p) => Ok(p),
            FieldCtx::Rational => Err(Error::UnsupportedField("Q")),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, FieldCtx::Prime(_))
    }

    pub fn zero(self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> FieldElem {
        match self {
            FieldCtx::Prime(p) => FieldElem::Fp {
                v: n.rem_euclid(p as i64) as u64,
                p,
            },
            FieldCtx::Rational => FieldElem::Q(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn from_u64(self, n: u64) -> FieldElem {
        match self {
            FieldCtx::Prime(p) => FieldElem::Fp { v: n % p, p },
            FieldCtx::Rational => FieldElem::Q(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn from_ratio(self, num: BigInt, den: BigInt) -> Result<FieldElem> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            FieldCtx::Prime(p) => {
                let m = BigInt::from(p);
                let n = num.mod_floor(&m).to_u64().unwrap();
                let d = den.mod_floor(&m).to_u64().unwrap();
                let d = FieldElem::Fp { v: d, p };
                Ok(FieldElem::Fp { v: n, p } * d.try_inv()?)
            }
            FieldCtx::Rational => Ok(FieldElem::Q(BigRational::new(num, den))),
        }
    }

    /// Parses "3", "-5", "-5/6".
    pub fn parse(self, s: &str) -> Result<FieldElem> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad field element {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = n.parse().map_err(|_| bad())?;
        let den: BigInt = d.parse().map_err(|_| bad())?;
        self.from_ratio(num, den)
    }

    /// Iterates every element of a prime field in residue order.
    pub fn elements(self) -> Result<impl Iterator<Item = FieldElem>> {
        let p = self.modulus()?;
        Ok((0..p).map(move |v| FieldElem::Fp { v, p }))
    }

    /// A fixed non-square of F_p (the smallest one).
    pub fn nonsquare(self) -> Result<FieldElem> {
        let p = self.modulus()?;
        (2..p)
            .map(|v| FieldElem::Fp { v, p })
            .find(|x| !x.is_square_fp())
            .ok_or(Error::UnsupportedField("F_p without nonsquares"))
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldCtx::Prime(p) => write!(f, "F_{p}"),
            FieldCtx::Rational => write!(f, "Q"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Fp { v: u64, p: u64 },
    Q(BigRational),
}

impl FieldElem {
    pub fn ctx(&self) -> FieldCtx {
        match self {
            FieldElem::Fp { p, .. } => FieldCtx::Prime(*p),
            FieldElem::Q(_) => FieldCtx::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Fp { v, .. } => *v == 0,
            FieldElem::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Fp { v, .. } => *v == 1,
            FieldElem::Q(q) => q.is_one(),
        }
    }

    /// Residue in [0, p) for prime fields.
    pub fn residue(&self) -> Option<u64> {
        match self {
            FieldElem::Fp { v, .. } => Some(*v),
            FieldElem::Q(_) => None,
        }
    }

    pub fn try_inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElem::Fp { v, p } => FieldElem::Fp {
                v: pow_mod(*v, p - 2, *p),
                p: *p,
            },
            FieldElem::Q(q) => FieldElem::Q(q.recip()),
        })
    }

    /// Inverse; panics on zero. Use [`FieldElem::try_inv`] for fallible callers.
    pub fn inv(&self) -> FieldElem {
        self.try_inv().expect("inverse of zero")
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.ctx().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn is_square_fp(&self) -> bool {
        match self {
            FieldElem::Fp { v, p } => *v == 0 || pow_mod(*v, (p - 1) / 2, *p) == 1,
            FieldElem::Q(_) => unreachable!(),
        }
    }

    /// Euler's criterion. Only prime fields are supported.
    pub fn is_square(&self) -> Result<bool> {
        match self {
            FieldElem::Fp { .. } => Ok(self.is_square_fp()),
            FieldElem::Q(_) => Err(Error::UnsupportedField("Q")),
        }
    }

    /// A square root via Tonelli-Shanks, if one exists.
    pub fn sqrt(&self) -> Result<Option<FieldElem>> {
        let (a, p) = match self {
            FieldElem::Fp { v, p } => (*v, *p),
            FieldElem::Q(_) => return Err(Error::UnsupportedField("Q")),
        };
        if a == 0 {
            return Ok(Some(self.clone()));
        }
        if !self.is_square_fp() {
            return Ok(None);
        }
        let (mut q, mut s) = (p - 1, 0u32);
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let z = (2..p)
            .find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)
            .unwrap();
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = tt * tt % p;
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), p);
            m = i;
            c = b * b % p;
            t = t * c % p;
            r = r * b % p;
        }
        Ok(Some(FieldElem::Fp { v: r, p }))
    }

    /// Symmetric representative in (-p/2, p/2], used for readable output.
    pub fn signed_residue(&self) -> Option<i64> {
        match self {
            FieldElem::Fp { v, p } => Some(if *v > p / 2 {
                *v as i64 - *p as i64
            } else {
                *v as i64
            }),
            FieldElem::Q(_) => None,
        }
    }
}

/// Checked binary arithmetic as a single entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

pub fn field_arith(a: &FieldElem, b: Option<&FieldElem>, op: ArithOp) -> Result<FieldElem> {
    let rhs = || b.ok_or_else(|| Error::Parse("missing second operand".into()));
    if let Some(b) = b {
        if a.ctx() != b.ctx() {
            return Err(Error::FieldMismatch);
        }
    }
    Ok(match op {
        ArithOp::Add => a + rhs()?,
        ArithOp::Sub => a - rhs()?,
        ArithOp::Mul => a * rhs()?,
        ArithOp::Div => a * &rhs()?.try_inv()?,
        ArithOp::Neg => -a,
        ArithOp::Inv => a.try_inv()?,
    })
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Fp { v, .. } => write!(f, "{v}"),
            FieldElem::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

fn mismatch() -> ! {
    panic!("arithmetic between different fields")
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        match (self, o) {
            (FieldElem::Fp { v, p }, FieldElem::Fp { v: w, p: q }) if p == q => FieldElem::Fp {
                v: (v + w) % p,
                p: *p,
            },
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a + b),
            _ => mismatch(),
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        match (self, o) {
            (FieldElem::Fp { v, p }, FieldElem::Fp { v: w, p: q }) if p == q => FieldElem::Fp {
                v: (v + p - w) % p,
                p: *p,
            },
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a - b),
            _ => mismatch(),
        }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        match (self, o) {
            (FieldElem::Fp { v, p }, FieldElem::Fp { v: w, p: q }) if p == q => FieldElem::Fp {
                v: v * w % p,
                p: *p,
            },
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a * b),
            _ => mismatch(),
        }
    }
}

impl<'a> Div<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn div(self, o: &FieldElem) -> FieldElem {
        self * &o.inv()
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Fp { v, p } => FieldElem::Fp {
                v: (p - v) % p,
                p: *p,
            },
            FieldElem::Q(a) => FieldElem::Q(-a),
        }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $f(self, o: FieldElem) -> FieldElem {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $f(self, o: &FieldElem) -> FieldElem {
                (&self).$f(o)
            }
        }
        impl<'a> $tr<FieldElem> for &'a FieldElem {
            type Output = FieldElem;
            fn $f(self, o: FieldElem) -> FieldElem {
                self.$f(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, o: &FieldElem) {
        *self = &*self + o;
    }
}

impl SubAssign<&FieldElem> for FieldElem {
    fn sub_assign(&mut self, o: &FieldElem) {
        *self = &*self - o;
    }
}

impl MulAssign<&FieldElem> for FieldElem {
    fn mul_assign(&mut self, o: &FieldElem) {
        *self = &*self * o;
    }
}

/// Used by serialization: numerator and denominator of a rational element.
pub fn rational_parts(x: &FieldElem) -> Option<(BigInt, BigInt)> {
    match x {
        FieldElem::Q(q) => Some((q.numer().clone(), q.denom().clone())),
        FieldElem::Fp { .. } => None,
    }
}

pub fn is_negative(x: &FieldElem) -> bool {
    match x {
        FieldElem::Q(q) => q.is_negative(),
        FieldElem::Fp { .. } => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let k = f(7);
        assert_eq!(k.from_i64(3) + k.from_i64(5), k.from_i64(1));
        assert_eq!(k.from_i64(2).inv(), k.from_i64(4));
        let q = FieldCtx::Rational;
        let sum = q.parse("1/2").unwrap() + q.parse("1/3").unwrap();
        assert_eq!(sum.to_string(), "5/6");
        assert_eq!(
            field_arith(&k.zero(), None, ArithOp::Inv),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn squares() {
        assert!(f(7).from_i64(2).is_square().unwrap());
        assert!(f(11).zero().is_square().unwrap());
        assert!(!f(5).from_i64(2).is_square().unwrap());
        assert!(FieldCtx::Rational.one().is_square().is_err());
        for p in [3, 5, 7, 13, 17, 41, 97] {
            let k = f(p);
            for x in k.elements().unwrap() {
                match x.sqrt().unwrap() {
                    Some(r) => assert_eq!(&r * &r, x),
                    None => assert!(!x.is_square().unwrap()),
                }
            }
        }
    }

    #[test]
    fn bad_moduli() {
        for p in [0, 1, 2, 4, 9, 15, MAX_PRIME + 1] {
            assert!(FieldCtx::prime(p).is_err());
        }
        assert!(FieldCtx::prime(2147483647).is_ok());
    }

    #[test]
    fn parse_canonical() {
        let k = f(7);
        assert_eq!(
            k.parse("-5/6").unwrap(),
            k.from_i64(-5) * k.from_i64(6).inv()
        );
        assert!(k.parse("1/7").is_err());
        let q = FieldCtx::Rational;
        assert_eq!(q.parse("4/-6").unwrap().to_string(), "-2/3");
        assert!(q.parse("x").is_err());
    }
}
