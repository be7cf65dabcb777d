//! Scalar coefficient fields.
//!
//! Two fields are used throughout: exact rationals (the base field) and
//! rational functions in the deformation parameter `a`. Both implement
//! [`Scalar`], so series and linear algebra are written once and reused on
//! either side of a specialization.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number over arbitrary-precision integers.
pub type Rat = BigRational;

/// Field operations needed by series arithmetic and row reduction.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_int(n: i64) -> Self;

    fn div_ref(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul_ref(&i))
    }
}

impl Scalar for Rat {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Dense polynomial in the deformation parameter `a` with rational
/// coefficients. Coefficient `i` multiplies `a^i`; trailing zeros are
/// trimmed so the representation is canonical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct APoly {
    coeffs: Vec<Rat>,
}

impl APoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| Zero::is_zero(c)) {
            coeffs.pop();
        }
        APoly { coeffs }
    }

    pub fn zero() -> Self {
        APoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        APoly::constant(<Rat as Scalar>::one())
    }

    pub fn constant(c: Rat) -> Self {
        APoly::new(vec![c])
    }

    /// The monomial `c * a^d`.
    pub fn monomial(c: Rat, d: usize) -> Self {
        let mut coeffs = vec![<Rat as Scalar>::zero(); d + 1];
        coeffs[d] = c;
        APoly::new(coeffs)
    }

    pub fn var() -> Self {
        APoly::monomial(<Rat as Scalar>::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(<Rat as Scalar>::zero)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval_zero(&self) -> Rat {
        self.coeff(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        APoly::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        APoly::new(out)
    }

    pub fn neg(&self) -> Self {
        APoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return APoly::zero();
        }
        let mut out = vec![<Rat as Scalar>::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, ci) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(ci) {
                continue;
            }
            for (j, cj) in other.coeffs.iter().enumerate() {
                if !Zero::is_zero(cj) {
                    out[i + j] += ci * cj;
                }
            }
        }
        APoly::new(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        APoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => APoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Euclidean division: returns `(quotient, remainder)`.
    pub fn div_rem(&self, div: &Self) -> (Self, Self) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let dd = div.degree().unwrap();
        let lead_inv = div.leading().unwrap().recip();
        let mut rem = self.clone();
        let mut quot = vec![<Rat as Scalar>::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading().unwrap() * &lead_inv;
            let shift = rd - dd;
            quot[shift] = factor.clone();
            let mut sub = vec![<Rat as Scalar>::zero(); shift];
            sub.extend(div.coeffs.iter().map(|c| c * &factor));
            rem = rem.sub(&APoly::new(sub));
        }
        (APoly::new(quot), rem)
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut x = self.clone();
        let mut y = other.clone();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }
}

impl fmt::Display for APoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if Zero::is_zero(c) {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let coeff_is_one = mag.is_one();
            match (i, coeff_is_one) {
                (0, _) => write!(f, "{}", mag)?,
                (1, true) => write!(f, "a")?,
                (1, false) => write!(f, "{}*a", mag)?,
                (_, true) => write!(f, "a^{}", i)?,
                (_, false) => write!(f, "{}*a^{}", mag, i)?,
            }
        }
        Ok(())
    }
}

/// Rational function in `a`: a reduced fraction of [`APoly`]s with monic
/// denominator, so equal values have equal representations.
#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc {
    num: APoly,
    den: APoly,
}

impl RatFunc {
    pub fn new(num: APoly, den: APoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut out = RatFunc { num, den };
        out.reduce();
        out
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = APoly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree().unwrap_or(0) > 0 {
            self.num = self.num.div_rem(&g).0;
            self.den = self.den.div_rem(&g).0;
        }
        let lead = self.den.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn from_poly(p: APoly) -> Self {
        RatFunc {
            num: p,
            den: APoly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RatFunc::from_poly(APoly::constant(c))
    }

    /// The variable `a`.
    pub fn var() -> Self {
        RatFunc::from_poly(APoly::var())
    }

    pub fn numer(&self) -> &APoly {
        &self.num
    }

    pub fn denom(&self) -> &APoly {
        &self.den
    }

    /// True when the value does not involve `a`.
    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree().unwrap_or(0) == 0
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// Substitute `a = 0`. Fails when the denominator vanishes there.
    pub fn eval_zero(&self) -> Result<Rat> {
        let d0 = self.den.eval_zero();
        if Zero::is_zero(&d0) {
            // branch/exp filled in by the caller that knows the context
            return Err(Error::PoleAtZero { branch: 0, exp: 0 });
        }
        Ok(self.num.eval_zero() / d0)
    }
}

impl Scalar for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(APoly::zero())
    }
    fn one() -> Self {
        RatFunc::from_poly(APoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
    fn sub_ref(&self, other: &Self) -> Self {
        RatFunc::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
    fn mul_ref(&self, other: &Self) -> Self {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }
    fn neg_ref(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }
    fn from_int(n: i64) -> Self {
        RatFunc::constant(Rat::from_int(n))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            if self.num.degree().unwrap_or(0) == 0 {
                write!(f, "{}", self.num)
            } else {
                write!(f, "({})", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl APoly {
    fn is_one_poly(&self) -> bool {
        self.degree() == Some(0) && self.coeff(0).is_one()
    }
}

macro_rules! forward_binop {
    ($ty:ty, $trait:ident, $method:ident, $impl:ident) => {
        impl $trait for &$ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                self.$impl(rhs)
            }
        }
        impl $trait for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$impl(&rhs)
            }
        }
    };
}

forward_binop!(RatFunc, Add, add, add_ref);
forward_binop!(RatFunc, Sub, sub, sub_ref);
forward_binop!(RatFunc, Mul, mul, mul_ref);

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.div_ref(rhs).expect("division by zero rational function")
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> RatFunc {
        RatFunc::var()
    }

    #[test]
    fn poly_divrem_roundtrip() {
        // (a^2 - 1) = (a - 1)(a + 1)
        let p = APoly::new(vec![rat(-1, 1), rat(0, 1), rat(1, 1)]);
        let d = APoly::new(vec![rat(-1, 1), rat(1, 1)]);
        let (q, r) = p.div_rem(&d);
        assert!(r.is_zero());
        assert_eq!(q, APoly::new(vec![rat(1, 1), rat(1, 1)]));
    }

    #[test]
    fn ratfunc_reduces_to_canonical_form() {
        // (a^2 - a) / a == a - 1
        let num = APoly::new(vec![rat(0, 1), rat(-1, 1), rat(1, 1)]);
        let f = RatFunc::new(num, APoly::var());
        assert_eq!(f, RatFunc::from_poly(APoly::new(vec![rat(-1, 1), rat(1, 1)])));
    }

    #[test]
    fn eval_zero_detects_pole() {
        let f = a().inv().unwrap();
        assert!(f.eval_zero().is_err());
        let g = RatFunc::new(APoly::one(), APoly::new(vec![rat(-1, 1), rat(1, 1)]));
        assert_eq!(g.eval_zero().unwrap(), rat(-1, 1));
    }

    #[test]
    fn field_identities() {
        let x = &(&a() * &a()) - &RatFunc::one(); // a^2 - 1
        let y = &a() + &RatFunc::one();
        let q = &x / &y;
        assert_eq!(q, &a() - &RatFunc::one());
        let inv = q.inv().unwrap();
        assert_eq!(q.mul_ref(&inv), RatFunc::one());
    }

    #[test]
    fn denominator_kept_monic() {
        // 1 / (2a - 2) -> (1/2) / (a - 1)
        let f = RatFunc::new(APoly::one(), APoly::new(vec![rat(-2, 1), rat(2, 1)]));
        assert_eq!(f.denom(), &APoly::new(vec![rat(-1, 1), rat(1, 1)]));
        assert_eq!(f.numer(), &APoly::constant(rat(1, 2)));
    }
}
