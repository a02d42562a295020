//! Truncated Laurent series with exact rational coefficients.
//!
//! A [`LaurentSeries`] stores the coefficients of `x^e, x^{e+1}, ..., x^N`.
//! Coefficients above the truncation order `N` are *unknown*, not zero, so
//! every operation tracks the order through which its result is determined.

pub mod gf;
mod poly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use poly::{discriminant, resultant, IntPolynomial};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    start_exp: i64,
    coeffs: Vec<BigRational>,
    trunc_order: i64,
}

/// A coefficient mismatch between two series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Difference {
    pub exp: i64,
    pub left: BigRational,
    pub right: BigRational,
}

impl LaurentSeries {
    /// `coeffs[i]` is the coefficient of `x^{start_exp + i}`; coefficients
    /// past `trunc_order` are dropped and missing ones up to it are zero.
    pub fn new(start_exp: i64, mut coeffs: Vec<BigRational>, trunc_order: i64) -> Self {
        let start_exp = start_exp.min(trunc_order + 1);
        let len = (trunc_order - start_exp + 1) as usize;
        coeffs.resize(len, BigRational::zero());
        LaurentSeries {
            start_exp,
            coeffs,
            trunc_order,
        }
    }

    pub fn from_integers<T: Into<BigInt> + Clone>(
        start_exp: i64,
        coeffs: &[T],
        trunc_order: i64,
    ) -> Self {
        Self::new(
            start_exp,
            coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone().into()))
                .collect(),
            trunc_order,
        )
    }

    pub fn zero(trunc_order: i64) -> Self {
        Self::new(trunc_order + 1, Vec::new(), trunc_order)
    }

    pub fn one(trunc_order: i64) -> Self {
        Self::monomial(BigRational::one(), 0, trunc_order)
    }

    pub fn monomial(coeff: BigRational, exp: i64, trunc_order: i64) -> Self {
        if exp > trunc_order {
            return Self::zero(trunc_order);
        }
        Self::new(exp, vec![coeff], trunc_order)
    }

    pub fn start_exp(&self) -> i64 {
        self.start_exp
    }

    pub fn trunc_order(&self) -> i64 {
        self.trunc_order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^exp`; `None` above the truncation order.
    pub fn coeff(&self, exp: i64) -> Option<BigRational> {
        if exp > self.trunc_order {
            None
        } else if exp < self.start_exp {
            Some(BigRational::zero())
        } else {
            Some(self.coeffs[(exp - self.start_exp) as usize].clone())
        }
    }

    fn coeff_ref(&self, exp: i64) -> Option<&BigRational> {
        if exp < self.start_exp || exp > self.trunc_order {
            None
        } else {
            Some(&self.coeffs[(exp - self.start_exp) as usize])
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn leading_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Drop leading zero coefficients, raising the start exponent.
    pub fn normalize(mut self) -> Self {
        let lz = self.leading_zeros();
        if lz > 0 {
            self.coeffs.drain(..lz);
            self.start_exp += lz as i64;
        }
        self
    }

    /// Forget everything above `order`.
    pub fn truncate(mut self, order: i64) -> Self {
        if order >= self.trunc_order {
            return self;
        }
        let start = self.start_exp.min(order + 1);
        let keep = (order - start + 1) as usize;
        self.coeffs.truncate(keep);
        self.start_exp = start;
        self.trunc_order = order;
        self
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        LaurentSeries {
            start_exp: self.start_exp,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
            trunc_order: self.trunc_order,
        }
    }

    /// Multiply by `x^m`.
    pub fn shift(&self, m: i64) -> Self {
        LaurentSeries {
            start_exp: self.start_exp + m,
            coeffs: self.coeffs.clone(),
            trunc_order: self.trunc_order + m,
        }
    }

    /// Term-by-term `d/dx`; the truncation order drops by one.
    pub fn derivative(&self) -> Self {
        LaurentSeries {
            start_exp: self.start_exp - 1,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigRational::from_integer((self.start_exp + i as i64).into()))
                .collect(),
            trunc_order: self.trunc_order - 1,
        }
    }

    fn combine(&self, other: &Self, negate_other: bool) -> Self {
        let trunc = self.trunc_order.min(other.trunc_order);
        let start = self.start_exp.min(other.start_exp).min(trunc + 1);
        let coeffs = (start..=trunc)
            .map(|e| {
                let a = self.coeff_ref(e);
                let b = other.coeff_ref(e);
                match (a, b, negate_other) {
                    (Some(a), Some(b), false) => a + b,
                    (Some(a), Some(b), true) => a - b,
                    (Some(a), None, _) => a.clone(),
                    (None, Some(b), false) => b.clone(),
                    (None, Some(b), true) => -b,
                    (None, None, _) => BigRational::zero(),
                }
            })
            .collect();
        LaurentSeries {
            start_exp: start,
            coeffs,
            trunc_order: trunc,
        }
    }

    fn product(&self, other: &Self) -> Self {
        let a = self.clone().normalize();
        let b = other.clone().normalize();
        let start = a.start_exp + b.start_exp;
        let trunc = (a.trunc_order + b.start_exp).min(b.trunc_order + a.start_exp);
        let len = (trunc - start + 1).max(0) as usize;
        let mut coeffs = vec![BigRational::zero(); len];
        for (i, ai) in a.coeffs.iter().enumerate().take(len) {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate().take(len - i) {
                if !bj.is_zero() {
                    coeffs[i + j] += ai * bj;
                }
            }
        }
        LaurentSeries::new(start, coeffs, trunc)
    }

    /// Multiplicative inverse of a series whose lowest nonzero coefficient
    /// is known. For `a = x^e u(x)` known through `x^N` the result is known
    /// through `x^{N - 2e}`.
    pub fn inverse_unit(&self) -> Result<Self> {
        let a = self.clone().normalize();
        if a.coeffs.is_empty() {
            return Err(Error::NotInvertible(self.trunc_order));
        }
        let e = a.start_exp;
        let len = a.coeffs.len();
        let lead_inv = a.coeffs[0].recip();
        let mut inv: Vec<BigRational> = Vec::with_capacity(len);
        inv.push(lead_inv.clone());
        for m in 1..len {
            let mut acc = BigRational::zero();
            for i in 1..=m {
                let c = &a.coeffs[i];
                if !c.is_zero() {
                    acc += c * &inv[m - i];
                }
            }
            inv.push(-(acc * &lead_inv));
        }
        Ok(LaurentSeries {
            start_exp: -e,
            coeffs: inv,
            trunc_order: a.trunc_order - 2 * e,
        })
    }

    /// First exponent (scanning upwards over the mutually determined range)
    /// where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<Difference> {
        let (lo, hi) = self.common_range(other);
        (lo..=hi).find_map(|e| {
            let l = self.coeff(e).expect("within range");
            let r = other.coeff(e).expect("within range");
            (l != r).then_some(Difference {
                exp: e,
                left: l,
                right: r,
            })
        })
    }

    /// Exponents `lo..=hi` over which both series are determined.
    pub fn common_range(&self, other: &Self) -> (i64, i64) {
        (
            self.start_exp.min(other.start_exp),
            self.trunc_order.min(other.trunc_order),
        )
    }

    /// All stored coefficients as integers, failing on the first fraction.
    pub fn integer_coeffs(&self) -> Result<Vec<(i64, BigInt)>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let exp = self.start_exp + i as i64;
                if c.is_integer() {
                    Ok((exp, c.to_integer()))
                } else {
                    Err(Error::NotIntegral {
                        exp,
                        value: c.to_string(),
                    })
                }
            })
            .collect()
    }

    /// The terms without the `O(...)` remainder.
    pub fn terms_string(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let exp = self.start_exp + i as i64;
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            if exp == 0 {
                out.push_str(&mag.to_string());
                continue;
            }
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                if !mag.is_integer() {
                    out.push('*');
                }
            }
            if exp == 1 {
                out.push('x');
            } else {
                out.push_str(&format!("x^{exp}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for LaurentSeries {
    /// `2x^-1 + 1/2*x^3 + O(x^6)`; the alternate form `{:#}` omits the
    /// remainder.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.terms_string())?;
        if !f.alternate() {
            write!(f, " + O(x^{})", self.trunc_order + 1)?;
        }
        Ok(())
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.combine(rhs, false)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.combine(rhs, true)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.product(rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale(&-BigRational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: LaurentSeries) -> LaurentSeries {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
