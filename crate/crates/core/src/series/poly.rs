use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::LaurentSeries;
use crate::error::{Error, Result};
use crate::sequences::SequenceSpec;

/// Dense integer polynomial, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| c.into()).collect())
    }

    /// `1 - x - x^k`.
    pub fn narayana_denominator(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] = BigInt::one();
        c[1] -= 1;
        c[k] -= 1;
        Self::new(c)
    }

    /// `x^k - c_1 x^{k-1} - ... - c_k`.
    pub fn characteristic(spec: &SequenceSpec) -> Self {
        let k = spec.order();
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        for (i, ci) in spec.recurrence_coeffs().iter().enumerate() {
            c[k - 1 - i] = -ci;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Monic polynomial with the given integer roots.
    pub fn from_roots(roots: &[i64]) -> Self {
        roots.iter().fold(Self::from_i64(&[1]), |acc, &r| {
            acc.mul(&Self::from_i64(&[-r, 1]))
        })
    }

    /// The polynomial as an (exact) series known through `x^trunc_order`.
    pub fn to_series(&self, trunc_order: i64) -> LaurentSeries {
        LaurentSeries::new(
            0,
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
            trunc_order,
        )
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.to_series(self.degree().unwrap_or(0) as i64))
    }
}

/// Sylvester matrix with coefficients highest degree first: `deg q` shifted
/// rows of `p` followed by `deg p` shifted rows of `q`.
fn sylvester(p: &[BigInt], q: &[BigInt]) -> Vec<Vec<BigInt>> {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (shifts, src) in [(n, p), (m, q)] {
        for r in 0..shifts {
            let mut row = vec![BigInt::zero(); size];
            for (j, c) in src.iter().rev().enumerate() {
                row[r + j] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Fraction-free (Bareiss) determinant.
fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> Result<BigInt> {
    let n = a.len();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                let (quot, rem) = num.div_rem(&prev);
                if !rem.is_zero() {
                    return Err(Error::NotDivisible {
                        value: num.to_string(),
                        divisor: prev.to_string(),
                    });
                }
                a[i][j] = quot;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// `Res(p, q)` as the Sylvester determinant. `p` must be nonzero; a zero `q`
/// gives zero.
pub fn resultant(p: &IntPolynomial, q: &IntPolynomial) -> Result<BigInt> {
    let m = p.degree().ok_or(Error::DegeneratePolynomial(0))?;
    let Some(n) = q.degree() else {
        return Ok(BigInt::zero());
    };
    if m == 0 {
        return Ok(Pow::pow(&p.coeffs[0], n as u32));
    }
    if n == 0 {
        return Ok(Pow::pow(&q.coeffs[0], m as u32));
    }
    bareiss_determinant(sylvester(&p.coeffs, &q.coeffs))
}

/// `(-1)^{d(d-1)/2} Res(p, p') / lc(p)` for `deg p = d >= 1`.
pub fn discriminant(p: &IntPolynomial) -> Result<BigInt> {
    let d = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::DegeneratePolynomial(1)),
    };
    let res = resultant(p, &p.derivative())?;
    let lc = p.leading_coeff().expect("nonzero polynomial");
    let (quot, rem) = res.div_rem(lc);
    if !rem.is_zero() {
        return Err(Error::NotDivisible {
            value: res.to_string(),
            divisor: lc.to_string(),
        });
    }
    Ok(if (d * (d - 1) / 2) % 2 == 1 {
        -quot
    } else {
        quot
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn narayana_denominator_discriminants() {
        let expected = [(2, 5), (3, -31), (4, -283)];
        for (k, d) in expected {
            let p = IntPolynomial::narayana_denominator(k);
            assert_eq!(discriminant(&p).unwrap(), BigInt::from(d), "k = {k}");
        }
    }

    #[test]
    fn closed_form_small_degrees() {
        // b^2 - 4ac
        let p = IntPolynomial::from_i64(&[3, -7, 2]);
        assert_eq!(discriminant(&p).unwrap(), BigInt::from(49 - 24));
        // cubic ax^3+bx^2+cx+d: b^2c^2 - 4ac^3 - 4b^3d - 27a^2d^2 + 18abcd
        let (a, b, c, d) = (2i64, -1, 3, 5);
        let expect = b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d
            + 18 * a * b * c * d;
        let p = IntPolynomial::from_i64(&[d, c, b, a]);
        assert_eq!(discriminant(&p).unwrap(), BigInt::from(expect));
    }

    #[test]
    fn degenerate_inputs() {
        let zero = IntPolynomial::new(vec![]);
        assert!(resultant(&zero, &IntPolynomial::from_i64(&[1, 1])).is_err());
        assert!(discriminant(&IntPolynomial::from_i64(&[4])).is_err());
        assert_eq!(
            resultant(
                &IntPolynomial::from_i64(&[3]),
                &IntPolynomial::from_i64(&[1, 0, 1])
            )
            .unwrap(),
            BigInt::from(9)
        );
        assert_eq!(
            resultant(&IntPolynomial::from_i64(&[1, 1]), &zero).unwrap(),
            BigInt::zero()
        );
    }

    #[test]
    fn characteristic_polynomial() {
        let spec = crate::sequences::narayana_spec(3).unwrap();
        let c = IntPolynomial::characteristic(&spec);
        assert_eq!(c, IntPolynomial::from_i64(&[-1, 0, -1, 1]));
        // x^k p(1/x) relation to 1 - x - x^k: same discriminant
        assert_eq!(discriminant(&c).unwrap(), BigInt::from(-31));
    }

    #[test]
    fn display() {
        assert_eq!(
            IntPolynomial::narayana_denominator(3).to_string(),
            "1 - x - x^3"
        );
    }

    proptest! {
        #[test]
        fn resultant_of_split_polynomials(
            a in proptest::collection::vec(-6i64..=6, 1..5),
            b in proptest::collection::vec(-6i64..=6, 1..5),
        ) {
            let p = IntPolynomial::from_roots(&a);
            let q = IntPolynomial::from_roots(&b);
            let mut expected = BigInt::one();
            for x in &a {
                for y in &b {
                    expected *= BigInt::from(x - y);
                }
            }
            prop_assert_eq!(resultant(&p, &q).unwrap(), expected.clone());
            let swap_sign = if (a.len() * b.len()) % 2 == 1 { -1 } else { 1 };
            prop_assert_eq!(resultant(&q, &p).unwrap(), expected * swap_sign);
        }

        #[test]
        fn discriminant_from_roots(roots in proptest::collection::vec(-6i64..=6, 2..6)) {
            let p = IntPolynomial::from_roots(&roots);
            let mut expected = BigInt::one();
            for i in 0..roots.len() {
                for j in i + 1..roots.len() {
                    let d = BigInt::from(roots[i] - roots[j]);
                    expected *= &d * &d;
                }
            }
            prop_assert_eq!(discriminant(&p).unwrap(), expected);
        }
    }
}
