//! Generating functions for the k-step self-convolution identity.
//!
//! With `A_n = D_k conv_n`, `B_n = k^{k-1}(n+k-2) R_{n+k-1}` and
//! `C_n = sum_{j=0}^{k-2} k^j (k-1)^{k-2-j} (n+k+j-1) R_{n+j}`, the identity
//! `A_n = B_n - C_n` is equivalent to `A(x) = B(x) - C(x)`. This module builds
//! each of `A`, `B`, `C` both from its coefficient definition and from its
//! rational closed form, so the two routes can be compared coefficient-wise.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use super::{IntPolynomial, LaurentSeries};
use crate::identities::narayana_constant;
use crate::sequences::{narayana_spec, terms};

fn rat(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

fn check_k(k: usize) {
    assert!(k >= 2, "k-step generating functions need k >= 2, got {k}");
}

/// `1 / (1 - x - x^k)` known through `x^trunc`.
fn denominator_inverse(k: usize, trunc: i64) -> LaurentSeries {
    IntPolynomial::narayana_denominator(k)
        .to_series(trunc)
        .inverse_unit()
        .expect("1 - x - x^k has unit constant term")
}

/// `1 / (1 - x - x^k)^2` known through `x^trunc`.
fn denominator_inverse_sq(k: usize, trunc: i64) -> LaurentSeries {
    let inv = denominator_inverse(k, trunc);
    &inv * &inv
}

/// `x / (1 - x - x^k)` through `x^order`; coefficient `n` is `R_n`.
///
/// Panics if `k < 2`.
pub fn narayana_gf(k: usize, order: i64) -> LaurentSeries {
    check_k(k);
    denominator_inverse(k, order).shift(1).truncate(order)
}

/// `D_k x^2 / (1 - x - x^k)^2`.
pub fn a_gf(k: usize, order: i64) -> LaurentSeries {
    check_k(k);
    denominator_inverse_sq(k, order)
        .shift(2)
        .scale(&rat(narayana_constant(k)))
        .truncate(order)
}

/// `k^{k-1} x^{-(k-3)} sum_{i=0}^{k-3} i x^{i-1}`, the polynomial
/// correction shared by both closed forms. Zero for `k < 4`.
fn correction(k: usize, order: i64) -> LaurentSeries {
    let lead = rat(Pow::pow(&BigInt::from(k), (k - 1) as u32));
    let shift = -(k as i64 - 3);
    // exact polynomial: keep it determined well past `order`
    let mut acc = LaurentSeries::zero(order + k as i64);
    for i in 1..=(k as i64 - 3) {
        let term = LaurentSeries::monomial(
            lead.clone() * BigRational::from_integer(i.into()),
            i - 1 + shift,
            order + k as i64,
        );
        acc = &acc + &term;
    }
    acc
}

/// `numerator(x) / (x^{k-3} (1 - x - x^k)^2) - correction`.
fn closed_form(k: usize, order: i64, numerator: IntPolynomial) -> LaurentSeries {
    let shift = -(k as i64 - 3);
    // x^{-(k-3)} costs k-3 orders of precision when k > 3.
    let working = order + k as i64;
    let main = &numerator.to_series(working + k as i64) * &denominator_inverse_sq(k, working);
    (&main.shift(shift) - &correction(k, order)).truncate(order)
}

/// `(k^{k-1} + k^k x^{k-1}) / (x^{k-3} (1 - x - x^k)^2) - correction`.
pub fn b_gf_closed(k: usize, order: i64) -> LaurentSeries {
    check_k(k);
    let kb = BigInt::from(k);
    let mut num = vec![BigInt::zero(); k];
    num[0] = Pow::pow(&kb, (k - 1) as u32);
    num[k - 1] += Pow::pow(&kb, k as u32);
    closed_form(k, order, IntPolynomial::new(num))
}

/// `(k^{k-1} - (k-1)^{k-1} x^{k-1}) / (x^{k-3} (1 - x - x^k)^2) - correction`.
pub fn c_gf_closed(k: usize, order: i64) -> LaurentSeries {
    check_k(k);
    let mut num = vec![BigInt::zero(); k];
    num[0] = Pow::pow(&BigInt::from(k), (k - 1) as u32);
    num[k - 1] -= Pow::pow(&BigInt::from(k - 1), (k - 1) as u32);
    closed_form(k, order, IntPolynomial::new(num))
}

fn series_from_fn(order: i64, f: impl Fn(usize) -> BigInt) -> LaurentSeries {
    let len = (order + 1).max(0) as usize;
    LaurentSeries::new(0, (0..len).map(|n| rat(f(n))).collect(), order)
}

/// `sum_n k^{k-1} (n+k-2) R_{n+k-1} x^n`, straight from the coefficients.
pub fn b_gf_def(k: usize, order: i64) -> LaurentSeries {
    check_k(k);
    let r = terms(
        &narayana_spec(k).expect("k >= 2"),
        (order.max(0) as usize) + k,
    );
    let lead = Pow::pow(&BigInt::from(k), (k - 1) as u32);
    series_from_fn(order, |n| {
        &lead * BigInt::from(n + k - 2) * &r.values[n + k - 1]
    })
}

/// `sum_n sum_{j=0}^{k-2} k^j (k-1)^{k-2-j} (n+k+j-1) R_{n+j} x^n`.
pub fn c_gf_def(k: usize, order: i64) -> LaurentSeries {
    check_k(k);
    let r = terms(
        &narayana_spec(k).expect("k >= 2"),
        (order.max(0) as usize) + k,
    );
    let weights: Vec<BigInt> = (0..=k - 2)
        .map(|j| {
            Pow::pow(&BigInt::from(k), j as u32)
                * Pow::pow(&BigInt::from(k - 1), (k - 2 - j) as u32)
        })
        .collect();
    series_from_fn(order, |n| {
        weights
            .iter()
            .enumerate()
            .map(|(j, w)| w * BigInt::from(n + k + j - 1) * &r.values[n + j])
            .sum()
    })
}

/// Every series needed to re-derive the identity for one `k`.
#[derive(Debug, Clone)]
pub struct ProofSeries {
    pub k: usize,
    pub order: i64,
    pub gf: LaurentSeries,
    pub a: LaurentSeries,
    pub b_closed: LaurentSeries,
    pub b_def: LaurentSeries,
    pub c_closed: LaurentSeries,
    pub c_def: LaurentSeries,
}

impl ProofSeries {
    pub fn build(k: usize, order: i64) -> Self {
        ProofSeries {
            k,
            order,
            gf: narayana_gf(k, order),
            a: a_gf(k, order),
            b_closed: b_gf_closed(k, order),
            b_def: b_gf_def(k, order),
            c_closed: c_gf_closed(k, order),
            c_def: c_gf_def(k, order),
        }
    }

    /// `B_closed - C_closed - A`, the zero series when the proof goes through.
    pub fn residual(&self) -> LaurentSeries {
        &(&self.b_closed - &self.c_closed) - &self.a
    }
}
