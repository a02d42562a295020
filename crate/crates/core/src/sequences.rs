//! Order-k integer recurrences: definitions, iterative generation and
//! logarithmic-time single-term evaluation.
//!
//! A [`SequenceSpec`] describes `a_n = c_1 a_{n-1} + ... + c_k a_{n-k}` with
//! initial terms `a_0..a_{k-1}`. Terms are only defined for `n >= 0`.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SequenceSpec {
    name: String,
    recurrence_coeffs: Vec<BigInt>,
    initial_terms: Vec<BigInt>,
}

impl SequenceSpec {
    /// `recurrence_coeffs[i]` multiplies `a_{n-1-i}`.
    pub fn new(
        name: impl Into<String>,
        recurrence_coeffs: Vec<BigInt>,
        initial_terms: Vec<BigInt>,
    ) -> Result<Self> {
        let order = recurrence_coeffs.len();
        if order == 0 {
            return Err(Error::InvalidOrder(0, 1));
        }
        if initial_terms.len() != order {
            return Err(Error::LengthMismatch {
                order,
                what: "initial terms",
                got: initial_terms.len(),
            });
        }
        Ok(SequenceSpec {
            name: name.into(),
            recurrence_coeffs,
            initial_terms,
        })
    }

    fn from_small(name: &str, coeffs: &[i64], initial: &[i64]) -> Self {
        Self::new(
            name,
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            initial.iter().map(|&c| BigInt::from(c)).collect(),
        )
        .expect("built-in spec is well formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.recurrence_coeffs.len()
    }

    pub fn recurrence_coeffs(&self) -> &[BigInt] {
        &self.recurrence_coeffs
    }

    pub fn initial_terms(&self) -> &[BigInt] {
        &self.initial_terms
    }

    /// True when every coefficient and initial term is non-negative, which
    /// makes the sequence nondecreasing from the point the recurrence applies.
    pub fn is_nonnegative(&self) -> bool {
        self.recurrence_coeffs
            .iter()
            .chain(&self.initial_terms)
            .all(|c| !c.is_negative())
    }
}

/// The k-step Narayana numbers: `a_0 = 0`, `a_i = 1` for `1 <= i <= k-1`,
/// `a_n = a_{n-1} + a_{n-k}`. For `k = 2` this is exactly [`fibonacci_spec`].
pub fn narayana_spec(k: usize) -> Result<SequenceSpec> {
    if k < 2 {
        return Err(Error::InvalidOrder(k, 2));
    }
    if k == 2 {
        return Ok(fibonacci_spec());
    }
    let mut coeffs = vec![BigInt::zero(); k];
    coeffs[0] = BigInt::one();
    coeffs[k - 1] = BigInt::one();
    let mut initial = vec![BigInt::one(); k];
    initial[0] = BigInt::zero();
    SequenceSpec::new(format!("narayana{k}"), coeffs, initial)
}

pub fn fibonacci_spec() -> SequenceSpec {
    SequenceSpec::from_small("fibonacci", &[1, 1], &[0, 1])
}

pub fn lucas_spec() -> SequenceSpec {
    SequenceSpec::from_small("lucas", &[1, 1], &[2, 1])
}

/// `X_0 = X_1 = 0, X_2 = 1, X_n = X_{n-1} + X_{n-3}`; satisfies `X_n = R_{n-1}`.
pub fn rabinowitz_spec() -> SequenceSpec {
    SequenceSpec::from_small("rabinowitz", &[1, 0, 1], &[0, 0, 1])
}

/// A dense run of sequence values; `values[i]` is the term at `start_index + i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermVector {
    pub start_index: usize,
    pub values: Vec<BigInt>,
}

impl TermVector {
    pub fn new(start_index: usize, values: Vec<BigInt>) -> Self {
        TermVector {
            start_index,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Last covered index, or `start_index - 1` when empty.
    pub fn end_index(&self) -> i64 {
        self.start_index as i64 + self.values.len() as i64 - 1
    }

    pub fn get(&self, index: i64) -> Result<&BigInt> {
        let rel = index - self.start_index as i64;
        if rel < 0 || rel >= self.values.len() as i64 {
            return Err(Error::IndexOutOfRange {
                index,
                start: self.start_index,
                end: self.end_index(),
            });
        }
        Ok(&self.values[rel as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.start_index + i, v))
    }

    pub fn reduced(&self, modulus: &BigInt) -> TermVector {
        TermVector {
            start_index: self.start_index,
            values: self.values.iter().map(|v| v.mod_floor(modulus)).collect(),
        }
    }
}

/// Terms `a_0..=a_{n_max}` by direct iteration.
pub fn terms(spec: &SequenceSpec, n_max: usize) -> TermVector {
    let k = spec.order();
    let mut values: Vec<BigInt> = spec.initial_terms.iter().take(n_max + 1).cloned().collect();
    values.reserve((n_max + 1).saturating_sub(values.len()));
    // Only nonzero coefficients contribute; Narayana specs have two.
    let active: Vec<(usize, &BigInt)> = spec
        .recurrence_coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect();
    for n in k..=n_max {
        let mut next = BigInt::zero();
        for &(i, c) in &active {
            let prev = &values[n - 1 - i];
            if c.is_one() {
                next += prev;
            } else {
                next += c * prev;
            }
        }
        values.push(next);
    }
    TermVector::new(0, values)
}

/// `a_n` by iterating with a rolling window of `k` values. Memory stays
/// `O(k)` regardless of `n`; with a modulus every value is reduced.
pub fn term_iterative(spec: &SequenceSpec, n: u64, modulus: Option<&BigInt>) -> Result<BigInt> {
    check_modulus(modulus)?;
    let reduce = |v: BigInt| match modulus {
        Some(m) => v.mod_floor(m),
        None => v,
    };
    let k = spec.order();
    if n < k as u64 {
        return Ok(reduce(spec.initial_terms[n as usize].clone()));
    }
    let mut window: VecDeque<BigInt> = spec.initial_terms.iter().cloned().map(reduce).collect();
    for _ in k as u64..=n {
        let mut next = BigInt::zero();
        // window.back() is a_{n-1}, window[k - 1 - i] is a_{n-1-i}.
        for (i, c) in spec.recurrence_coeffs.iter().enumerate() {
            if !c.is_zero() {
                next += c * &window[k - 1 - i];
            }
        }
        window.pop_front();
        window.push_back(reduce(next));
    }
    Ok(window.pop_back().expect("window holds k >= 1 values"))
}

fn check_modulus(modulus: Option<&BigInt>) -> Result<()> {
    match modulus {
        Some(m) if *m < BigInt::from(2) => Err(Error::InvalidModulus(m.to_string())),
        _ => Ok(()),
    }
}

/// Arithmetic in `Z[x] / (x^k - c_1 x^{k-1} - ... - c_k)`, optionally with
/// coefficients reduced modulo an integer.
///
/// An element is a coefficient vector of length `k`, lowest degree first.
/// If `x^n` reduces to `r_0 + r_1 x + ... + r_{k-1} x^{k-1}`, then
/// `a_n = r_0 a_0 + ... + r_{k-1} a_{k-1}`.
#[derive(Debug, Clone)]
pub struct RecurrenceRing<'a> {
    spec: &'a SequenceSpec,
    modulus: Option<BigInt>,
}

impl<'a> RecurrenceRing<'a> {
    pub fn new(spec: &'a SequenceSpec, modulus: Option<&BigInt>) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(RecurrenceRing {
            spec,
            modulus: modulus.cloned(),
        })
    }

    pub fn order(&self) -> usize {
        self.spec.order()
    }

    fn reduce_coeff(&self, v: &mut BigInt) {
        if let Some(m) = &self.modulus {
            *v = v.mod_floor(m);
        }
    }

    pub fn one(&self) -> Vec<BigInt> {
        self.reduce(vec![BigInt::one()])
    }

    pub fn x(&self) -> Vec<BigInt> {
        self.reduce(vec![BigInt::zero(), BigInt::one()])
    }

    /// Reduce an arbitrary polynomial (lowest degree first) into the ring.
    pub fn reduce(&self, mut poly: Vec<BigInt>) -> Vec<BigInt> {
        let k = self.order();
        // x^d = sum_i c_{i+1} x^{d-1-i} for d >= k
        for d in (k..poly.len()).rev() {
            let top = std::mem::take(&mut poly[d]);
            if top.is_zero() {
                continue;
            }
            for (i, c) in self.spec.recurrence_coeffs.iter().enumerate() {
                if !c.is_zero() {
                    let slot = &mut poly[d - 1 - i];
                    *slot += &top * c;
                    self.reduce_coeff(slot);
                }
            }
        }
        poly.resize(k, BigInt::zero());
        for v in poly.iter_mut() {
            self.reduce_coeff(v);
        }
        poly
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return vec![BigInt::zero(); self.order()];
        }
        let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                prod[i + j] += ai * bj;
            }
        }
        for v in prod.iter_mut() {
            self.reduce_coeff(v);
        }
        self.reduce(prod)
    }

    pub fn pow(&self, base: &[BigInt], exp: u64) -> Vec<BigInt> {
        let mut result = self.one();
        if exp == 0 {
            return result;
        }
        let bits = 64 - exp.leading_zeros();
        for bit in (0..bits).rev() {
            result = self.mul(&result, &result);
            if exp >> bit & 1 == 1 {
                result = self.mul(&result, base);
            }
        }
        result
    }

    /// `x^n` reduced modulo the characteristic polynomial.
    pub fn x_pow(&self, n: u64) -> Vec<BigInt> {
        self.pow(&self.x(), n)
    }

    /// Combine a ring element with the initial terms.
    pub fn evaluate(&self, element: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (r, a) in element.iter().zip(&self.spec.initial_terms) {
            acc += r * a;
        }
        self.reduce_coeff(&mut acc);
        acc
    }
}

/// `a_n` (or `a_n mod modulus`) by exponentiating `x` modulo the
/// characteristic polynomial: `O(k^2 log n)` coefficient multiplications.
pub fn term_at(spec: &SequenceSpec, n: u64, modulus: Option<&BigInt>) -> Result<BigInt> {
    let ring = RecurrenceRing::new(spec, modulus)?;
    if n < spec.order() as u64 {
        let mut v = spec.initial_terms[n as usize].clone();
        ring.reduce_coeff(&mut v);
        return Ok(v);
    }
    Ok(ring.evaluate(&ring.x_pow(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &TermVector) -> Vec<i64> {
        v.values.iter().map(|b| i64::try_from(b).unwrap()).collect()
    }

    // Independent oracle: plain i128 recursion straight from the definition.
    fn oracle(coeffs: &[i128], initial: &[i128], n_max: usize) -> Vec<i128> {
        let k = coeffs.len();
        let mut out: Vec<i128> = initial.iter().copied().take(n_max + 1).collect();
        while out.len() <= n_max {
            let n = out.len();
            out.push((0..k).map(|i| coeffs[i] * out[n - 1 - i]).sum());
        }
        out
    }

    #[test]
    fn narayana_spec_shapes() {
        let s3 = narayana_spec(3).unwrap();
        assert_eq!(
            s3.initial_terms(),
            &[0.into(), 1.into(), 1.into()] as &[BigInt]
        );
        assert_eq!(
            s3.recurrence_coeffs(),
            &[1.into(), 0.into(), 1.into()] as &[BigInt]
        );

        let s6 = narayana_spec(6).unwrap();
        let init: Vec<i64> = s6
            .initial_terms()
            .iter()
            .map(|b| i64::try_from(b).unwrap())
            .collect();
        let co: Vec<i64> = s6
            .recurrence_coeffs()
            .iter()
            .map(|b| i64::try_from(b).unwrap())
            .collect();
        assert_eq!(init, [0, 1, 1, 1, 1, 1]);
        assert_eq!(co, [1, 0, 0, 0, 0, 1]);

        assert_eq!(narayana_spec(2).unwrap(), fibonacci_spec());
    }

    #[test]
    fn narayana_spec_rejects_small_k() {
        assert_eq!(narayana_spec(1), Err(Error::InvalidOrder(1, 2)));
        assert_eq!(narayana_spec(0), Err(Error::InvalidOrder(0, 2)));
    }

    #[test]
    fn spec_length_checks() {
        let err = SequenceSpec::new("bad", vec![1.into(), 1.into()], vec![0.into()]);
        assert!(matches!(err, Err(Error::LengthMismatch { order: 2, .. })));
        assert!(SequenceSpec::new("empty", vec![], vec![]).is_err());
    }

    #[test]
    fn named_sequences() {
        assert_eq!(ints(&terms(&lucas_spec(), 6)), [2, 1, 3, 4, 7, 11, 18]);
        assert_eq!(
            ints(&terms(&rabinowitz_spec(), 7)),
            [0, 0, 1, 1, 1, 2, 3, 4]
        );
        assert_eq!(ints(&terms(&fibonacci_spec(), 5)), [0, 1, 1, 2, 3, 5]);
    }

    #[test]
    fn narayana_terms_match_oracle() {
        assert_eq!(
            oracle(&[1, 0, 1], &[0, 1, 1], 10),
            [0, 1, 1, 1, 2, 3, 4, 6, 9, 13, 19]
        );
        assert_eq!(
            ints(&terms(&narayana_spec(3).unwrap(), 10)),
            [0, 1, 1, 1, 2, 3, 4, 6, 9, 13, 19]
        );
        assert_eq!(
            oracle(&[1, 0, 0, 1], &[0, 1, 1, 1], 10),
            [0, 1, 1, 1, 1, 2, 3, 4, 5, 7, 10]
        );
        assert_eq!(
            ints(&terms(&narayana_spec(4).unwrap(), 10)),
            [0, 1, 1, 1, 1, 2, 3, 4, 5, 7, 10]
        );
    }

    #[test]
    fn n_max_zero_and_short_requests() {
        let s = narayana_spec(5).unwrap();
        assert_eq!(ints(&terms(&s, 0)), [0]);
        assert_eq!(ints(&terms(&s, 2)), [0, 1, 1]);
        assert_eq!(ints(&terms(&lucas_spec(), 0)), [2]);
    }

    #[test]
    fn term_at_examples() {
        let s3 = narayana_spec(3).unwrap();
        assert_eq!(term_at(&s3, 10, None).unwrap(), 19.into());
        assert_eq!(term_at(&s3, 0, None).unwrap(), 0.into());
        assert_eq!(term_at(&lucas_spec(), 0, None).unwrap(), 2.into());
        assert_eq!(term_at(&fibonacci_spec(), 20, None).unwrap(), 6765.into());
        assert_eq!(
            term_iterative(&fibonacci_spec(), 20, None).unwrap(),
            6765.into()
        );
    }

    #[test]
    fn modulus_validation() {
        let s = fibonacci_spec();
        assert!(term_at(&s, 5, Some(&BigInt::from(1))).is_err());
        assert!(term_iterative(&s, 5, Some(&BigInt::from(0))).is_err());
        // composite moduli are fine
        assert_eq!(
            term_at(&s, 20, Some(&BigInt::from(100))).unwrap(),
            65.into()
        );
    }

    #[test]
    fn order_one_recurrence() {
        let pow3 = SequenceSpec::new("pow3", vec![3.into()], vec![1.into()]).unwrap();
        assert_eq!(term_at(&pow3, 5, None).unwrap(), 243.into());
        assert_eq!(ints(&terms(&pow3, 3)), [1, 3, 9, 27]);
    }

    #[test]
    fn narayana_k_term_is_one() {
        for k in 2..=20 {
            let t = terms(&narayana_spec(k).unwrap(), k);
            assert!(t.values[k].is_one(), "k = {k}");
        }
    }

    #[test]
    fn rabinowitz_is_shifted_narayana() {
        let x = terms(&rabinowitz_spec(), 300);
        let r = terms(&narayana_spec(3).unwrap(), 300);
        for n in 1..=300 {
            assert_eq!(x.values[n], r.values[n - 1]);
        }
    }

    #[test]
    fn term_vector_get_bounds() {
        let t = TermVector::new(3, vec![1.into(), 2.into()]);
        assert_eq!(t.get(4).unwrap(), &BigInt::from(2));
        assert!(matches!(
            t.get(2),
            Err(Error::IndexOutOfRange { index: 2, .. })
        ));
        assert!(t.get(5).is_err());
        assert_eq!(t.end_index(), 4);
    }

    fn arb_spec() -> impl Strategy<Value = SequenceSpec> {
        (1usize..=6).prop_flat_map(|k| {
            (
                proptest::collection::vec(-3i64..=3, k),
                proptest::collection::vec(-5i64..=5, k),
            )
                .prop_map(|(c, a)| {
                    SequenceSpec::new(
                        "random",
                        c.into_iter().map(BigInt::from).collect(),
                        a.into_iter().map(BigInt::from).collect(),
                    )
                    .unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn fast_term_matches_iteration(spec in arb_spec(), n_max in 0usize..120) {
            let t = terms(&spec, n_max);
            for n in 0..=n_max {
                prop_assert_eq!(&term_at(&spec, n as u64, None).unwrap(), &t.values[n]);
            }
        }

        #[test]
        fn modular_term_matches_reduction(
            spec in arb_spec(),
            n in 0u64..400,
            p in prop::sample::select(vec![2u32, 3, 7, 97, 65_537, 1_000_000_007]),
        ) {
            let m = BigInt::from(p);
            let exact = term_at(&spec, n, None).unwrap();
            prop_assert_eq!(term_at(&spec, n, Some(&m)).unwrap(), exact.mod_floor(&m));
            prop_assert_eq!(term_iterative(&spec, n, Some(&m)).unwrap(), exact.mod_floor(&m));
        }

        #[test]
        fn narayana_is_nondecreasing(k in 2usize..12, n_max in 0usize..200) {
            let spec = narayana_spec(k).unwrap();
            prop_assert!(spec.is_nonnegative());
            let t = terms(&spec, n_max);
            for w in t.values.windows(2) {
                prop_assert!(w[0] <= w[1]);
            }
        }
    }
}
