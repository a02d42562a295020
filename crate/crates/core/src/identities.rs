//! Closed-form self-convolution identities and the brute-force Cauchy oracle.
//!
//! Every identity has the shape
//!
//! ```text
//! D * sum_{i=0}^{n} a_i a_{n-i} = sum_terms coeff * (alpha n + beta) * seq(n + offset)
//! ```
//!
//! where the convolution always runs over the form's first sequence and each
//! right-hand term may reference any of the form's sequences.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Zero};

use crate::error::{Error, Result};
use crate::sequences::{
    fibonacci_spec, lucas_spec, narayana_spec, rabinowitz_spec, terms, SequenceSpec, TermVector,
};

/// One summand `coeff * (alpha n + beta) * seq_role(n + offset)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RhsTerm {
    pub coeff: BigInt,
    /// `(alpha, beta)`, the weight `alpha n + beta`.
    pub n_weight: (i64, i64),
    pub index_offset: i64,
    /// Index into [`IdentityForm::sequences`].
    pub role: usize,
}

impl RhsTerm {
    pub fn new(coeff: impl Into<BigInt>, n_weight: (i64, i64), index_offset: i64) -> Self {
        RhsTerm {
            coeff: coeff.into(),
            n_weight,
            index_offset,
            role: 0,
        }
    }

    pub fn with_role(mut self, role: usize) -> Self {
        self.role = role;
        self
    }

    fn weight_at(&self, n: usize) -> BigInt {
        let (alpha, beta) = self.n_weight;
        BigInt::from(alpha) * BigInt::from(n) + BigInt::from(beta)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityForm {
    pub name: String,
    /// Step count for Narayana-family forms, `None` for the generic catalog
    /// entries over Fibonacci/Lucas/Rabinowitz numbers.
    pub k: Option<usize>,
    pub lhs_multiplier: BigInt,
    pub rhs_terms: Vec<RhsTerm>,
    /// `sequences[0]` is the convolved sequence.
    pub sequences: Vec<SequenceSpec>,
    pub min_n: usize,
    pub notes: Option<String>,
}

impl IdentityForm {
    pub fn convolved(&self) -> &SequenceSpec {
        &self.sequences[0]
    }

    /// Largest `n + offset` touched when evaluating at `n`.
    pub fn max_index(&self, n: usize) -> i64 {
        self.rhs_terms
            .iter()
            .map(|t| n as i64 + t.index_offset)
            .max()
            .unwrap_or(n as i64)
    }

    /// Terms merged by `(role, offset, weight)` and sorted, so two forms that
    /// list the same summands in a different order compare equal.
    pub fn normalized_terms(&self) -> Vec<RhsTerm> {
        let mut out: Vec<RhsTerm> = Vec::new();
        let mut sorted = self.rhs_terms.clone();
        sorted.sort_by_key(|t| (t.role, t.index_offset, t.n_weight));
        for t in sorted {
            match out.last_mut() {
                Some(last)
                    if last.role == t.role
                        && last.index_offset == t.index_offset
                        && last.n_weight == t.n_weight =>
                {
                    last.coeff += t.coeff
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        out
    }

    /// Terms for every sequence the form uses, enough to evaluate at `n_max`.
    pub fn term_vectors(&self, n_max: usize) -> Vec<TermVector> {
        let top = self.max_index(n_max).max(n_max as i64).max(0) as usize;
        self.sequences.iter().map(|s| terms(s, top)).collect()
    }
}

/// `D_k = k^k + (k-1)^{k-1}`.
pub fn narayana_constant(k: usize) -> BigInt {
    let k_big = BigInt::from(k);
    let km1 = BigInt::from(k - 1);
    Pow::pow(&k_big, k as u32) + Pow::pow(&km1, (k - 1) as u32)
}

/// The general k-step identity:
/// `D_k conv = k^{k-1}(n+k-2) R_{n+k-1} - sum_{j=0}^{k-2} k^j (k-1)^{k-2-j} (n+k+j-1) R_{n+j}`.
pub fn theorem1_form(k: usize) -> Result<IdentityForm> {
    let spec = narayana_spec(k)?;
    let kk = k as i64;
    let k_big = BigInt::from(k);
    let km1 = BigInt::from(k - 1);
    let mut rhs_terms = vec![RhsTerm::new(
        Pow::pow(&k_big, (k - 1) as u32),
        (1, kk - 2),
        kk - 1,
    )];
    for j in 0..=k - 2 {
        let c = Pow::pow(&k_big, j as u32) * Pow::pow(&km1, (k - 2 - j) as u32);
        rhs_terms.push(RhsTerm::new(-c, (1, kk + j as i64 - 1), j as i64));
    }
    Ok(IdentityForm {
        name: format!("theorem1-k{k}"),
        k: Some(k),
        lhs_multiplier: narayana_constant(k),
        rhs_terms,
        sequences: vec![spec],
        min_n: 0,
        notes: None,
    })
}

fn small_form(
    name: &str,
    k: Option<usize>,
    d: i64,
    sequences: Vec<SequenceSpec>,
    rhs: &[(i64, (i64, i64), i64, usize)],
    min_n: usize,
) -> IdentityForm {
    IdentityForm {
        name: name.to_string(),
        k,
        lhs_multiplier: d.into(),
        rhs_terms: rhs
            .iter()
            .map(|&(c, w, off, role)| RhsTerm::new(c, w, off).with_role(role))
            .collect(),
        sequences,
        min_n,
        notes: None,
    }
}

/// The hand-entered identities: Fibonacci (four variants), Lucas,
/// Rabinowitz, the printed 3-, 4- and 6-step Narayana forms.
pub fn fixed_forms() -> Vec<IdentityForm> {
    let fib = fibonacci_spec;
    let luc = lucas_spec;
    let mut forms = vec![
        // 5 conv F = 2n F_{n+1} - (n+1) F_n
        small_form(
            "fib-a",
            None,
            5,
            vec![fib()],
            &[(2, (1, 0), 1, 0), (-1, (1, 1), 0, 0)],
            0,
        ),
        // (n-1) F_n + 2n F_{n-1}
        small_form(
            "fib-b",
            None,
            5,
            vec![fib()],
            &[(1, (1, -1), 0, 0), (2, (1, 0), -1, 0)],
            1,
        ),
        // (n-1) F_{n+1} + (n+1) F_{n-1}
        small_form(
            "fib-c",
            None,
            5,
            vec![fib()],
            &[(1, (1, -1), 1, 0), (1, (1, 1), -1, 0)],
            1,
        ),
        // n L_n - F_n
        small_form(
            "fib-lucas",
            None,
            5,
            vec![fib(), luc()],
            &[(1, (1, 0), 0, 1), (-1, (0, 1), 0, 0)],
            0,
        ),
        // conv L = (n+1) L_n + 2 F_{n+1}
        small_form(
            "lucas",
            None,
            1,
            vec![luc(), fib()],
            &[(1, (1, 1), 0, 0), (2, (0, 1), 1, 1)],
            0,
        ),
        // 31 conv X = 6(n-2) X_{n+1} - 2n X_{n-1} + 3(n+1) X_{n-2}
        small_form(
            "rabinowitz",
            None,
            31,
            vec![rabinowitz_spec()],
            &[(6, (1, -2), 1, 0), (-2, (1, 0), -1, 0), (3, (1, 1), -2, 0)],
            2,
        ),
        // 31 conv R = 9(n+1) R_{n+2} - 3(n+3) R_{n+1} - 2(n+2) R_n
        small_form(
            "narayana3",
            Some(3),
            31,
            vec![narayana_spec(3).expect("k = 3")],
            &[(9, (1, 1), 2, 0), (-3, (1, 3), 1, 0), (-2, (1, 2), 0, 0)],
            0,
        ),
        // 283 conv S = 64(n+2) S_{n+3} - 16(n+5) S_{n+2} - 12(n+4) S_{n+1} - 9(n+3) S_n
        small_form(
            "narayana4",
            Some(4),
            283,
            vec![narayana_spec(4).expect("k = 4")],
            &[
                (64, (1, 2), 3, 0),
                (-16, (1, 5), 2, 0),
                (-12, (1, 4), 1, 0),
                (-9, (1, 3), 0, 0),
            ],
            0,
        ),
    ];

    // (6^6 + 5^5) conv U = 6^5 (n+4) U_{n+5} - sum_{j=0}^{4} 6^j 5^{4-j} (n+5+j) U_{n+j}
    let mut six = small_form(
        "narayana6",
        Some(6),
        6i64.pow(6) + 5i64.pow(5),
        vec![narayana_spec(6).expect("k = 6")],
        &[(6i64.pow(5), (1, 4), 5, 0)],
        0,
    );
    for j in 0..=4u32 {
        let c = 6i64.pow(j) * 5i64.pow(4 - j);
        six.rhs_terms
            .push(RhsTerm::new(-c, (1, 5 + j as i64), j as i64));
    }
    six.notes = Some(
        "printed summand reads 6^i 5^(4-i) under a sum over j; stored as 6^j 5^(4-j)".to_string(),
    );
    forms.push(six);
    forms
}

/// All fixed forms followed by `theorem1_form(k)` for each `k` in `k_range`.
pub fn catalog(k_range: RangeInclusive<usize>) -> Result<Vec<IdentityForm>> {
    let mut forms = fixed_forms();
    for k in k_range {
        forms.push(theorem1_form(k)?);
    }
    Ok(forms)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvolutionValue {
    pub n: usize,
    pub value: BigInt,
}

/// `sum_{i=0}^{n} a_i a_{n-i}` for `0 <= n <= n_max`, computed directly.
pub fn self_convolution(spec: &SequenceSpec, n_max: usize) -> Vec<ConvolutionValue> {
    convolve_terms(&terms(spec, n_max), n_max)
}

/// Same as [`self_convolution`] over precomputed terms starting at index 0.
///
/// Panics if `t` does not cover `0..=n_max`.
pub fn convolve_terms(t: &TermVector, n_max: usize) -> Vec<ConvolutionValue> {
    assert_eq!(t.start_index, 0, "convolution needs terms from index 0");
    assert!(t.len() > n_max, "terms end before n_max = {n_max}");
    let a = &t.values;
    (0..=n_max)
        .map(|n| {
            // symmetric pairs counted once and doubled
            let mut value = BigInt::zero();
            for i in 0..n.div_ceil(2) {
                value += &a[i] * &a[n - i];
            }
            value *= 2;
            if n % 2 == 0 {
                value += &a[n / 2] * &a[n / 2];
            }
            ConvolutionValue { n, value }
        })
        .collect()
}

/// Right-hand side of `form` at `n`, before dividing by the multiplier.
/// `terms[r]` must hold values of `form.sequences[r]`.
pub fn evaluate_rhs(form: &IdentityForm, terms: &[TermVector], n: usize) -> Result<BigInt> {
    if n < form.min_n {
        return Err(Error::BelowMinimum {
            form: form.name.clone(),
            n,
            min_n: form.min_n,
        });
    }
    if terms.len() < form.sequences.len() {
        return Err(Error::MissingTerms {
            form: form.name.clone(),
            needed: form.sequences.len(),
            got: terms.len(),
        });
    }
    let mut acc = BigInt::zero();
    for t in &form.rhs_terms {
        let value = terms[t.role].get(n as i64 + t.index_offset)?;
        if value.is_zero() {
            continue;
        }
        acc += &t.coeff * t.weight_at(n) * value;
    }
    Ok(acc)
}

/// `evaluate_rhs / D`, failing instead of rounding when `D` does not divide.
pub fn closed_form_convolution(
    form: &IdentityForm,
    terms: &[TermVector],
    n: usize,
) -> Result<BigInt> {
    let rhs = evaluate_rhs(form, terms, n)?;
    let (q, r) = rhs.div_rem(&form.lhs_multiplier);
    if !r.is_zero() {
        return Err(Error::NotDivisible {
            value: rhs.to_string(),
            divisor: form.lhs_multiplier.to_string(),
        });
    }
    Ok(q)
}
