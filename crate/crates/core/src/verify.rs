//! Verification campaigns: identity grids, lemma checks and the
//! generating-function reconstruction, collected into a [`VerificationReport`].
//!
//! Grid cells are independent. They may be evaluated on several threads, but
//! records are always assembled in a fixed order, so identical configurations
//! produce identical reports apart from elapsed times.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::identities::{convolve_terms, evaluate_rhs, fixed_forms, theorem1_form, IdentityForm};
use crate::sequences::{narayana_spec, term_at, terms, TermVector};
use crate::series::gf::ProofSeries;
use crate::series::LaurentSeries;

/// Check families accepted in [`CampaignConfig::forms`] besides individual
/// catalog form names.
pub const CHECK_FAMILIES: [&str; 5] = ["theorem1", "catalog", "proof", "lemma1", "lemma2"];

/// The geometric-sum formulas are exercised at these `theta = num/den`.
pub const LEMMA1_THETAS: [(i64, i64); 6] = [(2, 1), (3, 1), (1, 2), (3, 2), (-1, 1), (5, 7)];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CampaignConfig {
    pub k_min: usize,
    pub k_max: usize,
    pub n_max: usize,
    pub series_order: i64,
    pub lemma_m_max: usize,
    /// Selected families or catalog form names; empty selects everything.
    pub forms: Vec<String>,
    #[serde(serialize_with = "opt_display")]
    pub modulus: Option<BigInt>,
    /// Worker threads; `None` uses every available core.
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            k_min: 2,
            k_max: 8,
            n_max: 200,
            series_order: 200,
            lemma_m_max: 64,
            forms: Vec::new(),
            modulus: None,
            jobs: None,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_min < 2 || self.k_min > self.k_max {
            return Err(Error::InvalidKRange(self.k_min, self.k_max));
        }
        if let Some(m) = &self.modulus {
            if *m < BigInt::from(2) {
                return Err(Error::InvalidModulus(m.to_string()));
            }
        }
        let names: Vec<String> = fixed_forms().into_iter().map(|f| f.name).collect();
        for f in &self.forms {
            if !CHECK_FAMILIES.contains(&f.as_str()) && !names.contains(f) {
                return Err(Error::UnknownForm(f.clone()));
            }
        }
        Ok(())
    }

    pub fn k_values(&self) -> impl Iterator<Item = usize> + Clone {
        self.k_min..=self.k_max
    }

    fn selects(&self, family: &str) -> bool {
        self.forms.is_empty() || self.forms.iter().any(|f| f == family)
    }

    fn selected_catalog(&self) -> Vec<IdentityForm> {
        let all = self.selects("catalog");
        fixed_forms()
            .into_iter()
            .filter(|f| all || self.forms.contains(&f.name))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub inputs: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub first_counterexample: Option<Counterexample>,
    pub cells_checked: u64,
    #[serde(rename = "elapsed_seconds", serialize_with = "secs")]
    pub elapsed: Duration,
}

fn secs<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

fn opt_display<S: Serializer, T: fmt::Display>(
    v: &Option<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// Accumulates cells for one record and keeps the first failure.
pub(crate) struct RecordBuilder {
    check_id: String,
    params: BTreeMap<String, String>,
    counterexample: Option<Counterexample>,
    pub(crate) cells: u64,
    started: Instant,
}

impl RecordBuilder {
    pub(crate) fn new(check_id: &str) -> Self {
        RecordBuilder {
            check_id: check_id.to_string(),
            params: BTreeMap::new(),
            counterexample: None,
            cells: 0,
            started: Instant::now(),
        }
    }

    pub(crate) fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Record one cell; returns false once a counterexample is held.
    pub(crate) fn cell<L: fmt::Display, R: fmt::Display>(
        &mut self,
        ok: bool,
        inputs: &[(&str, String)],
        lhs: L,
        rhs: R,
    ) -> bool {
        self.cells += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(Counterexample {
                inputs: inputs
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.clone()))
                    .collect(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
        self.counterexample.is_none()
    }

    pub(crate) fn fail_with(&mut self, inputs: &[(&str, String)], message: impl fmt::Display) {
        self.cell(false, inputs, message, "-");
    }

    pub(crate) fn finish(self) -> CheckRecord {
        CheckRecord {
            check_id: self.check_id,
            params: self.params,
            status: if self.counterexample.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            first_counterexample: self.counterexample,
            cells_checked: self.cells,
            elapsed: self.started.elapsed(),
        }
    }
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// `check_id key=value ... status=pass cells=N elapsed_ms=T [counterexample ...]`
    pub fn to_line(&self) -> String {
        let mut line = self.check_id.clone();
        for (k, v) in &self.params {
            line.push_str(&format!(" {k}={v}"));
        }
        line.push_str(&format!(
            " status={} cells={} elapsed_ms={:.3}",
            self.status,
            self.cells_checked,
            self.elapsed.as_secs_f64() * 1e3
        ));
        if let Some(c) = &self.first_counterexample {
            for (k, v) in &c.inputs {
                line.push_str(&format!(" at.{k}={v}"));
            }
            line.push_str(&format!(" lhs={} rhs={}", c.lhs, c.rhs));
        }
        line
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub config: Option<CampaignConfig>,
    pub status: Status,
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn from_records(config: Option<CampaignConfig>, records: Vec<CheckRecord>) -> Self {
        let status = if records.iter().all(CheckRecord::passed) {
            Status::Pass
        } else {
            Status::Fail
        };
        VerificationReport {
            config,
            status,
            records,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// First failing record, if any.
    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.records.iter().find(|r| !r.passed())
    }

    /// One line per record followed by `overall status=...`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_line());
            out.push('\n');
        }
        out.push_str(&format!(
            "overall status={} records={}\n",
            self.status,
            self.records.len()
        ));
        out
    }
}

fn rpow(base: &BigRational, exp: i64) -> BigRational {
    let p = Pow::pow(base, exp.unsigned_abs() as u32);
    if exp < 0 {
        p.recip()
    } else {
        p
    }
}

/// Both finite-sum formulas, for every `0 <= m <= m_max`:
/// `sum theta^i = (theta^{m+1} - 1)/(theta - 1)` and
/// `sum i theta^i = theta (1 - theta^m)/(theta - 1)^2 + m theta^{m+1}/(theta - 1)`.
pub fn check_lemma1(theta_num: i64, theta_den: i64, m_max: usize) -> Result<CheckRecord> {
    if theta_den == 0 || theta_num == 0 || theta_num == theta_den {
        return Err(Error::ExcludedTheta(format!("{theta_num}/{theta_den}")));
    }
    let theta = BigRational::new(theta_num.into(), theta_den.into());
    let one = BigRational::one();
    let tm1 = &theta - &one;
    let mut rec = RecordBuilder::new("lemma1")
        .param("theta", &theta)
        .param("m_max", m_max);

    let mut power = one.clone(); // theta^m
    let mut plain = BigRational::zero();
    let mut weighted = BigRational::zero();
    for m in 0..=m_max {
        plain += &power;
        weighted += &power * BigRational::from_integer(m.into());
        let next = &power * &theta; // theta^{m+1}
        let geometric = (&next - &one) / &tm1;
        let arith_geo = &theta * (&one - &power) / (&tm1 * &tm1)
            + BigRational::from_integer(m.into()) * &next / &tm1;
        let at = |which: &str| [("m", m.to_string()), ("sum", which.to_string())];
        if !rec.cell(plain == geometric, &at("theta^i"), &plain, &geometric) {
            break;
        }
        if !rec.cell(
            weighted == arith_geo,
            &at("i*theta^i"),
            &weighted,
            &arith_geo,
        ) {
            break;
        }
        power = next;
    }
    Ok(rec.finish())
}

/// Left side of the weighted-sum identity
/// `k^{k-2-m} (k-1)^m sum_{i=0}^{m} (k/(k-1))^i (k+i) = k^{k-1} (m+1)`,
/// evaluated for `m = 0..=m_max` as exact rationals.
pub fn lemma2_lhs_values(k: usize, m_max: usize) -> Vec<BigRational> {
    let kq = BigRational::from_integer(k.into());
    let km1 = BigRational::from_integer((k - 1).into());
    let ratio = &kq / &km1;
    let mut sum = BigRational::zero();
    let mut ratio_pow = BigRational::one();
    (0..=m_max)
        .map(|m| {
            sum += &ratio_pow * BigRational::from_integer((k + m).into());
            ratio_pow *= &ratio;
            rpow(&kq, k as i64 - 2 - m as i64) * rpow(&km1, m as i64) * &sum
        })
        .collect()
}

fn lemma2_grid(
    check_id: &str,
    k_values: impl Iterator<Item = usize>,
    m_limit: impl Fn(usize) -> Option<usize>,
) -> CheckRecord {
    let ks: Vec<usize> = k_values.collect();
    let mut rec = RecordBuilder::new(check_id)
        .param("k_min", ks.first().copied().unwrap_or(0))
        .param("k_max", ks.last().copied().unwrap_or(0));
    'outer: for k in ks {
        let Some(m_max) = m_limit(k) else { continue };
        let target_base = Pow::pow(&BigInt::from(k), (k - 1) as u32);
        for (m, lhs) in lemma2_lhs_values(k, m_max).into_iter().enumerate() {
            let rhs = BigRational::from_integer(&target_base * BigInt::from(m + 1));
            if !rec.cell(
                lhs == rhs,
                &[("k", k.to_string()), ("m", m.to_string())],
                &lhs,
                &rhs,
            ) {
                break 'outer;
            }
        }
    }
    rec.finish()
}

/// The weighted-sum identity over `k in k_range`, `0 <= m <= m_max`.
pub fn check_lemma2(k_range: std::ops::RangeInclusive<usize>, m_max: usize) -> CheckRecord {
    let mut r = lemma2_grid("lemma2", k_range, |_| Some(m_max));
    r.params.insert("m_max".into(), m_max.to_string());
    r
}

/// The weighted-sum identity over the range the generating-function argument uses,
/// `0 <= m <= k - 4` (empty for `k < 4`).
pub fn check_lemma2_proof_range(k_range: std::ops::RangeInclusive<usize>) -> CheckRecord {
    lemma2_grid("lemma2-proof-range", k_range, |k| k.checked_sub(4))
}

/// `D * conv(n) == rhs(n)` for `min_n <= n <= n_max`, with the brute-force
/// convolution as the authoritative left side.
pub fn check_form(check_id: &str, form: &IdentityForm, n_max: usize) -> CheckRecord {
    let mut rec = RecordBuilder::new(check_id)
        .param("form", &form.name)
        .param("n_max", n_max);
    if let Some(k) = form.k {
        rec = rec.param("k", k);
    }
    let tv = form.term_vectors(n_max);
    let conv = convolve_terms(&tv[0], n_max);
    for c in conv.iter().skip(form.min_n) {
        let n = c.n;
        let lhs = &form.lhs_multiplier * &c.value;
        match evaluate_rhs(form, &tv, n) {
            Ok(rhs) => {
                if !rec.cell(lhs == rhs, &[("n", n.to_string())], &lhs, &rhs) {
                    break;
                }
            }
            Err(e) => {
                rec.fail_with(&[("n", n.to_string())], e);
                break;
            }
        }
    }
    rec.finish()
}

/// Re-checks a form's grid modulo `modulus` using terms from the modular
/// fast evaluator, and compares each residue with the exact value reduced.
pub fn check_form_modular(form: &IdentityForm, n_max: usize, modulus: &BigInt) -> CheckRecord {
    let mut rec = RecordBuilder::new("modular")
        .param("form", &form.name)
        .param("n_max", n_max)
        .param("modulus", modulus);
    if let Some(k) = form.k {
        rec = rec.param("k", k);
    }
    let exact = form.term_vectors(n_max);
    let mut modular = Vec::with_capacity(exact.len());
    for (spec, tv) in form.sequences.iter().zip(&exact) {
        let mut values = Vec::with_capacity(tv.len());
        for (i, v) in tv.iter() {
            match term_at(spec, i as u64, Some(modulus)) {
                Ok(r) => {
                    let want = v.mod_floor(modulus);
                    if !rec.cell(
                        r == want,
                        &[
                            ("sequence", spec.name().to_string()),
                            ("index", i.to_string()),
                        ],
                        &r,
                        &want,
                    ) {
                        return rec.finish();
                    }
                    values.push(r);
                }
                Err(e) => {
                    rec.fail_with(&[("index", i.to_string())], e);
                    return rec.finish();
                }
            }
        }
        modular.push(TermVector::new(0, values));
    }
    let conv_mod = convolve_terms(&modular[0], n_max);
    let conv_exact = convolve_terms(&exact[0], n_max);
    let d = &form.lhs_multiplier;
    for n in form.min_n..=n_max {
        let lhs = (d * &conv_mod[n].value).mod_floor(modulus);
        let rhs = match evaluate_rhs(form, &modular, n) {
            Ok(v) => v.mod_floor(modulus),
            Err(e) => {
                rec.fail_with(&[("n", n.to_string())], e);
                break;
            }
        };
        let exact_lhs = (d * &conv_exact[n].value).mod_floor(modulus);
        if !rec.cell(lhs == rhs, &[("n", n.to_string())], &lhs, &rhs)
            || !rec.cell(
                lhs == exact_lhs,
                &[("n", n.to_string()), ("vs", "exact".into())],
                &lhs,
                &exact_lhs,
            )
        {
            break;
        }
    }
    rec.finish()
}

fn pool(jobs: Option<usize>) -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j.max(1));
    }
    b.build().expect("thread pool")
}

/// One record per `k`: the general k-step identity at `0 <= n <= n_max`.
pub fn check_theorem1(config: &CampaignConfig) -> Result<Vec<CheckRecord>> {
    config.validate()?;
    let forms: Vec<IdentityForm> = config
        .k_values()
        .map(theorem1_form)
        .collect::<Result<_>>()?;
    Ok(pool(config.jobs).install(|| {
        forms
            .par_iter()
            .map(|f| check_form("theorem1", f, config.n_max))
            .collect()
    }))
}

/// Grid checks for the hand-entered catalog forms selected by the config.
pub fn check_catalog(config: &CampaignConfig) -> Result<Vec<CheckRecord>> {
    config.validate()?;
    let forms = config.selected_catalog();
    Ok(pool(config.jobs).install(|| {
        forms
            .par_iter()
            .map(|f| check_form("catalog", f, config.n_max))
            .collect()
    }))
}

fn compare_series(
    check_id: &str,
    k: usize,
    order: i64,
    left: &LaurentSeries,
    right: &LaurentSeries,
) -> CheckRecord {
    let mut rec = RecordBuilder::new(check_id)
        .param("k", k)
        .param("order", order);
    let (lo, hi) = left.common_range(right);
    if hi < order {
        rec.fail_with(
            &[("order", order.to_string())],
            format!("series only determined through x^{hi}"),
        );
        return rec.finish();
    }
    for e in lo..=hi {
        let l = left.coeff(e).expect("in range");
        let r = right.coeff(e).expect("in range");
        if !rec.cell(l == r, &[("exp", e.to_string())], &l, &r) {
            break;
        }
    }
    rec.finish()
}

fn integrality(k: usize, order: i64, p: &ProofSeries) -> CheckRecord {
    let mut rec = RecordBuilder::new("proof-integral")
        .param("k", k)
        .param("order", order);
    for (name, s) in [
        ("gf", &p.gf),
        ("A", &p.a),
        ("Bclosed", &p.b_closed),
        ("Cclosed", &p.c_closed),
    ] {
        rec.cells += s.coeffs().len() as u64;
        if let Err(e) = s.integer_coeffs() {
            rec.fail_with(&[("series", name.to_string())], e);
            break;
        }
    }
    rec.finish()
}

fn series_of_ints(values: impl Iterator<Item = BigInt>, order: i64) -> LaurentSeries {
    LaurentSeries::new(0, values.map(BigRational::from_integer).collect(), order)
}

/// Reconstructs the generating-function argument for one `k`.
pub fn proof_records(k: usize, order: i64) -> Result<Vec<CheckRecord>> {
    let spec = narayana_spec(k)?;
    let n = order.max(0) as usize;
    let p = ProofSeries::build(k, order);
    let t = terms(&spec, n);
    let conv = convolve_terms(&t, n);
    let d = BigRational::from_integer(crate::identities::narayana_constant(k));
    let iter_gf = series_of_ints(t.values.iter().cloned(), order);
    let oracle_a = series_of_ints(conv.iter().map(|c| c.value.clone()), order).scale(&d);
    Ok(vec![
        compare_series("proof-gf", k, order, &p.gf, &iter_gf),
        compare_series("proof-b", k, order, &p.b_def, &p.b_closed),
        compare_series("proof-c", k, order, &p.c_def, &p.c_closed),
        compare_series("proof-cancel", k, order, &(&p.b_closed - &p.c_closed), &p.a),
        compare_series("proof-a-conv", k, order, &p.a, &oracle_a),
        integrality(k, order, &p),
    ])
}

pub fn check_proof_reconstruction(config: &CampaignConfig) -> Result<Vec<CheckRecord>> {
    config.validate()?;
    let ks: Vec<usize> = config.k_values().collect();
    let per_k: Vec<Result<Vec<CheckRecord>>> = pool(config.jobs).install(|| {
        ks.par_iter()
            .map(|&k| proof_records(k, config.series_order))
            .collect()
    });
    let mut out = Vec::new();
    for r in per_k {
        out.extend(r?);
    }
    Ok(out)
}

/// Every selected family, in the order theorem1, catalog, proof, lemma1,
/// lemma2, then modular re-checks when a modulus is configured.
pub fn run_campaign(config: &CampaignConfig) -> Result<VerificationReport> {
    config.validate()?;
    let mut records = Vec::new();
    if config.selects("theorem1") {
        records.extend(check_theorem1(config)?);
    }
    if config.selects("catalog")
        || config
            .forms
            .iter()
            .any(|f| !CHECK_FAMILIES.contains(&f.as_str()))
    {
        records.extend(check_catalog(config)?);
    }
    if config.selects("proof") {
        records.extend(check_proof_reconstruction(config)?);
    }
    if config.selects("lemma1") {
        for (num, den) in LEMMA1_THETAS {
            records.push(check_lemma1(num, den, config.lemma_m_max)?);
        }
    }
    if config.selects("lemma2") {
        records.push(check_lemma2_proof_range(config.k_min..=config.k_max));
        records.push(check_lemma2(
            config.k_min..=config.k_max,
            config.lemma_m_max,
        ));
    }
    if let Some(m) = &config.modulus {
        let mut forms: Vec<IdentityForm> = Vec::new();
        if config.selects("theorem1") {
            for k in config.k_values() {
                forms.push(theorem1_form(k)?);
            }
        }
        if config.selects("catalog") {
            forms.extend(config.selected_catalog());
        }
        let modular: Vec<CheckRecord> = pool(config.jobs).install(|| {
            forms
                .par_iter()
                .map(|f| check_form_modular(f, config.n_max, m))
                .collect()
        });
        records.extend(modular);
    }
    Ok(VerificationReport::from_records(
        Some(config.clone()),
        records,
    ))
}

/// Which coefficient of a form a mutation touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    Multiplier,
    Term(usize),
}

/// The form with one coefficient increased by one.
pub fn mutate_form(form: &IdentityForm, mutation: Mutation) -> IdentityForm {
    let mut m = form.clone();
    match mutation {
        Mutation::Multiplier => m.lhs_multiplier += 1,
        Mutation::Term(i) => m.rhs_terms[i].coeff += 1,
    }
    m.name = format!("{}+mut", form.name);
    m
}

/// Every single-coefficient mutation of `form`.
pub fn all_mutations(form: &IdentityForm) -> Vec<(Mutation, IdentityForm)> {
    std::iter::once(Mutation::Multiplier)
        .chain((0..form.rhs_terms.len()).map(Mutation::Term))
        .map(|m| (m, mutate_form(form, m)))
        .collect()
}
