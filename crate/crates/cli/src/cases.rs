//! Cases: a named check plus its parameters, and how each one is run.

use std::collections::BTreeMap;

use qzeta_core::analysis::{dalpha_zeta_check, lemma1_check, lemma2_check, pointwise_bound_scan};
use qzeta_core::fseries::{check_f_identity, F_IDENTITY_TOL};
use qzeta_core::limits::{default_q_grid, mzv_reference, q_to_1_extrapolate, REFERENCE_TERMS};
use qzeta_core::qmzf::{zeta_q, zeta_q_one_cont, zeta_q_two_cont, MultiIndex};
use qzeta_core::sumformula::{
    check_sum_formula_qmzv, check_theorem4, g_closed_form, g_value_recursive, interpolated_sum_depth2,
    GSpec, SumFormulaReport,
};
use qzeta_core::{Complex64, Error, QParam, SummationResult, TruncationPolicy};
use serde_json::{json, Value};

use crate::literal::{as_count, parse_complex, parse_complex_list, parse_real_list};
use crate::record::{Outcome, Record};

/// Something a case can verify or evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Check {
    Eval,
    SumFormula,
    Theorem3,
    Theorem4,
    FIdentity,
    Lemma1,
    Lemma2,
    Derivative,
    BoundsPlain,
    BoundsLog,
    Limit,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Eval => "eval",
            Check::SumFormula => "sum-formula",
            Check::Theorem3 => "theorem3",
            Check::Theorem4 => "theorem4",
            Check::FIdentity => "f-identity",
            Check::Lemma1 => "lemma1",
            Check::Lemma2 => "lemma2",
            Check::Derivative => "derivative",
            Check::BoundsPlain => "bounds-plain",
            Check::BoundsLog => "bounds-log",
            Check::Limit => "limit",
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            Check::Eval => &["index", "q"],
            Check::SumFormula => &["k", "r", "q"],
            Check::Theorem3 => &["s", "q"],
            Check::Theorem4 => &["b", "s", "q"],
            Check::FIdentity => &["cutoff", "d", "s", "q"],
            Check::Lemma1 => &["m1", "q"],
            Check::Lemma2 | Check::Derivative => &["s", "alpha", "q"],
            Check::BoundsPlain | Check::BoundsLog => &["points", "seed"],
            Check::Limit => &["index"],
        }
    }

    fn default_tolerance(self, p: &Params) -> f64 {
        match self {
            Check::Eval => 0.0,
            Check::SumFormula => 1e-9,
            Check::Theorem3 if p.s.is_some_and(|s| s.re > 2.0) => 1e-6,
            Check::Theorem3 => 1e-4,
            Check::Theorem4 => 1e-7,
            Check::FIdentity => F_IDENTITY_TOL,
            Check::Lemma1 => 1e-10,
            Check::Lemma2 => 1e-8,
            Check::Derivative => 1e-4,
            Check::BoundsPlain | Check::BoundsLog => 0.0,
            Check::Limit => 1e-4,
        }
    }
}

/// Parameters of one case. Unused fields stay `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    pub q: Option<f64>,
    pub s: Option<Complex64>,
    pub alpha: Option<Complex64>,
    pub index: Option<Vec<Complex64>>,
    pub k: Option<u32>,
    pub r: Option<u32>,
    pub b: Option<u32>,
    pub d: Option<u32>,
    pub cutoff: Option<u64>,
    pub m1: Option<u64>,
    pub prefix: Option<Vec<Complex64>>,
    pub q_grid: Option<Vec<f64>>,
    pub against: Option<Vec<Complex64>>,
    pub points: Option<usize>,
    pub seed: Option<u64>,
    pub cont: bool,
    /// Overrides the check's default tolerance.
    pub tolerance: Option<f64>,
}

fn cjson(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn small(v: f64, key: &str) -> Result<u32, String> {
    u32::try_from(as_count(v, key)?).map_err(|_| format!("{key} is too large"))
}

impl Params {
    fn has(&self, key: &str) -> bool {
        match key {
            "q" => self.q.is_some(),
            "s" => self.s.is_some(),
            "alpha" => self.alpha.is_some(),
            "index" => self.index.is_some(),
            "k" => self.k.is_some(),
            "r" => self.r.is_some(),
            "b" => self.b.is_some(),
            "d" => self.d.is_some(),
            "cutoff" => self.cutoff.is_some(),
            "m1" => self.m1.is_some(),
            "points" => self.points.is_some(),
            "seed" => self.seed.is_some(),
            _ => false,
        }
    }

    /// Inputs echoed into the report, keyed by parameter name.
    pub fn inputs(&self) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::new();
        let list = |v: &[Complex64]| Value::Array(v.iter().copied().map(cjson).collect());
        if let Some(v) = self.q {
            m.insert("q".into(), json!(v));
        }
        if let Some(v) = self.s {
            m.insert("s".into(), cjson(v));
        }
        if let Some(v) = self.alpha {
            m.insert("alpha".into(), cjson(v));
        }
        if let Some(v) = &self.index {
            m.insert("index".into(), list(v));
        }
        for (key, v) in [("k", self.k), ("r", self.r), ("b", self.b), ("d", self.d)] {
            if let Some(v) = v {
                m.insert(key.into(), json!(v));
            }
        }
        if let Some(v) = self.cutoff {
            m.insert("cutoff".into(), json!(v));
        }
        if let Some(v) = self.m1 {
            m.insert("m1".into(), json!(v));
        }
        if let Some(v) = &self.prefix {
            m.insert("prefix".into(), list(v));
        }
        if let Some(v) = &self.q_grid {
            m.insert("q_grid".into(), json!(v));
        }
        if let Some(v) = &self.against {
            m.insert("against".into(), list(v));
        }
        if let Some(v) = self.points {
            m.insert("points".into(), json!(v));
        }
        if let Some(v) = self.seed {
            m.insert("seed".into(), json!(v));
        }
        if self.cont {
            m.insert("cont".into(), json!(true));
        }
        m
    }

    /// Sets a parameter from its textual form (`--set key=value`).
    pub fn set_text(&mut self, key: &str, value: &str) -> Result<(), String> {
        let count = |v: &str| -> Result<f64, String> { v.trim().parse::<f64>().map_err(|_| format!("bad value for {key}: '{v}'")) };
        match key {
            "s" => self.s = Some(parse_complex(value)?),
            "alpha" => self.alpha = Some(parse_complex(value)?),
            "index" => self.index = Some(parse_complex_list(value)?),
            "prefix" => self.prefix = Some(parse_complex_list(value)?),
            "against" => self.against = Some(parse_complex_list(value)?),
            "q_grid" => self.q_grid = Some(parse_real_list(value)?),
            "cont" => {
                self.cont = value
                    .trim()
                    .parse()
                    .map_err(|_| format!("cont must be true or false, got '{value}'"))?
            }
            "tolerance" => self.tolerance = Some(count(value)?),
            _ => self.set_number(key, count(value)?)?,
        }
        Ok(())
    }

    /// Sets a numeric parameter (grid axes). `s` and `alpha` set the real
    /// part, `s_im` and `alpha_im` the imaginary part.
    pub fn set_number(&mut self, key: &str, v: f64) -> Result<(), String> {
        let re = |z: Option<Complex64>| Complex64::new(v, z.map_or(0.0, |z| z.im));
        let im = |z: Option<Complex64>| Complex64::new(z.map_or(0.0, |z| z.re), v);
        match key {
            "q" => self.q = Some(v),
            "s" => self.s = Some(re(self.s)),
            "s_im" => self.s = Some(im(self.s)),
            "alpha" => self.alpha = Some(re(self.alpha)),
            "alpha_im" => self.alpha = Some(im(self.alpha)),
            "k" => self.k = Some(small(v, key)?),
            "r" => self.r = Some(small(v, key)?),
            "b" => self.b = Some(small(v, key)?),
            "d" => self.d = Some(small(v, key)?),
            "cutoff" => self.cutoff = Some(as_count(v, key)?),
            "m1" => self.m1 = Some(as_count(v, key)?),
            "points" => self.points = Some(as_count(v, key)? as usize),
            "seed" => self.seed = Some(as_count(v, key)?),
            "tolerance" => self.tolerance = Some(v),
            _ => return Err(format!("unknown parameter '{key}'")),
        }
        Ok(())
    }
}

/// A check with its parameters and a stable identifier.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub id: String,
    pub check: Check,
    pub params: Params,
}

impl Case {
    /// Reports the first required parameter that is missing.
    pub fn validate(&self) -> Result<(), String> {
        match self.check.required().iter().find(|k| !self.params.has(k)) {
            Some(k) => Err(format!("{} needs parameter '{k}'", self.check.name())),
            None => Ok(()),
        }
    }
}

/// Identifiers `prefix/0007` padded so lexical order is numeric order.
pub fn case_ids(prefix: &str, n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("{prefix}/{i:0width$}")).collect()
}

fn qparam(p: &Params) -> qzeta_core::Result<QParam> {
    QParam::new(p.q.expect("validated"))
}

fn from_report(r: SumFormulaReport, tolerance: f64) -> Outcome {
    let note = match r.cross_check_diff {
        Some(x) => format!("{}; cross-check |diff| {x:e}", r.convention_note),
        None => r.convention_note,
    };
    Outcome {
        lhs: r.lhs,
        rhs: Some(r.rhs),
        abs_diff: r.abs_diff,
        error_estimate: r.tail_estimate,
        tolerance,
        converged: r.converged,
        note,
    }
}

fn compare(lhs: &SummationResult, rhs: &SummationResult, tolerance: f64, note: String) -> Outcome {
    from_report(SumFormulaReport::new(lhs, rhs, note), tolerance)
}

fn eval(p: &Params, policy: &TruncationPolicy, tolerance: f64) -> qzeta_core::Result<Outcome> {
    let q = qparam(p)?;
    let index = MultiIndex::new(p.index.clone().expect("validated"))?;
    let (result, note) = match (p.cont, index.depth()) {
        (true, 1) => (zeta_q_one_cont(index.entries()[0], q, policy)?, "depth-one continuation"),
        (true, 2) => {
            let [a, b] = index.entries() else { unreachable!() };
            (zeta_q_two_cont(a + b, *b, q, policy)?, "depth-two strip continuation")
        }
        (true, _) => return Err(Error::Argument("continuation is available for depth 1 and 2 only".into())),
        (false, _) => (zeta_q(&index, q, policy)?, "nested series"),
    };
    Ok(Outcome {
        lhs: result.value,
        rhs: None,
        abs_diff: 0.0,
        error_estimate: result.abs_error_estimate,
        tolerance,
        converged: result.converged,
        note: format!("{note}, {} terms", result.terms_used),
    })
}

fn theorem3(p: &Params, policy: &TruncationPolicy, tolerance: f64) -> qzeta_core::Result<Outcome> {
    let q = qparam(p)?;
    let s = p.s.expect("validated");
    let lhs = interpolated_sum_depth2(s, q, policy)?;
    let rhs = zeta_q(&MultiIndex::new(vec![s])?, q, policy)?;
    let route = if s.re > 2.0 { "direct double series" } else { "strip continuation" };
    Ok(compare(&lhs, &rhs, tolerance, format!("interpolated sum via {route}, {} summands", lhs.terms_used)))
}

fn theorem4(p: &Params, policy: &TruncationPolicy, tolerance: f64) -> qzeta_core::Result<Outcome> {
    let q = qparam(p)?;
    let (b, s) = (p.b.expect("validated"), p.s.expect("validated"));
    match p.prefix.as_deref() {
        None | Some([]) => Ok(from_report(check_theorem4(b, s, q, policy)?, tolerance)),
        Some(prefix) => {
            let spec = GSpec::new(b, prefix.to_vec(), s);
            let lhs = g_closed_form(&spec, q, policy)?;
            let rhs = g_value_recursive(&spec, q, policy)?;
            Ok(compare(&lhs, &rhs, tolerance, "closed form against the defining recursion".into()))
        }
    }
}

fn derivative(p: &Params, policy: &TruncationPolicy, tolerance: f64) -> qzeta_core::Result<Outcome> {
    let q = qparam(p)?;
    let r = dalpha_zeta_check(p.s.expect("validated"), p.alpha.expect("validated"), q, policy)?;
    let scale = r.report.rhs.norm().max(f64::MIN_POSITIVE);
    let mut o = from_report(r.report, tolerance * scale);
    o.note = format!("{}; relative residual {:e}, step {:e}", o.note, r.relative_diff, r.step);
    Ok(o)
}

fn bounds(p: &Params, log_weighted: bool, tolerance: f64) -> Outcome {
    let scan = pointwise_bound_scan(p.points.expect("validated"), p.seed.expect("validated"));
    let count = if log_weighted { scan.log_violations } else { scan.plain_violations };
    let note = match scan.first_violation {
        Some((m, u, a, s, q)) => format!(
            "{count} of {} points violate; first at m={m}, u={u}, alpha={a}, s={s}, q={q}",
            scan.points
        ),
        None => format!("no violations on {} points", scan.points),
    };
    Outcome {
        lhs: Complex64::new(count as f64, 0.0),
        rhs: Some(Complex64::new(0.0, 0.0)),
        abs_diff: count as f64,
        error_estimate: 0.0,
        tolerance,
        converged: true,
        note,
    }
}

fn limit(p: &Params, policy: &TruncationPolicy, tolerance: f64) -> qzeta_core::Result<Outcome> {
    let grid = match &p.q_grid {
        Some(g) => g.iter().map(|&q| QParam::new(q)).collect::<qzeta_core::Result<Vec<_>>>()?,
        None => default_q_grid(),
    };
    let index = MultiIndex::new(p.index.clone().expect("validated"))?;
    let run = |idx: &MultiIndex| -> qzeta_core::Result<(Complex64, f64, String)> {
        let full = q_to_1_extrapolate(idx, &grid, policy)?;
        // Error proxy: change when the coarsest q is dropped.
        let spread = match q_to_1_extrapolate(idx, &grid[1..], policy) {
            Ok(fewer) => (full.extrapolated - fewer.extrapolated).norm(),
            Err(_) => f64::INFINITY,
        };
        let note = format!("order {:.3}{}", full.observed_order, full.warning.map(|w| format!(", {w}")).unwrap_or_default());
        Ok((full.extrapolated, spread, note))
    };
    let (lhs, lhs_err, note) = run(&index)?;
    let (rhs, rhs_err, rhs_note) = match &p.against {
        Some(other) => {
            let (v, e, n) = run(&MultiIndex::new(other.clone())?)?;
            (Some(v), e, format!("against extrapolated {other:?}, {n}"))
        }
        None if index.is_admissible_integer() => (
            Some(mzv_reference(&index, REFERENCE_TERMS)?),
            0.0,
            format!("against the classical value ({REFERENCE_TERMS} terms)"),
        ),
        None => (None, 0.0, "no reference".to_string()),
    };
    Ok(Outcome {
        lhs,
        rhs,
        abs_diff: rhs.map_or(0.0, |r| (lhs - r).norm()),
        error_estimate: lhs_err + rhs_err,
        tolerance,
        converged: lhs_err.is_finite() && rhs_err.is_finite(),
        note: format!("{note}; {rhs_note}"),
    })
}

fn execute(case: &Case, policy: &TruncationPolicy, tolerance: f64) -> qzeta_core::Result<Outcome> {
    let p = &case.params;
    match case.check {
        Check::Eval => eval(p, policy, tolerance),
        Check::SumFormula => Ok(from_report(
            check_sum_formula_qmzv(p.k.expect("validated"), p.r.expect("validated"), qparam(p)?, policy)?,
            tolerance,
        )),
        Check::Theorem3 => theorem3(p, policy, tolerance),
        Check::Theorem4 => theorem4(p, policy, tolerance),
        Check::FIdentity => {
            let r = check_f_identity(
                p.cutoff.expect("validated"),
                p.s.expect("validated"),
                p.d.expect("validated"),
                qparam(p)?,
                policy,
            )?;
            Ok(from_report(r.report, tolerance))
        }
        Check::Lemma1 => Ok(from_report(lemma1_check(p.m1.expect("validated"), qparam(p)?, policy)?, tolerance)),
        Check::Lemma2 => Ok(from_report(
            lemma2_check(p.s.expect("validated"), p.alpha.expect("validated"), qparam(p)?, policy)?,
            tolerance,
        )),
        Check::Derivative => derivative(p, policy, tolerance),
        Check::BoundsPlain => Ok(bounds(p, false, tolerance)),
        Check::BoundsLog => Ok(bounds(p, true, tolerance)),
        Check::Limit => limit(p, policy, tolerance),
    }
}

/// Runs one validated case. Errors become records rather than aborting the batch.
pub fn run_case(case: &Case, policy: &TruncationPolicy) -> Record {
    let tolerance = case.params.tolerance.unwrap_or_else(|| case.check.default_tolerance(&case.params));
    let inputs = case.params.inputs();
    match execute(case, policy, tolerance) {
        Ok(o) => Record::from_outcome(case.id.clone(), case.check.name(), inputs, o),
        Err(e) => Record::from_error(case.id.clone(), case.check.name(), inputs, tolerance, &e),
    }
}
