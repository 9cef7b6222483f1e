//! Stratum records `(m, ell, chi)` and the evaluator turning them into
//! `Z(t)`, `Delta(t)`, Milnor numbers and Lefschetz tables.
//!
//! A stratum lies on exactly one divisor of the total transform; `m` is the
//! divisor multiplicity upstairs, `ell` the order of the relevant coordinate
//! character at a generic point of the stratum, and `chi` its Euler
//! characteristic.  The stratum contributes `(1 - t^{m/ell})^chi` to `Z(t)`.
//! Strata lying on two or more divisors contribute the factor 1 and are never
//! stored; input files listing them are accepted and ignored with a warning.

use crate::error::{Error, Result};
use crate::qspace::{QuotientType, Rat};
use crate::zeta::{Convention, CyclotomicProduct, IntPolynomial};
use num::Zero;
use serde_json::{json, Map, Value};

/// One A'Campo stratum: multiplicity `m`, character order `ell`, Euler
/// characteristic `chi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    m: Rat,
    ell: i64,
    chi: i64,
    label: Option<String>,
}

impl Stratum {
    pub fn new(m: Rat, ell: i64, chi: i64) -> Result<Self> {
        if m <= Rat::zero() {
            return Err(Error::validation(format!("stratum multiplicity {m} must be positive")));
        }
        if ell < 1 {
            return Err(Error::validation(format!("character order {ell} must be at least 1")));
        }
        Ok(Stratum {
            m,
            ell,
            chi,
            label: None,
        })
    }

    /// Stratum given directly by the quotient-corrected multiplicity `m/ell`.
    pub fn from_m_over_ell(value: Rat, chi: i64) -> Result<Self> {
        Self::new(value, 1, chi)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn m(&self) -> Rat {
        self.m
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    pub fn chi(&self) -> i64 {
        self.chi
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// The intrinsic multiplicity `m / ell` keyed in `Z(t)`.
    pub fn m_over_ell(&self) -> Rat {
        self.m / Rat::from_integer(self.ell)
    }

    fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("m".into(), Value::String(self.m.to_string()));
        if self.ell != 1 {
            obj.insert("ell".into(), json!(self.ell));
        }
        obj.insert("chi".into(), json!(self.chi));
        if let Some(label) = &self.label {
            obj.insert("label".into(), Value::String(label.clone()));
        }
        Value::Object(obj)
    }
}

/// Ambient dimension plus the list of contributing strata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataSet {
    n: usize,
    strata: Vec<Stratum>,
}

impl StrataSet {
    pub fn new(n: usize, strata: Vec<Stratum>) -> Result<Self> {
        if n < 1 {
            return Err(Error::validation("ambient dimension must be at least 1"));
        }
        Ok(StrataSet { n, strata })
    }

    /// Hypersurface dimension n (the germ lives on an (n+1)-fold).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "strata": self.strata.iter().map(Stratum::to_json).collect::<Vec<_>>(),
        })
    }

    /// Parses the strata JSON schema.
    ///
    /// Each record carries exactly one of `"m"` (with optional `"ell"`,
    /// default 1) or `"m_over_ell"`; both are decimal-free strings.  A record
    /// with `"divisors"` of 2 or more is ignored with a warning.  Unknown
    /// fields are ignored, so a full report object round-trips through here.
    pub fn from_json(value: &Value) -> Result<(Self, Vec<String>)> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::validation("strata JSON must be an object"))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::validation("strata JSON needs a positive integer \"n\""))?;
        if n < 1 {
            return Err(Error::validation("\"n\" must be at least 1"));
        }
        let records = obj
            .get("strata")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::validation("strata JSON needs a \"strata\" array"))?;
        let mut warnings = Vec::new();
        let mut strata = Vec::new();
        for (i, record) in records.iter().enumerate() {
            let at = |msg: String| Error::Validation(format!("strata[{i}]: {msg}"));
            let rec = record
                .as_object()
                .ok_or_else(|| at("record must be an object".into()))?;
            let label = match rec.get("label") {
                None => None,
                Some(Value::String(s)) => Some(s.clone()),
                Some(_) => return Err(at("\"label\" must be a string".into())),
            };
            let chi = rec
                .get("chi")
                .and_then(Value::as_i64)
                .ok_or_else(|| at("record needs an integer \"chi\"".into()))?;
            if let Some(divisors) = rec.get("divisors") {
                let d = divisors
                    .as_u64()
                    .ok_or_else(|| at("\"divisors\" must be a positive integer".into()))?;
                if d == 0 {
                    return Err(at("\"divisors\" must be a positive integer".into()));
                }
                if d >= 2 {
                    warnings.push(format!(
                        "strata[{i}]: stratum on {d} divisors contributes the factor 1; ignored"
                    ));
                    continue;
                }
            }
            let parse_rat = |field: &str| -> Result<Rat> {
                let s = rec
                    .get(field)
                    .and_then(Value::as_str)
                    .ok_or_else(|| at(format!("\"{field}\" must be a decimal-free string like \"12\" or \"11/6\"")))?;
                s.parse::<Rat>()
                    .map_err(|_| at(format!("bad rational \"{s}\" in \"{field}\"")))
            };
            let stratum = match (rec.contains_key("m"), rec.contains_key("m_over_ell")) {
                (true, true) => {
                    return Err(at("give exactly one of \"m\" and \"m_over_ell\"".into()))
                }
                (false, false) => {
                    return Err(at("record needs one of \"m\" and \"m_over_ell\"".into()))
                }
                (true, false) => {
                    let m = parse_rat("m")?;
                    let ell = match rec.get("ell") {
                        None => 1,
                        Some(v) => v
                            .as_i64()
                            .filter(|&x| x >= 1)
                            .ok_or_else(|| at("\"ell\" must be a positive integer".into()))?,
                    };
                    Stratum::new(m, ell, chi).map_err(|e| at(e.to_string()))?
                }
                (false, true) => {
                    if rec.contains_key("ell") {
                        return Err(at("\"ell\" cannot be combined with \"m_over_ell\"".into()));
                    }
                    let v = parse_rat("m_over_ell")?;
                    Stratum::from_m_over_ell(v, chi).map_err(|e| at(e.to_string()))?
                }
            };
            let stratum = match label {
                Some(l) => stratum.with_label(l),
                None => stratum,
            };
            strata.push(stratum);
        }
        Ok((StrataSet::new(n as usize, strata)?, warnings))
    }
}

/// Local zeta function of a normal-crossing monomial `prod x_j^{m_j}` on a
/// quotient type: `1 - t^{m/ell}` when one coordinate appears, the constant 1
/// when two or more do.
pub fn local_monomial_zeta(
    q: &QuotientType,
    exponents: &[(usize, i64)],
) -> Result<CyclotomicProduct> {
    if exponents.is_empty() {
        return Err(Error::validation("monomial needs at least one exponent"));
    }
    for &(j, m) in exponents {
        if j >= q.dim() {
            return Err(Error::validation(format!("coordinate index {j} out of range")));
        }
        if m < 1 {
            return Err(Error::validation(format!("exponent {m} must be positive")));
        }
    }
    let mut coords: Vec<usize> = exponents.iter().map(|&(j, _)| j).collect();
    coords.sort_unstable();
    coords.dedup();
    if coords.len() != exponents.len() {
        return Err(Error::validation("exponents must be attached to distinct coordinates"));
    }
    if exponents.len() >= 2 {
        return Ok(CyclotomicProduct::one(Convention::Z));
    }
    let (j, m) = exponents[0];
    CyclotomicProduct::z_factor(Rat::new(m, q.ell(j)), 1)
}

/// The A'Campo product `prod (1 - t^{m/ell})^chi` over the strata.
pub fn zeta_from_strata(s: &StrataSet) -> CyclotomicProduct {
    CyclotomicProduct::from_factors(
        Convention::Z,
        s.strata().iter().map(|st| (st.m_over_ell(), st.chi())),
    )
    .expect("stratum multiplicities are positive by construction")
}

/// Which optional report fields to compute.
#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    /// Expand the characteristic polynomial.
    pub expand: bool,
    /// Tabulate Lefschetz numbers for k in this inclusive range.
    pub lefschetz: Option<(u64, u64)>,
    /// Verify the exponential identity to this series order.
    pub series_order: Option<usize>,
}

/// Computed invariants of a strata set.
///
/// Fields that cannot be computed for the given input (fractional
/// multiplicities, non-polynomial products) are absent with a reason instead
/// of failing the whole report.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantReport {
    pub n: usize,
    /// The contributing strata, echoed so a serialized report can be fed back
    /// in as a strata file.
    pub strata: StrataSet,
    pub zeta: CyclotomicProduct,
    /// Euler characteristic of the Milnor fiber, `deg Z`.
    pub chi_fiber: Rat,
    /// Milnor number `(-1)^n (-1 + chi_fiber)`; rational in general.
    pub mu: Rat,
    pub delta: Option<CyclotomicProduct>,
    pub delta_reason: Option<String>,
    pub delta_expanded: Option<IntPolynomial>,
    pub delta_expanded_reason: Option<String>,
    pub lambda: Option<Vec<(u64, i64)>>,
    pub lambda_reason: Option<String>,
    pub series_check: Option<bool>,
    pub series_check_reason: Option<String>,
    pub warnings: Vec<String>,
}

/// Evaluates a strata set into a full invariant report.
pub fn report(s: &StrataSet, options: &ReportOptions) -> InvariantReport {
    let zeta = zeta_from_strata(s);
    let n = s.n();
    let chi_fiber = zeta.degree();
    let mu = zeta.milnor(n).expect("zeta_from_strata builds Z-form products");
    let integer_keys = zeta.has_integer_keys();
    let fractional_reason = || {
        let key = zeta
            .factors()
            .keys()
            .find(|m| !m.is_integer())
            .expect("caller checked a fractional key exists");
        format!("non-integer exponent t^{key}")
    };

    let (delta, delta_reason) = if integer_keys {
        (Some(zeta.to_delta(n).expect("Z-form by construction")), None)
    } else {
        (None, Some(fractional_reason()))
    };

    let (delta_expanded, delta_expanded_reason) = match (&delta, options.expand) {
        (Some(d), true) => match d.expand() {
            Ok(p) => (Some(p), None),
            Err(e) => (None, Some(e.to_string())),
        },
        (None, true) => (None, Some(fractional_reason())),
        _ => (None, None),
    };

    let (lambda, lambda_reason) = match options.lefschetz {
        None => (None, None),
        Some((a, b)) if !integer_keys => {
            let _ = (a, b);
            (None, Some(fractional_reason()))
        }
        Some((a, b)) => {
            let table: Vec<(u64, i64)> = (a..=b)
                .map(|k| (k, zeta.lefschetz(k).expect("integer keys checked")))
                .collect();
            (Some(table), None)
        }
    };

    let (series_check, series_check_reason) = match options.series_order {
        None => (None, None),
        Some(_) if !integer_keys => (None, Some(fractional_reason())),
        Some(order) => (
            Some(zeta.series_check(order).expect("integer keys checked")),
            None,
        ),
    };

    InvariantReport {
        n,
        strata: s.clone(),
        zeta,
        chi_fiber,
        mu,
        delta,
        delta_reason,
        delta_expanded,
        delta_expanded_reason,
        lambda,
        lambda_reason,
        series_check,
        series_check_reason,
        warnings: Vec::new(),
    }
}

impl InvariantReport {
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("n".into(), json!(self.n));
        obj.insert(
            "strata".into(),
            self.strata.to_json()["strata"].clone(),
        );
        obj.insert("zeta".into(), self.zeta.to_json());
        obj.insert("chi_fiber".into(), Value::String(self.chi_fiber.to_string()));
        obj.insert("mu".into(), Value::String(self.mu.to_string()));
        obj.insert(
            "delta".into(),
            self.delta.as_ref().map_or(Value::Null, |d| d.to_json()),
        );
        if let Some(reason) = &self.delta_reason {
            obj.insert("delta_reason".into(), Value::String(reason.clone()));
        }
        if self.delta_expanded.is_some() || self.delta_expanded_reason.is_some() {
            obj.insert(
                "delta_expanded".into(),
                self.delta_expanded
                    .as_ref()
                    .map_or(Value::Null, IntPolynomial::to_json),
            );
        }
        if let Some(reason) = &self.delta_expanded_reason {
            obj.insert("delta_expanded_reason".into(), Value::String(reason.clone()));
        }
        if let Some(table) = &self.lambda {
            obj.insert(
                "lambda".into(),
                Value::Array(table.iter().map(|&(k, v)| json!([k, v])).collect()),
            );
        }
        if let Some(reason) = &self.lambda_reason {
            obj.insert("lambda_reason".into(), Value::String(reason.clone()));
        }
        if let Some(ok) = self.series_check {
            obj.insert("series_check".into(), json!(ok));
        }
        if let Some(reason) = &self.series_check_reason {
            obj.insert("series_check_reason".into(), Value::String(reason.clone()));
        }
        obj.insert(
            "warnings".into(),
            Value::Array(
                self.warnings
                    .iter()
                    .map(|w| Value::String(w.clone()))
                    .collect(),
            ),
        );
        Value::Object(obj)
    }
}
