//! Algebra of formal signed products `± prod (t^m - 1)^e` with positive
//! rational keys `m` and nonzero integer exponents `e`.
//!
//! Two conventions share the carrier: Z-form products are built from
//! `(1 - t^m)` factors and hold monodromy zeta functions; Delta-form products
//! are built from `(t^m - 1)` factors and hold characteristic polynomials.
//! The convention tag plus a global sign make all conversions exact.

mod poly;
mod series;

pub use poly::IntPolynomial;
pub use series::{exp_lefschetz_series, product_series, series_check};

use crate::error::{Error, Result};
use crate::qspace::Rat;
use num::integer::gcd;
use num::{One, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

/// Which basic factor the product is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Factors `(1 - t^m)`; the natural home of `Z(t)`.
    Z,
    /// Factors `(t^m - 1)`; the natural home of `Delta(t)`.
    Delta,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Z => "Z",
            Convention::Delta => "Delta",
        }
    }
}

/// A formal signed product of cyclotomic-style factors.
///
/// Keys are positive rationals in lowest terms, exponents are nonzero
/// integers, and a global sign of `+1` or `-1` multiplies the whole product.
/// Multiplication is exact bookkeeping; nothing is expanded until
/// [`CyclotomicProduct::expand`] is called.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicProduct {
    convention: Convention,
    sign: i8,
    factors: BTreeMap<Rat, i64>,
}

impl CyclotomicProduct {
    /// The empty product (the constant 1).
    pub fn one(convention: Convention) -> Self {
        CyclotomicProduct {
            convention,
            sign: 1,
            factors: BTreeMap::new(),
        }
    }

    /// Product with a single factor.
    pub fn factor(convention: Convention, m: Rat, e: i64) -> Result<Self> {
        Self::from_factors(convention, [(m, e)])
    }

    /// Z-form `(1 - t^m)^e`.
    pub fn z_factor(m: Rat, e: i64) -> Result<Self> {
        Self::factor(Convention::Z, m, e)
    }

    /// Delta-form `(t^m - 1)^e`.
    pub fn delta_factor(m: Rat, e: i64) -> Result<Self> {
        Self::factor(Convention::Delta, m, e)
    }

    /// Folds an iterator of `(m, e)` pairs; duplicate keys sum, zero exponents
    /// vanish.
    pub fn from_factors(
        convention: Convention,
        factors: impl IntoIterator<Item = (Rat, i64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (m, e) in factors {
            if m <= Rat::zero() {
                return Err(Error::validation(format!("factor key {m} must be positive")));
            }
            *map.entry(m).or_insert(0) += e;
        }
        map.retain(|_, e| *e != 0);
        Ok(CyclotomicProduct {
            convention,
            sign: 1,
            factors: map,
        })
    }

    /// Replaces the global sign.
    ///
    /// # Panics
    /// Panics unless `sign` is `1` or `-1`.
    pub fn with_sign(mut self, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        self.sign = sign;
        self
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn factors(&self) -> &BTreeMap<Rat, i64> {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.sign == 1 && self.factors.is_empty()
    }

    /// True when every key is an integer.
    pub fn has_integer_keys(&self) -> bool {
        self.factors.keys().all(|m| m.is_integer())
    }

    /// Pointwise-summed product; conventions must match.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.convention != other.convention {
            return Err(Error::ConventionMismatch {
                lhs: self.convention.name(),
                rhs: other.convention.name(),
            });
        }
        let mut out = self.factors.clone();
        for (&m, &e) in &other.factors {
            *out.entry(m).or_insert(0) += e;
        }
        out.retain(|_, e| *e != 0);
        Ok(CyclotomicProduct {
            convention: self.convention,
            sign: self.sign * other.sign,
            factors: out,
        })
    }

    /// Reciprocal product (negated exponents; the sign is its own inverse).
    pub fn inverse(&self) -> Self {
        CyclotomicProduct {
            convention: self.convention,
            sign: self.sign,
            factors: self.factors.iter().map(|(&m, &e)| (m, -e)).collect(),
        }
    }

    /// k-th power.
    pub fn pow(&self, k: i64) -> Self {
        if k == 0 {
            return Self::one(self.convention);
        }
        let sign = if k % 2 == 0 { 1 } else { self.sign };
        let mut factors: BTreeMap<Rat, i64> =
            self.factors.iter().map(|(&m, &e)| (m, e * k)).collect();
        factors.retain(|_, e| *e != 0);
        CyclotomicProduct {
            convention: self.convention,
            sign,
            factors,
        }
    }

    /// Degree `sum m * e`; for a Z-form strata product this is the Euler
    /// characteristic of the Milnor fiber.
    pub fn degree(&self) -> Rat {
        self.factors
            .iter()
            .map(|(&m, &e)| m * Rat::from_integer(e))
            .sum()
    }

    /// Milnor number `(-1)^n (-1 + degree)` of a Z-form product for a
    /// hypersurface of dimension n.
    pub fn milnor(&self, n: usize) -> Result<Rat> {
        if self.convention != Convention::Z {
            return Err(Error::validation("milnor expects a Z-form product"));
        }
        let s = if n % 2 == 0 { 1 } else { -1 };
        Ok(Rat::from_integer(s) * (self.degree() - Rat::one()))
    }

    /// Characteristic-polynomial form for a hypersurface of dimension n:
    /// `[(t - 1)^{-1} prod (t^m - 1)^e]^{(-1)^n}`.
    ///
    /// This follows the closed formula for the characteristic polynomial
    /// rather than a literal sign-by-sign rewrite of the Z-form product, so
    /// the result of a successful [`CyclotomicProduct::expand`] is the monic
    /// characteristic polynomial directly.
    pub fn to_delta(&self, n: usize) -> Result<Self> {
        if self.convention != Convention::Z {
            return Err(Error::validation("to_delta expects a Z-form product"));
        }
        let flip = if n % 2 == 0 { 1 } else { -1 };
        let mut out = CyclotomicProduct::from_factors(
            Convention::Delta,
            self.factors
                .iter()
                .map(|(&m, &e)| (m, e * flip))
                .chain([(Rat::one(), -flip)]),
        )?;
        out.sign = self.sign;
        Ok(out)
    }

    /// Exact expansion of a Delta-form product to an integer polynomial.
    ///
    /// Multiplies out factors with positive exponents, then divides exactly by
    /// those with negative exponents; any nonzero remainder reports
    /// [`Error::NotAPolynomial`].
    pub fn expand(&self) -> Result<IntPolynomial> {
        if self.convention != Convention::Delta {
            return Err(Error::validation("expand expects a Delta-form product"));
        }
        for &m in self.factors.keys() {
            if !m.is_integer() {
                return Err(Error::NonIntegerExponent(m));
            }
        }
        let mut poly = IntPolynomial::constant(self.sign.into());
        for (&m, &e) in &self.factors {
            let m = m.to_integer() as usize;
            for _ in 0..e.max(0) {
                poly = poly.mul_tm_minus_one(m);
            }
        }
        for (&m, &e) in &self.factors {
            let m = m.to_integer() as usize;
            for _ in 0..(-e).max(0) {
                poly = poly.div_tm_minus_one_exact(m)?;
            }
        }
        Ok(poly)
    }

    /// Lefschetz number of the k-th monodromy iterate of a Z-form product
    /// with integer keys: `sum over m dividing k of m * e`, and the full sum
    /// `sum m * e` for k = 0.
    pub fn lefschetz(&self, k: u64) -> Result<i64> {
        if self.convention != Convention::Z {
            return Err(Error::validation("lefschetz expects a Z-form product"));
        }
        let mut acc = 0i64;
        for (&m, &e) in &self.factors {
            if !m.is_integer() {
                return Err(Error::NonIntegerExponent(m));
            }
            let m = m.to_integer();
            if k == 0 || k % (m as u64) == 0 {
                acc += m * e;
            }
        }
        Ok(acc)
    }

    /// Verifies the exponential formula `Z(t) = exp(-sum Lambda(h^k) t^k/k)`
    /// to the given order; see [`series_check`].
    pub fn series_check(&self, order: usize) -> Result<bool> {
        series_check(self, order)
    }

    /// Factor-wise twist `(t^m - 1)^a -> (t^{m/gcd(m,k)} - 1)^{gcd(m,k) a}`
    /// of a Delta-form product; preserves the degree.
    pub fn twist(&self, k: i64) -> Result<Self> {
        if self.convention != Convention::Delta {
            return Err(Error::validation("twist expects a Delta-form product"));
        }
        if k < 1 {
            return Err(Error::validation("twist order must be positive"));
        }
        let mut pairs = Vec::new();
        for (&m, &e) in &self.factors {
            if !m.is_integer() {
                return Err(Error::NonIntegerExponent(m));
            }
            let g = gcd(m.to_integer(), k);
            pairs.push((m / Rat::from_integer(g), e * g));
        }
        let mut out = Self::from_factors(Convention::Delta, pairs)?;
        out.sign = self.sign;
        Ok(out)
    }

    /// Substitutes `t -> t^r`: every key is multiplied by `r`.
    pub fn subst_power(&self, r: Rat) -> Result<Self> {
        if r <= Rat::zero() {
            return Err(Error::validation("substitution power must be positive"));
        }
        let mut out = Self::from_factors(
            self.convention,
            self.factors.iter().map(|(&m, &e)| (m * r, e)),
        )?;
        out.sign = self.sign;
        Ok(out)
    }

    /// Signed multiset of eigenvalue arguments of a Delta-form product with
    /// integer keys: the factor `(t^m - 1)^e` contributes `e` at every `j/m`.
    ///
    /// When the product is a genuine polynomial all multiplicities are
    /// nonnegative and this is the root multiset of the expansion.
    pub fn eigenvalue_multiset(&self) -> Result<BTreeMap<Rat, i64>> {
        if self.convention != Convention::Delta {
            return Err(Error::validation("eigenvalue_multiset expects a Delta-form product"));
        }
        let mut out: BTreeMap<Rat, i64> = BTreeMap::new();
        for (&m, &e) in &self.factors {
            if !m.is_integer() {
                return Err(Error::NonIntegerExponent(m));
            }
            let m = m.to_integer();
            for j in 0..m {
                *out.entry(Rat::new(j, m)).or_insert(0) += e;
            }
        }
        out.retain(|_, e| *e != 0);
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "sign": self.sign,
            "convention": self.convention.name(),
            "factors": self
                .factors
                .iter()
                .map(|(m, e)| json!({"m": m.to_string(), "e": e}))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::validation("product JSON must be an object"))?;
        let sign = obj
            .get("sign")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::validation("product JSON needs an integer \"sign\""))?;
        if sign != 1 && sign != -1 {
            return Err(Error::validation("\"sign\" must be 1 or -1"));
        }
        let convention = match obj.get("convention").and_then(Value::as_str) {
            Some("Z") => Convention::Z,
            Some("Delta") => Convention::Delta,
            _ => return Err(Error::validation("\"convention\" must be \"Z\" or \"Delta\"")),
        };
        let factors = obj
            .get("factors")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::validation("product JSON needs a \"factors\" array"))?;
        let mut pairs = Vec::new();
        for f in factors {
            let m = f
                .get("m")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::validation("factor needs a string \"m\""))?;
            let m: Rat = m
                .parse()
                .map_err(|_| Error::validation(format!("bad rational \"{m}\"")))?;
            let e = f
                .get("e")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::validation("factor needs an integer \"e\""))?;
            pairs.push((m, e));
        }
        let out = Self::from_factors(convention, pairs)?;
        Ok(out.with_sign(sign as i8))
    }
}

fn key_string(m: Rat) -> String {
    if m.is_one() {
        String::new()
    } else if m.is_integer() {
        format!("^{}", m.to_integer())
    } else {
        format!("^({m})")
    }
}

impl fmt::Display for CyclotomicProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (&m, &e) in &self.factors {
            let base = match self.convention {
                Convention::Z => format!("(1-t{})", key_string(m)),
                Convention::Delta => format!("(t{}-1)", key_string(m)),
            };
            if e == 1 {
                parts.push(base);
            } else {
                parts.push(format!("{base}^{e}"));
            }
        }
        write!(f, "{}", parts.join(" · "))
    }
}
