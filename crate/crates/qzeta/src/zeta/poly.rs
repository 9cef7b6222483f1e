use crate::error::{Error, Result};
use num::{BigInt, One, Signed, Zero};
use std::fmt;

/// Dense univariate polynomial with arbitrary-precision integer coefficients,
/// constant term first.  Carrier for expanded characteristic polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn constant(c: i64) -> Self {
        Self::from_coeffs(vec![BigInt::from(c)])
    }

    /// Builds from ascending coefficients, trimming leading zeros.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Ascending coefficients without trailing zeros.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Multiplication by `t^m - 1`.
    pub fn mul_tm_minus_one(&self, m: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + m];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + m] += c;
            out[i] -= c;
        }
        Self::from_coeffs(out)
    }

    /// Exact division by `t^m - 1`; fails when the remainder is nonzero.
    pub fn div_tm_minus_one_exact(&self, m: usize) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if self.coeffs.len() <= m {
            return Err(Error::NotAPolynomial { m: m as i64 });
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - m];
        for top in (m..rem.len()).rev() {
            let lead = std::mem::replace(&mut rem[top], BigInt::zero());
            rem[top - m] += &lead;
            quot[top - m] = lead;
        }
        if rem[..m].iter().any(|c| !c.is_zero()) {
            return Err(Error::NotAPolynomial { m: m as i64 });
        }
        Ok(Self::from_coeffs(quot))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|c| serde_json::Value::String(c.to_string()))
                .collect(),
        )
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            let body = match (k, abs.is_one()) {
                (0, _) => abs.to_string(),
                (1, true) => "t".to_string(),
                (1, false) => format!("{abs} t"),
                (_, true) => format!("t^{k}"),
                (_, false) => format!("{abs} t^{k}"),
            };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_and_divide_are_inverse() {
        let p = IntPolynomial::from_i64_coeffs(&[1, -1, 1]);
        let q = p.mul_tm_minus_one(4);
        assert_eq!(q.div_tm_minus_one_exact(4).unwrap(), p);
    }

    #[test]
    fn geometric_sum() {
        // (t^3 - 1)/(t - 1) = 1 + t + t^2
        let p = IntPolynomial::one().mul_tm_minus_one(3);
        let q = p.div_tm_minus_one_exact(1).unwrap();
        assert_eq!(q, IntPolynomial::from_i64_coeffs(&[1, 1, 1]));
    }

    #[test]
    fn inexact_division_is_rejected() {
        let p = IntPolynomial::from_i64_coeffs(&[1, 1]);
        assert!(matches!(
            p.div_tm_minus_one_exact(2),
            Err(Error::NotAPolynomial { m: 2 })
        ));
    }

    #[test]
    fn display_ascending_terms() {
        assert_eq!(IntPolynomial::from_i64_coeffs(&[1, -1, 1]).to_string(), "1 - t + t^2");
        assert_eq!(IntPolynomial::from_i64_coeffs(&[-1, 0, 2]).to_string(), "-1 + 2 t^2");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }
}
