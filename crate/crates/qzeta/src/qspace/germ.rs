use super::{frac, QuotientType, Rat};
use crate::error::{Error, Result};
use num::{BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Sparse polynomial with rational coefficients and nonnegative rational
/// exponents, attached to an ambient quotient type.
///
/// Rational exponents arise from rewriting a germ through a normalization
/// isomorphism; ordinary germs have integer exponents.  The expanded term map
/// is the value of the germ; an optional factored form (monomial prefix times
/// powers of integer-exponent polynomials) is kept for display and for shape
/// recognition by the resolution pipelines.
#[derive(Clone, Debug)]
pub struct Germ {
    ambient: QuotientType,
    terms: BTreeMap<Vec<Rat>, BigRational>,
    factored: Option<FactoredForm>,
}

/// Monomial prefix and inner factors of a germ in product form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredForm {
    /// Exponent vector of the monomial prefix (nonnegative rationals).
    pub monomial: Vec<Rat>,
    /// `(polynomial, multiplicity)` pairs; polynomials map integer exponent
    /// vectors to nonzero coefficients.
    pub factors: Vec<(BTreeMap<Vec<i64>, BigRational>, u32)>,
}

impl PartialEq for Germ {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.terms == other.terms
    }
}
impl Eq for Germ {}

impl Germ {
    /// Germ from an expanded term map; zero coefficients are dropped.
    pub fn from_terms(
        ambient: QuotientType,
        terms: BTreeMap<Vec<Rat>, BigRational>,
    ) -> Result<Self> {
        let n = ambient.dim();
        for (e, _) in terms.iter() {
            if e.len() != n {
                return Err(Error::validation("exponent vector length does not match dimension"));
            }
            if e.iter().any(|x| x < &Rat::zero()) {
                return Err(Error::validation("negative exponents are not allowed in germs"));
            }
        }
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Germ {
            ambient,
            terms,
            factored: None,
        })
    }

    /// Single monomial `coeff * x^exponents`.
    pub fn monomial(ambient: QuotientType, exponents: Vec<Rat>, coeff: BigRational) -> Result<Self> {
        Self::from_terms(ambient, BTreeMap::from([(exponents, coeff)]))
    }

    /// Germ from a factored form; the expansion is computed eagerly and the
    /// factored presentation retained.
    pub fn from_factored(ambient: QuotientType, form: FactoredForm) -> Result<Self> {
        let n = ambient.dim();
        if form.monomial.len() != n {
            return Err(Error::validation("monomial exponent vector length does not match dimension"));
        }
        if form.monomial.iter().any(|x| x < &Rat::zero()) {
            return Err(Error::validation("negative exponents are not allowed in germs"));
        }
        let mut terms: BTreeMap<Vec<Rat>, BigRational> =
            BTreeMap::from([(form.monomial.clone(), BigRational::one())]);
        for (poly, mult) in &form.factors {
            if poly.is_empty() {
                return Err(Error::validation("empty factor in germ product"));
            }
            for (e, c) in poly {
                if e.len() != n {
                    return Err(Error::validation("factor exponent vector length does not match dimension"));
                }
                if e.iter().any(|&x| x < 0) {
                    return Err(Error::validation("negative exponents are not allowed in germs"));
                }
                if c.is_zero() {
                    return Err(Error::validation("zero coefficient stored in a germ factor"));
                }
            }
            let rational: BTreeMap<Vec<Rat>, BigRational> = poly
                .iter()
                .map(|(e, c)| (e.iter().map(|&x| Rat::from_integer(x)).collect(), c.clone()))
                .collect();
            for _ in 0..*mult {
                terms = mul_terms(&terms, &rational);
            }
        }
        Ok(Germ {
            ambient,
            terms,
            factored: Some(form),
        })
    }

    pub fn ambient(&self) -> &QuotientType {
        &self.ambient
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Rat>, BigRational> {
        &self.terms
    }

    pub fn factored(&self) -> Option<&FactoredForm> {
        self.factored.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// k-th power; the factored presentation is preserved when present.
    pub fn pow(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Germ::monomial(
                self.ambient.clone(),
                vec![Rat::zero(); self.ambient.dim()],
                BigRational::one(),
            );
        }
        if let Some(form) = &self.factored {
            let monomial = form.monomial.iter().map(|&e| e * Rat::from_integer(k as i64)).collect();
            let factors = form
                .factors
                .iter()
                .map(|(p, m)| (p.clone(), m * k))
                .collect();
            return Germ::from_factored(self.ambient.clone(), FactoredForm { monomial, factors });
        }
        let mut out = self.terms.clone();
        for _ in 1..k {
            out = mul_terms(&out, &self.terms);
        }
        Germ::from_terms(self.ambient.clone(), out)
    }

    /// Minimum of `sum_j w_j e_j` over the terms (the omega-order of the germ).
    pub fn omega_order(&self, w: &[i64]) -> Option<Rat> {
        assert_eq!(w.len(), self.ambient.dim());
        self.terms
            .keys()
            .map(|e| {
                e.iter()
                    .zip(w)
                    .map(|(&ei, &wi)| ei * Rat::from_integer(wi))
                    .sum()
            })
            .min()
    }

    /// Pullback through a monomial substitution: ambient coordinate i maps to
    /// the product of chart coordinates `u_j^{map[i][j]}`.
    pub fn pullback(&self, map: &[Vec<i64>], chart_ambient: QuotientType) -> Result<Germ> {
        let n = self.ambient.dim();
        let m = chart_ambient.dim();
        if map.len() != n || map.iter().any(|row| row.len() != m) {
            return Err(Error::validation("substitution matrix shape mismatch"));
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut out = vec![Rat::zero(); m];
            for (i, &ei) in e.iter().enumerate() {
                for (j, slot) in out.iter_mut().enumerate() {
                    *slot += ei * Rat::from_integer(map[i][j]);
                }
            }
            let entry = terms.entry(out).or_insert_with(BigRational::zero);
            *entry += c.clone();
        }
        Germ::from_terms(chart_ambient, terms)
    }

    /// Rewrites the germ along a coordinate isomorphism that multiplies the
    /// j-th exponent by `scale[j]` (the transport of `normalize_dim2`).
    pub fn transport(&self, scale: &[Rat], target: QuotientType) -> Result<Germ> {
        let n = self.ambient.dim();
        if scale.len() != n || target.dim() != n {
            return Err(Error::validation("transport scale length does not match dimension"));
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let e2: Vec<Rat> = e.iter().zip(scale).map(|(&x, &s)| x * s).collect();
                (e2, c.clone())
            })
            .collect();
        let mut out = Germ::from_terms(target, terms)?;
        if let Some(form) = &self.factored {
            let monomial: Vec<Rat> = form
                .monomial
                .iter()
                .zip(scale)
                .map(|(&x, &s)| x * s)
                .collect();
            let mut factors = Vec::new();
            let mut integral = true;
            for (poly, mult) in &form.factors {
                let mut scaled = BTreeMap::new();
                for (e, c) in poly {
                    let e2: Vec<Rat> = e
                        .iter()
                        .zip(scale)
                        .map(|(&x, &s)| Rat::from_integer(x) * s)
                        .collect();
                    if e2.iter().any(|x| !x.is_integer()) {
                        integral = false;
                        break;
                    }
                    scaled.insert(e2.iter().map(|x| x.to_integer()).collect(), c.clone());
                }
                if !integral {
                    break;
                }
                factors.push((scaled, *mult));
            }
            if integral {
                out.factored = Some(FactoredForm { monomial, factors });
            }
        }
        Ok(out)
    }

    /// Common character of all terms under the ambient group action, as one
    /// rational weight in `[0, d_i)` per cyclic factor.
    ///
    /// The germ is a well-defined function on the quotient iff the weight
    /// vector is zero; otherwise `f^k` is a function for multiples `k` of
    /// [`super::min_power`] of the weight.
    pub fn semi_invariant_weight(&self) -> Result<Vec<Rat>> {
        if self.terms.is_empty() {
            return Err(Error::validation("the zero germ has no semi-invariance weight"));
        }
        let q = &self.ambient;
        let weight = |e: &Vec<Rat>| -> Vec<Rat> {
            q.orders()
                .iter()
                .zip(q.weights())
                .map(|(&di, row)| {
                    let s: Rat = e
                        .iter()
                        .zip(row)
                        .map(|(&ej, &aj)| ej * Rat::from_integer(aj))
                        .sum();
                    frac(s / Rat::from_integer(di)) * Rat::from_integer(di)
                })
                .collect()
        };
        let mut iter = self.terms.keys();
        let first = iter.next().expect("nonempty");
        let v = weight(first);
        for e in iter {
            let w = weight(e);
            if w != v {
                return Err(Error::NotSemiInvariant {
                    first: format!("{} (weight {})", monomial_string(first, q.dim()), weights_string(&v)),
                    second: format!("{} (weight {})", monomial_string(e, q.dim()), weights_string(&w)),
                });
            }
        }
        Ok(v)
    }
}

fn mul_terms(
    a: &BTreeMap<Vec<Rat>, BigRational>,
    b: &BTreeMap<Vec<Rat>, BigRational>,
) -> BTreeMap<Vec<Rat>, BigRational> {
    let mut out: BTreeMap<Vec<Rat>, BigRational> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<Rat> = ea.iter().zip(eb).map(|(&x, &y)| x + y).collect();
            let entry = out.entry(e).or_insert_with(BigRational::zero);
            *entry += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub(crate) fn var_name(j: usize, n: usize) -> String {
    if n <= 3 {
        ["x", "y", "z"][j].to_string()
    } else {
        format!("x{}", j + 1)
    }
}

fn exponent_string(e: Rat) -> String {
    if e.is_integer() {
        format!("^{}", e.to_integer())
    } else {
        format!("^({e})")
    }
}

fn monomial_string(e: &[Rat], n: usize) -> String {
    let mut parts = Vec::new();
    for (j, &ej) in e.iter().enumerate() {
        if ej.is_zero() {
            continue;
        }
        let v = var_name(j, n);
        if ej.is_one() {
            parts.push(v);
        } else {
            parts.push(format!("{v}{}", exponent_string(ej)));
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

fn weights_string(v: &[Rat]) -> String {
    let body = v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    format!("({body})")
}

fn sum_string(terms: &BTreeMap<Vec<Rat>, BigRational>, n: usize) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    // descending exponent order reads like the usual x-before-y convention
    for (i, (e, c)) in terms.iter().rev().enumerate() {
        let mono = monomial_string(e, n);
        let abs = c.abs();
        let body = if abs.is_one() && mono != "1" {
            mono
        } else if mono == "1" {
            abs.to_string()
        } else {
            format!("{abs} {mono}")
        };
        if i == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.ambient.dim();
        let Some(form) = &self.factored else {
            return write!(f, "{}", sum_string(&self.terms, n));
        };
        let mut parts = Vec::new();
        if form.monomial.iter().any(|x| !x.is_zero()) || form.factors.is_empty() {
            parts.push(monomial_string(&form.monomial, n));
        }
        for (poly, mult) in &form.factors {
            let rational: BTreeMap<Vec<Rat>, BigRational> = poly
                .iter()
                .map(|(e, c)| (e.iter().map(|&x| Rat::from_integer(x)).collect(), c.clone()))
                .collect();
            let body = format!("({})", sum_string(&rational, n));
            if *mult == 1 {
                parts.push(body);
            } else {
                parts.push(format!("{body}^{mult}"));
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qspace::rat;

    fn c2() -> QuotientType {
        QuotientType::smooth(2)
    }

    fn big(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn factored_expansion_matches_terms() {
        // x^2 y^3 (x^2 + y^3)
        let form = FactoredForm {
            monomial: vec![rat(2, 1), rat(3, 1)],
            factors: vec![(
                BTreeMap::from([(vec![2, 0], big(1)), (vec![0, 3], big(1))]),
                1,
            )],
        };
        let g = Germ::from_factored(c2(), form).unwrap();
        assert_eq!(g.terms().len(), 2);
        assert_eq!(g.terms()[&vec![rat(4, 1), rat(3, 1)]], big(1));
        assert_eq!(g.terms()[&vec![rat(2, 1), rat(6, 1)]], big(1));
    }

    #[test]
    fn power_expands_binomially() {
        let form = FactoredForm {
            monomial: vec![rat(0, 1), rat(0, 1)],
            factors: vec![(
                BTreeMap::from([(vec![1, 0], big(1)), (vec![0, 1], big(1))]),
                1,
            )],
        };
        let g = Germ::from_factored(c2(), form).unwrap();
        let g3 = g.pow(3).unwrap();
        assert_eq!(g3.terms()[&vec![rat(2, 1), rat(1, 1)]], big(3));
        assert_eq!(g3.terms().len(), 4);
    }

    #[test]
    fn omega_order_minimizes() {
        let mut terms = BTreeMap::new();
        terms.insert(vec![rat(2, 1), rat(0, 1)], big(1));
        terms.insert(vec![rat(0, 1), rat(3, 1)], big(1));
        let g = Germ::from_terms(c2(), terms).unwrap();
        assert_eq!(g.omega_order(&[3, 2]).unwrap(), rat(6, 1));
        assert_eq!(g.omega_order(&[1, 1]).unwrap(), rat(2, 1));
    }

    #[test]
    fn semi_invariant_weight_on_quotient() {
        // x^2 y^3 (x^2 + y^3) on X(6;3,2): both monomials weigh 12 = 0 mod 6
        let q = QuotientType::cyclic(6, vec![3, 2]).unwrap();
        let form = FactoredForm {
            monomial: vec![rat(2, 1), rat(3, 1)],
            factors: vec![(
                BTreeMap::from([(vec![2, 0], big(1)), (vec![0, 3], big(1))]),
                1,
            )],
        };
        let g = Germ::from_factored(q, form).unwrap();
        assert_eq!(g.semi_invariant_weight().unwrap(), vec![rat(0, 1)]);
    }

    #[test]
    fn single_monomial_weight() {
        let q = QuotientType::cyclic(2, vec![1, 1]).unwrap();
        let g = Germ::monomial(q, vec![rat(1, 1), rat(0, 1)], big(1)).unwrap();
        assert_eq!(g.semi_invariant_weight().unwrap(), vec![rat(1, 1)]);
    }

    #[test]
    fn zero_set_counterexample_is_rejected() {
        // (x^2 + y)(x^2 - y)^3 on X(2;1,1): the zero set is invariant but the
        // germ is not semi-invariant
        let q = QuotientType::cyclic(2, vec![1, 1]).unwrap();
        let form = FactoredForm {
            monomial: vec![rat(0, 1), rat(0, 1)],
            factors: vec![
                (
                    BTreeMap::from([(vec![2, 0], big(1)), (vec![0, 1], big(1))]),
                    1,
                ),
                (
                    BTreeMap::from([(vec![2, 0], big(1)), (vec![0, 1], big(-1))]),
                    3,
                ),
            ],
        };
        let g = Germ::from_factored(q, form).unwrap();
        let err = g.semi_invariant_weight().unwrap_err();
        assert!(matches!(err, Error::NotSemiInvariant { .. }));
        assert!(err.to_string().contains("zero set"));
    }

    #[test]
    fn transport_keeps_value() {
        // x^2 y^3 (x^2+y^3) on X(6;3,2) transports to x y (x + y) on C^2
        let q = QuotientType::cyclic(6, vec![3, 2]).unwrap();
        let form = FactoredForm {
            monomial: vec![rat(2, 1), rat(3, 1)],
            factors: vec![(
                BTreeMap::from([(vec![2, 0], big(1)), (vec![0, 3], big(1))]),
                1,
            )],
        };
        let g = Germ::from_factored(q.clone(), form).unwrap();
        let (target, (tx, ty)) = q.normalize_dim2().unwrap();
        let t = g.transport(&[tx, ty], target).unwrap();
        assert_eq!(t.terms()[&vec![rat(2, 1), rat(1, 1)]], big(1));
        assert_eq!(t.terms()[&vec![rat(1, 1), rat(2, 1)]], big(1));
        let form = t.factored().unwrap();
        assert_eq!(form.monomial, vec![rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn display_shapes() {
        let form = FactoredForm {
            monomial: vec![rat(2, 1), rat(3, 1)],
            factors: vec![(
                BTreeMap::from([(vec![2, 0], big(1)), (vec![0, 3], big(1))]),
                1,
            )],
        };
        let g = Germ::from_factored(c2(), form).unwrap();
        assert_eq!(g.to_string(), "x^2 y^3 (x^2 + y^3)");
        let m = Germ::monomial(c2(), vec![rat(1, 2), rat(0, 1)], big(1)).unwrap();
        assert_eq!(m.to_string(), "x^(1/2)");
    }
}
