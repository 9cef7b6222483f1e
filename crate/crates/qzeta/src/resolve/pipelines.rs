//! End-to-end strata assembly for the worked singularity families:
//! one-Puiseux-pair curve germs on cyclic quotients, two-Puiseux-pair plane
//! branches, Brieskorn surface germs and Yomdin-type series.

use super::{blowup2_any, blowup3, count_branch_points, Chart};
use crate::error::{Error, Result};
use crate::qspace::{min_power, rat, Germ, QuotientType, Rat};
use crate::strata::{zeta_from_strata, StrataSet, Stratum};
use crate::zeta::{Convention, CyclotomicProduct};
use num::integer::gcd;
use num::{BigRational, One, Zero};
use serde_json::Value;

/// Output of a resolution pipeline: the strata, the charts they were read
/// from (when computed), the closed-form product when one is known, and a log
/// of the bookkeeping decisions taken along the way.
#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub strata: StrataSet,
    pub charts: Vec<Chart>,
    pub closed_form: Option<CyclotomicProduct>,
    pub notes: Vec<String>,
}

impl PipelineResult {
    pub fn to_json(&self) -> Value {
        let mut obj = self
            .strata
            .to_json()
            .as_object()
            .expect("strata serialize to an object")
            .clone();
        obj.insert(
            "closed_form".into(),
            self.closed_form
                .as_ref()
                .map_or(Value::Null, CyclotomicProduct::to_json),
        );
        obj.insert(
            "notes".into(),
            Value::Array(self.notes.iter().map(|s| Value::String(s.clone())).collect()),
        );
        Value::Object(obj)
    }
}

/// Exponent data of a germ `x^a y^b (x^alpha + c y^beta)^mult`.
struct CurveShape {
    a: Rat,
    b: Rat,
    alpha: Rat,
    beta: Rat,
    coeff: BigRational,
    mult: u32,
}

fn shape_error() -> Error {
    Error::validation(
        "germ shape not supported: expected x^a y^b (x^alpha + c y^beta)^mult \
         with a single non-monomial factor",
    )
}

fn curve_shape(germ: &Germ) -> Result<CurveShape> {
    if let Some(form) = germ.factored() {
        if form.factors.len() != 1 {
            return Err(shape_error());
        }
        let (poly, mult) = &form.factors[0];
        if poly.len() != 2 {
            return Err(shape_error());
        }
        let mut x_part = None;
        let mut y_part = None;
        for (e, c) in poly {
            if e[0] > 0 && e[1] == 0 {
                x_part = Some((e[0], c));
            } else if e[0] == 0 && e[1] > 0 {
                y_part = Some((e[1], c));
            } else {
                return Err(shape_error());
            }
        }
        let ((alpha, cx), (beta, cy)) = match (x_part, y_part) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(shape_error()),
        };
        return Ok(CurveShape {
            a: form.monomial[0],
            b: form.monomial[1],
            alpha: Rat::from_integer(alpha),
            beta: Rat::from_integer(beta),
            coeff: cy / cx,
            mult: *mult,
        });
    }
    if germ.terms().len() != 2 {
        return Err(shape_error());
    }
    let mut it = germ.terms().iter();
    let (e1, c1) = it.next().expect("two terms");
    let (e2, c2) = it.next().expect("two terms");
    let a = e1[0].min(e2[0]);
    let b = e1[1].min(e2[1]);
    let r1 = (e1[0] - a, e1[1] - b);
    let r2 = (e2[0] - a, e2[1] - b);
    let ((alpha, cx), (beta, cy)) = if r1.1.is_zero() && r2.0.is_zero() && !r1.0.is_zero() {
        ((r1.0, c1), (r2.1, c2))
    } else if r2.1.is_zero() && r1.0.is_zero() && !r2.0.is_zero() {
        ((r2.0, c2), (r1.1, c1))
    } else {
        return Err(shape_error());
    };
    if beta.is_zero() {
        return Err(shape_error());
    }
    Ok(CurveShape {
        a,
        b,
        alpha,
        beta,
        coeff: cy / cx,
        mult: 1,
    })
}

struct CurveStrata {
    strata: Vec<Stratum>,
    charts: Vec<Chart>,
    nu: Rat,
}

/// Strata of a single weighted blow-up resolving `x^a y^b (x^alpha + c
/// y^beta)^mult` on a cyclic dim-2 ambient.  The weights must balance the
/// binomial so the strict transform meets the exceptional divisor along
/// `v^beta = -1/c` in chart 1.
fn assemble_curve_strata(
    germ: &Germ,
    weights: (i64, i64),
    notes: &mut Vec<String>,
) -> Result<CurveStrata> {
    let shape = curve_shape(germ)?;
    let (w1, w2) = weights;
    if Rat::from_integer(w1) * shape.alpha != Rat::from_integer(w2) * shape.beta {
        return Err(Error::validation(format!(
            "weights ({w1},{w2}) do not balance the binomial exponents ({}, {})",
            shape.alpha, shape.beta
        )));
    }
    if !shape.alpha.is_integer() || !shape.beta.is_integer() {
        return Err(Error::validation(
            "binomial exponents must be integers at blow-up time",
        ));
    }
    let (c1, c2, nu) = blowup2_any(weights, germ)?;
    let nu_expected = Rat::from_integer(w1) * shape.a
        + Rat::from_integer(w2) * shape.b
        + Rat::from_integer(shape.mult as i64) * Rat::from_integer(w1) * shape.alpha;
    assert_eq!(nu, nu_expected, "omega-order disagrees with the shape arithmetic");

    let ell_generic = c1.group().stabilizer(&[0]).character_order(0);
    let ell_check = c2.group().stabilizer(&[1]).character_order(1);
    assert_eq!(ell_generic, ell_check, "generic stabilizer order must be chart-independent");

    let minus_inv = -(BigRational::one() / shape.coeff.clone());
    let sigma = count_branch_points(&c1, 1, shape.beta.to_integer(), &minus_inv)?;
    notes.push(format!(
        "strict transform meets the exceptional divisor in {sigma} point(s) downstairs"
    ));

    let mut removed = sigma as i64;
    let mut strata = Vec::new();
    if !shape.b.is_zero() {
        removed += 1;
        notes.push("chart 1 origin also lies on the transform of {y=0}; excluded".into());
    } else if c1.group().order() > 1 {
        removed += 1;
        strata.push(
            Stratum::new(nu, c1.group().character_order(0), 1)?.with_label("chart 1 origin"),
        );
    }
    if !shape.a.is_zero() {
        removed += 1;
        notes.push("chart 2 origin also lies on the transform of {x=0}; excluded".into());
    } else if c2.group().order() > 1 {
        removed += 1;
        strata.push(
            Stratum::new(nu, c2.group().character_order(1), 1)?.with_label("chart 2 origin"),
        );
    }
    strata.insert(
        0,
        Stratum::new(nu, ell_generic, 2 - removed)?.with_label("exceptional divisor"),
    );
    Ok(CurveStrata {
        strata,
        charts: vec![c1, c2],
        nu,
    })
}

fn validate_cyclic_dim2(ambient: &QuotientType) -> Result<()> {
    if ambient.dim() != 2 || ambient.rank() > 1 {
        return Err(Error::validation(
            "curve pipeline expects a cyclic quotient of C^2",
        ));
    }
    if ambient.rank() == 1 {
        let d = ambient.orders()[0];
        let row = &ambient.weights()[0];
        if gcd(gcd(d, row[0]), row[1]) != 1 {
            return Err(Error::validation(format!(
                "the action of {ambient} is not faithful: gcd(d,p,q) > 1"
            )));
        }
    }
    Ok(())
}

/// Resolves `x^a y^b (x^alpha + c y^beta)^mult` on a cyclic dim-2 quotient by
/// one weighted blow-up after normalizing the ambient type.
///
/// The germ may be semi-invariant rather than invariant; its weight and the
/// power that turns it into a function are recorded in the notes, and the
/// resulting multiplicities (hence the Milnor number) may be rational.
pub fn pipeline_curve(germ: &Germ) -> Result<PipelineResult> {
    let ambient = germ.ambient().clone();
    validate_cyclic_dim2(&ambient)?;
    if germ.is_zero() {
        return Err(Error::validation("cannot resolve the zero germ"));
    }
    let mut notes = Vec::new();
    let v = germ.semi_invariant_weight()?;
    if v.iter().any(|x| !x.is_zero()) {
        let k0 = min_power(&v, ambient.orders());
        notes.push(format!(
            "semi-invariant of weight ({}) on {ambient}; f^{k0} is a well-defined function",
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        ));
    }
    let shape = curve_shape(germ)?;

    let (target, (tx, ty)) = ambient.normalize_dim2()?;
    let transported = germ.transport(&[tx, ty], target.clone())?;
    if !(tx.is_one() && ty.is_one()) {
        notes.push(format!(
            "normalized {ambient} to {target}; exponents transported by ({tx}, {ty})"
        ));
    }
    let t_alpha = shape.alpha * tx;
    let t_beta = shape.beta * ty;
    if !t_alpha.is_integer() || !t_beta.is_integer() {
        return Err(Error::validation(
            "binomial exponents do not stay integral under normalization",
        ));
    }
    let (ai, bi) = (t_alpha.to_integer(), t_beta.to_integer());
    let g = gcd(ai, bi);
    let w = (bi / g, ai / g);
    notes.push(format!("blow-up weights ({}, {})", w.0, w.1));
    let core = assemble_curve_strata(&transported, w, &mut notes)?;
    notes.push(format!("exceptional multiplicity upstairs nu = {}", core.nu));

    let closed_form = if ambient.is_trivial_group()
        && shape.a.is_zero()
        && shape.b.is_zero()
        && shape.mult == 1
    {
        let p = shape.alpha.to_integer();
        let q = shape.beta.to_integer();
        let e = gcd(p, q);
        Some(CyclotomicProduct::from_factors(
            Convention::Delta,
            [
                (rat(1, 1), 1),
                (rat(p * q / e, 1), e),
                (rat(p, 1), -1),
                (rat(q, 1), -1),
            ],
        )?)
    } else {
        None
    };
    Ok(PipelineResult {
        strata: StrataSet::new(1, core.strata)?,
        charts: core.charts,
        closed_form,
        notes,
    })
}

/// Like [`pipeline_curve`] but blowing up with caller-supplied weights and no
/// normalization; accepts non-coprime weights, whose chart types are then
/// non-reduced.  Exposed for comparing resolution routes.
pub fn curve_strata_raw(germ: &Germ, weights: (i64, i64)) -> Result<PipelineResult> {
    validate_cyclic_dim2(germ.ambient())?;
    if germ.is_zero() {
        return Err(Error::validation("cannot resolve the zero germ"));
    }
    germ.semi_invariant_weight()?;
    let mut notes = vec![format!(
        "raw blow-up with weights ({}, {}); ambient left unnormalized",
        weights.0, weights.1
    )];
    let core = assemble_curve_strata(germ, weights, &mut notes)?;
    notes.push(format!("exceptional multiplicity upstairs nu = {}", core.nu));
    Ok(PipelineResult {
        strata: StrataSet::new(1, core.strata)?,
        charts: core.charts,
        closed_form: None,
        notes,
    })
}

fn validate_two_pairs(p1: i64, q1: i64, p2: i64, q2: i64) -> Result<()> {
    if p1 < 1 || q1 < 2 || p2 < 1 || q2 < 2 {
        return Err(Error::validation("need q1, q2 >= 2 and positive p1, p2"));
    }
    if p1 <= q1 {
        return Err(Error::validation("need p1 > q1 (first exponent above 1)"));
    }
    if gcd(p1, q1) != 1 || gcd(p2, q2) != 1 {
        return Err(Error::validation("p_i/q_i must be irreducible"));
    }
    if gcd(q1, q2) != 1 {
        return Err(Error::validation(
            "gcd(q1,q2) > 1 is out of scope for this pipeline",
        ));
    }
    if p1 * q2 >= p2 * q1 {
        return Err(Error::validation("need p1/q1 < p2/q2"));
    }
    Ok(())
}

/// Semigroup generators of the branch with exponent pairs
/// `(p1/q1, p2/(q1 q2))`: `(q1 q2, p1 q2, N)`.
pub fn two_pairs_semigroup_generators(p1: i64, q1: i64, p2: i64, q2: i64) -> Result<[i64; 3]> {
    validate_two_pairs(p1, q1, p2, q2)?;
    let n = p1 * q1 * q2 + p2 * q1 - p1 * q2;
    Ok([q1 * q2, p1 * q2, n])
}

/// Strata and characteristic polynomial of an irreducible plane branch with
/// two Puiseux pairs, resolved by two weighted blow-ups.
pub fn pipeline_two_pairs(p1: i64, q1: i64, p2: i64, q2: i64) -> Result<PipelineResult> {
    validate_two_pairs(p1, q1, p2, q2)?;
    let n = p1 * q1 * q2 + p2 * q1 - p1 * q2;
    let m0 = p1 * q1 * q2;
    let m1 = q2 * n;
    let strata = vec![
        Stratum::new(rat(m0, 1), 1, -1)?.with_label("first exceptional divisor"),
        Stratum::new(rat(m0, 1), q1, 1)?.with_label("first divisor, quotient point of order q1"),
        Stratum::new(rat(m0, 1), p1, 1)?.with_label("first divisor, quotient point of order p1"),
        Stratum::new(rat(m1, 1), 1, -1)?.with_label("second exceptional divisor"),
        Stratum::new(rat(m1, 1), q2, 1)?.with_label("second divisor, quotient point of order q2"),
    ];
    let closed_form = CyclotomicProduct::from_factors(
        Convention::Delta,
        [
            (rat(1, 1), 1),
            (rat(m0, 1), 1),
            (rat(m1, 1), 1),
            (rat(m0 / q1, 1), -1),
            (rat(m0 / p1, 1), -1),
            (rat(n, 1), -1),
        ],
    )?;
    let notes = vec![
        format!("second divisor multiplicity: N = {n}, stratum key q2 N = {m1}"),
        format!(
            "branch semigroup generated by ({}, {}, {})",
            q1 * q2,
            p1 * q2,
            n
        ),
        "the divisor intersection point and the strict-transform point lie on two divisors; excluded".into(),
        "charts omitted: strata are read from the two-step tower data".into(),
    ];
    Ok(PipelineResult {
        strata: StrataSet::new(1, strata)?,
        charts: Vec::new(),
        closed_form: Some(closed_form),
        notes,
    })
}

/// Strata of `x^p + y^q + z^r` resolved by one weighted blow-up of `C^3`.
pub fn pipeline_brieskorn(p: i64, q: i64, r: i64) -> Result<PipelineResult> {
    if p < 1 || q < 1 || r < 1 {
        return Err(Error::validation("exponents must be positive"));
    }
    let mut notes = Vec::new();
    if p < 2 || q < 2 || r < 2 {
        notes.push("an exponent below 2 makes the germ smooth; the table degenerates".into());
    }
    let e1 = gcd(q, r);
    let e2 = gcd(p, r);
    let e3 = gcd(p, q);
    let e = gcd(gcd(p, q), r);
    let k = e1 * e2 * e3;
    let nu = rat(e * p * q * r, k);
    assert!(nu.is_integer(), "e p q r / (e1 e2 e3) is integral");
    let w = [
        rat(e * q * r, k),
        rat(e * p * r, k),
        rat(e * p * q, k),
    ];
    assert!(w.iter().all(|x| x.is_integer()));
    let (w1, w2, w3) = (w[0].to_integer(), w[1].to_integer(), w[2].to_integer());
    let d1 = e * p / (e2 * e3);
    let d2 = e * q / (e1 * e3);
    let d3 = e * r / (e1 * e2);
    let chi_curve = e1 + e2 + e3 - k / e;
    notes.push(format!("weights ({w1}, {w2}, {w3}), multiplicity {nu}"));
    notes.push(format!(
        "central curve has chi = {chi_curve} (e1,e2,e3,e = {e1},{e2},{e3},{e})"
    ));

    let strata = vec![
        Stratum::new(nu, 1, k / e)?.with_label("exceptional divisor, generic part"),
        Stratum::new(nu, d1, -e1)?.with_label("coordinate line 1"),
        Stratum::new(nu, d2, -e2)?.with_label("coordinate line 2"),
        Stratum::new(nu, d3, -e3)?.with_label("coordinate line 3"),
        Stratum::new(nu, w1, 1)?.with_label("chart 1 origin"),
        Stratum::new(nu, w2, 1)?.with_label("chart 2 origin"),
        Stratum::new(nu, w3, 1)?.with_label("chart 3 origin"),
    ];
    let set = StrataSet::new(2, strata)?;
    let closed_form = Some(zeta_from_strata(&set).to_delta(2)?);

    let f = brieskorn_germ(p, q, r)?;
    let (c1, c2, c3, nu_check) = blowup3((w1, w2, w3), &f)?;
    assert_eq!(nu_check, nu);
    Ok(PipelineResult {
        strata: set,
        charts: vec![c1, c2, c3],
        closed_form,
        notes,
    })
}

/// The germ `x^p + y^q + z^r` on `C^3`.
pub fn brieskorn_germ(p: i64, q: i64, r: i64) -> Result<Germ> {
    let mut terms = std::collections::BTreeMap::new();
    terms.insert(
        vec![Rat::from_integer(p), Rat::zero(), Rat::zero()],
        BigRational::one(),
    );
    terms.insert(
        vec![Rat::zero(), Rat::from_integer(q), Rat::zero()],
        BigRational::one(),
    );
    terms.insert(
        vec![Rat::zero(), Rat::zero(), Rat::from_integer(r)],
        BigRational::one(),
    );
    Germ::from_terms(QuotientType::smooth(3), terms)
}

/// Strata of a series `z^{m+k} + (curve cone of degree m)` whose projective
/// tangent curve has one singular point locally of type `x^q + y^p`.
///
/// `chi_complement` is the Euler characteristic of the complement of the
/// curve in the projective plane; it enters one stratum linearly and is
/// supplied by the caller.
pub fn pipeline_yomdin(
    m: i64,
    k: i64,
    p: i64,
    q: i64,
    chi_complement: i64,
) -> Result<PipelineResult> {
    if m < 1 || k < 1 {
        return Err(Error::validation("need m, k >= 1"));
    }
    if p < 2 || q < 2 || gcd(p, q) != 1 {
        return Err(Error::validation("need coprime p, q >= 2"));
    }
    let k1 = gcd(k, p);
    let k2 = gcd(k, q);
    let l = p * q * (m + k) / (k1 * k2);
    let strata = vec![
        Stratum::new(rat(m, 1), 1, chi_complement)?.with_label("tangent-cone divisor"),
        Stratum::new(rat(l, 1), 1, k1 * k2)?.with_label("second divisor, generic part"),
        Stratum::new(rat(l, 1), p / k1, -k2)?.with_label("quotient curve of order p/k1"),
        Stratum::new(rat(l, 1), q / k2, -k1)?.with_label("quotient curve of order q/k2"),
        Stratum::new(rat(l, 1), p * q / (k1 * k2), 1)?.with_label("deepest quotient point"),
    ];
    let cusp = CyclotomicProduct::from_factors(
        Convention::Delta,
        [
            (rat(1, 1), 1),
            (rat(p * q, 1), 1),
            (rat(p, 1), -1),
            (rat(q, 1), -1),
        ],
    )?;
    let closed_form = CyclotomicProduct::from_factors(
        Convention::Delta,
        [(rat(m, 1), chi_complement), (rat(1, 1), -1)],
    )?
    .mul(&cusp.twist(k)?.subst_power(rat(m + k, 1))?)?;
    let notes = vec![
        format!("k1 = {k1}, k2 = {k2}, second multiplicity = {l}"),
        format!("generic chi on the second divisor is k1 k2 = {}", k1 * k2),
        "charts omitted: strata follow the series stratification".into(),
    ];
    Ok(PipelineResult {
        strata: StrataSet::new(2, strata)?,
        charts: Vec::new(),
        closed_form: Some(closed_form),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qspace::FactoredForm;
    use std::collections::BTreeMap;

    fn big(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn binomial_germ(q: QuotientType, a: i64, b: i64, alpha: i64, beta: i64, mult: u32) -> Germ {
        Germ::from_factored(
            q,
            FactoredForm {
                monomial: vec![rat(a, 1), rat(b, 1)],
                factors: vec![(
                    BTreeMap::from([(vec![alpha, 0], big(1)), (vec![0, beta], big(1))]),
                    mult,
                )],
            },
        )
        .unwrap()
    }

    fn keys(result: &PipelineResult) -> Vec<(Rat, i64, i64)> {
        let mut v: Vec<(Rat, i64, i64)> = result
            .strata
            .strata()
            .iter()
            .map(|s| (s.m(), s.ell(), s.chi()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn shape_of_factored_and_expanded_germs() {
        let g = binomial_germ(QuotientType::smooth(2), 2, 3, 2, 3, 2);
        let s = curve_shape(&g).unwrap();
        assert_eq!((s.a, s.b, s.alpha, s.beta, s.mult), (rat(2, 1), rat(3, 1), rat(2, 1), rat(3, 1), 2));
        assert_eq!(s.coeff, big(1));

        let mut terms = BTreeMap::new();
        terms.insert(vec![rat(4, 1), rat(1, 1)], big(2));
        terms.insert(vec![rat(0, 1), rat(7, 1)], big(-3));
        let g = Germ::from_terms(QuotientType::smooth(2), terms).unwrap();
        let s = curve_shape(&g).unwrap();
        assert_eq!((s.a, s.b), (rat(0, 1), rat(1, 1)));
        assert_eq!((s.alpha, s.beta), (rat(4, 1), rat(6, 1)));
        assert_eq!(s.coeff, BigRational::new((-3).into(), 2.into()));
    }

    #[test]
    fn shape_rejections() {
        let q = QuotientType::smooth(2);
        let mut three = BTreeMap::new();
        three.insert(vec![rat(2, 1), rat(0, 1)], big(1));
        three.insert(vec![rat(0, 1), rat(2, 1)], big(1));
        three.insert(vec![rat(1, 1), rat(1, 1)], big(1));
        assert!(curve_shape(&Germ::from_terms(q.clone(), three).unwrap()).is_err());

        let two_factors = Germ::from_factored(
            q,
            FactoredForm {
                monomial: vec![rat(0, 1), rat(0, 1)],
                factors: vec![
                    (BTreeMap::from([(vec![2, 0], big(1)), (vec![0, 1], big(1))]), 1),
                    (BTreeMap::from([(vec![2, 0], big(1)), (vec![0, 1], big(-1))]), 3),
                ],
            },
        )
        .unwrap();
        assert!(curve_shape(&two_factors).is_err());
    }

    #[test]
    fn plane_cusp_family_strata() {
        let g = binomial_germ(QuotientType::smooth(2), 0, 0, 4, 6, 1);
        let out = pipeline_curve(&g).unwrap();
        assert_eq!(
            keys(&out),
            vec![(rat(12, 1), 1, -2), (rat(12, 1), 2, 1), (rat(12, 1), 3, 1)]
        );
        let closed = out.closed_form.unwrap();
        assert_eq!(closed.factors()[&rat(1, 1)], 1);
        assert_eq!(closed.factors()[&rat(12, 1)], 2);
        assert_eq!(closed.factors()[&rat(4, 1)], -1);
        assert_eq!(closed.factors()[&rat(6, 1)], -1);
        assert_eq!(zeta_from_strata(&out.strata).to_delta(1).unwrap(), closed);
        assert_eq!(zeta_from_strata(&out.strata).milnor(1).unwrap(), rat(15, 1));
    }

    #[test]
    fn node_has_no_extra_strata() {
        let g = binomial_germ(QuotientType::smooth(2), 0, 0, 2, 2, 1);
        let out = pipeline_curve(&g).unwrap();
        assert_eq!(keys(&out), vec![(rat(2, 1), 1, 0)]);
        let delta = out.closed_form.unwrap().expand().unwrap();
        assert_eq!(delta.coeffs().to_vec(), vec![big_int(-1), big_int(1)]);
    }

    fn big_int(x: i64) -> num::BigInt {
        x.into()
    }

    #[test]
    fn quotient_cusp_table_row_one() {
        let q = QuotientType::cyclic(6, vec![3, 2]).unwrap();
        let g = binomial_germ(q, 2, 3, 2, 3, 1);
        let out = pipeline_curve(&g).unwrap();
        assert_eq!(keys(&out), vec![(rat(3, 1), 1, -1)]);
        let z = zeta_from_strata(&out.strata);
        assert_eq!(z.milnor(1).unwrap(), rat(4, 1));
        assert!(out.notes.iter().any(|n| n.contains("normalized")));
    }

    #[test]
    fn table_row_two_on_c2() {
        let g = binomial_germ(QuotientType::smooth(2), 1, 1, 2, 3, 1);
        let out = pipeline_curve(&g).unwrap();
        assert_eq!(keys(&out), vec![(rat(11, 1), 1, -1)]);
        assert_eq!(zeta_from_strata(&out.strata).milnor(1).unwrap(), rat(12, 1));
    }

    #[test]
    fn table_row_three_rational_multiplicity() {
        let q = QuotientType::cyclic(6, vec![3, 2]).unwrap();
        let g = binomial_germ(q, 1, 1, 2, 3, 1);
        let out = pipeline_curve(&g).unwrap();
        assert_eq!(keys(&out), vec![(rat(11, 6), 1, -1)]);
        assert_eq!(zeta_from_strata(&out.strata).milnor(1).unwrap(), rat(17, 6));
        assert!(out
            .notes
            .iter()
            .any(|n| n.contains("semi-invariant of weight (5)") && n.contains("f^6")));
    }

    #[test]
    fn raw_route_matches_normalized_route() {
        let g = binomial_germ(QuotientType::smooth(2), 0, 0, 4, 6, 1);
        let normalized = pipeline_curve(&g).unwrap();
        let raw = curve_strata_raw(&g, (6, 4)).unwrap();
        assert_eq!(
            zeta_from_strata(&normalized.strata),
            zeta_from_strata(&raw.strata)
        );
        let raw_keys = keys(&raw);
        assert_eq!(
            raw_keys,
            vec![(rat(24, 1), 2, -2), (rat(24, 1), 4, 1), (rat(24, 1), 6, 1)]
        );
    }

    #[test]
    fn nonreduced_germ_doubles_the_fiber() {
        // (x^2 + y^3)^2: chi of the fiber doubles that of the cusp
        let g = binomial_germ(QuotientType::smooth(2), 0, 0, 2, 3, 2);
        let out = pipeline_curve(&g).unwrap();
        assert!(out.closed_form.is_none());
        assert_eq!(zeta_from_strata(&out.strata).degree(), rat(-2, 1));
    }

    #[test]
    fn two_pairs_example() {
        let out = pipeline_two_pairs(3, 2, 5, 3).unwrap();
        assert_eq!(
            keys(&out),
            vec![
                (rat(18, 1), 1, -1),
                (rat(18, 1), 2, 1),
                (rat(18, 1), 3, 1),
                (rat(57, 1), 1, -1),
                (rat(57, 1), 3, 1),
            ]
        );
        let closed = out.closed_form.unwrap();
        let expected = CyclotomicProduct::from_factors(
            Convention::Delta,
            [
                (rat(1, 1), 1),
                (rat(18, 1), 1),
                (rat(57, 1), 1),
                (rat(9, 1), -1),
                (rat(6, 1), -1),
                (rat(19, 1), -1),
            ],
        )
        .unwrap();
        assert_eq!(closed, expected);
        assert_eq!(zeta_from_strata(&out.strata).to_delta(1).unwrap(), closed);
        assert_eq!(closed.degree(), rat(42, 1));
        assert_eq!(
            two_pairs_semigroup_generators(3, 2, 5, 3).unwrap(),
            [6, 9, 19]
        );
    }

    #[test]
    fn two_pairs_validation() {
        assert!(pipeline_two_pairs(5, 2, 9, 5).is_err()); // 5/2 > 9/5
        assert!(pipeline_two_pairs(3, 2, 7, 4).is_err()); // gcd(q1,q2) = 2
        assert!(pipeline_two_pairs(9, 6, 25, 7).is_err()); // p1/q1 reducible
        assert!(pipeline_two_pairs(1, 2, 5, 3).is_err()); // p1 < q1
    }

    #[test]
    fn brieskorn_small_cases() {
        let out = pipeline_brieskorn(2, 3, 5).unwrap();
        let closed = out.closed_form.clone().unwrap();
        let expected = CyclotomicProduct::from_factors(
            Convention::Delta,
            [
                (rat(30, 1), 1),
                (rat(2, 1), 1),
                (rat(3, 1), 1),
                (rat(5, 1), 1),
                (rat(1, 1), -1),
                (rat(15, 1), -1),
                (rat(10, 1), -1),
                (rat(6, 1), -1),
            ],
        )
        .unwrap();
        assert_eq!(closed, expected);
        assert_eq!(closed.degree(), rat(8, 1));
        assert_eq!(out.charts.len(), 3);

        let small = pipeline_brieskorn(2, 2, 2).unwrap();
        let delta = small.closed_form.unwrap().expand().unwrap();
        assert_eq!(delta.coeffs().to_vec(), vec![big_int(1), big_int(1)]);
    }

    #[test]
    fn brieskorn_common_factors() {
        // (4,6,10): e1=e2=e3=2, e=2, weights (15,10,6), nu = 60
        let out = pipeline_brieskorn(4, 6, 10).unwrap();
        assert_eq!(
            keys(&out),
            vec![
                (rat(60, 1), 1, 4),
                (rat(60, 1), 2, -2),
                (rat(60, 1), 3, -2),
                (rat(60, 1), 5, -2),
                (rat(60, 1), 6, 1),
                (rat(60, 1), 10, 1),
                (rat(60, 1), 15, 1),
            ]
        );
        assert_eq!(out.closed_form.unwrap().degree(), rat(135, 1));
        assert!(out.notes.iter().any(|n| n.contains("chi = 2")));
    }

    #[test]
    fn yomdin_example_and_twist_route() {
        let out = pipeline_yomdin(3, 1, 2, 3, 1).unwrap();
        assert_eq!(
            keys(&out),
            vec![
                (rat(3, 1), 1, 1),
                (rat(24, 1), 1, 1),
                (rat(24, 1), 2, -1),
                (rat(24, 1), 3, -1),
                (rat(24, 1), 6, 1),
            ]
        );
        let closed = out.closed_form.unwrap();
        assert_eq!(zeta_from_strata(&out.strata).to_delta(2).unwrap(), closed);
        let delta = closed.expand().unwrap();
        let expect: Vec<num::BigInt> = [1, 1, 1, 0, -1, -1, -1, 0, 1, 1, 1]
            .iter()
            .map(|&x| x.into())
            .collect();
        assert_eq!(delta.coeffs().to_vec(), expect);
        assert_eq!(closed.degree(), rat(10, 1));
    }

    #[test]
    fn yomdin_twist_route_grid() {
        for (m, k) in [(1, 1), (2, 3), (4, 2), (3, 6)] {
            for (p, q) in [(2, 3), (3, 4)] {
                for chi in [-2, 0, 3] {
                    let out = pipeline_yomdin(m, k, p, q, chi).unwrap();
                    assert_eq!(
                        zeta_from_strata(&out.strata).to_delta(2).unwrap(),
                        out.closed_form.unwrap(),
                        "m={m} k={k} p={p} q={q} chi={chi}"
                    );
                }
            }
        }
    }

    #[test]
    fn pipeline_rejects_bad_inputs() {
        let q = QuotientType::cyclic(2, vec![1, 1]).unwrap();
        let not_semi = Germ::from_factored(
            q,
            FactoredForm {
                monomial: vec![rat(0, 1), rat(0, 1)],
                factors: vec![
                    (BTreeMap::from([(vec![2, 0], big(1)), (vec![0, 1], big(1))]), 1),
                    (BTreeMap::from([(vec![2, 0], big(1)), (vec![0, 1], big(-1))]), 3),
                ],
            },
        )
        .unwrap();
        let err = pipeline_curve(&not_semi).unwrap_err();
        assert!(matches!(err, Error::NotSemiInvariant { .. }));

        let unfaithful = QuotientType::cyclic(4, vec![2, 2]).unwrap();
        let g = binomial_germ(unfaithful, 0, 0, 2, 2, 1);
        assert!(pipeline_curve(&g).is_err());

        assert!(pipeline_yomdin(3, 1, 2, 4, 1).is_err());
    }

    #[test]
    fn json_shape_of_pipeline_result() {
        let out = pipeline_two_pairs(3, 2, 5, 3).unwrap();
        let v = out.to_json();
        assert!(v["strata"].is_array());
        assert_eq!(v["n"], 1);
        assert!(v["closed_form"]["factors"].is_array());
        assert!(v["notes"].is_array());
    }
}
