//! Weighted blow-up charts and resolution pipelines.
//!
//! A weighted blow-up of a quotient type is covered by charts that are again
//! quotient types.  Each chart is described on its cover `C^n`: a monomial
//! substitution map, a diagonal group obtained by lifting the downstairs
//! group through that map, and the pulled-back local equation.  All stratum
//! data (multiplicities, character orders, branch-point counts) is then read
//! off the chart groups by exact enumeration.

mod oracle;
mod pipelines;

pub use oracle::{oracle_quasihomogeneous, oracle_semigroup_mu};
pub use pipelines::{
    brieskorn_germ, curve_strata_raw, pipeline_brieskorn, pipeline_curve, pipeline_two_pairs,
    pipeline_yomdin, two_pairs_semigroup_generators, PipelineResult,
};

use crate::error::{Error, Result};
use crate::qspace::{DiagonalGroup, Germ, QuotientType, Rat, DEFAULT_ENUM_BOUND};
use num::integer::gcd;
use num::{BigRational, Signed, Zero};
use std::collections::BTreeMap;

/// One chart of a weighted blow-up, described on its smooth cover.
#[derive(Clone, Debug)]
pub struct Chart {
    name: String,
    index: usize,
    group: DiagonalGroup,
    ambient: QuotientType,
    cover_map: Vec<Vec<i64>>,
    local_equation: Germ,
    divisor_coords: BTreeMap<String, usize>,
}

impl Chart {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Chart index within the blow-up (the gluing role).
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn group(&self) -> &DiagonalGroup {
        &self.group
    }

    /// Quotient type presenting the chart (synthesized from the group).
    pub fn ambient(&self) -> &QuotientType {
        &self.ambient
    }

    /// Row i gives the chart-coordinate exponents of the i-th downstairs
    /// coordinate.
    pub fn cover_map(&self) -> &[Vec<i64>] {
        &self.cover_map
    }

    pub fn local_equation(&self) -> &Germ {
        &self.local_equation
    }

    pub fn divisor_coords(&self) -> &BTreeMap<String, usize> {
        &self.divisor_coords
    }

    pub fn divisor_coord(&self, name: &str) -> Result<usize> {
        self.divisor_coords
            .get(name)
            .copied()
            .ok_or_else(|| Error::validation(format!("no divisor named {name} in chart {}", self.name)))
    }
}

/// Solves `M s = rhs` exactly over the rationals (square M, n <= 3 in
/// practice).  Returns None when M is singular.
fn solve_rational(m: &[Vec<i64>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = rhs.len();
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = m[i].iter().map(|&x| Rat::from_integer(x)).collect();
            row.push(rhs[i]);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in col..=n {
                    let sub = a[col][c] * f;
                    a[r][c] -= sub;
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n]).collect())
}

/// Builds one blow-up chart: the group is the closure of the base chart
/// generator with lifts of the downstairs generators through the cover map.
fn make_chart(
    index: usize,
    base_gen: Vec<Rat>,
    rows: Vec<Vec<i64>>,
    exceptional: usize,
    f: &Germ,
    bound: u64,
) -> Result<Chart> {
    let n = rows.len();
    let mut gens = Vec::new();
    if base_gen.iter().any(|x| !x.is_zero()) {
        gens.push(base_gen);
    }
    let ambient = f.ambient();
    for (&d, row) in ambient.orders().iter().zip(ambient.weights()) {
        let rhs: Vec<Rat> = row.iter().map(|&a| Rat::new(a, d)).collect();
        let lift = solve_rational(&rows, &rhs)
            .ok_or_else(|| Error::validation("cover map is singular"))?;
        if lift.iter().any(|x| !x.is_zero()) {
            gens.push(lift);
        }
    }
    let group = DiagonalGroup::closure(n, &gens, bound)?;
    let chart_ambient = group.to_type();
    let local_equation = f.pullback(&rows, chart_ambient.clone())?;
    Ok(Chart {
        name: format!("U{}", index + 1),
        index,
        group,
        ambient: chart_ambient,
        cover_map: rows,
        local_equation,
        divisor_coords: BTreeMap::from([("E".to_string(), exceptional)]),
    })
}

/// Weighted blow-up of a dim-2 cyclic quotient at the origin.
///
/// Chart 1 covers `x = u^p, y = u^q v`; chart 2 covers `x = u v^p, y = v^q`.
/// The returned multiplicity is the omega-order of `f`, i.e. the multiplicity
/// of the pullback along the exceptional divisor upstairs.
pub fn blowup2(weights: (i64, i64), f: &Germ) -> Result<(Chart, Chart, Rat)> {
    let (p, q) = weights;
    if gcd(p, q) != 1 {
        return Err(Error::validation(format!("blow-up weights ({p},{q}) must be coprime")));
    }
    blowup2_any(weights, f)
}

/// Blow-up without the coprimality requirement on the weights; used for the
/// non-reduced chart types `X(q;-1,p)` that appear when blowing up with the
/// raw exponents instead of their reduced form.
pub(crate) fn blowup2_any(weights: (i64, i64), f: &Germ) -> Result<(Chart, Chart, Rat)> {
    let (p, q) = weights;
    if p < 1 || q < 1 {
        return Err(Error::validation("blow-up weights must be positive"));
    }
    let ambient = f.ambient();
    if ambient.dim() != 2 || ambient.rank() > 1 {
        return Err(Error::validation("dim-2 blow-up expects a cyclic type on two coordinates"));
    }
    let nu = f
        .omega_order(&[p, q])
        .ok_or_else(|| Error::validation("cannot blow up the zero germ"))?;
    let bound = DEFAULT_ENUM_BOUND;
    let c1 = make_chart(
        0,
        vec![Rat::new(-1, p), Rat::new(q, p)],
        vec![vec![p, 0], vec![q, 1]],
        0,
        f,
        bound,
    )?;
    let c2 = make_chart(
        1,
        vec![Rat::new(p, q), Rat::new(-1, q)],
        vec![vec![1, p], vec![0, q]],
        1,
        f,
        bound,
    )?;
    Ok((c1, c2, nu))
}

/// Weighted blow-up of `C^3` at the origin with weights `(p,q,r)`.
pub fn blowup3(weights: (i64, i64, i64), f: &Germ) -> Result<(Chart, Chart, Chart, Rat)> {
    let (p, q, r) = weights;
    if p < 1 || q < 1 || r < 1 {
        return Err(Error::validation("blow-up weights must be positive"));
    }
    let ambient = f.ambient();
    if ambient.dim() != 3 || !ambient.is_trivial_group() {
        return Err(Error::validation("dim-3 blow-up is only implemented over C^3"));
    }
    let nu = f
        .omega_order(&[p, q, r])
        .ok_or_else(|| Error::validation("cannot blow up the zero germ"))?;
    let bound = DEFAULT_ENUM_BOUND;
    let c1 = make_chart(
        0,
        vec![Rat::new(-1, p), Rat::new(q, p), Rat::new(r, p)],
        vec![vec![p, 0, 0], vec![q, 1, 0], vec![r, 0, 1]],
        0,
        f,
        bound,
    )?;
    let c2 = make_chart(
        1,
        vec![Rat::new(p, q), Rat::new(-1, q), Rat::new(r, q)],
        vec![vec![1, p, 0], vec![0, q, 0], vec![0, r, 1]],
        1,
        f,
        bound,
    )?;
    let c3 = make_chart(
        2,
        vec![Rat::new(p, r), Rat::new(q, r), Rat::new(-1, r)],
        vec![vec![1, 0, p], vec![0, 1, q], vec![0, 0, r]],
        2,
        f,
        bound,
    )?;
    Ok((c1, c2, c3, nu))
}

/// Intrinsic multiplicity `m(D, q) = nu / ell` of a divisor in a chart, where
/// `ell` is the order of the divisor-coordinate character on the stabilizer
/// of a generic divisor point.
pub fn exceptional_multiplicity(chart: &Chart, divisor: &str, nu: Rat) -> Result<Rat> {
    let j = chart.divisor_coord(divisor)?;
    let stab = chart.group().stabilizer(&[j]);
    let ell = stab.character_order(j);
    Ok(nu / Rat::from_integer(ell))
}

/// Counts the points of `{u_coord^exponent = constant}` on the exceptional
/// divisor of a chart, downstairs: solutions are grouped into orbits of the
/// chart group acting through its `coord` component.
///
/// Arguments of the solutions are rationals mod 1, so the count is exact; the
/// constant must be a nonzero real rational.
pub fn count_branch_points(
    chart: &Chart,
    coord: usize,
    exponent: i64,
    constant: &BigRational,
) -> Result<usize> {
    if exponent < 1 {
        return Err(Error::validation("branch exponent must be positive"));
    }
    if constant.is_zero() {
        return Err(Error::validation("branch constant must be nonzero"));
    }
    if coord >= chart.group().dim() {
        return Err(Error::validation("branch coordinate out of range"));
    }
    let theta = if constant.is_positive() {
        Rat::zero()
    } else {
        Rat::new(1, 2)
    };
    let mut solutions: std::collections::BTreeSet<Rat> = (0..exponent)
        .map(|j| crate::qspace::frac((theta + Rat::from_integer(j)) / Rat::from_integer(exponent)))
        .collect();
    let shifts = chart.group().coordinate_values(coord);
    for &s in &solutions {
        for &t in &shifts {
            if !solutions.contains(&crate::qspace::frac(s + t)) {
                return Err(Error::validation(
                    "solution set is not invariant under the chart group",
                ));
            }
        }
    }
    let mut orbits = 0;
    while let Some(&s) = solutions.iter().next() {
        for &t in &shifts {
            solutions.remove(&crate::qspace::frac(s + t));
        }
        orbits += 1;
    }
    Ok(orbits)
}
