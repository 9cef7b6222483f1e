//! Calculus of abelian quotient-space types `X(d;A)`.
//!
//! `X(d;A)` is the quotient of affine n-space by the diagonal action of the
//! product of cyclic groups of orders `d = (d_1, ..., d_r)`: the generator of
//! the i-th factor scales the j-th coordinate by a primitive `d_i`-th root of
//! unity raised to `a_ij`.  Everything here is exact: group elements are
//! rational tuples mod 1, and all stabilizer, character-order and
//! normalization questions reduce to gcd/lcm arithmetic or finite enumeration.

mod germ;
mod group;

pub use germ::{FactoredForm, Germ};
pub use group::DiagonalGroup;

use crate::error::{Error, Result};
use num::integer::{gcd, lcm};
use num::rational::Ratio;
use num::{One, Zero};
use std::fmt;

/// Exact rational scalar used for exponents, multiplicities and weights.
pub type Rat = Ratio<i64>;

/// Shorthand constructor for `Rat`.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Ratio::new(numer, denom)
}

/// Default cap on the number of group elements any enumeration may visit.
pub const DEFAULT_ENUM_BOUND: u64 = 1_000_000;

/// Reduce a rational into the half-open interval `[0, 1)`.
pub(crate) fn frac(x: Rat) -> Rat {
    let f = x.fract();
    if f < Rat::zero() {
        f + Rat::one()
    } else {
        f
    }
}

/// An abelian quotient-space type `(d; A)`.
///
/// Rows of the weight matrix are stored as canonical representatives in
/// `[0, d_i)`, so two literals that differ by multiples of the orders compare
/// equal.  The representation is not required to be faithful or normalized;
/// both properties are decidable through [`QuotientType::stabilizer_order`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientType {
    d: Vec<i64>,
    a: Vec<Vec<i64>>,
}

impl QuotientType {
    /// Builds a type from cyclic orders and one weight row per order.
    ///
    /// Negative weights are accepted and reduced mod `d_i`.
    pub fn new(d: Vec<i64>, a: Vec<Vec<i64>>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::validation("a quotient type needs at least one cyclic order"));
        }
        if d.len() != a.len() {
            return Err(Error::validation(format!(
                "{} cyclic orders but {} weight rows",
                d.len(),
                a.len()
            )));
        }
        if let Some(bad) = d.iter().find(|&&di| di < 1) {
            return Err(Error::validation(format!("cyclic order {bad} is not positive")));
        }
        let n = a[0].len();
        if n == 0 {
            return Err(Error::validation("ambient dimension must be at least 1"));
        }
        if a.iter().any(|row| row.len() != n) {
            return Err(Error::validation("weight rows have inconsistent lengths"));
        }
        let a = a
            .into_iter()
            .zip(&d)
            .map(|(row, &di)| row.into_iter().map(|w| w.rem_euclid(di)).collect())
            .collect();
        Ok(QuotientType { d, a })
    }

    /// Cyclic type `X(d; w_1, ..., w_n)`.
    pub fn cyclic(d: i64, weights: Vec<i64>) -> Result<Self> {
        Self::new(vec![d], vec![weights])
    }

    /// Affine space `C^n` (trivial group).
    pub fn smooth(n: usize) -> Self {
        QuotientType {
            d: vec![1],
            a: vec![vec![0; n]],
        }
    }

    /// Ambient dimension n.
    pub fn dim(&self) -> usize {
        self.a[0].len()
    }

    /// Number of cyclic factors r.
    pub fn rank(&self) -> usize {
        self.d.len()
    }

    /// The cyclic orders `d_1, ..., d_r`.
    pub fn orders(&self) -> &[i64] {
        &self.d
    }

    /// The canonical weight matrix, rows in `[0, d_i)`.
    pub fn weights(&self) -> &[Vec<i64>] {
        &self.a
    }

    /// Product of the cyclic orders (an upper bound for the group order).
    pub fn order_product(&self) -> u128 {
        self.d.iter().map(|&di| di as u128).product()
    }

    /// True when every weight row is trivial, i.e. the group acts trivially.
    pub fn is_trivial_group(&self) -> bool {
        self.a.iter().all(|row| row.iter().all(|&w| w == 0))
    }

    /// Order of the j-th coordinate character: `lcm_i(d_i / gcd(d_i, a_ij))`.
    ///
    /// This is the `l_j` entering the intrinsic multiplicity `m/l_j` of a
    /// divisor `{x_j = 0}`: the quotient map identifies the j-th coordinate
    /// line with `C` via `x_j -> x_j^{l_j}`.
    ///
    /// # Panics
    /// Panics if `j` is out of range.
    pub fn ell(&self, j: usize) -> i64 {
        assert!(j < self.dim(), "coordinate index {j} out of range");
        self.d
            .iter()
            .zip(&self.a)
            .map(|(&di, row)| di / gcd(di, row[j]))
            .fold(1, lcm)
    }

    /// Same as [`QuotientType::ell`], but by direct enumeration of the image
    /// of the coordinate character over the whole group.
    pub fn ell_enumerated(&self, j: usize) -> Result<i64> {
        assert!(j < self.dim(), "coordinate index {j} out of range");
        let group = self.group()?;
        Ok(group.character_order(j))
    }

    /// Order of the subgroup fixing a point whose coordinates vanish exactly
    /// at `zero_coords`.
    ///
    /// The count is taken in the abstract group `Z_{d_1} x ... x Z_{d_r}`, so
    /// with an empty `zero_coords` this is the kernel order of the whole
    /// representation (1 iff the representation is faithful).  The cyclic case
    /// uses the closed form `gcd(d, a_j : j not in zero_coords)`; higher ranks
    /// enumerate tuples and are subject to the enumeration bound.
    pub fn stabilizer_order(&self, zero_coords: &[usize]) -> Result<i64> {
        self.stabilizer_order_bounded(zero_coords, DEFAULT_ENUM_BOUND)
    }

    /// [`QuotientType::stabilizer_order`] with an explicit enumeration bound.
    pub fn stabilizer_order_bounded(&self, zero_coords: &[usize], bound: u64) -> Result<i64> {
        let n = self.dim();
        if let Some(&bad) = zero_coords.iter().find(|&&j| j >= n) {
            return Err(Error::validation(format!("coordinate index {bad} out of range")));
        }
        let live: Vec<usize> = (0..n).filter(|j| !zero_coords.contains(j)).collect();
        if self.rank() == 1 {
            let d = self.d[0];
            return Ok(live.iter().fold(d, |g, &j| gcd(g, self.a[0][j])));
        }
        if self.order_product() > bound as u128 {
            return Err(Error::EnumerationBound { bound });
        }
        // Element k = (k_1, ..., k_r) fixes the point iff for every live j:
        // sum_i k_i a_ij / d_i is an integer.
        let big_l = self.d.iter().copied().fold(1, lcm);
        let scaled: Vec<Vec<i64>> = self
            .d
            .iter()
            .zip(&self.a)
            .map(|(&di, row)| live.iter().map(|&j| row[j] * (big_l / di)).collect())
            .collect();
        let mut count = 0i64;
        let mut k = vec![0i64; self.rank()];
        loop {
            let fixes = (0..live.len()).all(|c| {
                let s: i64 = k.iter().zip(&scaled).map(|(&ki, row)| ki * row[c]).sum();
                s % big_l == 0
            });
            if fixes {
                count += 1;
            }
            // odometer over Z_{d_1} x ... x Z_{d_r}
            let mut pos = 0;
            loop {
                if pos == k.len() {
                    return Ok(count);
                }
                k[pos] += 1;
                if k[pos] < self.d[pos] {
                    break;
                }
                k[pos] = 0;
                pos += 1;
            }
        }
    }

    /// True iff the action is free on the torus and small: the stabilizer is
    /// trivial for the empty zero set and for every single coordinate.
    pub fn is_normalized(&self) -> Result<bool> {
        if self.stabilizer_order(&[])? != 1 {
            return Ok(false);
        }
        for j in 0..self.dim() {
            if self.stabilizer_order(&[j])? != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Normalizes a cyclic surface type `X(d;a,b)` with `gcd(d,a,b) = 1`.
    ///
    /// Returns the normalized type `X(d/((d,a)(d,b)); a/(d,a), b/(d,b))`
    /// together with the exponent transport `(1/gcd(d,b), 1/gcd(d,a))`: the
    /// isomorphism sends `[(x,y)]` to `[(x^{(d,b)}, y^{(d,a)})]`, so a
    /// monomial's exponents are multiplied by the transport factors when
    /// rewritten in the target coordinates.  Identity on normalized input.
    pub fn normalize_dim2(&self) -> Result<(QuotientType, (Rat, Rat))> {
        if self.rank() != 1 || self.dim() != 2 {
            return Err(Error::validation(
                "normalize_dim2 expects a cyclic type in dimension 2",
            ));
        }
        let (d, a, b) = (self.d[0], self.a[0][0], self.a[0][1]);
        if gcd(gcd(a, b), d) != 1 {
            return Err(Error::validation(format!(
                "X({d};{a},{b}) does not act faithfully: gcd(d,a,b) = {} must be 1 \
                 (divide it out of d and the weights first)",
                gcd(gcd(a, b), d)
            )));
        }
        let alpha = gcd(d, a);
        let beta = gcd(d, b);
        let target = QuotientType::cyclic(d / (alpha * beta), vec![a / alpha, b / beta])?;
        Ok((target, (rat(1, beta), rat(1, alpha))))
    }

    /// The group realized as a finite subgroup of `(Q/Z)^n`.
    pub fn group(&self) -> Result<DiagonalGroup> {
        DiagonalGroup::from_type_bounded(self, DEFAULT_ENUM_BOUND)
    }

    /// [`QuotientType::group`] with an explicit enumeration bound.
    pub fn group_bounded(&self, bound: u64) -> Result<DiagonalGroup> {
        DiagonalGroup::from_type_bounded(self, bound)
    }
}

impl fmt::Display for QuotientType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial_group() {
            return write!(f, "C^{}", self.dim());
        }
        let orders = self
            .d
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let rows = self
            .a
            .iter()
            .map(|row| {
                row.iter()
                    .map(|w| w.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("|");
        write!(f, "X({orders};{rows})")
    }
}

/// The group enumeration for a type: closure of the weight rows in `(Q/Z)^n`.
pub fn from_type(q: &QuotientType) -> Result<DiagonalGroup> {
    q.group()
}

/// Smallest `k >= 1` with `k * v_i = 0 mod d_i` for every row.
///
/// `v` is a semi-invariance weight as returned by
/// [`Germ::semi_invariant_weight`]; `f^k` is a well-defined function exactly
/// when `k` is a multiple of the returned value.
pub fn min_power(v: &[Rat], d: &[i64]) -> i64 {
    assert_eq!(v.len(), d.len(), "weight vector and orders differ in length");
    v.iter()
        .zip(d)
        .map(|(&vi, &di)| *(vi / Rat::from_integer(di)).denom())
        .fold(1, lcm)
}

/// Reduces a weighted-projective weight vector to one in which any n of the
/// n+1 entries are coprime.
///
/// With `d_i` the gcd of all entries except the i-th and `e_i` the product of
/// the other `d_j`, the space `P^n(q_0,...,q_n)` is isomorphic to
/// `P^n(q_0/e_0, ..., q_n/e_n)`; this returns those reduced weights.
pub fn reduce_projective_weights(w: &[i64]) -> Result<Vec<i64>> {
    if w.len() < 2 {
        return Err(Error::validation("need at least two projective weights"));
    }
    if let Some(&bad) = w.iter().find(|&&x| x < 1) {
        return Err(Error::validation(format!("projective weight {bad} is not positive")));
    }
    let total = w.iter().copied().fold(0, gcd);
    if total != 1 {
        return Err(Error::validation(format!(
            "projective weights must have gcd 1, found {total}"
        )));
    }
    let d: Vec<i64> = (0..w.len())
        .map(|i| {
            w.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &x)| x)
                .fold(0, gcd)
        })
        .collect();
    let reduced: Vec<i64> = (0..w.len())
        .map(|i| {
            let e: i64 = d
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &x)| x)
                .product();
            debug_assert_eq!(w[i] % e, 0, "weight {} not divisible by {}", w[i], e);
            w[i] / e
        })
        .collect();
    Ok(reduced)
}
