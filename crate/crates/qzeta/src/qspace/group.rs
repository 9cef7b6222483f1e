use super::{frac, QuotientType, Rat};
use crate::error::{Error, Result};
use num::Zero;
use std::collections::BTreeSet;

/// A finite subgroup of `(Q/Z)^n` acting diagonally on `C^n`.
///
/// The tuple `(g_1, ..., g_n)` acts by scaling the j-th coordinate with
/// `exp(2 pi i g_j)`.  Storing arguments instead of matrices makes the action
/// faithful by construction and turns stabilizer and orbit questions into
/// exact arithmetic on rationals mod 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalGroup {
    n: usize,
    elements: BTreeSet<Vec<Rat>>,
    generators: Vec<Vec<Rat>>,
}

impl DiagonalGroup {
    /// The trivial group acting on `C^n`.
    pub fn trivial(n: usize) -> Self {
        let zero = vec![Rat::zero(); n];
        DiagonalGroup {
            n,
            elements: BTreeSet::from([zero]),
            generators: Vec::new(),
        }
    }

    /// Closure of the given tuples under componentwise addition mod 1.
    ///
    /// Fails with [`Error::EnumerationBound`] when the generated group would
    /// exceed `bound` elements.
    pub fn closure(n: usize, generators: &[Vec<Rat>], bound: u64) -> Result<Self> {
        if generators.iter().any(|g| g.len() != n) {
            return Err(Error::validation("generator length does not match dimension"));
        }
        let gens: Vec<Vec<Rat>> = generators
            .iter()
            .map(|g| g.iter().map(|&x| frac(x)).collect())
            .collect();
        let mut elements = BTreeSet::new();
        let mut queue = vec![vec![Rat::zero(); n]];
        elements.insert(queue[0].clone());
        while let Some(e) = queue.pop() {
            for g in &gens {
                let s: Vec<Rat> = e.iter().zip(g).map(|(&a, &b)| frac(a + b)).collect();
                if elements.insert(s.clone()) {
                    if elements.len() as u64 > bound {
                        return Err(Error::EnumerationBound { bound });
                    }
                    queue.push(s);
                }
            }
        }
        Ok(DiagonalGroup {
            n,
            elements,
            generators: gens,
        })
    }

    /// The group of a quotient type: closure of the rows `a_i / d_i`.
    pub fn from_type(q: &QuotientType) -> Result<Self> {
        Self::from_type_bounded(q, super::DEFAULT_ENUM_BOUND)
    }

    /// [`DiagonalGroup::from_type`] with an explicit enumeration bound.
    pub fn from_type_bounded(q: &QuotientType, bound: u64) -> Result<Self> {
        if q.order_product() > bound as u128 {
            return Err(Error::EnumerationBound { bound });
        }
        let gens: Vec<Vec<Rat>> = q
            .orders()
            .iter()
            .zip(q.weights())
            .map(|(&d, row)| row.iter().map(|&a| Rat::new(a, d)).collect())
            .collect();
        Self::closure(q.dim(), &gens, bound)
    }

    /// Dimension of the ambient affine space.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of elements.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The defining generators (reduced mod 1).
    pub fn generators(&self) -> &[Vec<Rat>] {
        &self.generators
    }

    pub fn contains(&self, element: &[Rat]) -> bool {
        let e: Vec<Rat> = element.iter().map(|&x| frac(x)).collect();
        self.elements.contains(&e)
    }

    pub fn elements(&self) -> impl Iterator<Item = &Vec<Rat>> {
        self.elements.iter()
    }

    /// Order of the image of the j-th coordinate character.
    ///
    /// The image `{g_j : g in G}` is a finite subgroup of `Q/Z`, so its order
    /// equals the number of distinct values.
    ///
    /// # Panics
    /// Panics if `j` is out of range.
    pub fn character_order(&self, j: usize) -> i64 {
        assert!(j < self.n, "coordinate index {j} out of range");
        self.coordinate_values(j).len() as i64
    }

    /// Distinct values of the j-th component over the whole group.
    pub fn coordinate_values(&self, j: usize) -> BTreeSet<Rat> {
        assert!(j < self.n, "coordinate index {j} out of range");
        self.elements.iter().map(|e| e[j]).collect()
    }

    /// Subgroup fixing a point whose coordinates vanish exactly at
    /// `zero_coords`: elements whose components are 0 at every other index.
    pub fn stabilizer(&self, zero_coords: &[usize]) -> DiagonalGroup {
        let elements: BTreeSet<Vec<Rat>> = self
            .elements
            .iter()
            .filter(|e| {
                e.iter()
                    .enumerate()
                    .all(|(j, &x)| zero_coords.contains(&j) || x.is_zero())
            })
            .cloned()
            .collect();
        let generators = elements
            .iter()
            .filter(|e| !e.iter().all(|x| x.is_zero()))
            .cloned()
            .collect();
        DiagonalGroup {
            n: self.n,
            elements,
            generators,
        }
    }

    /// Synthesizes a quotient type whose group is exactly this subgroup.
    ///
    /// Generators are picked greedily by descending element order, so the
    /// result is deterministic but not claimed canonical across isomorphism.
    pub fn to_type(&self) -> QuotientType {
        let mut picked: Vec<Vec<Rat>> = Vec::new();
        let mut span = DiagonalGroup::trivial(self.n);
        let mut ordered: Vec<&Vec<Rat>> = self.elements.iter().collect();
        ordered.sort_by_key(|e| (-element_order(e), (*e).clone()));
        for e in ordered {
            if !span.contains(e) {
                picked.push(e.clone());
                span = DiagonalGroup::closure(self.n, &picked, u64::MAX)
                    .expect("closure of a subgroup cannot exceed the subgroup order");
            }
        }
        if picked.is_empty() {
            return QuotientType::smooth(self.n);
        }
        let d: Vec<i64> = picked.iter().map(|e| element_order(e)).collect();
        let a: Vec<Vec<i64>> = picked
            .iter()
            .zip(&d)
            .map(|(e, &di)| {
                e.iter()
                    .map(|&x| {
                        let w = x * Rat::from_integer(di);
                        debug_assert!(w.is_integer());
                        w.to_integer()
                    })
                    .collect()
            })
            .collect();
        QuotientType::new(d, a).expect("synthesized type is structurally valid")
    }
}

/// Order of a tuple in `(Q/Z)^n`: lcm of the component denominators.
fn element_order(e: &[Rat]) -> i64 {
    e.iter().map(|x| *x.denom()).fold(1, num::integer::lcm)
}
