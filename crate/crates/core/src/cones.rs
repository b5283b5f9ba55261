//! Finitely generated convex cones: membership, lineality space, and the
//! split of a cone into a pointed slice plus its lineality space.

use num_traits::Zero;

use crate::error::{dimension, Error, Result};
use crate::lpcore::{farkas, FarkasOutcome};
use crate::ratmath::{
    dot, in_span, is_zero_vector, project_onto_complement, span_basis, sub, RatMatrix, Rational,
};

/// The cone of nonnegative combinations of `generators`, all in ℝ^dim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    dim: usize,
    generators: Vec<Vec<Rational>>,
}

impl Cone {
    pub fn new(dim: usize, generators: Vec<Vec<Rational>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("cone ambient dimension must be at least 1".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(dimension(format!("generator of length {} in dimension {dim}", g.len())));
        }
        Ok(Self { dim, generators })
    }

    /// Generators are the columns of `a`.
    pub fn from_matrix(a: &RatMatrix) -> Result<Self> {
        Self::new(a.rows(), a.columns())
    }

    pub fn from_i64<G: AsRef<[i64]>>(generators: &[G]) -> Self {
        let gens: Vec<Vec<Rational>> = generators
            .iter()
            .map(|g| g.as_ref().iter().map(|&v| crate::ratmath::int(v)).collect())
            .collect();
        let dim = gens.first().map_or(1, Vec::len);
        Self::new(dim, gens).expect("ragged generators")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    /// m × n matrix with the generators as columns.
    pub fn generator_matrix(&self) -> RatMatrix {
        let mut a = RatMatrix::zeros(self.dim, self.generators.len());
        for (j, g) in self.generators.iter().enumerate() {
            for (i, x) in g.iter().enumerate() {
                a[(i, j)] = x.clone();
            }
        }
        a
    }

    fn nonzero_generators(&self) -> impl Iterator<Item = &Vec<Rational>> {
        self.generators.iter().filter(|g| !is_zero_vector(g))
    }
}

/// `Some(x)` with `x ≥ 0` and `Σ xᵢ·a⁽ⁱ⁾ = b` when `b` is in the cone.
pub fn member(cone: &Cone, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if b.len() != cone.dim {
        return Err(dimension(format!("point of length {} in dimension {}", b.len(), cone.dim)));
    }
    Ok(match farkas(&cone.generator_matrix(), b)? {
        FarkasOutcome::Combination { x } => Some(x),
        FarkasOutcome::Separator { .. } => None,
    })
}

/// Basis of `C ∩ −C`, spanned by the generators whose negation lies in `C`.
pub fn lineality(cone: &Cone) -> Vec<Vec<Rational>> {
    let reversible: Vec<Vec<Rational>> = cone
        .nonzero_generators()
        .filter(|g| {
            let neg: Vec<Rational> = g.iter().map(|x| -x).collect();
            member(cone, &neg).expect("generator length matches").is_some()
        })
        .cloned()
        .collect();
    span_basis(&reversible, cone.dim).expect("generator length matches")
}

pub fn is_pointed(cone: &Cone) -> bool {
    lineality(cone).is_empty()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDecomposition {
    pub lineality_basis: Vec<Vec<Rational>>,
    /// Generators projected onto the orthogonal complement of the lineality space.
    pub slice_generators: Vec<Vec<Rational>>,
    dim: usize,
}

impl ConeDecomposition {
    pub fn slice_cone(&self) -> Cone {
        Cone { dim: self.dim, generators: self.slice_generators.clone() }
    }

    /// Checks orthogonality, pointedness of the slice, and that each original
    /// generator differs from its slice generator by a lineality vector.
    pub fn verify(&self, cone: &Cone) -> bool {
        let orthogonal = self
            .slice_generators
            .iter()
            .all(|s| self.lineality_basis.iter().all(|l| dot(s, l).is_zero()));
        let reconstructs = cone.generators.len() == self.slice_generators.len()
            && cone.generators.iter().zip(&self.slice_generators).all(|(a, s)| {
                in_span(&self.lineality_basis, &sub(a, s)).expect("lengths match")
            });
        orthogonal && reconstructs && is_pointed(&self.slice_cone())
    }
}

pub fn decompose(cone: &Cone) -> ConeDecomposition {
    let lineality_basis = lineality(cone);
    let slice_generators = cone
        .generators
        .iter()
        .map(|a| project_onto_complement(&lineality_basis, a).expect("lengths match"))
        .collect();
    let d = ConeDecomposition { lineality_basis, slice_generators, dim: cone.dim };
    debug_assert!(d.verify(cone));
    d
}

/// Splits a cone member as `x = u + v` with `u` in the pointed slice and `v`
/// in the lineality space.
pub fn split_point(
    decomposition: &ConeDecomposition,
    x: &[Rational],
) -> Result<(Vec<Rational>, Vec<Rational>)> {
    if x.len() != decomposition.dim {
        return Err(dimension(format!("point of length {} in dimension {}", x.len(), decomposition.dim)));
    }
    let u = project_onto_complement(&decomposition.lineality_basis, x)?;
    if member(&decomposition.slice_cone(), &u)?.is_none() {
        return Err(Error::NotMember);
    }
    let v = sub(x, &u);
    debug_assert!(in_span(&decomposition.lineality_basis, &v)?);
    debug_assert!(dot(&u, &v).is_zero());
    Ok((u, v))
}
