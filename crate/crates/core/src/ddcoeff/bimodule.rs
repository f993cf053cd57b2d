use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::PathAlgebra;
use crate::report::Report;
use crate::typed::{check_structure, CoeffMap, Generator, TypeDMorphism, TypeDStructure};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DDGenerator {
    pub name: String,
    pub left: usize,
    pub right: usize,
}

/// A DD bimodule over `(left, right)`, stored as a type D structure over
/// `left ⊗ right`.
#[derive(Clone, Debug)]
pub struct DDBimodule {
    left: Arc<PathAlgebra>,
    right: Arc<PathAlgebra>,
    flat: TypeDStructure,
}

impl PartialEq for DDBimodule {
    fn eq(&self, other: &Self) -> bool {
        self.left == other.left && self.right == other.right && self.flat == other.flat
    }
}

impl Eq for DDBimodule {}

/// Name of the right-hand label of a DD arrow: idempotents print as `1`.
pub(crate) fn right_label(right: &PathAlgebra, t: usize) -> String {
    if right.is_idempotent(t) {
        "1".into()
    } else {
        right.basis_name(t).into()
    }
}

fn tensor_of(left: &PathAlgebra, right: &PathAlgebra) -> Arc<PathAlgebra> {
    Arc::new(left.tensor(right))
}

impl DDBimodule {
    pub fn new(
        left: Arc<PathAlgebra>,
        right: Arc<PathAlgebra>,
        generators: Vec<DDGenerator>,
        arrows: impl IntoIterator<Item = (usize, usize, usize, usize)>,
    ) -> Result<Self> {
        let tensor = tensor_of(&left, &right);
        let nvr = right.vertex_count();
        let dr = right.dim();
        for g in &generators {
            if g.left >= left.vertex_count() || g.right >= nvr {
                return Err(Error::UnknownName {
                    what: "vertex",
                    name: format!("for generator {}", g.name),
                });
            }
        }
        let gens = generators
            .iter()
            .map(|g| Generator::new(g.name.clone(), g.left * nvr + g.right))
            .collect();
        let mut delta = CoeffMap::new();
        for (u, v, a, t) in arrows {
            if a >= left.dim() {
                return Err(Error::ForeignBasis { index: a, dim: left.dim() });
            }
            if t >= dr {
                return Err(Error::ForeignBasis { index: t, dim: dr });
            }
            delta.toggle(u, v, a * dr + t);
        }
        let flat = TypeDStructure::new(tensor, gens, delta)?;
        Ok(Self { left, right, flat })
    }

    /// Wraps a type D structure over `left ⊗ right`.
    pub fn from_flat(left: Arc<PathAlgebra>, right: Arc<PathAlgebra>, flat: TypeDStructure) -> Result<Self> {
        let expected = left.tensor(&right);
        if **flat.algebra() != expected {
            return Err(Error::WrongAlgebra(
                "structure is not over the tensor product of the given algebras".into(),
            ));
        }
        Ok(Self { left, right, flat })
    }

    pub fn zero(left: Arc<PathAlgebra>, right: Arc<PathAlgebra>) -> Self {
        let tensor = tensor_of(&left, &right);
        Self {
            left,
            right,
            flat: TypeDStructure::zero(tensor),
        }
    }

    /// Builds a bimodule from names. Generators are `(name, left vertex,
    /// right vertex)`; arrows are `(source, target, left basis, right basis)`
    /// where a right label `1` means the right idempotent of the source.
    pub fn from_names(
        left: Arc<PathAlgebra>,
        right: Arc<PathAlgebra>,
        generators: &[(&str, &str, &str)],
        arrows: &[(&str, &str, &str, &str)],
    ) -> Result<Self> {
        let vertex = |alg: &PathAlgebra, v: &str| {
            alg.vertex_index(v).ok_or_else(|| Error::UnknownName {
                what: "vertex",
                name: v.into(),
            })
        };
        let gens = generators
            .iter()
            .map(|&(n, l, r)| {
                Ok(DDGenerator {
                    name: n.into(),
                    left: vertex(&left, l)?,
                    right: vertex(&right, r)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let index = |n: &str| {
            gens.iter().position(|g| g.name == n).ok_or_else(|| Error::UnknownName {
                what: "generator",
                name: n.into(),
            })
        };
        let mut triples = Vec::new();
        for &(s, t, a, r) in arrows {
            let (u, v) = (index(s)?, index(t)?);
            let a = left.lookup(a)?;
            let r = if r == "1" { right.idempotent(gens[u].right) } else { right.lookup(r)? };
            triples.push((u, v, a, r));
        }
        Self::new(left, right, gens, triples)
    }

    pub fn left(&self) -> &Arc<PathAlgebra> {
        &self.left
    }

    pub fn right(&self) -> &Arc<PathAlgebra> {
        &self.right
    }

    pub fn tensor(&self) -> &Arc<PathAlgebra> {
        self.flat.algebra()
    }

    /// The underlying type D structure over `left ⊗ right`.
    pub fn as_type_d(&self) -> &TypeDStructure {
        &self.flat
    }

    pub fn len(&self) -> usize {
        self.flat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn generator(&self, i: usize) -> DDGenerator {
        let g = self.flat.generator(i);
        let nvr = self.right.vertex_count();
        DDGenerator {
            name: g.name.clone(),
            left: g.idempotent / nvr,
            right: g.idempotent % nvr,
        }
    }

    pub fn generators(&self) -> Vec<DDGenerator> {
        (0..self.len()).map(|i| self.generator(i)).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.flat.index_of(name)
    }

    /// Arrows as `(source, target, left basis, right basis)`, sorted.
    pub fn arrows(&self) -> Vec<(usize, usize, usize, usize)> {
        let dr = self.right.dim();
        self.flat.delta().triples().map(|(u, v, b)| (u, v, b / dr, b % dr)).collect()
    }

    /// Arrows by name, with right idempotents printed as `1`, sorted.
    pub fn arrow_names(&self) -> Vec<(String, String, String, String)> {
        let gens = self.flat.generators();
        let mut out: Vec<_> = self
            .arrows()
            .into_iter()
            .map(|(u, v, a, t)| {
                (
                    gens[u].name.clone(),
                    gens[v].name.clone(),
                    self.left.basis_name(a).to_string(),
                    right_label(&self.right, t),
                )
            })
            .collect();
        out.sort();
        out
    }

    pub fn canonical(&self) -> Self {
        Self {
            left: self.left.clone(),
            right: self.right.clone(),
            flat: self.flat.canonical(),
        }
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            left: self.left.clone(),
            right: self.right.clone(),
            flat: self.flat.permuted(order),
        }
    }

    pub fn renamed(&self, rename: impl Fn(&str) -> String) -> Result<Self> {
        Ok(Self {
            left: self.left.clone(),
            right: self.right.clone(),
            flat: self.flat.renamed(rename)?,
        })
    }

    /// Reads the bimodule as a type D structure over the right algebra when
    /// the left algebra is trivial.
    pub fn to_right_type_d(&self) -> Result<TypeDStructure> {
        if self.left.dim() != 1 {
            return Err(Error::WrongAlgebra("left algebra is not trivial".into()));
        }
        let gens = (0..self.len())
            .map(|i| {
                let g = self.generator(i);
                Generator::new(g.name, g.right)
            })
            .collect();
        let delta = self.flat.delta().map_indices(|u| u, |v| v, |b| b % self.right.dim());
        TypeDStructure::new(self.right.clone(), gens, delta)
    }
}

/// Checks idempotent compatibility on both sides and the two-sided
/// structure relation.
pub fn dd_check(m: &DDBimodule) -> Report {
    check_structure(&m.flat)
}

/// Convenience for DD morphisms, which are type D morphisms between the
/// underlying structures over the tensor algebra.
pub fn dd_morphism(source: &DDBimodule, target: &DDBimodule, map: CoeffMap) -> Result<TypeDMorphism> {
    if source.left != target.left || source.right != target.right {
        return Err(Error::WrongAlgebra("bimodules are over different algebras".into()));
    }
    TypeDMorphism::new(source.flat.clone(), target.flat.clone(), map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{strand_algebra_torus, torus_algebra};

    fn cfdd() -> DDBimodule {
        DDBimodule::from_names(
            strand_algebra_torus(),
            torus_algebra(),
            &[("x", "j0", "i0"), ("y", "j1", "i1")],
            &[
                ("x", "y", "rho1", "h"),
                ("x", "y", "rho3", "f"),
                ("x", "y", "rho123", "fgh"),
                ("y", "x", "rho2", "g"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_bimodule_passes() {
        assert!(dd_check(&cfdd()).is_valid());
    }

    #[test]
    fn swapped_labels_fail() {
        let m = DDBimodule::from_names(
            strand_algebra_torus(),
            torus_algebra(),
            &[("x", "j0", "i0"), ("y", "j1", "i1")],
            &[
                ("x", "y", "rho1", "f"),
                ("x", "y", "rho3", "h"),
                ("x", "y", "rho123", "fgh"),
                ("y", "x", "rho2", "g"),
            ],
        )
        .unwrap();
        assert!(!dd_check(&m).is_valid());
    }

    #[test]
    fn mismatched_idempotents_reported() {
        let m = DDBimodule::from_names(
            strand_algebra_torus(),
            torus_algebra(),
            &[("x", "j1", "i1")],
            &[("x", "x", "rho12", "fg")],
        )
        .unwrap();
        assert!(!dd_check(&m).is_valid());
    }

    #[test]
    fn arrows_round_trip_through_names() {
        let m = cfdd();
        let names = m.arrow_names();
        assert_eq!(names.len(), 4);
        assert!(names.contains(&("y".into(), "x".into(), "rho2".into(), "g".into())));
    }
}
