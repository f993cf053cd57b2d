use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{AlgebraIso, PathAlgebra};
use crate::report::Report;

use super::CoeffMap;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    /// Vertex index of the generator's idempotent.
    pub idempotent: usize,
}

impl Generator {
    pub fn new(name: impl Into<String>, idempotent: usize) -> Self {
        Self {
            name: name.into(),
            idempotent,
        }
    }
}

/// A type D structure: generators with idempotents and a structure map given
/// as algebra-labelled arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDStructure {
    algebra: Arc<PathAlgebra>,
    generators: Vec<Generator>,
    delta: CoeffMap,
}

pub(crate) fn check_generators(alg: &PathAlgebra, gens: &[Generator]) -> Result<()> {
    let mut seen = HashSet::new();
    for g in gens {
        if !seen.insert(g.name.as_str()) {
            return Err(Error::DuplicateGenerator(g.name.clone()));
        }
        if g.idempotent >= alg.vertex_count() {
            return Err(Error::UnknownName {
                what: "vertex",
                name: format!("#{} (for generator {})", g.idempotent, g.name),
            });
        }
    }
    Ok(())
}

pub(crate) fn check_bounds(map: &CoeffMap, rows: usize, cols: usize, dim: usize) -> Result<()> {
    if let Some(u) = map.max_source().filter(|&u| u >= rows) {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: u + 1,
        });
    }
    if let Some(v) = map.max_target().filter(|&v| v >= cols) {
        return Err(Error::DimensionMismatch {
            expected: cols,
            found: v + 1,
        });
    }
    if let Some(b) = map.max_basis().filter(|&b| b >= dim) {
        return Err(Error::ForeignBasis { index: b, dim });
    }
    Ok(())
}

impl TypeDStructure {
    pub fn new(algebra: Arc<PathAlgebra>, generators: Vec<Generator>, delta: CoeffMap) -> Result<Self> {
        check_generators(&algebra, &generators)?;
        check_bounds(&delta, generators.len(), generators.len(), algebra.dim())?;
        Ok(Self {
            algebra,
            generators,
            delta,
        })
    }

    pub fn zero(algebra: Arc<PathAlgebra>) -> Self {
        Self {
            algebra,
            generators: Vec::new(),
            delta: CoeffMap::new(),
        }
    }

    /// Builds a structure from names: generators as `(name, vertex)` and
    /// arrows as `(source, target, coefficient)` with coefficients written as
    /// `+`-separated basis names.
    pub fn from_names(
        algebra: Arc<PathAlgebra>,
        generators: &[(&str, &str)],
        arrows: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|&(n, v)| {
                let idem = algebra.vertex_index(v).ok_or_else(|| Error::UnknownName {
                    what: "vertex",
                    name: v.into(),
                })?;
                Ok(Generator::new(n, idem))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut s = Self::new(algebra, gens, CoeffMap::new())?;
        for &(x, y, c) in arrows {
            let (i, j) = (s.index_of(x)?, s.index_of(y)?);
            let e = s.algebra.element(c)?;
            s.delta.add_element(i, j, &e);
        }
        Ok(s)
    }

    pub fn algebra(&self) -> &Arc<PathAlgebra> {
        &self.algebra
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.generators[i]
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn delta(&self) -> &CoeffMap {
        &self.delta
    }

    pub fn with_delta(&self, delta: CoeffMap) -> Result<Self> {
        Self::new(self.algebra.clone(), self.generators.clone(), delta)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownName {
                what: "generator",
                name: name.into(),
            })
    }

    /// The idempotent basis element of generator `i`.
    pub fn idempotent_basis(&self, i: usize) -> usize {
        self.algebra.idempotent(self.generators[i].idempotent)
    }

    /// The identity map on generators, as a coefficient map.
    pub fn identity_map(&self) -> CoeffMap {
        CoeffMap::diagonal((0..self.len()).map(|i| (i, self.idempotent_basis(i))))
    }

    /// Generators sorted by name, with arrows re-indexed to match.
    pub fn canonical(&self) -> Self {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.generators[a].name.cmp(&self.generators[b].name));
        self.permuted(&order)
    }

    /// Reorders generators so that new position `k` holds old generator
    /// `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let mut pos = vec![0; order.len()];
        for (k, &old) in order.iter().enumerate() {
            pos[old] = k;
        }
        Self {
            algebra: self.algebra.clone(),
            generators: order.iter().map(|&i| self.generators[i].clone()).collect(),
            delta: self.delta.map_indices(|u| pos[u], |v| pos[v], |b| b),
        }
    }

    pub fn renamed(&self, rename: impl Fn(&str) -> String) -> Result<Self> {
        let gens = self
            .generators
            .iter()
            .map(|g| Generator::new(rename(&g.name), g.idempotent))
            .collect();
        Self::new(self.algebra.clone(), gens, self.delta.clone())
    }

    /// Arrows as `(source name, target name, coefficient)` strings, sorted.
    pub fn arrow_names(&self) -> Vec<(String, String, String)> {
        let mut out: Vec<_> = self
            .delta
            .triples()
            .map(|(u, v, b)| {
                (
                    self.generators[u].name.clone(),
                    self.generators[v].name.clone(),
                    self.algebra.basis_name(b).to_string(),
                )
            })
            .collect();
        out.sort();
        out
    }

    /// Whether no arrow carries an idempotent component.
    pub fn is_reduced(&self) -> bool {
        self.delta.triples().all(|(_, _, b)| !self.algebra.is_idempotent(b))
    }

    /// Pushes coefficients along an algebra isomorphism.
    pub fn transport(&self, iso: &AlgebraIso) -> Result<Self> {
        if *iso.source != *self.algebra {
            return Err(Error::WrongAlgebra(
                "structure is not over the isomorphism's source algebra".into(),
            ));
        }
        let gens = self
            .generators
            .iter()
            .map(|g| Generator::new(g.name.clone(), iso.apply_vertex(g.idempotent)))
            .collect();
        let delta = self.delta.map_indices(|u| u, |v| v, |b| iso.apply(b));
        Self::new(iso.target.clone(), gens, delta)
    }
}

/// Lists every idempotent-compatibility violation of `map`, viewed as a map
/// between the given generator lists.
pub(crate) fn compatibility_violations(
    alg: &PathAlgebra,
    src: &[Generator],
    tgt: &[Generator],
    map: &CoeffMap,
    what: &str,
    report: &mut Report,
) {
    for (u, v, b) in map.triples() {
        if !alg.is_compatible(b, src[u].idempotent, tgt[v].idempotent) {
            report.push(format!(
                "{what} {} -> {} has coefficient {} incompatible with idempotents",
                src[u].name,
                tgt[v].name,
                alg.basis_name(b)
            ));
        }
    }
}

pub(crate) fn nonzero_entries(
    alg: &PathAlgebra,
    src: &[Generator],
    tgt: &[Generator],
    map: &CoeffMap,
    what: &str,
    report: &mut Report,
) {
    for (u, v, e) in map.iter() {
        report.push(format!(
            "{what} {} -> {} is {}, expected 0",
            src[u].name,
            tgt[v].name,
            alg.format_element(e)
        ));
    }
}

/// Checks idempotent compatibility of every arrow and that the structure map
/// squares to zero.
pub fn check_structure(n: &TypeDStructure) -> Report {
    let mut report = Report::new();
    let alg = &n.algebra;
    compatibility_violations(alg, &n.generators, &n.generators, &n.delta, "arrow", &mut report);
    let square = n.delta.then(&n.delta, alg);
    nonzero_entries(alg, &n.generators, &n.generators, &square, "delta squared", &mut report);
    report
}

/// Restricts to generators at vertex `i` and keeps only the idempotent part
/// of the arrows between them; the result lives over the trivial algebra.
pub fn idempotent_slice(n: &TypeDStructure, i: usize) -> Result<TypeDStructure> {
    if i >= n.algebra.vertex_count() {
        return Err(Error::WrongAlgebra(format!(
            "vertex {i} does not exist in an algebra with {} vertices",
            n.algebra.vertex_count()
        )));
    }
    let trivial = PathAlgebra::trivial();
    let kept: Vec<usize> = (0..n.len()).filter(|&g| n.generators[g].idempotent == i).collect();
    let mut pos = vec![usize::MAX; n.len()];
    for (k, &g) in kept.iter().enumerate() {
        pos[g] = k;
    }
    let e = n.algebra.idempotent(i);
    let mut delta = CoeffMap::new();
    for (u, v, b) in n.delta.triples() {
        if b == e && pos[u] != usize::MAX && pos[v] != usize::MAX {
            delta.toggle(pos[u], pos[v], trivial.idempotent(0));
        }
    }
    let gens = kept
        .iter()
        .map(|&g| Generator::new(n.generators[g].name.clone(), 0))
        .collect();
    TypeDStructure::new(trivial, gens, delta)
}
