//! Finite-dimensional path algebras of quivers with monomial relations.
//!
//! Paths compose in application order: the path `fg` is `f` followed by `g`,
//! and `f · g = fg`. Every product of two basis paths is again a basis path or
//! zero, so an algebra is fully described by its basis and a lookup table.
//! Tensor products of such algebras keep that property and reuse the same
//! type.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverArrow {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverPresentation {
    pub vertices: Vec<String>,
    pub arrows: Vec<QuiverArrow>,
    /// Each relation is a composable sequence of arrow names, first arrow
    /// first, declared to be zero.
    pub relations: Vec<Vec<String>>,
}

impl QuiverPresentation {
    pub fn new(
        vertices: &[&str],
        arrows: &[(&str, &str, &str)],
        relations: &[&[&str]],
    ) -> Self {
        Self {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            arrows: arrows
                .iter()
                .map(|&(name, source, target)| QuiverArrow {
                    name: name.into(),
                    source: source.into(),
                    target: target.into(),
                })
                .collect(),
            relations: relations
                .iter()
                .map(|r| r.iter().map(|s| s.to_string()).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub source: usize,
    pub target: usize,
    /// Path length; zero exactly for idempotents.
    pub length: usize,
}

#[derive(Clone, Debug)]
enum Origin {
    Quiver {
        presentation: QuiverPresentation,
        max_path_len: usize,
        words: Vec<Vec<usize>>,
    },
    Tensor {
        right_dim: usize,
        right_vertices: usize,
    },
}

/// A finite-dimensional algebra over the two-element field whose basis is
/// closed under multiplication up to zero.
#[derive(Clone)]
pub struct PathAlgebra {
    name: Option<String>,
    vertices: Vec<String>,
    basis: Vec<BasisElement>,
    idempotents: Vec<usize>,
    table: Vec<Option<u32>>,
    by_name: HashMap<String, usize>,
    origin: Origin,
}

impl PartialEq for PathAlgebra {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.vertices == other.vertices
                && self.basis == other.basis
                && self.table == other.table)
    }
}

impl Eq for PathAlgebra {}

impl fmt::Debug for PathAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PathAlgebra")
            .field("name", &self.name)
            .field("vertices", &self.vertices)
            .field(
                "basis",
                &self.basis.iter().map(|b| b.name.as_str()).collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// An `F₂`-linear combination of basis elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(BTreeSet<usize>);

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: usize) -> Self {
        Self(BTreeSet::from([b]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Adds one basis element; a repeated element cancels.
    pub fn toggle(&mut self, b: usize) {
        if !self.0.remove(&b) {
            self.0.insert(b);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.symmetric_difference(&other.0).copied().collect())
    }

    pub fn contains(&self, b: usize) -> bool {
        self.0.contains(&b)
    }

    pub fn terms(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<usize> for Element {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut e = Element::zero();
        for b in iter {
            e.toggle(b);
        }
        e
    }
}

impl PathAlgebra {
    /// Enumerates the surviving paths of a quiver with monomial relations.
    ///
    /// Fails with [`Error::NotFiniteAtBound`] if some surviving path of length
    /// `max_path_len` still extends to a surviving longer path.
    pub fn build(presentation: &QuiverPresentation, max_path_len: usize) -> Result<Self> {
        if max_path_len == 0 {
            return Err(Error::InvalidPresentation(
                "max_path_len must be at least 1".into(),
            ));
        }
        let p = presentation;
        let vertex_index = index_names(&p.vertices, "vertex")?;
        let arrow_names: Vec<String> = p.arrows.iter().map(|a| a.name.clone()).collect();
        let arrow_index = index_names(&arrow_names, "arrow")?;
        for a in &p.arrows {
            if vertex_index.contains_key(&a.name) {
                return Err(Error::InvalidPresentation(format!(
                    "arrow {:?} shares its name with a vertex",
                    a.name
                )));
            }
        }
        let mut ends = Vec::with_capacity(p.arrows.len());
        for a in &p.arrows {
            let lookup = |v: &String| {
                vertex_index.get(v).copied().ok_or_else(|| {
                    Error::InvalidPresentation(format!(
                        "arrow {:?} references undeclared vertex {v:?}",
                        a.name
                    ))
                })
            };
            ends.push((lookup(&a.source)?, lookup(&a.target)?));
        }

        let mut relations: Vec<Vec<usize>> = Vec::new();
        for rel in &p.relations {
            let ill = |reason: &str| Error::IllFormedRelation {
                relation: rel.clone(),
                reason: reason.into(),
            };
            if rel.is_empty() {
                return Err(ill("empty relation"));
            }
            let word = rel
                .iter()
                .map(|n| arrow_index.get(n).copied().ok_or_else(|| ill("unknown arrow")))
                .collect::<Result<Vec<_>>>()?;
            if word.windows(2).any(|w| ends[w[0]].1 != ends[w[1]].0) {
                return Err(ill("not a composable path"));
            }
            relations.push(word);
        }

        let survives = |w: &[usize]| !relations.iter().any(|r| w.ends_with(r));

        let mut words: Vec<Vec<usize>> = Vec::new();
        let mut basis = Vec::new();
        for (v, name) in p.vertices.iter().enumerate() {
            words.push(Vec::new());
            basis.push(BasisElement {
                name: name.clone(),
                source: v,
                target: v,
                length: 0,
            });
        }
        let mut level: Vec<usize> = Vec::new();
        for (a, &(s, t)) in ends.iter().enumerate() {
            if survives(&[a]) {
                level.push(words.len());
                words.push(vec![a]);
                basis.push(BasisElement {
                    name: arrow_names[a].clone(),
                    source: s,
                    target: t,
                    length: 1,
                });
            }
        }
        for len in 2..=max_path_len + 1 {
            let mut next = Vec::new();
            for &i in &level {
                let end = basis[i].target;
                for (a, &(s, t)) in ends.iter().enumerate() {
                    if s != end {
                        continue;
                    }
                    let mut w = words[i].clone();
                    w.push(a);
                    if !survives(&w) {
                        continue;
                    }
                    let name: String = w.iter().map(|&x| arrow_names[x].as_str()).collect();
                    if len > max_path_len {
                        return Err(Error::NotFiniteAtBound {
                            bound: max_path_len,
                            path: name,
                        });
                    }
                    next.push(words.len());
                    words.push(w);
                    basis.push(BasisElement {
                        name,
                        source: basis[i].source,
                        target: t,
                        length: len,
                    });
                }
            }
            level = next;
        }

        let index_of: HashMap<&[usize], usize> = words
            .iter()
            .enumerate()
            .skip(p.vertices.len())
            .map(|(i, w)| (w.as_slice(), i))
            .collect();
        let n = basis.len();
        let mut table = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                if basis[a].target != basis[b].source {
                    continue;
                }
                let prod = if basis[a].length == 0 {
                    Some(b)
                } else if basis[b].length == 0 {
                    Some(a)
                } else {
                    let w: Vec<usize> = words[a].iter().chain(&words[b]).copied().collect();
                    index_of.get(w.as_slice()).copied()
                };
                table[a * n + b] = prod.map(|x| x as u32);
            }
        }

        let nv = p.vertices.len();
        Ok(Self::assemble(
            None,
            p.vertices.clone(),
            basis,
            (0..nv).collect(),
            table,
            Origin::Quiver {
                presentation: p.clone(),
                max_path_len,
                words,
            },
        ))
    }

    fn assemble(
        name: Option<String>,
        vertices: Vec<String>,
        basis: Vec<BasisElement>,
        idempotents: Vec<usize>,
        table: Vec<Option<u32>>,
        origin: Origin,
    ) -> Self {
        let by_name = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.name.clone(), i))
            .collect();
        Self {
            name,
            vertices,
            basis,
            idempotents,
            table,
            by_name,
            origin,
        }
    }

    /// The algebra with one vertex and no arrows: `F₂` itself.
    pub fn trivial() -> Arc<Self> {
        static CELL: OnceLock<Arc<PathAlgebra>> = OnceLock::new();
        CELL.get_or_init(|| {
            let p = QuiverPresentation::new(&["e"], &[], &[]);
            let mut alg = Self::build(&p, 1).expect("trivial algebra");
            alg.name = Some("trivial".into());
            Arc::new(alg)
        })
        .clone()
    }

    /// The torus algebra: arrows `f, h: i0 → i1`, `g: i1 → i0`, relations
    /// `gf = hg = 0` (application order).
    pub fn torus() -> Arc<Self> {
        static CELL: OnceLock<Arc<PathAlgebra>> = OnceLock::new();
        CELL.get_or_init(|| {
            let mut alg = Self::build(&torus_presentation(), 8).expect("torus algebra");
            alg.name = Some("torus".into());
            Arc::new(alg)
        })
        .clone()
    }

    /// The strand algebra of the torus, with basis `j0, j1, rho1, rho2, rho3,
    /// rho12, rho23, rho123`.
    pub fn strands_torus() -> Arc<Self> {
        static CELL: OnceLock<Arc<PathAlgebra>> = OnceLock::new();
        CELL.get_or_init(|| {
            let p = QuiverPresentation::new(
                &["j0", "j1"],
                &[
                    ("rho1", "j0", "j1"),
                    ("rho2", "j1", "j0"),
                    ("rho3", "j0", "j1"),
                ],
                &[&["rho2", "rho1"], &["rho3", "rho2"]],
            );
            let mut alg = Self::build(&p, 8).expect("strand algebra");
            let Origin::Quiver { words, .. } = &alg.origin else {
                unreachable!()
            };
            let renamed: Vec<String> = words
                .iter()
                .zip(&alg.basis)
                .map(|(w, b)| {
                    if w.is_empty() {
                        b.name.clone()
                    } else {
                        let digits: String = w.iter().map(|a| (a + 1).to_string()).collect();
                        format!("rho{digits}")
                    }
                })
                .collect();
            for (b, n) in alg.basis.iter_mut().zip(renamed) {
                b.name = n;
            }
            alg = Self::assemble(
                Some("strands-torus".into()),
                alg.vertices,
                alg.basis,
                alg.idempotents,
                alg.table,
                alg.origin,
            );
            Arc::new(alg)
        })
        .clone()
    }

    /// The tensor product `self ⊗ right`. Basis element `(i, j)` has index
    /// `i * right.dim() + j`; vertex `(u, v)` has index
    /// `u * right.vertex_count() + v`.
    pub fn tensor(&self, right: &PathAlgebra) -> Self {
        let (dl, dr) = (self.dim(), right.dim());
        let nvr = right.vertex_count();
        let vertices = self
            .vertices
            .iter()
            .flat_map(|u| right.vertices.iter().map(move |v| format!("{u}|{v}")))
            .collect::<Vec<_>>();
        let mut basis = Vec::with_capacity(dl * dr);
        for a in &self.basis {
            for b in &right.basis {
                basis.push(BasisElement {
                    name: format!("{}|{}", a.name, b.name),
                    source: a.source * nvr + b.source,
                    target: a.target * nvr + b.target,
                    length: a.length + b.length,
                });
            }
        }
        let idempotents = self
            .idempotents
            .iter()
            .flat_map(|&u| right.idempotents.iter().map(move |&v| u * dr + v))
            .collect();
        let n = dl * dr;
        let mut table = vec![None; n * n];
        for x in 0..n {
            let (a1, b1) = (x / dr, x % dr);
            for y in 0..n {
                let (a2, b2) = (y / dr, y % dr);
                if let (Some(a), Some(b)) = (self.mul_basis(a1, a2), right.mul_basis(b1, b2)) {
                    table[x * n + y] = Some((a * dr + b) as u32);
                }
            }
        }
        Self::assemble(
            None,
            vertices,
            basis,
            idempotents,
            table,
            Origin::Tensor {
                right_dim: dr,
                right_vertices: nvr,
            },
        )
    }

    /// For a tensor product algebra, splits a basis index into its factors.
    pub fn tensor_factors(&self, b: usize) -> Option<(usize, usize)> {
        match self.origin {
            Origin::Tensor { right_dim, .. } => Some((b / right_dim, b % right_dim)),
            Origin::Quiver { .. } => None,
        }
    }

    pub fn tensor_vertex_factors(&self, v: usize) -> Option<(usize, usize)> {
        match self.origin {
            Origin::Tensor { right_vertices, .. } => Some((v / right_vertices, v % right_vertices)),
            Origin::Quiver { .. } => None,
        }
    }

    /// The reserved name of a built-in algebra, if any.
    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// The quiver presentation and path-length bound this algebra was built
    /// from, if it came from a quiver.
    pub fn presentation(&self) -> Option<(&QuiverPresentation, usize)> {
        match &self.origin {
            Origin::Quiver {
                presentation,
                max_path_len,
                ..
            } => Some((presentation, *max_path_len)),
            Origin::Tensor { .. } => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn basis_element(&self, b: usize) -> &BasisElement {
        &self.basis[b]
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn basis_name(&self, b: usize) -> &str {
        &self.basis[b].name
    }

    /// Looks up a basis element by name, failing with [`Error::UnknownName`].
    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.basis_index(name).ok_or_else(|| Error::UnknownName {
            what: "basis element",
            name: name.into(),
        })
    }

    /// Parses a `+`-separated sum of basis names; `"0"` is zero.
    pub fn element(&self, expr: &str) -> Result<Element> {
        let expr = expr.trim();
        if expr == "0" {
            return Ok(Element::zero());
        }
        expr.split('+').map(|t| self.lookup(t.trim())).collect()
    }

    /// The idempotent basis element at vertex `v`.
    pub fn idempotent(&self, v: usize) -> usize {
        self.idempotents[v]
    }

    pub fn is_idempotent(&self, b: usize) -> bool {
        self.basis[b].length == 0
    }

    /// `e_u · b · e_v = b`.
    pub fn is_compatible(&self, b: usize, u: usize, v: usize) -> bool {
        self.basis[b].source == u && self.basis[b].target == v
    }

    /// Basis elements `b` with `e_u · b · e_v = b`.
    pub fn between(&self, u: usize, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(move |&b| self.is_compatible(b, u, v))
    }

    #[inline]
    pub fn mul_basis(&self, a: usize, b: usize) -> Option<usize> {
        self.table[a * self.dim() + b].map(|x| x as usize)
    }

    fn check_foreign(&self, e: &Element) -> Result<()> {
        match e.terms().find(|&b| b >= self.dim()) {
            Some(index) => Err(Error::ForeignBasis {
                index,
                dim: self.dim(),
            }),
            None => Ok(()),
        }
    }

    /// Bilinear extension of the basis table; `a` is applied first.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_foreign(a)?;
        self.check_foreign(b)?;
        let mut out = Element::zero();
        for x in a.terms() {
            for y in b.terms() {
                if let Some(z) = self.mul_basis(x, y) {
                    out.toggle(z);
                }
            }
        }
        Ok(out)
    }

    /// Product of a sequence of basis elements, or `None` if it vanishes.
    pub fn mul_word(&self, word: &[usize]) -> Option<usize> {
        let (&first, rest) = word.split_first()?;
        rest.iter().try_fold(first, |acc, &b| self.mul_basis(acc, b))
    }

    /// Triples `(a, b, c)` of basis elements with `(ab)c ≠ a(bc)`.
    pub fn associativity_failures(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let mut bad = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul_basis(a, b);
                for c in 0..n {
                    let left = ab.and_then(|x| self.mul_basis(x, c));
                    let right = self.mul_basis(b, c).and_then(|y| self.mul_basis(a, y));
                    if left != right {
                        bad.push((a, b, c));
                    }
                }
            }
        }
        bad
    }

    /// Checks that the sum of the vertex idempotents is a two-sided unit.
    pub fn is_unital(&self) -> bool {
        let unit: Element = self.idempotents.iter().copied().collect();
        (0..self.dim()).all(|b| {
            let e = Element::basis(b);
            self.multiply(&unit, &e).ok() == Some(e.clone())
                && self.multiply(&e, &unit).ok() == Some(e)
        })
    }

    /// Inverse of `c = e_v + n` where `e_v` is an idempotent and `n` lies in
    /// the radical of `e_v A e_v`. Returns `None` if `c` is not of that form.
    pub fn unit_inverse(&self, c: &Element) -> Option<Element> {
        let mut idem = c.terms().filter(|&b| self.is_idempotent(b));
        let e = idem.next()?;
        if idem.next().is_some() {
            return None;
        }
        let v = self.basis[e].source;
        if c.terms().any(|b| !self.is_compatible(b, v, v)) {
            return None;
        }
        let n = c.add(&Element::basis(e));
        let mut inverse = Element::basis(e);
        let mut power = n.clone();
        for _ in 0..=self.dim() {
            if power.is_zero() {
                return Some(inverse);
            }
            inverse = inverse.add(&power);
            power = self.multiply(&power, &n).ok()?;
        }
        None
    }

    pub fn format_element(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".into();
        }
        e.terms()
            .map(|b| self.basis[b].name.as_str())
            .collect::<Vec<_>>()
            .join("+")
    }
}

fn index_names(names: &[String], what: &str) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.clone(), i).is_some() {
            return Err(Error::InvalidPresentation(format!("duplicate {what} {n:?}")));
        }
    }
    Ok(map)
}

pub fn torus_presentation() -> QuiverPresentation {
    QuiverPresentation::new(
        &["i0", "i1"],
        &[("f", "i0", "i1"), ("g", "i1", "i0"), ("h", "i0", "i1")],
        &[&["g", "f"], &["h", "g"]],
    )
}

pub fn build_algebra(presentation: &QuiverPresentation, max_path_len: usize) -> Result<PathAlgebra> {
    PathAlgebra::build(presentation, max_path_len)
}

pub fn torus_algebra() -> Arc<PathAlgebra> {
    PathAlgebra::torus()
}

pub fn strand_algebra_torus() -> Arc<PathAlgebra> {
    PathAlgebra::strands_torus()
}

/// A bijection of bases that is multiplicative and sends idempotents to
/// idempotents.
#[derive(Clone, Debug)]
pub struct AlgebraIso {
    pub source: Arc<PathAlgebra>,
    pub target: Arc<PathAlgebra>,
    basis_map: Vec<usize>,
    vertex_map: Vec<usize>,
}

impl AlgebraIso {
    pub fn apply(&self, b: usize) -> usize {
        self.basis_map[b]
    }

    pub fn apply_vertex(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    pub fn apply_element(&self, e: &Element) -> Element {
        e.terms().map(|b| self.basis_map[b]).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut basis_map = vec![0; self.basis_map.len()];
        for (i, &j) in self.basis_map.iter().enumerate() {
            basis_map[j] = i;
        }
        let mut vertex_map = vec![0; self.vertex_map.len()];
        for (i, &j) in self.vertex_map.iter().enumerate() {
            vertex_map[j] = i;
        }
        Self {
            source: self.target.clone(),
            target: self.source.clone(),
            basis_map,
            vertex_map,
        }
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.target.dim()];
        self.basis_map.len() == self.target.dim()
            && self.basis_map.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    /// Pairs `(a, b)` on which the map fails to be multiplicative.
    pub fn multiplicativity_failures(&self) -> Vec<(usize, usize)> {
        let n = self.source.dim();
        let mut bad = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let lhs = self.source.mul_basis(a, b).map(|c| self.basis_map[c]);
                let rhs = self.target.mul_basis(self.basis_map[a], self.basis_map[b]);
                if lhs != rhs {
                    bad.push((a, b));
                }
            }
        }
        bad
    }
}

/// The canonical isomorphism from the torus algebra to the strand algebra,
/// `f ↦ rho1, g ↦ rho2, h ↦ rho3`, extended multiplicatively.
pub fn torus_iso() -> AlgebraIso {
    let (t, s) = (PathAlgebra::torus(), PathAlgebra::strands_torus());
    let letter = |c: char| match c {
        'f' => "rho1",
        'g' => "rho2",
        'h' => "rho3",
        _ => unreachable!(),
    };
    let basis_map = t
        .basis()
        .iter()
        .map(|b| {
            if b.length == 0 {
                let v = t.vertex_index(&b.name).unwrap();
                return s.idempotent(v);
            }
            let word: Vec<usize> = b
                .name
                .chars()
                .map(|c| s.basis_index(letter(c)).unwrap())
                .collect();
            s.mul_word(&word).expect("image of a basis path is nonzero")
        })
        .collect();
    AlgebraIso {
        source: t,
        target: s,
        basis_map,
        vertex_map: vec![0, 1],
    }
}
