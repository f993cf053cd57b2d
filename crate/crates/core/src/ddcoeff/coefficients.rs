use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::PathAlgebra;
use crate::report::Report;
use crate::typed::{check_bounds, CoeffMap, TypeDStructure};

use super::{DDBimodule, DDGenerator};

/// A run of consecutive indices in the cyclic order `0 < 1 < 2 < 3 < 0`.
///
/// Index `k` names an arrow of the extended torus quiver: odd indices run
/// from the `ι₀` side to the `ι₁` side, even indices the other way. So `1, 2,
/// 3` are `f, g, h`, and `0` closes the cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicInterval {
    start: u8,
    len: u8,
}

impl CyclicInterval {
    /// Lengths up to 5 are representable; length-5 maps are stored but never
    /// checked.
    pub fn new(start: u8, len: u8) -> Option<Self> {
        (start < 4 && (1..=5).contains(&len)).then_some(Self { start, len })
    }

    pub fn start(self) -> u8 {
        self.start
    }

    pub fn len(self) -> u8 {
        self.len
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn end(self) -> u8 {
        (self.start + self.len - 1) % 4
    }

    pub fn indices(self) -> impl Iterator<Item = u8> {
        (0..self.len).map(move |k| (self.start + k) % 4)
    }

    /// Side (0 or 1) of the source of the first arrow.
    pub fn domain_side(self) -> usize {
        if self.start % 2 == 1 {
            0
        } else {
            1
        }
    }

    /// Side (0 or 1) of the target of the last arrow.
    pub fn codomain_side(self) -> usize {
        if self.end() % 2 == 1 {
            1
        } else {
            0
        }
    }

    pub fn is_proper(self) -> bool {
        self.len < 4
    }

    pub fn contains_zero(self) -> bool {
        self.indices().any(|k| k == 0)
    }

    /// Ways to write the interval as `J` followed by `K`, both nonempty.
    pub fn splits(self) -> impl Iterator<Item = (Self, Self)> {
        (1..self.len).map(move |k| {
            (
                Self { start: self.start, len: k },
                Self {
                    start: (self.start + k) % 4,
                    len: self.len - k,
                },
            )
        })
    }

    /// All intervals of length 1 to 4, ordered by length then start.
    pub fn all() -> impl Iterator<Item = Self> {
        (1..=4u8).flat_map(|len| (0..4u8).map(move |start| Self { start, len }))
    }

    /// The six intervals inside `{1, 2, 3}`, in the order `f, g, h, fg, gh,
    /// fgh`.
    pub fn torus_intervals() -> [Self; 6] {
        [(1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (1, 3)].map(|(start, len)| Self { start, len })
    }

    /// The torus algebra basis name for intervals inside `{1, 2, 3}`.
    pub fn torus_label(self) -> Option<&'static str> {
        match (self.start, self.len) {
            (1, 1) => Some("f"),
            (2, 1) => Some("g"),
            (3, 1) => Some("h"),
            (1, 2) => Some("fg"),
            (2, 2) => Some("gh"),
            (1, 3) => Some("fgh"),
            _ => None,
        }
    }

    pub fn from_torus_label(label: &str) -> Option<Self> {
        Self::torus_intervals()
            .into_iter()
            .find(|i| i.torus_label() == Some(label))
    }

    pub fn name(self) -> String {
        self.indices().map(|k| char::from(b'0' + k)).collect()
    }

    pub fn parse(name: &str) -> Option<Self> {
        let digits: Vec<u8> = name.bytes().map(|c| c.wrapping_sub(b'0')).collect();
        let &start = digits.first()?;
        let candidate = Self::new(start, u8::try_from(digits.len()).ok()?)?;
        (candidate.name() == name).then_some(candidate)
    }
}

impl fmt::Display for CyclicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Two type D structures `M₀, M₁` over a common algebra together with maps
/// between them indexed by cyclic intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalMaps {
    m0: TypeDStructure,
    m1: TypeDStructure,
    maps: BTreeMap<CyclicInterval, CoeffMap>,
}

static EMPTY: std::sync::OnceLock<CoeffMap> = std::sync::OnceLock::new();

impl IntervalMaps {
    pub fn new(m0: TypeDStructure, m1: TypeDStructure) -> Result<Self> {
        if m0.algebra() != m1.algebra() {
            return Err(Error::WrongAlgebra("M0 and M1 are over different algebras".into()));
        }
        Ok(Self {
            m0,
            m1,
            maps: BTreeMap::new(),
        })
    }

    pub fn algebra(&self) -> &Arc<PathAlgebra> {
        self.m0.algebra()
    }

    pub fn m0(&self) -> &TypeDStructure {
        &self.m0
    }

    pub fn m1(&self) -> &TypeDStructure {
        &self.m1
    }

    pub fn side(&self, s: usize) -> &TypeDStructure {
        if s == 0 {
            &self.m0
        } else {
            &self.m1
        }
    }

    pub fn get(&self, i: CyclicInterval) -> &CoeffMap {
        self.maps.get(&i).unwrap_or_else(|| EMPTY.get_or_init(CoeffMap::new))
    }

    pub fn set(&mut self, i: CyclicInterval, map: CoeffMap) -> Result<()> {
        let (d, c) = (self.side(i.domain_side()), self.side(i.codomain_side()));
        check_bounds(&map, d.len(), c.len(), self.algebra().dim())?;
        let alg = self.algebra();
        for (u, v, b) in map.triples() {
            if !alg.is_compatible(b, d.generator(u).idempotent, c.generator(v).idempotent) {
                return Err(Error::IdempotentMismatch(format!(
                    "D_{i} entry {} -> {} has coefficient {}",
                    d.generator(u).name,
                    c.generator(v).name,
                    alg.basis_name(b)
                )));
            }
        }
        if map.is_zero() {
            self.maps.remove(&i);
        } else {
            self.maps.insert(i, map);
        }
        Ok(())
    }

    pub fn intervals(&self) -> impl Iterator<Item = (CyclicInterval, &CoeffMap)> + '_ {
        self.maps.iter().map(|(&i, m)| (i, m))
    }

    /// `Σ D_J·D_K + D∅·D_I + D_I·D∅`, plus the identity when `I` has
    /// length 4, so zero exactly when the relation for `I` holds.
    pub fn relation_defect(&self, i: CyclicInterval) -> CoeffMap {
        let alg = self.algebra();
        let mut sum = self.side(i.domain_side()).delta().then(self.get(i), alg);
        sum.add_assign(&self.get(i).then(self.side(i.codomain_side()).delta(), alg));
        for (j, k) in i.splits() {
            sum.add_assign(&self.get(j).then(self.get(k), alg));
        }
        if i.len() == 4 {
            sum.add_assign(&self.side(i.domain_side()).identity_map());
        }
        sum
    }

    /// Names every relation among `intervals` that fails, plus `D∅² = 0`.
    pub fn relation_report(&self, intervals: impl IntoIterator<Item = CyclicInterval>) -> Report {
        let mut report = Report::new();
        for s in 0..2 {
            let m = self.side(s);
            if !m.delta().then(m.delta(), self.algebra()).is_zero() {
                report.push(format!("relation D_empty^2 = 0 fails on M{s}"));
            }
        }
        for i in intervals {
            let defect = self.relation_defect(i);
            if !defect.is_zero() {
                let (d, c) = (self.side(i.domain_side()), self.side(i.codomain_side()));
                let (u, v, e) = defect.iter().next().expect("nonzero defect");
                report.push(format!(
                    "relation {} fails: {} -> {} has defect {}",
                    relation_name(i),
                    d.generator(u).name,
                    c.generator(v).name,
                    self.algebra().format_element(e)
                ));
            }
        }
        report
    }
}

fn relation_name(i: CyclicInterval) -> String {
    match i.torus_label() {
        Some(l) => l.to_string(),
        None => i.name(),
    }
}

/// The coefficient maps of a DD bimodule over `(𝒜, torus)`: the internal
/// differentials of `M₀, M₁` and the six maps `D_f … D_fgh`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSystem {
    maps: IntervalMaps,
}

impl CoefficientSystem {
    pub fn new(m0: TypeDStructure, m1: TypeDStructure) -> Result<Self> {
        Ok(Self {
            maps: IntervalMaps::new(m0, m1)?,
        })
    }

    pub fn m0(&self) -> &TypeDStructure {
        &self.maps.m0
    }

    pub fn m1(&self) -> &TypeDStructure {
        &self.maps.m1
    }

    pub fn algebra(&self) -> &Arc<PathAlgebra> {
        self.maps.algebra()
    }

    /// The map for a torus label `f, g, h, fg, gh, fgh`.
    pub fn get(&self, label: &str) -> Result<&CoeffMap> {
        Ok(self.maps.get(label_interval(label)?))
    }

    pub fn set(&mut self, label: &str, map: CoeffMap) -> Result<()> {
        self.maps.set(label_interval(label)?, map)
    }

    pub fn with(mut self, label: &str, map: CoeffMap) -> Result<Self> {
        self.set(label, map)?;
        Ok(self)
    }

    pub fn interval_maps(&self) -> &IntervalMaps {
        &self.maps
    }

    /// The relations `D∅² = 0` and, for each torus label, `∂D_t` plus the
    /// products of consecutive labels vanishing.
    pub fn check(&self) -> Report {
        self.maps.relation_report(CyclicInterval::torus_intervals())
    }
}

fn label_interval(label: &str) -> Result<CyclicInterval> {
    CyclicInterval::from_torus_label(label).ok_or_else(|| Error::UnknownName {
        what: "torus label",
        name: label.into(),
    })
}

/// Generalized coefficient maps indexed by all cyclic intervals of length 1
/// to 4, plus any length-5 maps carried along without being checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedCoefficientSystem {
    maps: IntervalMaps,
}

impl GeneralizedCoefficientSystem {
    pub fn new(maps: IntervalMaps) -> Self {
        Self { maps }
    }

    pub fn from_coefficients(c: &CoefficientSystem) -> Self {
        Self { maps: c.maps.clone() }
    }

    pub fn interval_maps(&self) -> &IntervalMaps {
        &self.maps
    }

    pub fn get(&self, i: CyclicInterval) -> &CoeffMap {
        self.maps.get(i)
    }

    pub fn set(&mut self, i: CyclicInterval, map: CoeffMap) -> Result<()> {
        self.maps.set(i, map)
    }

    pub fn coefficients(&self) -> CoefficientSystem {
        let mut c = CoefficientSystem::new(self.maps.m0.clone(), self.maps.m1.clone())
            .expect("sides share an algebra");
        for i in CyclicInterval::torus_intervals() {
            c.maps.set(i, self.maps.get(i).clone()).expect("already validated");
        }
        c
    }
}

/// Verifies every interval relation of length 1 to 4 and `D∅² = 0`.
pub fn check_generalized(g: &GeneralizedCoefficientSystem) -> Report {
    g.maps.relation_report(CyclicInterval::all())
}

/// Assembles the DD bimodule with structure map `D∅ ⊗ 1 + Σ D_t ⊗ t`.
pub fn from_coefficients(c: &CoefficientSystem) -> Result<DDBimodule> {
    if let Some(v) = c.check().violations.into_iter().next() {
        return Err(Error::CoefficientRelationViolated(v));
    }
    assemble(c)
}

/// Assembly without the relation check; fails only on generator name
/// collisions between `M₀` and `M₁`.
fn assemble(c: &CoefficientSystem) -> Result<DDBimodule> {
    let torus = PathAlgebra::torus();
    let n0 = c.m0().len();
    let gens = c
        .m0()
        .generators()
        .iter()
        .map(|g| (g, 0))
        .chain(c.m1().generators().iter().map(|g| (g, 1)))
        .map(|(g, r)| DDGenerator {
            name: g.name.clone(),
            left: g.idempotent,
            right: r,
        })
        .collect();
    let offset = |side: usize| if side == 0 { 0 } else { n0 };
    let mut arrows = Vec::new();
    for s in 0..2 {
        let e = torus.idempotent(s);
        arrows.extend(c.maps.side(s).delta().triples().map(|(u, v, a)| (u + offset(s), v + offset(s), a, e)));
    }
    for i in CyclicInterval::torus_intervals() {
        let t = torus.lookup(i.torus_label().unwrap()).expect("torus label");
        let (ds, cs) = (offset(i.domain_side()), offset(i.codomain_side()));
        arrows.extend(c.maps.get(i).triples().map(|(u, v, a)| (u + ds, v + cs, a, t)));
    }
    DDBimodule::new(c.algebra().clone(), torus, gens, arrows)
}

/// Splits a DD bimodule over `(𝒜, torus)` by right idempotent and label.
pub fn to_coefficients(m: &DDBimodule) -> Result<CoefficientSystem> {
    if **m.right() != *PathAlgebra::torus() {
        return Err(Error::WrongAlgebra("right algebra is not the torus algebra".into()));
    }
    let right = m.right();
    let gens = m.generators();
    let mut side_index = vec![0; gens.len()];
    let mut sides: [Vec<crate::typed::Generator>; 2] = [Vec::new(), Vec::new()];
    for (i, g) in gens.iter().enumerate() {
        side_index[i] = sides[g.right].len();
        sides[g.right].push(crate::typed::Generator::new(g.name.clone(), g.left));
    }
    let mut deltas = [CoeffMap::new(), CoeffMap::new()];
    let mut maps: BTreeMap<CyclicInterval, CoeffMap> = BTreeMap::new();
    for (u, v, a, t) in m.arrows() {
        let (su, sv) = (gens[u].right, gens[v].right);
        let (iu, iv) = (side_index[u], side_index[v]);
        if right.is_idempotent(t) {
            if su != sv || right.idempotent(su) != t {
                return Err(Error::IdempotentMismatch(format!(
                    "arrow {} -> {} has right label {}",
                    gens[u].name,
                    gens[v].name,
                    right.basis_name(t)
                )));
            }
            deltas[su].toggle(iu, iv, a);
            continue;
        }
        let i = CyclicInterval::from_torus_label(right.basis_name(t)).expect("torus basis name");
        if i.domain_side() != su || i.codomain_side() != sv {
            return Err(Error::IdempotentMismatch(format!(
                "arrow {} -> {} has right label {}",
                gens[u].name,
                gens[v].name,
                right.basis_name(t)
            )));
        }
        maps.entry(i).or_default().toggle(iu, iv, a);
    }
    let [g0, g1] = sides;
    let [d0, d1] = deltas;
    let left = m.left().clone();
    let mut c = CoefficientSystem::new(
        TypeDStructure::new(left.clone(), g0, d0)?,
        TypeDStructure::new(left, g1, d1)?,
    )?;
    for (i, map) in maps {
        c.maps.set(i, map)?;
    }
    Ok(c)
}
