use crate::error::{Error, Result};
use crate::kernel::{LinearSystem, PathAlgebra};
use crate::report::Report;

use super::structure::{check_bounds, compatibility_violations, nonzero_entries};
use super::{CoeffMap, Generator, TypeDStructure};

/// An algebra-linear map between type D structures, not necessarily closed.
/// Homotopies use the same representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDMorphism {
    source: TypeDStructure,
    target: TypeDStructure,
    map: CoeffMap,
}

impl TypeDMorphism {
    pub fn new(source: TypeDStructure, target: TypeDStructure, map: CoeffMap) -> Result<Self> {
        if source.algebra() != target.algebra() {
            return Err(Error::WrongAlgebra(
                "source and target are over different algebras".into(),
            ));
        }
        check_bounds(&map, source.len(), target.len(), source.algebra().dim())?;
        let mut report = Report::new();
        compatibility_violations(
            source.algebra(),
            source.generators(),
            target.generators(),
            &map,
            "component",
            &mut report,
        );
        if let Some(v) = report.violations.into_iter().next() {
            return Err(Error::IdempotentMismatch(v));
        }
        Ok(Self {
            source,
            target,
            map,
        })
    }

    pub fn zero(source: &TypeDStructure, target: &TypeDStructure) -> Result<Self> {
        Self::new(source.clone(), target.clone(), CoeffMap::new())
    }

    pub fn source(&self) -> &TypeDStructure {
        &self.source
    }

    pub fn target(&self) -> &TypeDStructure {
        &self.target
    }

    pub fn map(&self) -> &CoeffMap {
        &self.map
    }

    pub fn algebra(&self) -> &PathAlgebra {
        self.source.algebra()
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_zero()
    }

    /// `∂φ = δ·φ + φ·δ′` in application order.
    pub fn differential(&self) -> CoeffMap {
        differential(&self.source, &self.target, &self.map)
    }

    pub fn is_closed(&self) -> bool {
        self.differential().is_zero()
    }

    pub fn closedness_report(&self) -> Report {
        let mut report = Report::new();
        nonzero_entries(
            self.algebra(),
            self.source.generators(),
            self.target.generators(),
            &self.differential(),
            "differential of morphism at",
            &mut report,
        );
        report
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_endpoints(self, other)?;
        Ok(Self {
            source: self.source.clone(),
            target: self.target.clone(),
            map: self.map.add(&other.map),
        })
    }

    pub fn with_map(&self, map: CoeffMap) -> Result<Self> {
        Self::new(self.source.clone(), self.target.clone(), map)
    }

    fn require_closed(&self) -> Result<()> {
        let r = self.closedness_report();
        match r.violations.into_iter().next() {
            Some(v) => Err(Error::NotClosed(v)),
            None => Ok(()),
        }
    }
}

pub(crate) fn differential(src: &TypeDStructure, tgt: &TypeDStructure, map: &CoeffMap) -> CoeffMap {
    let alg = src.algebra();
    let mut d = src.delta().then(map, alg);
    d.add_assign(&map.then(tgt.delta(), alg));
    d
}

pub(crate) fn same_endpoints(a: &TypeDMorphism, b: &TypeDMorphism) -> Result<()> {
    if a.source != b.source || a.target != b.target {
        return Err(Error::EndpointMismatch(
            "morphisms do not share source and target".into(),
        ));
    }
    Ok(())
}

/// `φ` followed by `ψ`.
pub fn compose_morphisms(phi: &TypeDMorphism, psi: &TypeDMorphism) -> Result<TypeDMorphism> {
    if phi.target != psi.source {
        return Err(Error::EndpointMismatch(
            "target of the first morphism is not the source of the second".into(),
        ));
    }
    Ok(TypeDMorphism {
        source: phi.source.clone(),
        target: psi.target.clone(),
        map: phi.map.then(&psi.map, phi.algebra()),
    })
}

pub fn identity_morphism(n: &TypeDStructure) -> TypeDMorphism {
    TypeDMorphism {
        source: n.clone(),
        target: n.clone(),
        map: n.identity_map(),
    }
}

/// Generators of a two-slot structure: slot 0 names prefixed `0.`, slot 1
/// names prefixed `1.`.
pub(crate) fn slot_generators(a: &TypeDStructure, b: &TypeDStructure) -> Vec<Generator> {
    a.generators()
        .iter()
        .map(|g| Generator::new(format!("0.{}", g.name), g.idempotent))
        .chain(
            b.generators()
                .iter()
                .map(|g| Generator::new(format!("1.{}", g.name), g.idempotent)),
        )
        .collect()
}

/// The structure with generators `source ⊔ target` and structure map
/// `δ_source + δ_target + map`, without any closedness requirement.
pub(crate) fn cone_unchecked(src: &TypeDStructure, tgt: &TypeDStructure, map: &CoeffMap) -> TypeDStructure {
    let n = src.len();
    let mut delta = src.delta().clone();
    delta.add_assign(&tgt.delta().shifted(n, n));
    delta.add_assign(&map.shifted(0, n));
    TypeDStructure::new(src.algebra().clone(), slot_generators(src, tgt), delta)
        .expect("cone of well-formed structures is well-formed")
}

/// The mapping cone of a closed morphism.
pub fn cone(phi: &TypeDMorphism) -> Result<TypeDStructure> {
    phi.require_closed()?;
    Ok(cone_unchecked(&phi.source, &phi.target, &phi.map))
}

pub fn direct_sum(a: &TypeDStructure, b: &TypeDStructure) -> Result<TypeDStructure> {
    if a.algebra() != b.algebra() {
        return Err(Error::WrongAlgebra("summands are over different algebras".into()));
    }
    Ok(cone_unchecked(a, b, &CoeffMap::new()))
}

/// Checks `∂H = φ + ψ` exactly.
pub fn homotopy_check(h: &TypeDMorphism, phi: &TypeDMorphism, psi: &TypeDMorphism) -> Result<bool> {
    same_endpoints(h, phi)?;
    same_endpoints(h, psi)?;
    Ok(h.differential() == phi.map.add(&psi.map))
}

/// Every idempotent-compatible single-term slot `(u, v, b)` of a map between
/// the two generator lists.
pub(crate) fn map_slots(alg: &PathAlgebra, src: &[Generator], tgt: &[Generator]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (u, gu) in src.iter().enumerate() {
        for (v, gv) in tgt.iter().enumerate() {
            out.extend(alg.between(gu.idempotent, gv.idempotent).map(|b| (u, v, b)));
        }
    }
    out
}

/// Adds the terms of `∂` applied to the single-term map `(u, v, b)` into
/// equations keyed by `key(source, target, basis)`.
pub(crate) fn add_differential_terms<K: std::hash::Hash + Eq>(
    sys: &mut LinearSystem<K>,
    col: usize,
    src: &TypeDStructure,
    tgt: &TypeDStructure,
    incoming: &[Vec<(usize, usize)>],
    (u, v, b): (usize, usize, usize),
    key: &impl Fn(usize, usize, usize) -> K,
) {
    let alg = src.algebra();
    for &(x, a) in &incoming[u] {
        if let Some(z) = alg.mul_basis(a, b) {
            sys.toggle(key(x, v, z), col);
        }
    }
    for (y, e) in tgt.delta().row(v) {
        for c in e.terms() {
            if let Some(z) = alg.mul_basis(b, c) {
                sys.toggle(key(u, y, z), col);
            }
        }
    }
}

/// For each generator, the `(source, basis)` terms of arrows into it.
pub(crate) fn incoming_terms(n: &TypeDStructure) -> Vec<Vec<(usize, usize)>> {
    let mut inc = vec![Vec::new(); n.len()];
    for (x, u, a) in n.delta().triples() {
        inc[u].push((x, a));
    }
    inc
}

/// A basis of the space of closed morphisms `N → N′`.
pub fn closed_morphisms(n: &TypeDStructure, m: &TypeDStructure) -> Result<Vec<TypeDMorphism>> {
    if n.algebra() != m.algebra() {
        return Err(Error::WrongAlgebra("structures are over different algebras".into()));
    }
    let slots = map_slots(n.algebra(), n.generators(), m.generators());
    let incoming = incoming_terms(n);
    let mut sys = LinearSystem::new();
    for &slot in &slots {
        let col = sys.add_variable();
        add_differential_terms(&mut sys, col, n, m, &incoming, slot, &|a, b, c| (a, b, c));
    }
    Ok(sys
        .nullspace()
        .into_iter()
        .map(|x| TypeDMorphism {
            source: n.clone(),
            target: m.clone(),
            map: CoeffMap::from_triples(slots.iter().zip(&x).filter(|(_, &on)| on).map(|(&s, _)| s)),
        })
        .collect())
}

/// Homotopy-inverse data for a closed morphism `φ: N → N′`.
#[derive(Clone, Debug)]
pub struct HomotopyInverse {
    pub inverse: TypeDMorphism,
    /// `∂H = φ·ψ + id_N`.
    pub source_homotopy: TypeDMorphism,
    /// `∂H = ψ·φ + id_N′`.
    pub target_homotopy: TypeDMorphism,
}

/// Solves for `ψ, H, H′` with `∂ψ = 0`, `∂H = φψ + 1`, `∂H′ = ψφ + 1` in one
/// linear system. Returns `None` when `φ` is not a homotopy equivalence.
pub fn homotopy_inverse(phi: &TypeDMorphism) -> Result<Option<HomotopyInverse>> {
    phi.require_closed()?;
    let (n, m) = (&phi.source, &phi.target);
    let alg = n.algebra();
    let inc_n = incoming_terms(n);
    let inc_m = incoming_terms(m);
    let psi_slots = map_slots(alg, m.generators(), n.generators());
    let hn_slots = map_slots(alg, n.generators(), n.generators());
    let hm_slots = map_slots(alg, m.generators(), m.generators());

    // Equation families: 0 = closedness of ψ, 1 = homotopy on N, 2 = on N′.
    let mut sys: LinearSystem<(u8, usize, usize, usize)> = LinearSystem::new();
    let mut phi_in: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m.len()];
    for (u, v, a) in phi.map.triples() {
        phi_in[v].push((u, a));
    }
    let mut psi_cols = Vec::new();
    for &(u, v, b) in &psi_slots {
        let col = sys.add_variable();
        psi_cols.push(col);
        add_differential_terms(&mut sys, col, m, n, &inc_m, (u, v, b), &|a, b, c| (0, a, b, c));
        // φ·ψ contributes to family 1 at (x, v) for φ entries x → u.
        for &(x, a) in &phi_in[u] {
            if let Some(z) = alg.mul_basis(a, b) {
                sys.toggle((1, x, v, z), col);
            }
        }
        // ψ·φ contributes to family 2 at (u, y) for φ entries v → y.
        for (y, e) in phi.map.row(v) {
            for c in e.terms() {
                if let Some(z) = alg.mul_basis(b, c) {
                    sys.toggle((2, u, y, z), col);
                }
            }
        }
    }
    let mut hn_cols = Vec::new();
    for &slot in &hn_slots {
        let col = sys.add_variable();
        hn_cols.push(col);
        add_differential_terms(&mut sys, col, n, n, &inc_n, slot, &|a, b, c| (1, a, b, c));
    }
    let mut hm_cols = Vec::new();
    for &slot in &hm_slots {
        let col = sys.add_variable();
        hm_cols.push(col);
        add_differential_terms(&mut sys, col, m, m, &inc_m, slot, &|a, b, c| (2, a, b, c));
    }
    for i in 0..n.len() {
        sys.toggle_rhs((1, i, i, n.idempotent_basis(i)));
    }
    for i in 0..m.len() {
        sys.toggle_rhs((2, i, i, m.idempotent_basis(i)));
    }
    let Some(x) = sys.solve() else {
        return Ok(None);
    };
    let pick = |slots: &[(usize, usize, usize)], cols: &[usize]| {
        CoeffMap::from_triples(slots.iter().zip(cols).filter(|(_, &c)| x[c]).map(|(&s, _)| s))
    };
    Ok(Some(HomotopyInverse {
        inverse: TypeDMorphism::new(m.clone(), n.clone(), pick(&psi_slots, &psi_cols))?,
        source_homotopy: TypeDMorphism::new(n.clone(), n.clone(), pick(&hn_slots, &hn_cols))?,
        target_homotopy: TypeDMorphism::new(m.clone(), m.clone(), pick(&hm_slots, &hm_cols))?,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{strand_algebra_torus, torus_algebra};
    use crate::typed::check_structure;

    fn one_gen() -> TypeDStructure {
        TypeDStructure::from_names(torus_algebra(), &[("x", "i0")], &[]).unwrap()
    }

    #[test]
    fn unit_laws() {
        let s = strand_algebra_torus();
        let n = TypeDStructure::from_names(s.clone(), &[("p", "j0"), ("q", "j1")], &[("p", "q", "rho1")]).unwrap();
        let m = TypeDStructure::from_names(s, &[("r", "j0"), ("t", "j1")], &[("r", "t", "rho1")]).unwrap();
        let phi = TypeDMorphism::new(n.clone(), m.clone(), CoeffMap::from_triples([(0, 0, 0), (1, 1, 1)])).unwrap();
        assert!(phi.is_closed());
        assert_eq!(compose_morphisms(&phi, &identity_morphism(&m)).unwrap(), phi);
        assert_eq!(compose_morphisms(&identity_morphism(&n), &phi).unwrap(), phi);
        let zero = TypeDMorphism::zero(&m, &m).unwrap();
        assert!(compose_morphisms(&phi, &zero).unwrap().is_zero());
        assert!(compose_morphisms(&zero, &phi).is_err());
    }

    #[test]
    fn cone_of_identity_has_idempotent_arrow() {
        let n = one_gen();
        let c = cone(&identity_morphism(&n)).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.arrow_names(), vec![("0.x".into(), "1.x".into(), "i0".into())]);
        assert!(check_structure(&c).is_valid());
    }

    #[test]
    fn cone_rejects_non_closed() {
        let t = torus_algebra();
        let n = TypeDStructure::from_names(t.clone(), &[("x", "i0"), ("y", "i1")], &[("x", "y", "f")]).unwrap();
        let m = TypeDStructure::from_names(t, &[("z", "i1")], &[]).unwrap();
        let phi = TypeDMorphism::new(n, m, CoeffMap::from_triples([(1, 0, 1)])).unwrap();
        assert!(matches!(cone(&phi), Err(Error::NotClosed(_))));
    }

    #[test]
    fn homotopy_checks() {
        let n = one_gen();
        let id = identity_morphism(&n);
        let zero = TypeDMorphism::zero(&n, &n).unwrap();
        assert!(homotopy_check(&zero, &id, &id).unwrap());
        assert!(!homotopy_check(&zero, &id, &zero).unwrap());
        let other = TypeDMorphism::zero(&n, &one_gen().renamed(|_| "w".into()).unwrap()).unwrap();
        assert!(homotopy_check(&zero, &id, &other).is_err());
    }

    #[test]
    fn closed_morphisms_of_single_arrow() {
        let s = strand_algebra_torus();
        let n = TypeDStructure::from_names(s.clone(), &[("p", "j0"), ("q", "j1")], &[("p", "q", "rho3")]).unwrap();
        let m = TypeDStructure::from_names(s, &[("r", "j0"), ("t", "j1")], &[("r", "t", "rho1")]).unwrap();
        let basis = closed_morphisms(&n, &m).unwrap();
        assert!(!basis.is_empty());
        for phi in &basis {
            assert!(phi.is_closed());
            // No closed morphism has an idempotent component.
            assert!(phi.map().triples().all(|(_, _, b)| !phi.algebra().is_idempotent(b)));
        }
    }

    #[test]
    fn identity_has_homotopy_inverse() {
        let n = TypeDStructure::from_names(torus_algebra(), &[("x", "i0"), ("y", "i1")], &[("x", "y", "f")]).unwrap();
        let id = identity_morphism(&n);
        let inv = homotopy_inverse(&id).unwrap().unwrap();
        assert!(inv.inverse.is_closed());
        let z = TypeDMorphism::zero(&n, &n).unwrap();
        assert!(homotopy_inverse(&z).unwrap().is_none());
    }
}
