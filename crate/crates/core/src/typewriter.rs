//! Typewriters: pairs of type D structures `M₀, M₁` with two maps
//! `D_f, D_h: M₀ → M₁` and a carriage return `D_CR` from the cone of `D_f`
//! to the cone of `D_h`, together with their morphisms and homotopies.
//!
//! Every map between two cones is stored by its four blocks. A cone has its
//! source structure in slot 0 and its target in slot 1, so for the carriage
//! return the blocks are named after the torus labels they carry under the
//! equivalence with DD bimodules: `fg` (slot 0 → 0), `fgh` (0 → 1), `g`
//! (1 → 0) and `gh` (1 → 1).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{AlgebraIso, PathAlgebra};
use crate::report::Report;
use crate::typed::{
    check_bounds, check_structure, cone_unchecked, differential, is_homotopy_equivalence, CoeffMap,
    TypeDMorphism, TypeDStructure,
};

/// A map between two-slot structures, by blocks `b{i}{j}` from slot `i` to
/// slot `j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockMap {
    pub b00: CoeffMap,
    pub b01: CoeffMap,
    pub b10: CoeffMap,
    pub b11: CoeffMap,
}

impl BlockMap {
    /// Blocks named by torus labels: `g: 1 → 0`, `fg: 0 → 0`, `gh: 1 → 1`,
    /// `fgh: 0 → 1`.
    pub fn from_labels(g: CoeffMap, fg: CoeffMap, gh: CoeffMap, fgh: CoeffMap) -> Self {
        Self {
            b00: fg,
            b01: fgh,
            b10: g,
            b11: gh,
        }
    }

    /// The block carrying torus label `label`.
    pub fn label(&self, label: &str) -> Option<&CoeffMap> {
        match label {
            "g" => Some(&self.b10),
            "fg" => Some(&self.b00),
            "gh" => Some(&self.b11),
            "fgh" => Some(&self.b01),
            _ => None,
        }
    }

    /// The identity of a cone whose slots are `slot0` and `slot1`.
    pub fn identity(slot0: &TypeDStructure, slot1: &TypeDStructure) -> Self {
        Self {
            b00: slot0.identity_map(),
            b11: slot1.identity_map(),
            ..Self::default()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.b00.is_zero() && self.b01.is_zero() && self.b10.is_zero() && self.b11.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            b00: self.b00.add(&other.b00),
            b01: self.b01.add(&other.b01),
            b10: self.b10.add(&other.b10),
            b11: self.b11.add(&other.b11),
        }
    }

    /// The full map, for a source with `src0` slot-0 generators and a target
    /// with `tgt0` slot-0 generators.
    pub fn assemble(&self, src0: usize, tgt0: usize) -> CoeffMap {
        let mut m = self.b00.clone();
        m.add_assign(&self.b01.shifted(0, tgt0));
        m.add_assign(&self.b10.shifted(src0, 0));
        m.add_assign(&self.b11.shifted(src0, tgt0));
        m
    }

    pub fn split(map: &CoeffMap, src0: usize, src: usize, tgt0: usize, tgt: usize) -> Self {
        Self {
            b00: map.block(0..src0, 0..tgt0),
            b01: map.block(0..src0, tgt0..tgt),
            b10: map.block(src0..src, 0..tgt0),
            b11: map.block(src0..src, tgt0..tgt),
        }
    }

    fn map_basis(&self, f: impl Fn(usize) -> usize + Copy) -> Self {
        let m = |c: &CoeffMap| c.map_indices(|u| u, |v| v, f);
        Self {
            b00: m(&self.b00),
            b01: m(&self.b01),
            b10: m(&self.b10),
            b11: m(&self.b11),
        }
    }
}

/// A typewriter `(M₀, M₁; D_f, D_h; D_CR)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Typewriter {
    m0: TypeDStructure,
    m1: TypeDStructure,
    d_f: CoeffMap,
    d_h: CoeffMap,
    d_cr: BlockMap,
}

fn check_map(alg: &PathAlgebra, src: &TypeDStructure, tgt: &TypeDStructure, map: &CoeffMap, what: &str) -> Result<()> {
    check_bounds(map, src.len(), tgt.len(), alg.dim())?;
    for (u, v, b) in map.triples() {
        if !alg.is_compatible(b, src.generator(u).idempotent, tgt.generator(v).idempotent) {
            return Err(Error::IdempotentMismatch(format!(
                "{what} entry {} -> {} has coefficient {}",
                src.generator(u).name,
                tgt.generator(v).name,
                alg.basis_name(b)
            )));
        }
    }
    Ok(())
}

/// Checks bounds and idempotents of a block map between the cones
/// `(a0 → a1)` and `(b0 → b1)`.
fn check_blocks(
    alg: &PathAlgebra,
    (a0, a1): (&TypeDStructure, &TypeDStructure),
    (b0, b1): (&TypeDStructure, &TypeDStructure),
    m: &BlockMap,
    what: &str,
) -> Result<()> {
    check_map(alg, a0, b0, &m.b00, what)?;
    check_map(alg, a0, b1, &m.b01, what)?;
    check_map(alg, a1, b0, &m.b10, what)?;
    check_map(alg, a1, b1, &m.b11, what)
}

impl Typewriter {
    pub fn new(m0: TypeDStructure, m1: TypeDStructure, d_f: CoeffMap, d_h: CoeffMap, d_cr: BlockMap) -> Result<Self> {
        if m0.algebra() != m1.algebra() {
            return Err(Error::WrongAlgebra("M0 and M1 are over different algebras".into()));
        }
        let alg = m0.algebra().clone();
        check_map(&alg, &m0, &m1, &d_f, "D_f")?;
        check_map(&alg, &m0, &m1, &d_h, "D_h")?;
        check_blocks(&alg, (&m0, &m1), (&m0, &m1), &d_cr, "D_CR")?;
        Ok(Self {
            m0,
            m1,
            d_f,
            d_h,
            d_cr,
        })
    }

    pub fn zero(m0: TypeDStructure, m1: TypeDStructure) -> Result<Self> {
        Self::new(m0, m1, CoeffMap::new(), CoeffMap::new(), BlockMap::default())
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

    pub fn d_f(&self) -> &CoeffMap {
        &self.d_f
    }

    pub fn d_h(&self) -> &CoeffMap {
        &self.d_h
    }

    pub fn d_cr(&self) -> &BlockMap {
        &self.d_cr
    }

    pub fn d_f_morphism(&self) -> TypeDMorphism {
        TypeDMorphism::new(self.m0.clone(), self.m1.clone(), self.d_f.clone()).expect("validated on construction")
    }

    pub fn d_h_morphism(&self) -> TypeDMorphism {
        TypeDMorphism::new(self.m0.clone(), self.m1.clone(), self.d_h.clone()).expect("validated on construction")
    }

    pub fn cone_f(&self) -> TypeDStructure {
        cone_unchecked(&self.m0, &self.m1, &self.d_f)
    }

    pub fn cone_h(&self) -> TypeDStructure {
        cone_unchecked(&self.m0, &self.m1, &self.d_h)
    }

    /// The carriage return as a morphism from the cone of `D_f` to the cone
    /// of `D_h`.
    pub fn d_cr_morphism(&self) -> TypeDMorphism {
        let n0 = self.m0.len();
        TypeDMorphism::new(self.cone_f(), self.cone_h(), self.d_cr.assemble(n0, n0))
            .expect("validated on construction")
    }

    /// The cone of the carriage return; slots are the cones of `D_f` and
    /// `D_h`, so generators are ordered `M₀, M₁, M₀, M₁`.
    pub fn cone_cr(&self) -> TypeDStructure {
        let n0 = self.m0.len();
        cone_unchecked(&self.cone_f(), &self.cone_h(), &self.d_cr.assemble(n0, n0))
    }

    /// Pushes every coefficient along an algebra isomorphism.
    pub fn transport(&self, iso: &AlgebraIso) -> Result<Self> {
        let f = |b| iso.apply(b);
        Self::new(
            self.m0.transport(iso)?,
            self.m1.transport(iso)?,
            self.d_f.map_indices(|u| u, |v| v, f),
            self.d_h.map_indices(|u| u, |v| v, f),
            self.d_cr.map_basis(f),
        )
    }
}

/// Verifies that `M₀, M₁` are valid and `D_f, D_h, D_CR` are closed.
pub fn check_typewriter(m: &Typewriter) -> Report {
    let mut report = Report::new();
    report.extend(check_structure(&m.m0).prefixed("M0"));
    report.extend(check_structure(&m.m1).prefixed("M1"));
    report.extend(m.d_f_morphism().closedness_report().prefixed("D_f"));
    report.extend(m.d_h_morphism().closedness_report().prefixed("D_h"));
    report.extend(m.d_cr_morphism().closedness_report().prefixed("D_CR"));
    report
}

/// Whether the carriage return is a homotopy equivalence.
pub fn is_partially_extendable(m: &Typewriter) -> Result<bool> {
    is_homotopy_equivalence(&m.d_cr_morphism())
}

/// A morphism of typewriters `(T₀, T₁; T_f, T_h; T_CR)`.
///
/// Homotopies between morphisms have the same shape and reuse this type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypewriterMorphism {
    source: Typewriter,
    target: Typewriter,
    pub t0: CoeffMap,
    pub t1: CoeffMap,
    pub t_f: CoeffMap,
    pub t_h: CoeffMap,
    pub t_cr: BlockMap,
}

/// Homotopies between typewriter morphisms have the shape of a morphism.
pub type TypewriterHomotopy = TypewriterMorphism;

impl TypewriterMorphism {
    pub fn new(
        source: Typewriter,
        target: Typewriter,
        (t0, t1): (CoeffMap, CoeffMap),
        (t_f, t_h): (CoeffMap, CoeffMap),
        t_cr: BlockMap,
    ) -> Result<Self> {
        if source.algebra() != target.algebra() {
            return Err(Error::WrongAlgebra("typewriters are over different algebras".into()));
        }
        let alg = source.algebra().clone();
        let (s, t) = (&source, &target);
        check_map(&alg, &s.m0, &t.m0, &t0, "T0")?;
        check_map(&alg, &s.m1, &t.m1, &t1, "T1")?;
        check_map(&alg, &s.m0, &t.m1, &t_f, "T_f")?;
        check_map(&alg, &s.m0, &t.m1, &t_h, "T_h")?;
        check_blocks(&alg, (&s.m0, &s.m1), (&t.m0, &t.m1), &t_cr, "T_CR")?;
        Ok(Self {
            source,
            target,
            t0,
            t1,
            t_f,
            t_h,
            t_cr,
        })
    }

    pub fn zero(source: &Typewriter, target: &Typewriter) -> Result<Self> {
        Self::new(
            source.clone(),
            target.clone(),
            Default::default(),
            Default::default(),
            BlockMap::default(),
        )
    }

    pub fn identity(m: &Typewriter) -> Self {
        Self {
            source: m.clone(),
            target: m.clone(),
            t0: m.m0.identity_map(),
            t1: m.m1.identity_map(),
            t_f: CoeffMap::new(),
            t_h: CoeffMap::new(),
            t_cr: BlockMap::default(),
        }
    }

    pub fn source(&self) -> &Typewriter {
        &self.source
    }

    pub fn target(&self) -> &Typewriter {
        &self.target
    }

    /// The induced map of cones `𝐓_f = [[T₀, T_f], [0, T₁]]`.
    pub fn cone_map_f(&self) -> BlockMap {
        BlockMap {
            b00: self.t0.clone(),
            b01: self.t_f.clone(),
            b10: CoeffMap::new(),
            b11: self.t1.clone(),
        }
    }

    pub fn cone_map_h(&self) -> BlockMap {
        BlockMap {
            b00: self.t0.clone(),
            b01: self.t_h.clone(),
            b10: CoeffMap::new(),
            b11: self.t1.clone(),
        }
    }

    /// The induced map `[[𝐓_f, T_CR], [0, 𝐓_h]]` between the cones of the
    /// carriage returns.
    pub fn cone_of_cones_map(&self) -> CoeffMap {
        let (n0, n1) = (self.source.m0.len(), self.source.m1.len());
        let (p0, p1) = (self.target.m0.len(), self.target.m1.len());
        let f = self.cone_map_f().assemble(n0, p0);
        let h = self.cone_map_h().assemble(n0, p0);
        let cr = self.t_cr.assemble(n0, p0);
        let mut m = f;
        m.add_assign(&cr.shifted(0, p0 + p1));
        m.add_assign(&h.shifted(n0 + n1, p0 + p1));
        m
    }

    /// Reads a morphism back from a map between cones of carriage returns,
    /// failing if it does not have the triangular shape with matching
    /// diagonal blocks.
    pub fn from_cone_of_cones_map(source: &Typewriter, target: &Typewriter, map: &CoeffMap) -> Result<Self> {
        let (n0, n1) = (source.m0.len(), source.m1.len());
        let (p0, p1) = (target.m0.len(), target.m1.len());
        let (ns, nt) = (n0 + n1, p0 + p1);
        let big = BlockMap::split(map, ns, 2 * ns, nt, 2 * nt);
        let top = BlockMap::split(&big.b00, n0, ns, p0, nt);
        let bottom = BlockMap::split(&big.b11, n0, ns, p0, nt);
        if !big.b10.is_zero() || !top.b10.is_zero() || !bottom.b10.is_zero() {
            return Err(Error::InvalidStructure("map is not upper triangular".into()));
        }
        if top.b00 != bottom.b00 || top.b11 != bottom.b11 {
            return Err(Error::InvalidStructure(
                "diagonal blocks of the two cone maps differ".into(),
            ));
        }
        Self::new(
            source.clone(),
            target.clone(),
            (top.b00, top.b11),
            (top.b01, bottom.b01),
            BlockMap::split(&big.b01, n0, ns, p0, nt),
        )
    }
}

fn defect_report(alg: &PathAlgebra, what: &str, defect: &CoeffMap, report: &mut Report) {
    if let Some((u, v, e)) = defect.iter().next() {
        report.push(format!(
            "{what} fails at entry {u} -> {v} with defect {}",
            alg.format_element(e)
        ));
    }
}

/// Verifies `T₀, T₁` closed and the three homotopy-commutation identities
/// for `T_f`, `T_h` and `T_CR`.
pub fn check_typewriter_morphism(t: &TypewriterMorphism) -> Report {
    let (s, d) = (&t.source, &t.target);
    let alg = s.algebra().clone();
    let mut report = Report::new();
    defect_report(&alg, "T0 closedness", &differential(&s.m0, &d.m0, &t.t0), &mut report);
    defect_report(&alg, "T1 closedness", &differential(&s.m1, &d.m1, &t.t1), &mut report);
    for (name, tm, ds, dt) in [("T_f", &t.t_f, &s.d_f, &d.d_f), ("T_h", &t.t_h, &s.d_h, &d.d_h)] {
        let mut defect = differential(&s.m0, &d.m1, tm);
        defect.add_assign(&ds.then(&t.t1, &alg));
        defect.add_assign(&t.t0.then(dt, &alg));
        defect_report(&alg, &format!("{name} homotopy identity"), &defect, &mut report);
    }
    let (n0, p0) = (s.m0.len(), d.m0.len());
    let mut defect = differential(&s.cone_f(), &d.cone_h(), &t.t_cr.assemble(n0, p0));
    defect.add_assign(&s.d_cr.assemble(n0, n0).then(&t.cone_map_h().assemble(n0, p0), &alg));
    defect.add_assign(&t.cone_map_f().assemble(n0, p0).then(&d.d_cr.assemble(p0, p0), &alg));
    defect_report(&alg, "T_CR homotopy identity", &defect, &mut report);
    report
}

/// `T` followed by `T′`.
pub fn compose_typewriter_morphisms(t: &TypewriterMorphism, u: &TypewriterMorphism) -> Result<TypewriterMorphism> {
    if t.target != u.source {
        return Err(Error::EndpointMismatch(
            "target of the first morphism is not the source of the second".into(),
        ));
    }
    let alg = t.source.algebra().clone();
    let (n0, p0, q0) = (t.source.m0.len(), t.target.m0.len(), u.target.m0.len());
    let q1 = u.target.m1.len();
    let then = |a: &CoeffMap, b: &CoeffMap| a.then(b, &alg);
    let t_f = then(&t.t0, &u.t_f).add(&then(&t.t_f, &u.t1));
    let t_h = then(&t.t0, &u.t_h).add(&then(&t.t_h, &u.t1));
    let cr = then(&t.cone_map_f().assemble(n0, p0), &u.t_cr.assemble(p0, q0))
        .add(&then(&t.t_cr.assemble(n0, p0), &u.cone_map_h().assemble(p0, q0)));
    let n1 = t.source.m1.len();
    let composite = TypewriterMorphism::new(
        t.source.clone(),
        u.target.clone(),
        (then(&t.t0, &u.t0), then(&t.t1, &u.t1)),
        (t_f, t_h),
        BlockMap::split(&cr, n0, n0 + n1, q0, q0 + q1),
    )?;
    // The component formulas are the only ones compatible with composing the
    // induced maps of cones of carriage returns.
    assert_eq!(
        composite.cone_of_cones_map(),
        then(&t.cone_of_cones_map(), &u.cone_of_cones_map()),
        "composite components disagree with the composite of induced maps"
    );
    Ok(composite)
}

/// Checks that `H` is a homotopy from `T` to `T′`: its induced map between
/// cones of carriage returns has differential `𝐓 + 𝐓′`, which unpacks to
/// `∂H_i = T_i + T′_i` and the matching identities for `H_f, H_h, H_CR`.
pub fn check_typewriter_homotopy(
    h: &TypewriterHomotopy,
    t: &TypewriterMorphism,
    t2: &TypewriterMorphism,
) -> Result<bool> {
    for other in [t, t2] {
        if other.source != h.source || other.target != h.target {
            return Err(Error::EndpointMismatch(
                "homotopy and morphisms do not share endpoints".into(),
            ));
        }
    }
    let d = differential(&h.source.cone_cr(), &h.target.cone_cr(), &h.cone_of_cones_map());
    Ok(d == t.cone_of_cones_map().add(&t2.cone_of_cones_map()))
}

/// `T′ = T + ∂H`, the morphism at the other end of a homotopy `H` out of
/// `T`.
pub fn homotopy_target(t: &TypewriterMorphism, h: &TypewriterHomotopy) -> Result<TypewriterMorphism> {
    if t.source != h.source || t.target != h.target {
        return Err(Error::EndpointMismatch(
            "homotopy and morphism do not share endpoints".into(),
        ));
    }
    let d = differential(&h.source.cone_cr(), &h.target.cone_cr(), &h.cone_of_cones_map());
    TypewriterMorphism::from_cone_of_cones_map(&t.source, &t.target, &t.cone_of_cones_map().add(&d))
}

/// A star product together with the structure check of its result.
#[derive(Clone, Debug)]
pub struct StarProduct {
    pub typewriter: Typewriter,
    pub report: Report,
}

/// Composes `(M₀, M₁; …)` with `(M₁, M₂; …)` into a typewriter on
/// `(M₀, M₂)`.
pub fn star(m: &Typewriter, n: &Typewriter) -> Result<StarProduct> {
    if m.m1 != n.m0 {
        return Err(Error::EndpointMismatch(
            "M1 of the first typewriter is not M0 of the second".into(),
        ));
    }
    let alg = m.algebra().clone();
    let then = |a: &CoeffMap, b: &CoeffMap| a.then(b, &alg);
    let d_f = then(&m.d_f, &n.d_f);
    let d_h = then(&m.d_h, &n.d_h);
    let g = then(&n.d_cr.b10, &m.d_cr.b10);
    let fg = then(&then(&m.d_f, &n.d_cr.b00), &m.d_cr.b10);
    let gh = then(&then(&n.d_cr.b10, &m.d_cr.b11), &n.d_h);
    let fgh = then(&then(&then(&m.d_f, &n.d_cr.b00), &m.d_cr.b11), &n.d_h);
    let typewriter = Typewriter::new(
        m.m0.clone(),
        n.m1.clone(),
        d_f,
        d_h,
        BlockMap::from_labels(g, fg, gh, fgh),
    )?;
    let report = check_typewriter(&typewriter);
    Ok(StarProduct { typewriter, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial_single(name: &str) -> TypeDStructure {
        TypeDStructure::from_names(PathAlgebra::trivial(), &[(name, "e")], &[]).unwrap()
    }

    fn identity_typewriter() -> Typewriter {
        let id = CoeffMap::from_triples([(0, 0, 0)]);
        Typewriter::new(
            trivial_single("a"),
            trivial_single("b"),
            id.clone(),
            id.clone(),
            BlockMap::from_labels(CoeffMap::new(), id.clone(), id, CoeffMap::new()),
        )
        .unwrap()
    }

    #[test]
    fn identity_typewriter_is_valid_and_extendable() {
        let m = identity_typewriter();
        assert!(check_typewriter(&m).is_valid());
        assert!(is_partially_extendable(&m).unwrap());
    }

    #[test]
    fn non_chain_carriage_return_is_named() {
        let m = identity_typewriter();
        let bad = Typewriter::new(
            m.m0.clone(),
            m.m1.clone(),
            m.d_f.clone(),
            m.d_h.clone(),
            BlockMap::from_labels(CoeffMap::new(), CoeffMap::from_triples([(0, 0, 0)]), CoeffMap::new(), CoeffMap::new()),
        )
        .unwrap();
        let r = check_typewriter(&bad);
        assert!(r.violations.iter().any(|v| v.starts_with("D_CR")), "{r:?}");
    }

    #[test]
    fn zero_typewriter_is_valid() {
        let m = Typewriter::zero(trivial_single("a"), trivial_single("b")).unwrap();
        assert!(check_typewriter(&m).is_valid());
        assert!(!is_partially_extendable(&m).unwrap());
    }

    #[test]
    fn identity_morphism_laws() {
        let m = identity_typewriter();
        let id = TypewriterMorphism::identity(&m);
        assert!(check_typewriter_morphism(&id).is_valid());
        assert!(check_typewriter_morphism(&TypewriterMorphism::zero(&m, &m).unwrap()).is_valid());
        assert_eq!(compose_typewriter_morphisms(&id, &id).unwrap(), id);
        let mut bad = id.clone();
        bad.t_f = CoeffMap::from_triples([(0, 0, 0)]);
        assert!(!check_typewriter_morphism(&bad).is_valid());
    }

    #[test]
    fn cone_of_cones_round_trip() {
        let m = identity_typewriter();
        let id = TypewriterMorphism::identity(&m);
        let back = TypewriterMorphism::from_cone_of_cones_map(&m, &m, &id.cone_of_cones_map()).unwrap();
        assert_eq!(back, id);
        let z = TypewriterMorphism::zero(&m, &m).unwrap();
        assert!(check_typewriter_homotopy(&z, &id, &id).unwrap());
        assert!(!check_typewriter_homotopy(&z, &id, &z).unwrap());
    }

    #[test]
    fn star_of_identities() {
        let m = identity_typewriter();
        let n = Typewriter::new(
            trivial_single("b"),
            trivial_single("c"),
            m.d_f.clone(),
            m.d_h.clone(),
            m.d_cr.clone(),
        )
        .unwrap();
        let s = star(&m, &n).unwrap();
        assert!(s.report.is_valid(), "{:?}", s.report);
        assert_eq!(s.typewriter.m0().len() + s.typewriter.m1().len(), 2);
        assert!(star(&m, &m).is_err());
    }
}
