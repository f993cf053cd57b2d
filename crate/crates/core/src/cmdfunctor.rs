//! The equivalence between typewriters over an algebra `𝒜` and DD bimodules
//! over `(𝒜, torus)`, on objects, morphisms and homotopies, and the transfer
//! of a homotopy inverse of the carriage return to generalized coefficient
//! maps.
//!
//! A typewriter becomes the bimodule with generators `M₀` (right idempotent
//! `i0`) followed by `M₁` (right idempotent `i1`) and structure map
//! `D∅ ⊗ 1 + D_f ⊗ f + D_h ⊗ h + Σ D_CR blocks ⊗ (g, fg, gh, fgh)`.

use crate::ddcoeff::{
    check_generalized, from_coefficients, to_coefficients, CoefficientSystem, CyclicInterval, DDBimodule,
    GeneralizedCoefficientSystem,
};
use crate::error::{Error, Result};
use crate::kernel::PathAlgebra;
use crate::typed::{differential, CoeffMap, TypeDMorphism};
use crate::typewriter::{BlockMap, Typewriter, TypewriterHomotopy, TypewriterMorphism};

/// The coefficient maps of the bimodule associated to a typewriter.
pub fn coefficients_of(m: &Typewriter) -> Result<CoefficientSystem> {
    let cr = m.d_cr();
    CoefficientSystem::new(m.m0().clone(), m.m1().clone())?
        .with("f", m.d_f().clone())?
        .with("h", m.d_h().clone())?
        .with("g", cr.b10.clone())?
        .with("fg", cr.b00.clone())?
        .with("gh", cr.b11.clone())?
        .with("fgh", cr.b01.clone())
}

pub fn cmd_object(m: &Typewriter) -> Result<DDBimodule> {
    from_coefficients(&coefficients_of(m)?)
}

/// The inverse of [`cmd_object`]: splits generators by right idempotent and
/// arrows by right label.
pub fn uncmd(m: &DDBimodule) -> Result<Typewriter> {
    let c = to_coefficients(m)?;
    let get = |l: &str| c.get(l).cloned();
    Typewriter::new(
        c.m0().clone(),
        c.m1().clone(),
        get("f")?,
        get("h")?,
        BlockMap::from_labels(get("g")?, get("fg")?, get("gh")?, get("fgh")?),
    )
}

/// The labelled pieces of a map between the bimodules of two typewriters,
/// with the side each piece goes from and to.
fn labelled_pieces(t: &TypewriterMorphism) -> [(&str, usize, usize, &CoeffMap); 8] {
    [
        ("0", 0, 0, &t.t0),
        ("1", 1, 1, &t.t1),
        ("f", 0, 1, &t.t_f),
        ("h", 0, 1, &t.t_h),
        ("g", 1, 0, &t.t_cr.b10),
        ("fg", 0, 0, &t.t_cr.b00),
        ("gh", 1, 1, &t.t_cr.b11),
        ("fgh", 0, 1, &t.t_cr.b01),
    ]
}

fn right_basis(torus: &PathAlgebra, label: &str) -> usize {
    match label {
        "0" => torus.idempotent(0),
        "1" => torus.idempotent(1),
        l => torus.lookup(l).expect("torus label"),
    }
}

/// `T₀ ⊗ 1 + T₁ ⊗ 1 + Σ T_t ⊗ t` as a morphism of DD bimodules.
pub fn cmd_morphism(t: &TypewriterMorphism) -> Result<TypeDMorphism> {
    let src = cmd_object(t.source())?;
    let tgt = cmd_object(t.target())?;
    let torus = PathAlgebra::torus();
    let dr = torus.dim();
    let n0 = t.source().m0().len();
    let p0 = t.target().m0().len();
    let mut map = CoeffMap::new();
    for (label, from, to, piece) in labelled_pieces(t) {
        let r = right_basis(&torus, label);
        let (ro, co) = (if from == 0 { 0 } else { n0 }, if to == 0 { 0 } else { p0 });
        for (u, v, a) in piece.triples() {
            map.toggle(u + ro, v + co, a * dr + r);
        }
    }
    TypeDMorphism::new(src.as_type_d().clone(), tgt.as_type_d().clone(), map)
}

/// Homotopies have the shape of morphisms and transfer by the same formula.
pub fn cmd_homotopy(h: &TypewriterHomotopy) -> Result<TypeDMorphism> {
    cmd_morphism(h)
}

/// Reads a DD morphism between the bimodules of two typewriters back as a
/// typewriter morphism.
pub fn uncmd_morphism(source: &Typewriter, target: &Typewriter, phi: &TypeDMorphism) -> Result<TypewriterMorphism> {
    let src = cmd_object(source)?;
    let tgt = cmd_object(target)?;
    if phi.source() != src.as_type_d() || phi.target() != tgt.as_type_d() {
        return Err(Error::EndpointMismatch(
            "morphism is not between the bimodules of the given typewriters".into(),
        ));
    }
    let torus = PathAlgebra::torus();
    let dr = torus.dim();
    let (n0, p0) = (source.m0().len(), target.m0().len());
    let mut pieces: std::collections::BTreeMap<&str, CoeffMap> = Default::default();
    for (u, v, b) in phi.map().triples() {
        let (a, r) = (b / dr, b % dr);
        let (from, iu) = if u < n0 { (0, u) } else { (1, u - n0) };
        let (to, iv) = if v < p0 { (0, v) } else { (1, v - p0) };
        let label = if torus.is_idempotent(r) {
            if r == torus.idempotent(0) {
                "0"
            } else {
                "1"
            }
        } else {
            match torus.basis_name(r) {
                "f" => "f",
                "g" => "g",
                "h" => "h",
                "fg" => "fg",
                "gh" => "gh",
                _ => "fgh",
            }
        };
        let expected = match label {
            "0" | "fg" => (0, 0),
            "1" | "gh" => (1, 1),
            "g" => (1, 0),
            _ => (0, 1),
        };
        if expected != (from, to) {
            return Err(Error::IdempotentMismatch(format!("component labelled {label} has the wrong sides")));
        }
        pieces.entry(label).or_default().toggle(iu, iv, a);
    }
    let mut take = |l: &str| pieces.remove(l).unwrap_or_default();
    TypewriterMorphism::new(
        source.clone(),
        target.clone(),
        (take("0"), take("1")),
        (take("f"), take("h")),
        BlockMap::from_labels(take("g"), take("fg"), take("gh"), take("fgh")),
    )
}

fn interval(name: &str) -> CyclicInterval {
    CyclicInterval::parse(name).expect("valid interval name")
}

/// Builds generalized coefficient maps from a homotopy inverse `D_CD` of the
/// carriage return and homotopies `H_fwd` on the cone of `D_f` with
/// `∂H_fwd = D_CR·D_CD + 1` and `H_bwd` on the cone of `D_h` with
/// `∂H_bwd = D_CD·D_CR + 1`.
///
/// The blocks of `D_CD` give the maps for `0, 30, 01, 301`; those of `H_fwd`
/// give `230, 1230, 2301` and those of `H_bwd` give `012, 3012, 0123`. The
/// remaining block of each homotopy has length 5 and is stored unchecked.
pub fn departure_to_generalized(
    m: &Typewriter,
    d_cd: &BlockMap,
    h_fwd: &BlockMap,
    h_bwd: &BlockMap,
) -> Result<GeneralizedCoefficientSystem> {
    let alg = m.algebra().clone();
    let n0 = m.m0().len();
    let (cone_f, cone_h) = (m.cone_f(), m.cone_h());
    let cd = d_cd.assemble(n0, n0);
    TypeDMorphism::new(cone_h.clone(), cone_f.clone(), cd.clone())?;
    if !differential(&cone_h, &cone_f, &cd).is_zero() {
        return Err(Error::NotClosed("carriage departure is not closed".into()));
    }
    let cr = m.d_cr().assemble(n0, n0);
    for (name, cone, h, product) in [
        ("H_fwd", &cone_f, h_fwd, cr.then(&cd, &alg)),
        ("H_bwd", &cone_h, h_bwd, cd.then(&cr, &alg)),
    ] {
        let hm = h.assemble(n0, n0);
        TypeDMorphism::new(cone.clone(), cone.clone(), hm.clone())?;
        let expected = product.add(&cone.identity_map());
        if differential(cone, cone, &hm) != expected {
            return Err(Error::HomotopyIdentityFails(format!("{name} does not satisfy its homotopy identity")));
        }
    }
    let mut g = GeneralizedCoefficientSystem::from_coefficients(&coefficients_of(m)?);
    let assignments = [
        ("0", &d_cd.b10),
        ("30", &d_cd.b00),
        ("01", &d_cd.b11),
        ("301", &d_cd.b01),
        ("230", &h_fwd.b10),
        ("1230", &h_fwd.b00),
        ("2301", &h_fwd.b11),
        ("12301", &h_fwd.b01),
        ("012", &h_bwd.b10),
        ("3012", &h_bwd.b00),
        ("0123", &h_bwd.b11),
        ("30123", &h_bwd.b01),
    ];
    for (name, map) in assignments {
        g.set(interval(name), map.clone())?;
    }
    if let Some(v) = check_generalized(&g).violations.into_iter().next() {
        return Err(Error::GeneralizedRelationsFail(v));
    }
    Ok(g)
}
