//! Built-in instances: the thickened-torus typewriter `m`, the identity DD
//! bimodule of the torus, flip modules, and the functors from flip modules to
//! typewriters and to type D structures over the torus algebra.

use std::sync::Arc;

use crate::cmdfunctor::cmd_object;
use crate::ddcoeff::DDBimodule;
use crate::error::{Error, Result};
use crate::kernel::{strand_algebra_torus, torus_algebra, PathAlgebra};
use crate::report::Report;
use crate::typed::{
    check_structure, cone_unchecked, differential, equivalent, CoeffMap, Equivalence, TypeDMorphism, TypeDStructure,
};
use crate::typewriter::{check_typewriter, BlockMap, Typewriter};

fn single(alg: &Arc<PathAlgebra>, name: &str, vertex: &str) -> TypeDStructure {
    TypeDStructure::from_names(alg.clone(), &[(name, vertex)], &[]).expect("built-in generator")
}

/// The typewriter of the thickened torus over the strand algebra:
/// `M₀ = ⟨a⟩`, `M₁ = ⟨b⟩`, `D_f(a) = ρ₃ b`, `D_h(a) = ρ₁ b`,
/// `D_g(b) = ρ₂ a` and `D_fgh(a) = ρ₁₂₃ b`.
pub fn model_m() -> Typewriter {
    let alg = strand_algebra_torus();
    let b = |n: &str| alg.basis_index(n).expect("strand basis element");
    Typewriter::new(
        single(&alg, "a", "j0"),
        single(&alg, "b", "j1"),
        CoeffMap::from_triples([(0, 0, b("rho3"))]),
        CoeffMap::from_triples([(0, 0, b("rho1"))]),
        BlockMap::from_labels(
            CoeffMap::from_triples([(0, 0, b("rho2"))]),
            CoeffMap::new(),
            CoeffMap::new(),
            CoeffMap::from_triples([(0, 0, b("rho123"))]),
        ),
    )
    .expect("model m is well formed")
}

/// The identity DD bimodule of the torus with left strand algebra and right
/// torus algebra.
pub fn cfdd_identity() -> DDBimodule {
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
    .expect("built-in bimodule")
}

/// Whether `m` equals the identity DD bimodule up to renaming generators.
pub fn is_cfdd_identity(m: &DDBimodule) -> bool {
    let id = cfdd_identity();
    if m.left() != id.left() || m.right() != id.right() {
        return false;
    }
    matches!(
        equivalent(m.as_type_d(), id.as_type_d()),
        Ok(Equivalence::Relabelling { .. })
    ) && m.as_type_d().is_reduced()
}

pub fn verify_m_is_cfdd() -> bool {
    cmd_object(&model_m()).map(|m| is_cfdd_identity(&m)).unwrap_or(false)
}

/// Homotopy-inverse data for a flip map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipInverse {
    /// Map from the cone of `V` to the cone of `U`.
    pub inverse: CoeffMap,
    /// On the cone of `U`: `∂H = flip·inverse + 1`.
    pub source_homotopy: CoeffMap,
    /// On the cone of `V`: `∂H = inverse·flip + 1`.
    pub target_homotopy: CoeffMap,
}

/// A finite chain complex with endomorphisms `U`, `V` satisfying
/// `UV = VU = 0` and a map `flip` from the cone of `U` to the cone of `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipModule {
    complex: TypeDStructure,
    u: CoeffMap,
    v: CoeffMap,
    flip: BlockMap,
    inverse: Option<FlipInverse>,
}

impl FlipModule {
    /// Checks only shapes; the relations are reported by [`check_flip`].
    pub fn new(complex: TypeDStructure, u: CoeffMap, v: CoeffMap, flip: BlockMap) -> Result<Self> {
        if complex.algebra().dim() != 1 {
            return Err(Error::WrongAlgebra("flip modules live over the trivial algebra".into()));
        }
        let n = complex.len();
        TypeDMorphism::new(complex.clone(), complex.clone(), u.clone())?;
        TypeDMorphism::new(complex.clone(), complex.clone(), v.clone())?;
        let doubled = cone_unchecked(&complex, &complex, &CoeffMap::new());
        TypeDMorphism::new(doubled.clone(), doubled, flip.assemble(n, n))?;
        Ok(Self {
            complex,
            u,
            v,
            flip,
            inverse: None,
        })
    }

    pub fn with_inverse(mut self, inverse: FlipInverse) -> Result<Self> {
        let doubled = cone_unchecked(&self.complex, &self.complex, &CoeffMap::new());
        for m in [&inverse.inverse, &inverse.source_homotopy, &inverse.target_homotopy] {
            TypeDMorphism::new(doubled.clone(), doubled.clone(), m.clone())?;
        }
        self.inverse = Some(inverse);
        Ok(self)
    }

    pub fn complex(&self) -> &TypeDStructure {
        &self.complex
    }

    pub fn u(&self) -> &CoeffMap {
        &self.u
    }

    pub fn v(&self) -> &CoeffMap {
        &self.v
    }

    pub fn flip(&self) -> &BlockMap {
        &self.flip
    }

    pub fn inverse(&self) -> Option<&FlipInverse> {
        self.inverse.as_ref()
    }

    pub fn cone_u(&self) -> TypeDStructure {
        cone_unchecked(&self.complex, &self.complex, &self.u)
    }

    pub fn cone_v(&self) -> TypeDStructure {
        cone_unchecked(&self.complex, &self.complex, &self.v)
    }
}

/// Reports every failed relation of a flip module.
pub fn check_flip(f: &FlipModule) -> Report {
    let c = &f.complex;
    let alg = c.algebra();
    let n = c.len();
    let mut report = check_structure(c).prefixed("complex");
    for (name, m) in [("U", &f.u), ("V", &f.v)] {
        if !differential(c, c, m).is_zero() {
            report.push(format!("{name} is not a chain map"));
        }
    }
    if !f.u.then(&f.v, alg).is_zero() {
        report.push("UV is not zero");
    }
    if !f.v.then(&f.u, alg).is_zero() {
        report.push("VU is not zero");
    }
    let (cu, cv) = (f.cone_u(), f.cone_v());
    let flip = f.flip.assemble(n, n);
    if !differential(&cu, &cv, &flip).is_zero() {
        report.push("flip is not closed");
    }
    if let Some(inv) = &f.inverse {
        if !differential(&cv, &cu, &inv.inverse).is_zero() {
            report.push("flip inverse is not closed");
        }
        let checks = [
            ("cone of U", &cu, &inv.source_homotopy, flip.then(&inv.inverse, alg)),
            ("cone of V", &cv, &inv.target_homotopy, inv.inverse.then(&flip, alg)),
        ];
        for (name, cone, h, product) in checks {
            if differential(cone, cone, h) != product.add(&cone.identity_map()) {
                report.push(format!("flip homotopy on the {name} fails"));
            }
        }
    }
    report
}

/// The typewriter `(M, M′; U, V; flip)`, where `M′` is a copy of `M` with
/// every generator name primed.
pub fn div_functor(f: &FlipModule) -> Result<Typewriter> {
    if let Some(v) = check_flip(f).violations.into_iter().next() {
        return Err(Error::InvalidFlipModule(v));
    }
    let copy = f.complex.renamed(|n| format!("{n}'"))?;
    let m = Typewriter::new(f.complex.clone(), copy, f.u.clone(), f.v.clone(), f.flip.clone())?;
    debug_assert!(check_typewriter(&m).is_valid());
    Ok(m)
}

/// The type D structure over the torus algebra obtained by applying the
/// typewriter equivalence to [`div_functor`].
pub fn bsd_infty(f: &FlipModule) -> Result<TypeDStructure> {
    cmd_object(&div_functor(f)?)?.to_right_type_d()
}
