use crate::error::Result;
use crate::kernel::Element;

use super::morphism::cone;
use super::{closed_morphisms, CoeffMap, Generator, TypeDMorphism, TypeDStructure};

/// Output of [`reduce`]: a reduced model with mutually inverse homotopy
/// equivalences.
///
/// `backward` after `forward` is exactly the identity of `reduced`, and
/// `∂homotopy = forward·backward + id` on the original structure.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub reduced: TypeDStructure,
    pub forward: TypeDMorphism,
    pub backward: TypeDMorphism,
    pub homotopy: TypeDMorphism,
}

/// The first arrow `x → y` with `x ≠ y` whose coefficient has an idempotent
/// component, in index order.
fn cancellable(n: &TypeDStructure) -> Option<(usize, usize, Element)> {
    let alg = n.algebra();
    n.delta()
        .iter()
        .find(|&(x, y, c)| x != y && c.terms().any(|b| alg.is_idempotent(b)))
        .map(|(x, y, c)| (x, y, c.clone()))
}

struct Step {
    next: TypeDStructure,
    forward: CoeffMap,
    backward: CoeffMap,
    homotopy: CoeffMap,
}

fn cancel(n: &TypeDStructure, x: usize, y: usize, c: &Element) -> Step {
    let alg = n.algebra();
    let inv = alg
        .unit_inverse(c)
        .expect("a compatible coefficient with an idempotent component is a unit");
    let mut p = n.delta().clone();
    p.remove(x, y);
    let keep: Vec<usize> = (0..n.len()).filter(|&i| i != x && i != y).collect();
    let mut pos = vec![usize::MAX; n.len()];
    for (k, &i) in keep.iter().enumerate() {
        pos[i] = k;
    }
    let mul = |a: &Element, b: &Element| alg.multiply(a, b).expect("coefficients are in range");

    // c⁻¹ · P[x][v] for every v, the image of y under the new projection.
    let y_image: Vec<(usize, Element)> = p
        .row(x)
        .map(|(v, e)| (v, mul(&inv, e)))
        .filter(|(_, e)| !e.is_zero())
        .collect();

    let mut delta = CoeffMap::new();
    for (u, v, e) in p.iter() {
        if pos[u] != usize::MAX && pos[v] != usize::MAX {
            delta.add_element(pos[u], pos[v], e);
        }
    }
    let mut backward = CoeffMap::new();
    for &u in &keep {
        backward.toggle(pos[u], u, n.idempotent_basis(u));
        if let Some(a) = p.get(u, y) {
            let a_inv = mul(a, &inv);
            backward.add_element(pos[u], x, &a_inv);
            for (v, e) in &y_image {
                if pos[*v] != usize::MAX {
                    delta.add_element(pos[u], pos[*v], &mul(a, e));
                }
            }
        }
    }
    let mut forward = CoeffMap::new();
    for &u in &keep {
        forward.toggle(u, pos[u], n.idempotent_basis(u));
    }
    for (v, e) in &y_image {
        if pos[*v] != usize::MAX {
            forward.add_element(y, pos[*v], e);
        }
    }
    let mut homotopy = CoeffMap::new();
    homotopy.add_element(y, x, &inv);

    let gens: Vec<Generator> = keep.iter().map(|&i| n.generator(i).clone()).collect();
    Step {
        next: TypeDStructure::new(alg.clone(), gens, delta).expect("reduced structure is well-formed"),
        forward,
        backward,
        homotopy,
    }
}

/// Cancels idempotent arrows until none remain.
pub fn reduce(n: &TypeDStructure) -> Reduction {
    let alg = n.algebra().clone();
    let mut current = n.clone();
    let mut forward = n.identity_map();
    let mut backward = n.identity_map();
    let mut homotopy = CoeffMap::new();
    while let Some((x, y, c)) = cancellable(&current) {
        let step = cancel(&current, x, y, &c);
        homotopy.add_assign(&forward.then(&step.homotopy, &alg).then(&backward, &alg));
        forward = forward.then(&step.forward, &alg);
        backward = step.backward.then(&backward, &alg);
        current = step.next;
    }
    Reduction {
        forward: TypeDMorphism::new(n.clone(), current.clone(), forward).expect("forward map is well-formed"),
        backward: TypeDMorphism::new(current.clone(), n.clone(), backward).expect("backward map is well-formed"),
        homotopy: TypeDMorphism::new(n.clone(), n.clone(), homotopy).expect("homotopy is well-formed"),
        reduced: current,
    }
}

pub fn is_contractible(n: &TypeDStructure) -> bool {
    reduce(n).reduced.is_empty()
}

/// A closed morphism is a homotopy equivalence exactly when its cone is
/// contractible.
pub fn is_homotopy_equivalence(phi: &TypeDMorphism) -> Result<bool> {
    Ok(is_contractible(&cone(phi)?))
}

/// Verdict of [`equivalent`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// The reduced models agree after a relabelling of generators;
    /// `mapping[i]` is the generator of the second reduced model matched with
    /// generator `i` of the first.
    Relabelling { mapping: Vec<usize> },
    /// A closed isomorphism between the reduced models was found.
    Isomorphism(TypeDMorphism),
    NotEquivalent,
    /// The search space was too large to decide; treat as unknown.
    Undecided { closed_dim: usize },
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Self::Relabelling { .. } | Self::Isomorphism(_))
    }
}

/// Largest closed-morphism space searched exhaustively by [`equivalent`].
pub const EQUIVALENCE_SEARCH_DIM: usize = 16;

/// Decides homotopy equivalence by comparing reduced models, on the
/// understanding that homotopy equivalent reduced structures are isomorphic.
pub fn equivalent(a: &TypeDStructure, b: &TypeDStructure) -> Result<Equivalence> {
    if a.algebra() != b.algebra() {
        return Err(crate::Error::WrongAlgebra("structures are over different algebras".into()));
    }
    let ra = reduce(a).reduced;
    let rb = reduce(b).reduced;
    let counts = |n: &TypeDStructure| {
        let mut c = vec![0usize; n.algebra().vertex_count()];
        for g in n.generators() {
            c[g.idempotent] += 1;
        }
        c
    };
    if counts(&ra) != counts(&rb) {
        return Ok(Equivalence::NotEquivalent);
    }
    if let Some(mapping) = find_relabelling(&ra, &rb) {
        return Ok(Equivalence::Relabelling { mapping });
    }
    let basis = closed_morphisms(&ra, &rb)?;
    if basis.len() > EQUIVALENCE_SEARCH_DIM {
        return Ok(Equivalence::Undecided {
            closed_dim: basis.len(),
        });
    }
    for mask in 1u64..(1u64 << basis.len()) {
        let mut map = CoeffMap::new();
        for (i, phi) in basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                map.add_assign(phi.map());
            }
        }
        if idempotent_part_invertible(&ra, &rb, &map) {
            return Ok(Equivalence::Isomorphism(TypeDMorphism::new(ra, rb, map)?));
        }
    }
    Ok(Equivalence::NotEquivalent)
}

/// Whether the idempotent components of `map` form an invertible matrix over
/// the two-element field, vertex by vertex.
fn idempotent_part_invertible(a: &TypeDStructure, b: &TypeDStructure, map: &CoeffMap) -> bool {
    let alg = a.algebra();
    (0..alg.vertex_count()).all(|v| {
        let rows: Vec<usize> = (0..a.len()).filter(|&i| a.generator(i).idempotent == v).collect();
        let cols: Vec<usize> = (0..b.len()).filter(|&j| b.generator(j).idempotent == v).collect();
        let e = alg.idempotent(v);
        let entries = rows.iter().enumerate().flat_map(|(r, &i)| {
            cols.iter()
                .enumerate()
                .filter(move |&(_, &j)| map.get(i, j).is_some_and(|c| c.contains(e)))
                .map(move |(c, _)| (r, c))
        });
        let m = crate::kernel::BitMatrix::from_entries(rows.len(), cols.len(), entries)
            .expect("entries in range");
        m.rank() == rows.len()
    })
}

/// Backtracking search for an idempotent-preserving bijection of generators
/// carrying one structure map onto the other.
fn find_relabelling(a: &TypeDStructure, b: &TypeDStructure) -> Option<Vec<usize>> {
    let n = a.len();
    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn consistent(a: &TypeDStructure, b: &TypeDStructure, mapping: &[usize], k: usize) -> bool {
        (0..=k).all(|i| {
            let pairs = [(i, k), (k, i)];
            pairs.iter().all(|&(u, v)| a.delta().coeff(u, v) == b.delta().coeff(mapping[u], mapping[v]))
        })
    }
    fn go(a: &TypeDStructure, b: &TypeDStructure, mapping: &mut Vec<usize>, used: &mut Vec<bool>, k: usize) -> bool {
        if k == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if used[j] || a.generator(k).idempotent != b.generator(j).idempotent {
                continue;
            }
            mapping[k] = j;
            used[j] = true;
            if consistent(a, b, mapping, k) && go(a, b, mapping, used, k + 1) {
                return true;
            }
            used[j] = false;
        }
        mapping[k] = usize::MAX;
        false
    }
    go(a, b, &mut mapping, &mut used, 0).then_some(mapping)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{strand_algebra_torus, torus_algebra};
    use crate::typed::{check_structure, compose_morphisms, direct_sum, homotopy_check, identity_morphism};

    fn chain() -> TypeDStructure {
        // x →(i0)→ y, x →(f)→ z, w →(i0+fg)→ y, w →(f)→ z: a cancellable pair
        // whose cancellation leaves a zigzag with a nontrivial correction.
        TypeDStructure::from_names(
            torus_algebra(),
            &[("x", "i0"), ("y", "i0"), ("z", "i1"), ("w", "i0")],
            &[("x", "y", "i0"), ("w", "y", "i0+fg"), ("x", "z", "f"), ("w", "z", "f+fgh")],
        )
        .unwrap()
    }

    #[test]
    fn reduction_witnesses_are_exact() {
        let n = chain();
        assert!(check_structure(&n).is_valid(), "{:?}", check_structure(&n));
        let r = reduce(&n);
        assert!(r.reduced.is_reduced());
        assert!(check_structure(&r.reduced).is_valid());
        assert!(r.forward.is_closed());
        assert!(r.backward.is_closed());
        assert_eq!(
            compose_morphisms(&r.backward, &r.forward).unwrap(),
            identity_morphism(&r.reduced)
        );
        let fb = compose_morphisms(&r.forward, &r.backward).unwrap();
        assert!(homotopy_check(&r.homotopy, &fb, &identity_morphism(&n)).unwrap());
    }

    #[test]
    fn cone_of_identity_is_contractible() {
        let n = chain();
        assert!(is_contractible(&cone(&identity_morphism(&n)).unwrap()));
        assert!(is_homotopy_equivalence(&identity_morphism(&n)).unwrap());
        assert!(is_contractible(&TypeDStructure::zero(torus_algebra())));
    }

    #[test]
    fn reduced_input_is_unchanged() {
        let s = strand_algebra_torus();
        let n = TypeDStructure::from_names(s, &[("p", "j0"), ("q", "j1")], &[("p", "q", "rho1")]).unwrap();
        assert_eq!(reduce(&n).reduced, n);
    }

    #[test]
    fn equivalence_decisions() {
        let s = strand_algebra_torus();
        let p = TypeDStructure::from_names(s.clone(), &[("p", "j0"), ("q", "j1")], &[("p", "q", "rho3")]).unwrap();
        let r = TypeDStructure::from_names(s, &[("r", "j0"), ("t", "j1")], &[("r", "t", "rho1")]).unwrap();
        assert!(!equivalent(&p, &r).unwrap().is_equivalent());
        assert!(equivalent(&p, &p).unwrap().is_equivalent());
        let padded = direct_sum(&p, &cone(&identity_morphism(&r)).unwrap()).unwrap();
        assert!(equivalent(&p, &padded).unwrap().is_equivalent());
        let z = TypeDMorphism::zero(&p, &p).unwrap();
        assert!(!is_homotopy_equivalence(&z).unwrap());
    }

    #[test]
    fn isomorphism_beyond_relabelling() {
        // x →(rho1)→ y and x →(rho1)→ y, x →(rho123)→ y are isomorphic via a
        // change of basis fixing generators but not equal.
        let s = strand_algebra_torus();
        let a = TypeDStructure::from_names(
            s.clone(),
            &[("x", "j0"), ("y", "j1"), ("u", "j0")],
            &[("x", "y", "rho1"), ("u", "y", "rho1")],
        )
        .unwrap();
        let b = TypeDStructure::from_names(s, &[("x", "j0"), ("y", "j1"), ("u", "j0")], &[("x", "y", "rho1")]).unwrap();
        let v = equivalent(&a, &b).unwrap();
        assert!(matches!(v, Equivalence::Isomorphism(_)), "{v:?}");
    }
}
