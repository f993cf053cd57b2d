//! Seeded generators of valid random instances, used by property tests, the
//! acceptance harness and benchmarks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ddcoeff::DDBimodule;
use crate::kernel::{LinearSystem, PathAlgebra};
use crate::models::FlipModule;
use crate::typed::{check_structure, closed_morphisms, differential, map_slots, CoeffMap, Generator, TypeDMorphism, TypeDStructure};
use crate::typewriter::{BlockMap, Typewriter, TypewriterHomotopy, TypewriterMorphism};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A valid type D structure with `len` generators named `{prefix}{i}`,
/// grown by toggling random compatible arrows and keeping those that
/// preserve `δ² = 0`.
pub fn random_structure<R: Rng>(rng: &mut R, alg: &Arc<PathAlgebra>, prefix: &str, len: usize) -> TypeDStructure {
    let gens: Vec<Generator> = (0..len)
        .map(|i| Generator::new(format!("{prefix}{i}"), rng.gen_range(0..alg.vertex_count())))
        .collect();
    let slots: Vec<_> = map_slots(alg, &gens, &gens)
        .into_iter()
        .filter(|&(u, v, b)| u != v || !alg.is_idempotent(b))
        .collect();
    let mut n = TypeDStructure::new(alg.clone(), gens, CoeffMap::new()).expect("fresh generators");
    if slots.is_empty() {
        return n;
    }
    for _ in 0..2 * len {
        let &(u, v, b) = slots.choose(rng).expect("nonempty");
        let mut delta = n.delta().clone();
        delta.toggle(u, v, b);
        let candidate = n.with_delta(delta).expect("compatible slot");
        if check_structure(&candidate).is_valid() {
            n = candidate;
        }
    }
    n
}

/// A random sum of basis elements of the closed morphism space.
pub fn random_closed_map<R: Rng>(rng: &mut R, source: &TypeDStructure, target: &TypeDStructure) -> CoeffMap {
    let mut map = CoeffMap::new();
    for phi in closed_morphisms(source, target).expect("same algebra") {
        if rng.gen_bool(0.5) {
            map.add_assign(phi.map());
        }
    }
    map
}

pub fn random_closed_morphism<R: Rng>(rng: &mut R, source: &TypeDStructure, target: &TypeDStructure) -> TypeDMorphism {
    let map = random_closed_map(rng, source, target);
    TypeDMorphism::new(source.clone(), target.clone(), map).expect("closed maps are compatible")
}

/// A random compatible map, not necessarily closed.
pub fn random_map<R: Rng>(rng: &mut R, source: &TypeDStructure, target: &TypeDStructure, density: f64) -> CoeffMap {
    let slots = map_slots(source.algebra(), source.generators(), target.generators());
    CoeffMap::from_triples(slots.into_iter().filter(|_| rng.gen_bool(density)))
}

/// A valid typewriter with `1..=max_len` generators on each side, named
/// `a*` and `b*`.
pub fn random_typewriter<R: Rng>(rng: &mut R, alg: &Arc<PathAlgebra>, max_len: usize) -> Typewriter {
    let len = rng.gen_range(1..=max_len);
    let m0 = random_structure(rng, alg, "a", len);
    let len = rng.gen_range(1..=max_len);
    let m1 = random_structure(rng, alg, "b", len);
    let d_f = random_closed_map(rng, &m0, &m1);
    let d_h = random_closed_map(rng, &m0, &m1);
    let shell = Typewriter::new(m0.clone(), m1.clone(), d_f.clone(), d_h.clone(), BlockMap::default())
        .expect("compatible maps");
    let cr = random_closed_map(rng, &shell.cone_f(), &shell.cone_h());
    let n0 = m0.len();
    let blocks = BlockMap::split(&cr, n0, shell.cone_f().len(), n0, shell.cone_h().len());
    Typewriter::new(m0, m1, d_f, d_h, blocks).expect("compatible maps")
}

/// A random typewriter `M′` with `M′₀ = M₁`, so that `star(M, M′)` is
/// defined.
pub fn random_composable<R: Rng>(rng: &mut R, m: &Typewriter, max_len: usize) -> Typewriter {
    let alg = m.algebra();
    let m0 = m.m1().clone();
    let len = rng.gen_range(1..=max_len);
    let m1 = random_structure(rng, alg, "c", len);
    let d_f = random_closed_map(rng, &m0, &m1);
    let d_h = random_closed_map(rng, &m0, &m1);
    let shell = Typewriter::new(m0.clone(), m1.clone(), d_f.clone(), d_h.clone(), BlockMap::default())
        .expect("compatible maps");
    let cr = random_closed_map(rng, &shell.cone_f(), &shell.cone_h());
    let n0 = m0.len();
    let blocks = BlockMap::split(&cr, n0, shell.cone_f().len(), n0, shell.cone_h().len());
    Typewriter::new(m0, m1, d_f, d_h, blocks).expect("compatible maps")
}

/// Single-term typewriter morphisms spanning every compatible component.
fn morphism_terms(source: &Typewriter, target: &Typewriter) -> Vec<TypewriterMorphism> {
    let alg = source.algebra();
    let (s0, s1) = (source.m0().generators(), source.m1().generators());
    let (t0, t1) = (target.m0().generators(), target.m1().generators());
    let zero = TypewriterMorphism::zero(source, target).expect("same algebra");
    let mut out = Vec::new();
    let mut push = |slots: Vec<(usize, usize, usize)>, set: &dyn Fn(&mut TypewriterMorphism, CoeffMap)| {
        for s in slots {
            let mut t = zero.clone();
            set(&mut t, CoeffMap::from_triples([s]));
            out.push(t);
        }
    };
    push(map_slots(alg, s0, t0), &|t, m| t.t0 = m);
    push(map_slots(alg, s1, t1), &|t, m| t.t1 = m);
    push(map_slots(alg, s0, t1), &|t, m| t.t_f = m);
    push(map_slots(alg, s0, t1), &|t, m| t.t_h = m);
    push(map_slots(alg, s0, t0), &|t, m| t.t_cr.b00 = m);
    push(map_slots(alg, s0, t1), &|t, m| t.t_cr.b01 = m);
    push(map_slots(alg, s1, t0), &|t, m| t.t_cr.b10 = m);
    push(map_slots(alg, s1, t1), &|t, m| t.t_cr.b11 = m);
    out
}

fn sum_terms(zero: &TypewriterMorphism, terms: &[TypewriterMorphism], pick: impl Fn(usize) -> bool) -> TypewriterMorphism {
    let mut t = zero.clone();
    for term in terms.iter().enumerate().filter(|&(i, _)| pick(i)).map(|(_, t)| t) {
        t.t0.add_assign(&term.t0);
        t.t1.add_assign(&term.t1);
        t.t_f.add_assign(&term.t_f);
        t.t_h.add_assign(&term.t_h);
        t.t_cr = t.t_cr.add(&term.t_cr);
    }
    t
}

/// A basis of the space of valid typewriter morphisms, found as the kernel
/// of the differential on cone-of-cones maps.
pub fn typewriter_morphism_space(source: &Typewriter, target: &Typewriter) -> Vec<TypewriterMorphism> {
    let terms = morphism_terms(source, target);
    let (cs, ct) = (source.cone_cr(), target.cone_cr());
    let mut sys: LinearSystem<(usize, usize, usize)> = LinearSystem::new();
    for term in &terms {
        let col = sys.add_variable();
        for (u, v, b) in differential(&cs, &ct, &term.cone_of_cones_map()).triples() {
            sys.toggle((u, v, b), col);
        }
    }
    let zero = TypewriterMorphism::zero(source, target).expect("same algebra");
    sys.nullspace()
        .into_iter()
        .map(|x| sum_terms(&zero, &terms, |i| x[i]))
        .collect()
}

pub fn random_typewriter_morphism<R: Rng>(rng: &mut R, source: &Typewriter, target: &Typewriter) -> TypewriterMorphism {
    let basis = typewriter_morphism_space(source, target);
    let zero = TypewriterMorphism::zero(source, target).expect("same algebra");
    let picks: Vec<bool> = basis.iter().map(|_| rng.gen_bool(0.5)).collect();
    sum_terms(&zero, &basis, |i| picks[i])
}

/// A random homotopy between typewriters; every component shape is
/// allowed, so any choice is a homotopy from `T` to `T + ∂H`.
pub fn random_typewriter_homotopy<R: Rng>(rng: &mut R, source: &Typewriter, target: &Typewriter) -> TypewriterHomotopy {
    let terms = morphism_terms(source, target);
    let zero = TypewriterMorphism::zero(source, target).expect("same algebra");
    let picks: Vec<bool> = terms.iter().map(|_| rng.gen_bool(0.3)).collect();
    sum_terms(&zero, &terms, |i| picks[i])
}

/// A typewriter over the trivial algebra whose carriage return is a homotopy
/// equivalence: `D_h = D_f + ∂K`, and `D_CR` is the cone isomorphism
/// `(x, y) ↦ (x, y + K(x))` perturbed by a boundary.
pub fn random_partially_extendable<R: Rng>(rng: &mut R, max_len: usize) -> Typewriter {
    let alg = PathAlgebra::trivial();
    let len = rng.gen_range(1..=max_len);
    let m0 = random_structure(rng, &alg, "a", len);
    let len = rng.gen_range(1..=max_len);
    let m1 = random_structure(rng, &alg, "b", len);
    let d_f = random_closed_map(rng, &m0, &m1);
    let k = random_map(rng, &m0, &m1, 0.4);
    let d_h = d_f.add(&differential(&m0, &m1, &k));
    let shell = Typewriter::new(m0.clone(), m1.clone(), d_f.clone(), d_h.clone(), BlockMap::default())
        .expect("compatible maps");
    let (cf, ch) = (shell.cone_f(), shell.cone_h());
    let l = random_map(rng, &cf, &ch, 0.3);
    let n0 = m0.len();
    let iso = BlockMap {
        b01: k,
        ..BlockMap::identity(&m0, &m1)
    };
    let cr = iso.assemble(n0, n0).add(&differential(&cf, &ch, &l));
    let blocks = BlockMap::split(&cr, n0, cf.len(), n0, ch.len());
    Typewriter::new(m0, m1, d_f, d_h, blocks).expect("compatible maps")
}

/// A valid DD bimodule over `(left, torus)` grown directly over the tensor
/// algebra.
pub fn random_dd<R: Rng>(rng: &mut R, left: &Arc<PathAlgebra>, len: usize) -> DDBimodule {
    let torus = PathAlgebra::torus();
    let tensor = Arc::new(left.tensor(&torus));
    let flat = random_structure(rng, &tensor, "x", len);
    DDBimodule::from_flat(left.clone(), torus, flat).expect("structure over the tensor algebra")
}

/// A valid flip module: random complex, random closed `U`, a random closed
/// `V` with `UV = VU = 0`, and a random closed flip map.
pub fn random_flip_module<R: Rng>(rng: &mut R, max_len: usize) -> FlipModule {
    let alg = PathAlgebra::trivial();
    let len = rng.gen_range(1..=max_len);
    let c = random_structure(rng, &alg, "x", len);
    let u = random_closed_map(rng, &c, &c);
    let slots = map_slots(&alg, c.generators(), c.generators());
    let mut sys: LinearSystem<(u8, usize, usize)> = LinearSystem::new();
    for &s in &slots {
        let col = sys.add_variable();
        let e = CoeffMap::from_triples([s]);
        for (tag, m) in [(0u8, differential(&c, &c, &e)), (1, u.then(&e, &alg)), (2, e.then(&u, &alg))] {
            for (a, b, _) in m.triples() {
                sys.toggle((tag, a, b), col);
            }
        }
    }
    let mut v = CoeffMap::new();
    for x in sys.nullspace() {
        if rng.gen_bool(0.5) {
            v.add_assign(&CoeffMap::from_triples(slots.iter().zip(&x).filter(|(_, &on)| on).map(|(&s, _)| s)));
        }
    }
    let shell = FlipModule::new(c.clone(), u.clone(), v.clone(), BlockMap::default()).expect("compatible maps");
    let flip = random_closed_map(rng, &shell.cone_u(), &shell.cone_v());
    let n = c.len();
    FlipModule::new(c, u, v, BlockMap::split(&flip, n, 2 * n, n, 2 * n)).expect("compatible maps")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::strand_algebra_torus;
    use crate::models::check_flip;
    use crate::typewriter::{check_typewriter, check_typewriter_morphism, is_partially_extendable};

    #[test]
    fn generated_instances_are_valid() {
        let mut rng = seeded(7);
        for alg in [PathAlgebra::trivial(), strand_algebra_torus()] {
            for _ in 0..10 {
                let m = random_typewriter(&mut rng, &alg, 3);
                assert!(check_typewriter(&m).is_valid());
                let n = random_typewriter(&mut rng, &alg, 2);
                let t = random_typewriter_morphism(&mut rng, &m, &n);
                assert!(check_typewriter_morphism(&t).is_valid());
            }
        }
        for _ in 0..10 {
            assert!(check_flip(&random_flip_module(&mut rng, 3)).is_valid());
            assert!(is_partially_extendable(&random_partially_extendable(&mut rng, 3)).unwrap());
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_typewriter(&mut seeded(3), &PathAlgebra::trivial(), 3);
        let b = random_typewriter(&mut seeded(3), &PathAlgebra::trivial(), 3);
        assert_eq!(a, b);
    }
}
