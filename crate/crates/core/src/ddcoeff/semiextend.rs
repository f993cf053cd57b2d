use std::collections::BTreeMap;

use crate::error::Result;
use crate::kernel::LinearSystem;
use crate::typed::{map_slots, CoeffMap};

use super::{
    check_generalized, to_coefficients, CoefficientSystem, CyclicInterval, DDBimodule,
    GeneralizedCoefficientSystem,
};

/// One factor of a product term in an interval relation.
#[derive(Clone, Copy)]
enum Factor {
    Differential(usize),
    Map(CyclicInterval),
}

/// A single-term slot `(source, target, basis element)`.
type Slot = (usize, usize, usize);

/// Searches for generalized coefficient maps extending those of `m`.
///
/// Returns `None` when no extension exists.
pub fn semi_extend(m: &DDBimodule) -> Result<Option<GeneralizedCoefficientSystem>> {
    Ok(semi_extend_coefficients(&to_coefficients(m)?))
}

/// Every interval relation is linear in the maps whose interval contains 0,
/// because each product term involves at most one of them. The unknown
/// coefficients are therefore found by a single linear solve.
pub fn semi_extend_coefficients(c: &CoefficientSystem) -> Option<GeneralizedCoefficientSystem> {
    let known = c.interval_maps();
    let alg = known.algebra().clone();
    let unknowns: Vec<CyclicInterval> = CyclicInterval::all().filter(|i| i.contains_zero()).collect();

    let mut sys: LinearSystem<(CyclicInterval, usize, usize, usize)> = LinearSystem::new();
    let mut columns: BTreeMap<CyclicInterval, Vec<(Slot, usize)>> = BTreeMap::new();
    for &i in &unknowns {
        let slots = map_slots(
            &alg,
            known.side(i.domain_side()).generators(),
            known.side(i.codomain_side()).generators(),
        );
        let cols = slots.into_iter().map(|s| (s, sys.add_variable())).collect();
        columns.insert(i, cols);
    }
    let is_unknown = |f: Factor| matches!(f, Factor::Map(i) if i.contains_zero());
    let value = |f: Factor| match f {
        Factor::Differential(s) => known.side(s).delta().clone(),
        Factor::Map(i) => known.get(i).clone(),
    };

    for r in CyclicInterval::all() {
        let mut terms = vec![
            (Factor::Differential(r.domain_side()), Factor::Map(r)),
            (Factor::Map(r), Factor::Differential(r.codomain_side())),
        ];
        terms.extend(r.splits().map(|(j, k)| (Factor::Map(j), Factor::Map(k))));
        for (x, y) in terms {
            match (is_unknown(x), is_unknown(y)) {
                (false, false) => {
                    for (u, w, z) in value(x).then(&value(y), &alg).triples() {
                        sys.toggle_rhs((r, u, w, z));
                    }
                }
                (true, true) => unreachable!("relation {r} has a term quadratic in the unknowns"),
                (left_unknown, _) => {
                    let (Factor::Map(i), other) = (if left_unknown { x } else { y }, if left_unknown { y } else { x })
                    else {
                        unreachable!()
                    };
                    let other = value(other);
                    for &(slot, col) in &columns[&i] {
                        let single = CoeffMap::from_triples([slot]);
                        let product = if left_unknown {
                            single.then(&other, &alg)
                        } else {
                            other.then(&single, &alg)
                        };
                        for (u, w, z) in product.triples() {
                            sys.toggle((r, u, w, z), col);
                        }
                    }
                }
            }
        }
        if r.len() == 4 {
            for (u, w, z) in known.side(r.domain_side()).identity_map().triples() {
                sys.toggle_rhs((r, u, w, z));
            }
        }
    }

    let x = sys.solve()?;
    let mut g = GeneralizedCoefficientSystem::from_coefficients(c);
    for (i, cols) in columns {
        let map = CoeffMap::from_triples(cols.into_iter().filter(|&(_, col)| x[col]).map(|(s, _)| s));
        g.set(i, map).expect("slots are idempotent-compatible");
    }
    debug_assert!(check_generalized(&g).is_valid(), "{:?}", check_generalized(&g));
    Some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::PathAlgebra;
    use crate::typed::TypeDStructure;

    fn single(name: &str) -> TypeDStructure {
        TypeDStructure::from_names(PathAlgebra::trivial(), &[(name, "e")], &[]).unwrap()
    }

    fn identity_typewriter_coefficients() -> CoefficientSystem {
        let id = CoeffMap::from_triples([(0, 0, 0)]);
        CoefficientSystem::new(single("a"), single("b"))
            .unwrap()
            .with("f", id.clone())
            .unwrap()
            .with("h", id.clone())
            .unwrap()
            .with("fg", id.clone())
            .unwrap()
            .with("gh", id)
            .unwrap()
    }

    #[test]
    fn hand_solution_is_valid() {
        let c = identity_typewriter_coefficients();
        assert!(c.check().is_valid());
        let mut g = GeneralizedCoefficientSystem::from_coefficients(&c);
        let id = CoeffMap::from_triples([(0, 0, 0)]);
        g.set(CyclicInterval::parse("01").unwrap(), id.clone()).unwrap();
        g.set(CyclicInterval::parse("30").unwrap(), id).unwrap();
        assert!(check_generalized(&g).is_valid(), "{:?}", check_generalized(&g));
    }

    #[test]
    fn solver_finds_valid_extension() {
        let g = semi_extend_coefficients(&identity_typewriter_coefficients()).unwrap();
        assert!(check_generalized(&g).is_valid());
    }

    #[test]
    fn perturbation_is_reported() {
        let mut g = semi_extend_coefficients(&identity_typewriter_coefficients()).unwrap();
        let i = CyclicInterval::parse("0").unwrap();
        let flipped = g.get(i).add(&CoeffMap::from_triples([(0, 0, 0)]));
        g.set(i, flipped).unwrap();
        let report = check_generalized(&g);
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.starts_with("relation 0 ") || v.contains("relation 01 ") || v.contains("relation 30 ")));
    }
}
