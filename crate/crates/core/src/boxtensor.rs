//! DA bimodules with finitely many actions and the box tensor product with
//! type D structures, DD bimodules, their morphisms and typewriters.
//!
//! Pairing is computed per action: the input sequence is matched against
//! paths of the structure map, tracking for every endpoint the accumulated
//! right-hand coefficient. Generators of a box product are the
//! idempotent-compatible pairs `(p,x)`, ordered by `x` first.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::ddcoeff::DDBimodule;
use crate::error::{Error, Result};
use crate::kernel::{Element, PathAlgebra};
use crate::report::Report;
use crate::typed::{cone, CoeffMap, Generator, TypeDMorphism, TypeDStructure};
use crate::typewriter::{BlockMap, Typewriter};

pub const DEFAULT_CAP: usize = 64;

/// The expansion cap: `TWK_CAP` if set to a number, else [`DEFAULT_CAP`].
pub fn default_cap() -> usize {
    std::env::var("TWK_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DAGenerator {
    pub name: String,
    /// Vertex of the output algebra.
    pub left: usize,
    /// Vertex of the input algebra.
    pub right: usize,
}

/// A DA bimodule over `(output, input)`. An action `(p, [a₁ … a_j], c, q)`
/// contributes `c ⊗ q` to `δ¹_{1+j}(p, a₁, …, a_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DABimodule {
    output: Arc<PathAlgebra>,
    input: Arc<PathAlgebra>,
    generators: Vec<DAGenerator>,
    actions: BTreeMap<(usize, Vec<usize>, usize), Element>,
}

impl DABimodule {
    /// Builds a DA bimodule from actions `(source, inputs, output basis,
    /// target)`; repeated actions cancel in pairs.
    pub fn new(
        output: Arc<PathAlgebra>,
        input: Arc<PathAlgebra>,
        generators: Vec<DAGenerator>,
        actions: impl IntoIterator<Item = (usize, Vec<usize>, usize, usize)>,
    ) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.left >= output.vertex_count() || g.right >= input.vertex_count() {
                return Err(Error::UnknownName {
                    what: "vertex",
                    name: format!("for generator {}", g.name),
                });
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
        }
        let n = generators.len();
        let mut table: BTreeMap<(usize, Vec<usize>, usize), Element> = BTreeMap::new();
        for (p, seq, c, q) in actions {
            if p >= n || q >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.max(q) + 1,
                });
            }
            if c >= output.dim() {
                return Err(Error::ForeignBasis { index: c, dim: output.dim() });
            }
            if let Some(&a) = seq.iter().find(|&&a| a >= input.dim()) {
                return Err(Error::ForeignBasis { index: a, dim: input.dim() });
            }
            if !output.is_compatible(c, generators[p].left, generators[q].left) {
                return Err(Error::IdempotentMismatch(format!(
                    "output {} from {} to {}",
                    output.basis_name(c),
                    generators[p].name,
                    generators[q].name
                )));
            }
            if !input_chain_compatible(&input, generators[p].right, &seq, generators[q].right) {
                return Err(Error::IdempotentMismatch(format!(
                    "inputs of an action from {} to {} do not compose",
                    generators[p].name, generators[q].name
                )));
            }
            table.entry((p, seq, q)).or_default().toggle(c);
        }
        table.retain(|_, e| !e.is_zero());
        Ok(Self {
            output,
            input,
            generators,
            actions: table,
        })
    }

    /// Builds from names. Actions are `(source, inputs, output, target)`.
    pub fn from_names(
        output: Arc<PathAlgebra>,
        input: Arc<PathAlgebra>,
        generators: &[(&str, &str, &str)],
        actions: &[(&str, &[&str], &str, &str)],
    ) -> Result<Self> {
        let vertex = |alg: &PathAlgebra, v: &str| {
            alg.vertex_index(v).ok_or_else(|| Error::UnknownName {
                what: "vertex",
                name: v.into(),
            })
        };
        let gens = generators
            .iter()
            .map(|&(n, l, r)| {
                Ok(DAGenerator {
                    name: n.into(),
                    left: vertex(&output, l)?,
                    right: vertex(&input, r)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let index = |n: &str| {
            gens.iter().position(|g| g.name == n).ok_or_else(|| Error::UnknownName {
                what: "generator",
                name: n.into(),
            })
        };
        let mut acts = Vec::new();
        for &(s, seq, c, t) in actions {
            let seq = seq.iter().map(|a| input.lookup(a)).collect::<Result<Vec<_>>>()?;
            acts.push((index(s)?, seq, output.lookup(c)?, index(t)?));
        }
        Self::new(output, input, gens, acts)
    }

    pub fn output(&self) -> &Arc<PathAlgebra> {
        &self.output
    }

    pub fn input(&self) -> &Arc<PathAlgebra> {
        &self.input
    }

    pub fn generators(&self) -> &[DAGenerator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Actions as `(source, inputs, output, target)` in sorted order.
    pub fn actions(&self) -> impl Iterator<Item = (usize, &[usize], &Element, usize)> + '_ {
        self.actions.iter().map(|((p, s, q), c)| (*p, s.as_slice(), c, *q))
    }

    pub fn action_count(&self) -> usize {
        self.actions.values().map(Element::len).sum()
    }

    /// Longest input sequence of any action.
    pub fn max_inputs(&self) -> usize {
        self.actions.keys().map(|(_, s, _)| s.len()).max().unwrap_or(0)
    }
}

fn input_chain_compatible(alg: &PathAlgebra, start: usize, seq: &[usize], end: usize) -> bool {
    let mut at = start;
    for &a in seq {
        let b = alg.basis_element(a);
        if b.source != at {
            return false;
        }
        at = b.target;
    }
    at == end
}

/// Checks the DA structure relation: for every source, input sequence and
/// target, the sum of output products over consecutive pairs of actions plus
/// the actions on sequences with two adjacent inputs multiplied vanishes.
pub fn check_da(p: &DABimodule) -> Report {
    let mut terms: BTreeMap<(usize, Vec<usize>, usize), Element> = BTreeMap::new();
    let mut add = |key: (usize, Vec<usize>, usize), e: &Element| {
        let slot = terms.entry(key).or_default();
        *slot = slot.add(e);
    };
    for ((s, seq1, r), c1) in &p.actions {
        for ((r2, seq2, q), c2) in p.actions.range((*r, Vec::new(), 0)..) {
            if r2 != r {
                break;
            }
            let prod = p.output.multiply(c1, c2).expect("output basis in range");
            let seq: Vec<usize> = seq1.iter().chain(seq2).copied().collect();
            add((*s, seq, *q), &prod);
        }
    }
    let dim = p.input.dim();
    for ((s, seq, q), c) in &p.actions {
        for (k, &x) in seq.iter().enumerate() {
            for a in 0..dim {
                for b in 0..dim {
                    if p.input.mul_basis(a, b) == Some(x) {
                        let mut longer = seq[..k].to_vec();
                        longer.extend([a, b]);
                        longer.extend_from_slice(&seq[k + 1..]);
                        add((*s, longer, *q), c);
                    }
                }
            }
        }
    }
    let mut report = Report::new();
    for ((s, seq, q), e) in terms {
        if !e.is_zero() {
            let names: Vec<&str> = seq.iter().map(|&a| p.input.basis_name(a)).collect();
            report.push(format!(
                "DA relation fails from {} to {} on inputs [{}]: {}",
                p.generators[s].name,
                p.generators[q].name,
                names.join(", "),
                p.output.format_element(&e)
            ));
        }
    }
    report
}

/// The identity DA bimodule: one generator per vertex and `δ¹₂(e_v, a) = a ⊗ e_w`.
pub fn identity_da(alg: &Arc<PathAlgebra>) -> DABimodule {
    let gens = alg
        .vertices()
        .iter()
        .enumerate()
        .map(|(v, name)| DAGenerator {
            name: name.clone(),
            left: v,
            right: v,
        })
        .collect();
    let actions = alg.basis().iter().enumerate().map(|(a, b)| (b.source, vec![a], a, b.target));
    DABimodule::new(alg.clone(), alg.clone(), gens, actions).expect("identity actions are compatible")
}

/// The one-generator module at vertex `i` over the trivial output algebra,
/// with sole action `δ¹₂(x, ι_i) = 1 ⊗ x`.
pub fn elementary_module(alg: &Arc<PathAlgebra>, i: usize) -> Result<DABimodule> {
    if i >= alg.vertex_count() {
        return Err(Error::WrongAlgebra(format!("vertex {i} does not exist")));
    }
    let gens = vec![DAGenerator {
        name: alg.vertices()[i].clone(),
        left: 0,
        right: i,
    }];
    DABimodule::new(PathAlgebra::trivial(), alg.clone(), gens, [(0, vec![alg.idempotent(i)], 0, 0)])
}

/// Splits a box product name `(p,x)` into `p` and `x`.
pub fn split_pair_name(name: &str) -> Option<(&str, &str)> {
    let inner = name.strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0usize;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1)?,
            ',' if depth == 0 => return Some((&inner[..i], &inner[i + 1..])),
            _ => {}
        }
    }
    None
}

/// A structure over `input ⊗ right`, flattened: generator idempotents are
/// `l * nvr + r` and basis indices are `a * dr + t`.
struct Flat<'a> {
    gens: &'a [Generator],
    delta: &'a CoeffMap,
}

/// Position of each pair `(p, x)` in the paired generator list.
type PairIndex = BTreeMap<(usize, usize), usize>;

struct Pairing<'a> {
    da: &'a DABimodule,
    right: &'a PathAlgebra,
    cap: usize,
}

type Frontier = BTreeMap<usize, Element>;

impl Pairing<'_> {
    fn dr(&self) -> usize {
        self.right.dim()
    }

    fn nvr(&self) -> usize {
        self.right.vertex_count()
    }

    /// Pairs `(p, x)` in `x`-major order, with their positions.
    fn pairs(&self, flat: &Flat) -> (Vec<(usize, usize)>, PairIndex) {
        let nvr = self.nvr();
        let mut list = Vec::new();
        for (x, g) in flat.gens.iter().enumerate() {
            for (p, dg) in self.da.generators.iter().enumerate() {
                if dg.right == g.idempotent / nvr {
                    list.push((p, x));
                }
            }
        }
        let index = list.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        (list, index)
    }

    fn paired_structure(&self, flat: &Flat, out: Arc<PathAlgebra>) -> Result<TypeDStructure> {
        let (list, _) = self.pairs(flat);
        let nvr = self.nvr();
        let gens = list
            .iter()
            .map(|&(p, x)| {
                let dg = &self.da.generators[p];
                Generator::new(
                    format!("({},{})", dg.name, flat.gens[x].name),
                    dg.left * nvr + flat.gens[x].idempotent % nvr,
                )
            })
            .collect();
        let delta = self.pair_delta(flat)?;
        TypeDStructure::new(out, gens, delta)
    }

    /// Advances a frontier along arrows of `delta` whose left label is `a`.
    fn step(&self, frontier: &Frontier, delta: &CoeffMap, a: usize, next: &mut Frontier) {
        let dr = self.dr();
        for (&x, t) in frontier {
            for (y, coeff) in delta.row(x) {
                for b in coeff.terms().filter(|b| b / dr == a) {
                    let prod = self
                        .right
                        .multiply(t, &Element::basis(b % dr))
                        .expect("right basis in range");
                    let slot = next.entry(y).or_default();
                    *slot = slot.add(&prod);
                }
            }
        }
        next.retain(|_, e| !e.is_zero());
    }

    fn check_cap(&self, k: usize, live: usize) -> Result<()> {
        if k >= self.cap && live > 0 {
            return Err(Error::NonTerminatingBoxTensor { cap: self.cap, live });
        }
        Ok(())
    }

    /// The trivial path at `x`, carrying the right idempotent of `x`.
    fn start(&self, flat: &Flat, x: usize) -> Frontier {
        let r = flat.gens[x].idempotent % self.nvr();
        Frontier::from([(x, Element::basis(self.right.idempotent(r)))])
    }

    fn emit(
        &self,
        out: &mut CoeffMap,
        from: usize,
        to: Option<&usize>,
        c: &Element,
        t: &Element,
    ) {
        let Some(&to) = to else { return };
        let dr = self.dr();
        for cb in c.terms() {
            for tb in t.terms() {
                out.toggle(from, to, cb * dr + tb);
            }
        }
    }

    fn pair_delta(&self, flat: &Flat) -> Result<CoeffMap> {
        let (list, index) = self.pairs(flat);
        let mut out = CoeffMap::new();
        for (from, &(p, x0)) in list.iter().enumerate() {
            for (_, seq, c, q) in self.da.actions().filter(|a| a.0 == p) {
                let mut frontier = self.start(flat, x0);
                for (k, &a) in seq.iter().enumerate() {
                    self.check_cap(k, frontier.len())?;
                    let mut next = Frontier::new();
                    self.step(&frontier, flat.delta, a, &mut next);
                    frontier = next;
                    if frontier.is_empty() {
                        break;
                    }
                }
                for (y, t) in &frontier {
                    self.emit(&mut out, from, index.get(&(q, *y)), c, t);
                }
            }
        }
        Ok(out)
    }

    /// `𝕀 ⊠ φ`: the morphism inserted once along each path.
    fn pair_map(&self, src: &Flat, tgt: &Flat, phi: &CoeffMap) -> Result<CoeffMap> {
        let (list, _) = self.pairs(src);
        let (_, tindex) = self.pairs(tgt);
        let mut out = CoeffMap::new();
        for (from, &(p, x0)) in list.iter().enumerate() {
            for (_, seq, c, q) in self.da.actions().filter(|a| a.0 == p && !a.1.is_empty()) {
                let mut before = self.start(src, x0);
                let mut after = Frontier::new();
                for (k, &a) in seq.iter().enumerate() {
                    self.check_cap(k, before.len() + after.len())?;
                    let mut next_after = Frontier::new();
                    self.step(&after, tgt.delta, a, &mut next_after);
                    self.step(&before, phi, a, &mut next_after);
                    let mut next_before = Frontier::new();
                    self.step(&before, src.delta, a, &mut next_before);
                    before = next_before;
                    after = next_after;
                    if before.is_empty() && after.is_empty() {
                        break;
                    }
                }
                for (y, t) in &after {
                    self.emit(&mut out, from, tindex.get(&(q, *y)), c, t);
                }
            }
        }
        Ok(out)
    }
}

/// Box tensor products with an explicit expansion cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoxTensor {
    pub cap: usize,
}

impl Default for BoxTensor {
    fn default() -> Self {
        Self { cap: default_cap() }
    }
}

impl BoxTensor {
    pub fn new(cap: usize) -> Self {
        Self { cap }
    }

    fn pairing<'a>(&self, da: &'a DABimodule, right: &'a PathAlgebra) -> Pairing<'a> {
        Pairing { da, right, cap: self.cap }
    }

    fn check_input(da: &DABimodule, alg: &PathAlgebra) -> Result<()> {
        if *da.input != *alg {
            return Err(Error::WrongAlgebra("structure is not over the input algebra of the DA bimodule".into()));
        }
        Ok(())
    }

    pub fn type_d(&self, da: &DABimodule, n: &TypeDStructure) -> Result<TypeDStructure> {
        Self::check_input(da, n.algebra())?;
        let trivial = PathAlgebra::trivial();
        let flat = Flat {
            gens: n.generators(),
            delta: n.delta(),
        };
        self.pairing(da, &trivial).paired_structure(&flat, da.output.clone())
    }

    pub fn dd(&self, da: &DABimodule, m: &DDBimodule) -> Result<DDBimodule> {
        Self::check_input(da, m.left())?;
        let flat = Flat {
            gens: m.as_type_d().generators(),
            delta: m.as_type_d().delta(),
        };
        let tensor = Arc::new(da.output.tensor(m.right()));
        let s = self.pairing(da, m.right()).paired_structure(&flat, tensor)?;
        DDBimodule::from_flat(da.output.clone(), m.right().clone(), s)
    }

    fn morphism_between(
        &self,
        da: &DABimodule,
        right: &PathAlgebra,
        phi: &TypeDMorphism,
        source: TypeDStructure,
        target: TypeDStructure,
    ) -> Result<TypeDMorphism> {
        let src = Flat {
            gens: phi.source().generators(),
            delta: phi.source().delta(),
        };
        let tgt = Flat {
            gens: phi.target().generators(),
            delta: phi.target().delta(),
        };
        let map = self.pairing(da, right).pair_map(&src, &tgt, phi.map())?;
        TypeDMorphism::new(source, target, map)
    }

    /// `𝕀 ⊠ φ` for a morphism of type D structures over the input algebra.
    pub fn morphism(&self, da: &DABimodule, phi: &TypeDMorphism) -> Result<TypeDMorphism> {
        if !phi.is_closed() {
            return Err(Error::NotClosed("cannot box a non-closed morphism".into()));
        }
        let source = self.type_d(da, phi.source())?;
        let target = self.type_d(da, phi.target())?;
        self.morphism_between(da, &PathAlgebra::trivial(), phi, source, target)
    }

    /// `𝕀 ⊠ φ` for a morphism between DD bimodules `m` and `n`.
    pub fn dd_morphism(&self, da: &DABimodule, m: &DDBimodule, n: &DDBimodule, phi: &TypeDMorphism) -> Result<TypeDMorphism> {
        if phi.source() != m.as_type_d() || phi.target() != n.as_type_d() {
            return Err(Error::EndpointMismatch("morphism is not between the given bimodules".into()));
        }
        if !phi.is_closed() {
            return Err(Error::NotClosed("cannot box a non-closed morphism".into()));
        }
        let source = self.dd(da, m)?;
        let target = self.dd(da, n)?;
        self.morphism_between(da, m.right(), phi, source.as_type_d().clone(), target.as_type_d().clone())
    }

    /// Boxes every piece of a typewriter, identifying the box of each cone
    /// with the cone of the boxed map.
    pub fn typewriter(&self, da: &DABimodule, m: &Typewriter) -> Result<Typewriter> {
        let b0 = self.type_d(da, m.m0())?;
        let b1 = self.type_d(da, m.m1())?;
        let bf = self.morphism(da, &m.d_f_morphism())?;
        let bh = self.morphism(da, &m.d_h_morphism())?;
        for (name, original, boxed) in [("D_f", m.cone_f(), &bf), ("D_h", m.cone_h(), &bh)] {
            let lhs = self.type_d(da, &original)?;
            let rhs = cone(boxed)?;
            let same = lhs.delta() == rhs.delta()
                && lhs.len() == rhs.len()
                && lhs
                    .generators()
                    .iter()
                    .zip(rhs.generators())
                    .all(|(a, b)| a.idempotent == b.idempotent);
            if !same {
                return Err(Error::ConeIdentificationFailed(format!("cone of {name}")));
            }
        }
        let cr = self.morphism(da, &m.d_cr_morphism())?;
        let (n0, n) = (b0.len(), b0.len() + b1.len());
        let blocks = BlockMap::split(cr.map(), n0, n, n0, n);
        Typewriter::new(b0, b1, bf.map().clone(), bh.map().clone(), blocks)
    }
}

pub fn box_type_d(da: &DABimodule, n: &TypeDStructure) -> Result<TypeDStructure> {
    BoxTensor::default().type_d(da, n)
}

pub fn box_dd(da: &DABimodule, m: &DDBimodule) -> Result<DDBimodule> {
    BoxTensor::default().dd(da, m)
}

pub fn box_morphism(da: &DABimodule, phi: &TypeDMorphism) -> Result<TypeDMorphism> {
    BoxTensor::default().morphism(da, phi)
}

pub fn box_dd_morphism(da: &DABimodule, m: &DDBimodule, n: &DDBimodule, phi: &TypeDMorphism) -> Result<TypeDMorphism> {
    BoxTensor::default().dd_morphism(da, m, n, phi)
}

pub fn box_typewriter(da: &DABimodule, m: &Typewriter) -> Result<Typewriter> {
    BoxTensor::default().typewriter(da, m)
}
