//! JSON file format for every kind of object. Generators and arrows are
//! written by name in sorted order, so output is canonical and re-reads to
//! the same bytes.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::boxtensor::{DABimodule, DAGenerator};
use crate::ddcoeff::{right_label, CyclicInterval, DDBimodule, DDGenerator, GeneralizedCoefficientSystem, IntervalMaps};
use crate::error::{Error, Result};
use crate::kernel::{PathAlgebra, QuiverPresentation};
use crate::models::{FlipInverse, FlipModule};
use crate::typed::{CoeffMap, Generator, TypeDMorphism, TypeDStructure};
use crate::typewriter::{BlockMap, Typewriter, TypewriterMorphism};

pub const FORMAT_VERSION: u32 = 1;

/// Default path-length bound for inline presentations that omit one.
pub const DEFAULT_MAX_PATH_LEN: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Named(String),
    Inline(InlineAlgebra),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InlineAlgebra {
    pub presentation: QuiverPresentation,
    #[serde(default = "default_max_path_len")]
    pub max_path_len: usize,
}

fn default_max_path_len() -> usize {
    DEFAULT_MAX_PATH_LEN
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub name: String,
    pub idempotent: String,
}

/// One term of a map or structure map.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Entry {
    pub source: String,
    pub target: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub generators: Vec<GeneratorRecord>,
    #[serde(default)]
    pub arrows: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypedRecord {
    pub algebra: AlgebraRef,
    pub generators: Vec<GeneratorRecord>,
    #[serde(default)]
    pub arrows: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiGeneratorRecord {
    pub name: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BiEntry {
    pub source: String,
    pub target: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdRecord {
    pub left: AlgebraRef,
    pub right: AlgebraRef,
    pub generators: Vec<BiGeneratorRecord>,
    #[serde(default)]
    pub arrows: Vec<BiEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActionRecord {
    pub source: String,
    pub inputs: Vec<String>,
    pub output: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DaRecord {
    pub output: AlgebraRef,
    pub input: AlgebraRef,
    pub generators: Vec<BiGeneratorRecord>,
    #[serde(default)]
    pub actions: Vec<ActionRecord>,
}

/// Blocks of a map between two-slot structures, named by torus label:
/// `g: 1 → 0`, `fg: 0 → 0`, `gh: 1 → 1`, `fgh: 0 → 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlocksRecord {
    #[serde(default)]
    pub g: Vec<Entry>,
    #[serde(default)]
    pub fg: Vec<Entry>,
    #[serde(default)]
    pub gh: Vec<Entry>,
    #[serde(default)]
    pub fgh: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypewriterRecord {
    pub algebra: AlgebraRef,
    pub m0: ComplexRecord,
    pub m1: ComplexRecord,
    #[serde(default)]
    pub d_f: Vec<Entry>,
    #[serde(default)]
    pub d_h: Vec<Entry>,
    #[serde(default)]
    pub d_cr: BlocksRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "of", rename_all = "lowercase")]
#[allow(clippy::large_enum_variant)]
pub enum MorphismRecord {
    Typed {
        source: TypedRecord,
        target: TypedRecord,
        #[serde(default)]
        map: Vec<Entry>,
    },
    Dd {
        source: DdRecord,
        target: DdRecord,
        #[serde(default)]
        map: Vec<BiEntry>,
    },
    Typewriter {
        source: TypewriterRecord,
        target: TypewriterRecord,
        #[serde(default)]
        t0: Vec<Entry>,
        #[serde(default)]
        t1: Vec<Entry>,
        #[serde(default)]
        t_f: Vec<Entry>,
        #[serde(default)]
        t_h: Vec<Entry>,
        #[serde(default)]
        t_cr: BlocksRecord,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipInverseRecord {
    pub inverse: BlocksRecord,
    pub source_homotopy: BlocksRecord,
    pub target_homotopy: BlocksRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipRecord {
    pub complex: ComplexRecord,
    #[serde(default)]
    pub u: Vec<Entry>,
    #[serde(default)]
    pub v: Vec<Entry>,
    #[serde(default)]
    pub flip: BlocksRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<FlipInverseRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedRecord {
    pub algebra: AlgebraRef,
    pub m0: ComplexRecord,
    pub m1: ComplexRecord,
    /// Maps keyed by torus label (`f`, `fg`, …) or interval name (`0`, `301`, …).
    pub maps: BTreeMap<String, Vec<Entry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Body {
    Algebra { algebra: AlgebraRef },
    Typed(TypedRecord),
    Dd(DdRecord),
    Da(DaRecord),
    Typewriter(TypewriterRecord),
    Morphism(MorphismRecord),
    Homotopy(MorphismRecord),
    Flip(FlipRecord),
    Generalized(GeneralizedRecord),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub version: u32,
    #[serde(flatten)]
    pub body: Body,
}

/// A morphism read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Morphism {
    Typed(TypeDMorphism),
    /// A morphism of DD bimodules is a type D morphism of the underlying
    /// structures.
    Dd {
        source: DDBimodule,
        target: DDBimodule,
        map: TypeDMorphism,
    },
    Typewriter(TypewriterMorphism),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Algebra(Arc<PathAlgebra>),
    Typed(TypeDStructure),
    Dd(DDBimodule),
    Da(DABimodule),
    Typewriter(Typewriter),
    Morphism(Morphism),
    Homotopy(Morphism),
    Flip(FlipModule),
    Generalized(GeneralizedCoefficientSystem),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Algebra(_) => "algebra",
            Object::Typed(_) => "typed",
            Object::Dd(_) => "dd",
            Object::Da(_) => "da",
            Object::Typewriter(_) => "typewriter",
            Object::Morphism(_) => "morphism",
            Object::Homotopy(_) => "homotopy",
            Object::Flip(_) => "flip",
            Object::Generalized(_) => "generalized",
        }
    }
}

fn parse_error(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

pub fn resolve_algebra(r: &AlgebraRef) -> Result<Arc<PathAlgebra>> {
    match r {
        AlgebraRef::Named(n) => match n.as_str() {
            "torus" => Ok(PathAlgebra::torus()),
            "strands-torus" => Ok(PathAlgebra::strands_torus()),
            "trivial" => Ok(PathAlgebra::trivial()),
            other => Err(Error::UnknownName {
                what: "algebra",
                name: other.into(),
            }),
        },
        AlgebraRef::Inline(i) => Ok(Arc::new(PathAlgebra::build(&i.presentation, i.max_path_len)?)),
    }
}

pub fn algebra_ref(alg: &PathAlgebra) -> Result<AlgebraRef> {
    if let Some(n) = alg.name() {
        return Ok(AlgebraRef::Named(n.into()));
    }
    match alg.presentation() {
        Some((p, len)) => Ok(AlgebraRef::Inline(InlineAlgebra {
            presentation: p.clone(),
            max_path_len: len,
        })),
        None => Err(Error::WrongAlgebra("tensor algebras are written as their two factors".into())),
    }
}

// Writing.

fn generator_records(n: &TypeDStructure) -> Vec<GeneratorRecord> {
    let alg = n.algebra();
    let mut out: Vec<GeneratorRecord> = n
        .generators()
        .iter()
        .map(|g| GeneratorRecord {
            name: g.name.clone(),
            idempotent: alg.vertices()[g.idempotent].clone(),
        })
        .collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

fn entries(alg: &PathAlgebra, src: &[Generator], tgt: &[Generator], map: &CoeffMap) -> Vec<Entry> {
    let mut out: Vec<Entry> = map
        .triples()
        .map(|(u, v, b)| Entry {
            source: src[u].name.clone(),
            target: tgt[v].name.clone(),
            coefficient: alg.basis_name(b).into(),
        })
        .collect();
    out.sort();
    out
}

fn complex_record(n: &TypeDStructure) -> ComplexRecord {
    ComplexRecord {
        generators: generator_records(n),
        arrows: entries(n.algebra(), n.generators(), n.generators(), n.delta()),
    }
}

fn typed_record(n: &TypeDStructure) -> Result<TypedRecord> {
    let c = complex_record(n);
    Ok(TypedRecord {
        algebra: algebra_ref(n.algebra())?,
        generators: c.generators,
        arrows: c.arrows,
    })
}

fn bi_entries(m: &DDBimodule, src: &DDBimodule, tgt: &DDBimodule, map: &CoeffMap) -> Vec<BiEntry> {
    let dr = m.right().dim();
    let mut out: Vec<BiEntry> = map
        .triples()
        .map(|(u, v, b)| BiEntry {
            source: src.generator(u).name,
            target: tgt.generator(v).name,
            left: m.left().basis_name(b / dr).into(),
            right: right_label(m.right(), b % dr),
        })
        .collect();
    out.sort();
    out
}

fn dd_record(m: &DDBimodule) -> Result<DdRecord> {
    let mut generators: Vec<BiGeneratorRecord> = m
        .generators()
        .into_iter()
        .map(|g| BiGeneratorRecord {
            name: g.name,
            left: m.left().vertices()[g.left].clone(),
            right: m.right().vertices()[g.right].clone(),
        })
        .collect();
    generators.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(DdRecord {
        left: algebra_ref(m.left())?,
        right: algebra_ref(m.right())?,
        generators,
        arrows: bi_entries(m, m, m, m.as_type_d().delta()),
    })
}

fn da_record(p: &DABimodule) -> Result<DaRecord> {
    let gens = p.generators();
    let mut generators: Vec<BiGeneratorRecord> = gens
        .iter()
        .map(|g| BiGeneratorRecord {
            name: g.name.clone(),
            left: p.output().vertices()[g.left].clone(),
            right: p.input().vertices()[g.right].clone(),
        })
        .collect();
    generators.sort_by(|a, b| a.name.cmp(&b.name));
    let mut actions = Vec::new();
    for (s, seq, c, t) in p.actions() {
        for cb in c.terms() {
            actions.push(ActionRecord {
                source: gens[s].name.clone(),
                inputs: seq.iter().map(|&a| p.input().basis_name(a).to_string()).collect(),
                output: p.output().basis_name(cb).into(),
                target: gens[t].name.clone(),
            });
        }
    }
    actions.sort();
    Ok(DaRecord {
        output: algebra_ref(p.output())?,
        input: algebra_ref(p.input())?,
        generators,
        actions,
    })
}

fn blocks_record(alg: &PathAlgebra, s: (&TypeDStructure, &TypeDStructure), t: (&TypeDStructure, &TypeDStructure), m: &BlockMap) -> BlocksRecord {
    BlocksRecord {
        g: entries(alg, s.1.generators(), t.0.generators(), &m.b10),
        fg: entries(alg, s.0.generators(), t.0.generators(), &m.b00),
        gh: entries(alg, s.1.generators(), t.1.generators(), &m.b11),
        fgh: entries(alg, s.0.generators(), t.1.generators(), &m.b01),
    }
}

fn typewriter_record(m: &Typewriter) -> Result<TypewriterRecord> {
    let alg = m.algebra();
    let (m0, m1) = (m.m0(), m.m1());
    Ok(TypewriterRecord {
        algebra: algebra_ref(alg)?,
        m0: complex_record(m0),
        m1: complex_record(m1),
        d_f: entries(alg, m0.generators(), m1.generators(), m.d_f()),
        d_h: entries(alg, m0.generators(), m1.generators(), m.d_h()),
        d_cr: blocks_record(alg, (m0, m1), (m0, m1), m.d_cr()),
    })
}

fn morphism_record(m: &Morphism) -> Result<MorphismRecord> {
    Ok(match m {
        Morphism::Typed(phi) => MorphismRecord::Typed {
            source: typed_record(phi.source())?,
            target: typed_record(phi.target())?,
            map: entries(phi.algebra(), phi.source().generators(), phi.target().generators(), phi.map()),
        },
        Morphism::Dd { source, target, map } => MorphismRecord::Dd {
            source: dd_record(source)?,
            target: dd_record(target)?,
            map: bi_entries(source, source, target, map.map()),
        },
        Morphism::Typewriter(t) => {
            let (s, g) = (t.source(), t.target());
            let alg = s.algebra();
            let (s0, s1, g0, g1) = (s.m0(), s.m1(), g.m0(), g.m1());
            MorphismRecord::Typewriter {
                source: typewriter_record(s)?,
                target: typewriter_record(g)?,
                t0: entries(alg, s0.generators(), g0.generators(), &t.t0),
                t1: entries(alg, s1.generators(), g1.generators(), &t.t1),
                t_f: entries(alg, s0.generators(), g1.generators(), &t.t_f),
                t_h: entries(alg, s0.generators(), g1.generators(), &t.t_h),
                t_cr: blocks_record(alg, (s0, s1), (g0, g1), &t.t_cr),
            }
        }
    })
}

fn flip_record(f: &FlipModule) -> FlipRecord {
    let c = f.complex();
    let alg = c.algebra();
    let g = c.generators();
    let both = (c, c);
    FlipRecord {
        complex: complex_record(c),
        u: entries(alg, g, g, f.u()),
        v: entries(alg, g, g, f.v()),
        flip: blocks_record(alg, both, both, f.flip()),
        inverse: f.inverse().map(|inv| {
            let n = c.len();
            let split = |m: &CoeffMap| BlockMap::split(m, n, 2 * n, n, 2 * n);
            FlipInverseRecord {
                inverse: blocks_record(alg, both, both, &split(&inv.inverse)),
                source_homotopy: blocks_record(alg, both, both, &split(&inv.source_homotopy)),
                target_homotopy: blocks_record(alg, both, both, &split(&inv.target_homotopy)),
            }
        }),
    }
}

fn interval_key(i: CyclicInterval) -> String {
    i.torus_label().map(str::to_string).unwrap_or_else(|| i.name())
}

fn generalized_record(g: &GeneralizedCoefficientSystem) -> Result<GeneralizedRecord> {
    let maps = g.interval_maps();
    let alg = maps.algebra();
    let mut out = BTreeMap::new();
    for (i, m) in maps.intervals() {
        if m.is_zero() {
            continue;
        }
        let (s, t) = (maps.side(i.domain_side()), maps.side(i.codomain_side()));
        out.insert(interval_key(i), entries(alg, s.generators(), t.generators(), m));
    }
    Ok(GeneralizedRecord {
        algebra: algebra_ref(alg)?,
        m0: complex_record(maps.m0()),
        m1: complex_record(maps.m1()),
        maps: out,
    })
}

pub fn to_document(o: &Object) -> Result<Document> {
    let body = match o {
        Object::Algebra(a) => Body::Algebra { algebra: algebra_ref(a)? },
        Object::Typed(n) => Body::Typed(typed_record(n)?),
        Object::Dd(m) => Body::Dd(dd_record(m)?),
        Object::Da(p) => Body::Da(da_record(p)?),
        Object::Typewriter(m) => Body::Typewriter(typewriter_record(m)?),
        Object::Morphism(m) => Body::Morphism(morphism_record(m)?),
        Object::Homotopy(m) => Body::Homotopy(morphism_record(m)?),
        Object::Flip(f) => Body::Flip(flip_record(f)),
        Object::Generalized(g) => Body::Generalized(generalized_record(g)?),
    };
    Ok(Document {
        version: FORMAT_VERSION,
        body,
    })
}

/// Canonical pretty-printed JSON with a trailing newline.
pub fn to_json(o: &Object) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&to_document(o)?).map_err(parse_error)?;
    s.push('\n');
    Ok(s)
}

// Reading.

fn vertex(alg: &PathAlgebra, name: &str) -> Result<usize> {
    alg.vertex_index(name).ok_or_else(|| Error::UnknownName {
        what: "vertex",
        name: name.into(),
    })
}

fn read_complex(alg: &Arc<PathAlgebra>, c: &ComplexRecord) -> Result<TypeDStructure> {
    let gens = c
        .generators
        .iter()
        .map(|g| Ok(Generator::new(g.name.clone(), vertex(alg, &g.idempotent)?)))
        .collect::<Result<Vec<_>>>()?;
    let n = TypeDStructure::new(alg.clone(), gens, CoeffMap::new())?;
    let delta = read_map(alg, &n, &n, &c.arrows)?;
    n.with_delta(delta)
}

fn read_map(alg: &PathAlgebra, src: &TypeDStructure, tgt: &TypeDStructure, entries: &[Entry]) -> Result<CoeffMap> {
    let mut m = CoeffMap::new();
    for e in entries {
        m.toggle(src.index_of(&e.source)?, tgt.index_of(&e.target)?, alg.lookup(&e.coefficient)?);
    }
    Ok(m)
}

fn read_typed(r: &TypedRecord) -> Result<TypeDStructure> {
    let alg = resolve_algebra(&r.algebra)?;
    read_complex(
        &alg,
        &ComplexRecord {
            generators: r.generators.clone(),
            arrows: r.arrows.clone(),
        },
    )
}

fn read_bi_map(src: &DDBimodule, tgt: &DDBimodule, entries: &[BiEntry]) -> Result<CoeffMap> {
    let (left, right) = (src.left(), src.right());
    let dr = right.dim();
    let mut m = CoeffMap::new();
    for e in entries {
        let u = src.index_of(&e.source)?;
        let v = tgt.index_of(&e.target)?;
        let t = if e.right == "1" {
            right.idempotent(src.generator(u).right)
        } else {
            right.lookup(&e.right)?
        };
        m.toggle(u, v, left.lookup(&e.left)? * dr + t);
    }
    Ok(m)
}

fn read_dd(r: &DdRecord) -> Result<DDBimodule> {
    let left = resolve_algebra(&r.left)?;
    let right = resolve_algebra(&r.right)?;
    let gens = r
        .generators
        .iter()
        .map(|g| {
            Ok(DDGenerator {
                name: g.name.clone(),
                left: vertex(&left, &g.left)?,
                right: vertex(&right, &g.right)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let empty = DDBimodule::new(left, right, gens, [])?;
    let delta = read_bi_map(&empty, &empty, &r.arrows)?;
    let flat = empty.as_type_d().with_delta(delta)?;
    DDBimodule::from_flat(empty.left().clone(), empty.right().clone(), flat)
}

fn read_da(r: &DaRecord) -> Result<DABimodule> {
    let output = resolve_algebra(&r.output)?;
    let input = resolve_algebra(&r.input)?;
    let gens = r
        .generators
        .iter()
        .map(|g| {
            Ok(DAGenerator {
                name: g.name.clone(),
                left: vertex(&output, &g.left)?,
                right: vertex(&input, &g.right)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let index = |n: &str| {
        gens.iter().position(|g| g.name == n).ok_or_else(|| Error::UnknownName {
            what: "generator",
            name: n.into(),
        })
    };
    let mut actions = Vec::new();
    for a in &r.actions {
        let seq = a.inputs.iter().map(|x| input.lookup(x)).collect::<Result<Vec<_>>>()?;
        actions.push((index(&a.source)?, seq, output.lookup(&a.output)?, index(&a.target)?));
    }
    DABimodule::new(output, input, gens, actions)
}

fn read_blocks(alg: &PathAlgebra, s: (&TypeDStructure, &TypeDStructure), t: (&TypeDStructure, &TypeDStructure), r: &BlocksRecord) -> Result<BlockMap> {
    Ok(BlockMap::from_labels(
        read_map(alg, s.1, t.0, &r.g)?,
        read_map(alg, s.0, t.0, &r.fg)?,
        read_map(alg, s.1, t.1, &r.gh)?,
        read_map(alg, s.0, t.1, &r.fgh)?,
    ))
}

fn read_typewriter(r: &TypewriterRecord) -> Result<Typewriter> {
    let alg = resolve_algebra(&r.algebra)?;
    let m0 = read_complex(&alg, &r.m0)?;
    let m1 = read_complex(&alg, &r.m1)?;
    let d_f = read_map(&alg, &m0, &m1, &r.d_f)?;
    let d_h = read_map(&alg, &m0, &m1, &r.d_h)?;
    let d_cr = read_blocks(&alg, (&m0, &m1), (&m0, &m1), &r.d_cr)?;
    Typewriter::new(m0, m1, d_f, d_h, d_cr)
}

fn read_morphism(r: &MorphismRecord) -> Result<Morphism> {
    Ok(match r {
        MorphismRecord::Typed { source, target, map } => {
            let (s, t) = (read_typed(source)?, read_typed(target)?);
            let m = read_map(s.algebra(), &s, &t, map)?;
            Morphism::Typed(TypeDMorphism::new(s, t, m)?)
        }
        MorphismRecord::Dd { source, target, map } => {
            let (s, t) = (read_dd(source)?, read_dd(target)?);
            let m = read_bi_map(&s, &t, map)?;
            let phi = crate::ddcoeff::dd_morphism(&s, &t, m)?;
            Morphism::Dd {
                source: s,
                target: t,
                map: phi,
            }
        }
        MorphismRecord::Typewriter {
            source,
            target,
            t0,
            t1,
            t_f,
            t_h,
            t_cr,
        } => {
            let (s, g) = (read_typewriter(source)?, read_typewriter(target)?);
            let alg = s.algebra().clone();
            let (s0, s1, g0, g1) = (s.m0(), s.m1(), g.m0(), g.m1());
            let pieces = (
                (read_map(&alg, s0, g0, t0)?, read_map(&alg, s1, g1, t1)?),
                (read_map(&alg, s0, g1, t_f)?, read_map(&alg, s0, g1, t_h)?),
                read_blocks(&alg, (s0, s1), (g0, g1), t_cr)?,
            );
            Morphism::Typewriter(TypewriterMorphism::new(s.clone(), g.clone(), pieces.0, pieces.1, pieces.2)?)
        }
    })
}

fn read_flip(r: &FlipRecord) -> Result<FlipModule> {
    let alg = PathAlgebra::trivial();
    let c = read_complex(&alg, &r.complex)?;
    let n = c.len();
    let both = (&c, &c);
    let u = read_map(&alg, &c, &c, &r.u)?;
    let v = read_map(&alg, &c, &c, &r.v)?;
    let flip = read_blocks(&alg, both, both, &r.flip)?;
    let f = FlipModule::new(c.clone(), u, v, flip)?;
    match &r.inverse {
        None => Ok(f),
        Some(inv) => {
            let full = |b: &BlocksRecord| Ok::<_, Error>(read_blocks(&alg, both, both, b)?.assemble(n, n));
            f.with_inverse(FlipInverse {
                inverse: full(&inv.inverse)?,
                source_homotopy: full(&inv.source_homotopy)?,
                target_homotopy: full(&inv.target_homotopy)?,
            })
        }
    }
}

fn read_generalized(r: &GeneralizedRecord) -> Result<GeneralizedCoefficientSystem> {
    let alg = resolve_algebra(&r.algebra)?;
    let m0 = read_complex(&alg, &r.m0)?;
    let m1 = read_complex(&alg, &r.m1)?;
    let mut maps = IntervalMaps::new(m0, m1)?;
    for (key, es) in &r.maps {
        let i = CyclicInterval::from_torus_label(key)
            .or_else(|| CyclicInterval::parse(key))
            .ok_or_else(|| Error::UnknownName {
                what: "interval",
                name: key.clone(),
            })?;
        let m = read_map(&alg, maps.side(i.domain_side()), maps.side(i.codomain_side()), es)?;
        maps.set(i, m)?;
    }
    Ok(GeneralizedCoefficientSystem::new(maps))
}

pub fn from_document(d: &Document) -> Result<Object> {
    if d.version != FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported format version {}", d.version)));
    }
    Ok(match &d.body {
        Body::Algebra { algebra } => Object::Algebra(resolve_algebra(algebra)?),
        Body::Typed(r) => Object::Typed(read_typed(r)?),
        Body::Dd(r) => Object::Dd(read_dd(r)?),
        Body::Da(r) => Object::Da(read_da(r)?),
        Body::Typewriter(r) => Object::Typewriter(read_typewriter(r)?),
        Body::Morphism(r) => Object::Morphism(read_morphism(r)?),
        Body::Homotopy(r) => Object::Homotopy(read_morphism(r)?),
        Body::Flip(r) => Object::Flip(read_flip(r)?),
        Body::Generalized(r) => Object::Generalized(read_generalized(r)?),
    })
}

pub fn parse(text: &str) -> Result<Object> {
    let d: Document = serde_json::from_str(text).map_err(parse_error)?;
    from_document(&d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxtensor::identity_da;
    use crate::models::{cfdd_identity, model_m};
    use crate::random::{random_flip_module, random_typewriter, random_typewriter_morphism, seeded};

    fn round_trip(o: Object) {
        let text = to_json(&o).unwrap();
        let back = parse(&text).unwrap();
        assert_eq!(to_json(&back).unwrap(), text);
    }

    #[test]
    fn built_ins_round_trip() {
        round_trip(Object::Algebra(PathAlgebra::torus()));
        round_trip(Object::Dd(cfdd_identity()));
        round_trip(Object::Typewriter(model_m()));
        round_trip(Object::Typed(model_m().cone_cr()));
        round_trip(Object::Da(identity_da(&PathAlgebra::strands_torus())));
    }

    #[test]
    fn random_objects_round_trip() {
        let mut rng = seeded(11);
        for _ in 0..5 {
            let m = random_typewriter(&mut rng, &PathAlgebra::trivial(), 3);
            let n = random_typewriter(&mut rng, &PathAlgebra::trivial(), 2);
            let t = random_typewriter_morphism(&mut rng, &m, &n);
            round_trip(Object::Morphism(Morphism::Typewriter(t)));
            round_trip(Object::Flip(random_flip_module(&mut rng, 3)));
        }
    }

    #[test]
    fn parsed_typewriter_equals_canonical_source() {
        let m = model_m();
        let Object::Typewriter(back) = parse(&to_json(&Object::Typewriter(m.clone())).unwrap()).unwrap() else {
            panic!("wrong kind");
        };
        assert_eq!(back, m);
    }

    #[test]
    fn inline_algebra_is_accepted() {
        let text = r#"{"version": 1, "kind": "algebra", "algebra": {"presentation": {"vertices": ["v"], "arrows": [{"name": "x", "source": "v", "target": "v"}], "relations": [["x", "x"]]}}}"#;
        let Object::Algebra(a) = parse(text).unwrap() else { panic!("wrong kind") };
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn bad_input_is_a_parse_error() {
        assert!(matches!(parse("{"), Err(Error::Parse(_))));
        assert!(parse(r#"{"version": 2, "kind": "algebra", "algebra": "torus"}"#).is_err());
        assert!(matches!(
            parse(r#"{"version": 1, "kind": "algebra", "algebra": "sphere"}"#),
            Err(Error::UnknownName { .. })
        ));
    }
}
