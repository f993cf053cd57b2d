//! Acceptance gate: one pass/fail line per criterion. Run with
//! `cargo test -p twk-cli --test acceptance`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use twk_core::boxtensor::{
    box_dd, box_morphism, box_type_d, box_typewriter, elementary_module, identity_da, split_pair_name, DABimodule,
};
use twk_core::cmdfunctor::{cmd_homotopy, cmd_morphism, cmd_object, uncmd};
use twk_core::ddcoeff::{check_generalized, dd_check, semi_extend, DDBimodule};
use twk_core::format::{parse, to_json, Morphism, Object};
use twk_core::kernel::{build_algebra, strand_algebra_torus, torus_algebra, torus_iso, torus_presentation, PathAlgebra};
use twk_core::models::{bsd_infty, cfdd_identity, model_m, verify_m_is_cfdd, FlipModule};
use twk_core::random::{
    random_closed_map, random_closed_morphism, random_composable, random_dd, random_flip_module, random_map,
    random_partially_extendable, random_structure, random_typewriter, random_typewriter_homotopy,
    random_typewriter_morphism, seeded,
};
use twk_core::typed::{
    check_structure, compose_morphisms, cone, homotopy_check, idempotent_slice, identity_morphism,
    is_contractible, CoeffMap, TypeDMorphism, TypeDStructure,
};
use twk_core::typewriter::{
    check_typewriter, compose_typewriter_morphisms, homotopy_target, is_partially_extendable, star, BlockMap,
    Typewriter, TypewriterMorphism,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn algebras() -> [Arc<PathAlgebra>; 3] {
    [PathAlgebra::trivial(), torus_algebra(), strand_algebra_torus()]
}

// Independent oracle for the torus algebra: words in f, g, h composed in
// application order, with f, h: i0 → i1 and g: i1 → i0, killed by the
// substrings "gf" and "hg".
fn torus_words() -> BTreeSet<String> {
    let ends = |c: char| match c {
        'f' | 'h' => (0, 1),
        _ => (1, 0),
    };
    let mut out = BTreeSet::new();
    let mut frontier: Vec<String> = vec![String::new()];
    for _ in 0..6 {
        let mut next = Vec::new();
        for w in &frontier {
            for c in ['f', 'g', 'h'] {
                if let Some(last) = w.chars().last() {
                    if ends(last).1 != ends(c).0 {
                        continue;
                    }
                }
                let v = format!("{w}{c}");
                if v.contains("gf") || v.contains("hg") {
                    continue;
                }
                out.insert(v.clone());
                next.push(v);
            }
        }
        frontier = next;
    }
    out
}

fn criterion_1() -> Outcome {
    let alg = build_algebra(&torus_presentation(), 16).map_err(|e| e.to_string())?;
    ensure(alg.dim() == 8, || format!("dimension {} instead of 8", alg.dim()))?;
    let words = torus_words();
    let paths: BTreeSet<String> = alg
        .basis()
        .iter()
        .enumerate()
        .filter(|&(b, _)| !alg.is_idempotent(b))
        .map(|(b, _)| alg.basis_name(b).to_string())
        .collect();
    ensure(paths == words, || format!("paths {paths:?} but oracle gives {words:?}"))?;
    let mut checked = 0;
    for x in &words {
        for y in &words {
            let expected = format!("{x}{y}");
            let expected = words.contains(&expected).then_some(expected);
            let got = alg
                .mul_basis(alg.lookup(x).unwrap(), alg.lookup(y).unwrap())
                .map(|b| alg.basis_name(b).to_string());
            ensure(got == expected, || format!("{x}·{y} = {got:?}, oracle {expected:?}"))?;
            checked += 1;
        }
    }
    let iso = torus_iso();
    ensure(iso.is_bijective(), || "torus_iso is not bijective".into())?;
    ensure(iso.multiplicativity_failures().is_empty(), || "torus_iso is not multiplicative".into())?;
    let strands = strand_algebra_torus();
    let nonzero: BTreeMap<(&str, &str), &str> = [
        (("rho1", "rho2"), "rho12"),
        (("rho2", "rho3"), "rho23"),
        (("rho12", "rho3"), "rho123"),
        (("rho1", "rho23"), "rho123"),
    ]
    .into_iter()
    .collect();
    let rhos = ["rho1", "rho2", "rho3", "rho12", "rho23", "rho123"];
    for x in rhos {
        for y in rhos {
            let got = strands
                .mul_basis(strands.lookup(x).unwrap(), strands.lookup(y).unwrap())
                .map(|b| strands.basis_name(b));
            let expected = nonzero.get(&(x, y)).copied();
            ensure(got == expected, || format!("{x}·{y} = {got:?}, expected {expected:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("8 basis elements, {checked} products match"))
}

fn criterion_2() -> Outcome {
    ensure(verify_m_is_cfdd(), || "verify_m_is_cfdd returned false".into())?;
    let dd = cmd_object(&model_m()).map_err(|e| e.to_string())?;
    let renamed = dd
        .renamed(|n| match n {
            "a" => "x".into(),
            "b" => "y".into(),
            other => other.into(),
        })
        .map_err(|e| e.to_string())?;
    let id = cfdd_identity();
    ensure(renamed.canonical() == id.canonical(), || {
        format!("{:?} != {:?}", renamed.arrow_names(), id.arrow_names())
    })?;
    Ok(format!("{} arrows agree under a→x, b→y", id.arrow_names().len()))
}

fn criterion_3() -> Outcome {
    let m = model_m();
    let dd = cmd_object(&m).map_err(|e| e.to_string())?;
    for (name, r) in [("cfdd_identity", dd_check(&cfdd_identity())), ("cmd(m)", dd_check(&dd))] {
        ensure(r.is_valid(), || format!("{name}: {:?}", r.violations))?;
    }
    for (name, c) in [("cone(D_f)", m.cone_f()), ("cone(D_h)", m.cone_h()), ("cone(D_CR)", m.cone_cr())] {
        let r = check_structure(&c);
        ensure(r.is_valid(), || format!("{name}: {:?}", r.violations))?;
    }
    Ok("2 bimodules and 3 cones pass".into())
}

fn typewriter_pool(rng: &mut ChaCha8Rng, count: usize) -> Vec<Typewriter> {
    let mut pool = vec![model_m()];
    while pool.len() < count {
        let alg = algebras()[pool.len() % 3].clone();
        let m = match pool.len() % 4 {
            0 => random_partially_extendable(rng, 3),
            _ => random_typewriter(rng, &alg, 3),
        };
        pool.push(m);
    }
    pool
}

// A typewriter built from a cone: M₀ = cone(D_f), M₁ = cone(D_h), both maps
// zero and the carriage return the zero map. Names in M₁ are primed.
fn cone_typewriter(m: &Typewriter) -> Typewriter {
    let m1 = m.cone_h().renamed(|n| format!("{n}'")).expect("distinct names");
    Typewriter::zero(m.cone_f(), m1).expect("cones share an algebra")
}

fn criterion_4() -> Outcome {
    let mut rng = seeded(4);
    let mut objects = typewriter_pool(&mut rng, 160);
    let extra: Vec<Typewriter> = objects.iter().take(40).map(cone_typewriter).collect();
    objects.extend(extra);
    for (k, m) in objects.iter().enumerate() {
        let dd = cmd_object(m).map_err(|e| format!("instance {k}: {e}"))?;
        let back = uncmd(&dd).map_err(|e| format!("instance {k}: {e}"))?;
        ensure(&back == m, || format!("typewriter instance {k} does not round trip"))?;
    }
    let mut bimodules = vec![cfdd_identity()];
    while bimodules.len() < 100 {
        let left = algebras()[bimodules.len() % 3].clone();
        let len = rng.gen_range(1..=4);
        bimodules.push(random_dd(&mut rng, &left, len));
    }
    for (k, d) in bimodules.iter().enumerate() {
        let back = cmd_object(&uncmd(d).map_err(|e| format!("bimodule {k}: {e}"))?)
            .map_err(|e| format!("bimodule {k}: {e}"))?;
        ensure(back.canonical() == d.canonical(), || format!("bimodule {k} does not round trip"))?;
    }
    Ok(format!("{} typewriters and {} DD bimodules round trip", objects.len(), bimodules.len()))
}

fn criterion_5() -> Outcome {
    let mut rng = seeded(5);
    let mut pairs = 0;
    let mut nonzero = 0;
    while pairs < 120 {
        let alg = algebras()[pairs % 3].clone();
        let a = random_typewriter(&mut rng, &alg, 3);
        let b = random_typewriter(&mut rng, &alg, 3);
        let c = random_typewriter(&mut rng, &alg, 3);
        let t = random_typewriter_morphism(&mut rng, &a, &b);
        let u = random_typewriter_morphism(&mut rng, &b, &c);
        let composite = compose_typewriter_morphisms(&t, &u).map_err(|e| e.to_string())?;
        let lhs = cmd_morphism(&composite).map_err(|e| e.to_string())?;
        let rhs = compose_morphisms(
            &cmd_morphism(&t).map_err(|e| e.to_string())?,
            &cmd_morphism(&u).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("pair {pairs}: cmd(T′∘T) differs from cmd(T′)∘cmd(T)"))?;
        let id = cmd_morphism(&TypewriterMorphism::identity(&a)).map_err(|e| e.to_string())?;
        ensure(id == identity_morphism(&cmd_object(&a).unwrap().as_type_d().clone()), || {
            format!("pair {pairs}: identity not preserved")
        })?;
        if !lhs.is_zero() {
            nonzero += 1;
        }
        pairs += 1;
    }
    Ok(format!("{pairs} composable pairs ({nonzero} with nonzero composite)"))
}

fn criterion_6() -> Outcome {
    let mut rng = seeded(6);
    let mut homotopies = 0;
    while homotopies < 120 {
        let alg = algebras()[homotopies % 3].clone();
        let a = random_typewriter(&mut rng, &alg, 3);
        let b = random_typewriter(&mut rng, &alg, 3);
        let t = random_typewriter_morphism(&mut rng, &a, &b);
        let h = random_typewriter_homotopy(&mut rng, &a, &b);
        let t2 = homotopy_target(&t, &h).map_err(|e| e.to_string())?;
        let ok = homotopy_check(
            &cmd_homotopy(&h).map_err(|e| e.to_string())?,
            &cmd_morphism(&t).map_err(|e| e.to_string())?,
            &cmd_morphism(&t2).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        ensure(ok, || format!("homotopy {homotopies} fails the DD homotopy check"))?;
        homotopies += 1;
    }
    let mut equivalences = 0;
    while equivalences < 100 {
        let alg = algebras()[equivalences % 3].clone();
        let a = random_typewriter(&mut rng, &alg, 3);
        let h = random_typewriter_homotopy(&mut rng, &a, &a);
        let t = homotopy_target(&TypewriterMorphism::identity(&a), &h).map_err(|e| e.to_string())?;
        let phi = cmd_morphism(&t).map_err(|e| e.to_string())?;
        let c = cone(&phi).map_err(|e| e.to_string())?;
        ensure(is_contractible(&c), || format!("equivalence {equivalences}: cone not contractible"))?;
        equivalences += 1;
    }
    Ok(format!("{homotopies} homotopies transported, {equivalences} equivalences with contractible cones"))
}

fn criterion_7() -> Outcome {
    let trivial = PathAlgebra::trivial();
    let single = |n: &str| TypeDStructure::from_names(trivial.clone(), &[(n, "e")], &[]).unwrap();
    let id = CoeffMap::from_triples([(0, 0, 0)]);
    let m = Typewriter::new(
        single("a"),
        single("b"),
        id.clone(),
        id.clone(),
        BlockMap::from_labels(CoeffMap::new(), id.clone(), id, CoeffMap::new()),
    )
    .map_err(|e| e.to_string())?;
    ensure(check_typewriter(&m).is_valid(), || "identity typewriter is invalid".into())?;
    let dd = cmd_object(&m).map_err(|e| e.to_string())?;
    let g = semi_extend(&dd)
        .map_err(|e| e.to_string())?
        .ok_or("no solution for the identity typewriter")?;
    let r = check_generalized(&g);
    ensure(r.is_valid(), || format!("solution fails: {:?}", r.violations))?;
    let none = semi_extend(&cmd_object(&model_m()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(none.is_none(), || "model m unexpectedly semi-extends".into())?;
    Ok("identity typewriter solved and checked, model m has no solution".into())
}

fn criterion_8() -> Outcome {
    ensure(!is_partially_extendable(&model_m()).map_err(|e| e.to_string())?, || {
        "model m reported partially extendable".into()
    })?;
    let mut rng = seeded(8);
    let mut count = 0;
    while count < 100 {
        let alg = algebras()[count % 3].clone();
        let len = rng.gen_range(1..=3);
        let m0 = random_structure(&mut rng, &alg, "a", len);
        let len = rng.gen_range(1..=3);
        let m1 = random_structure(&mut rng, &alg, "b", len);
        let d_f = random_closed_map(&mut rng, &m0, &m1);
        let k = random_map(&mut rng, &m0, &m1, 0.4);
        let dk = TypeDMorphism::new(m0.clone(), m1.clone(), k.clone()).map_err(|e| e.to_string())?;
        let d_h = d_f.add(&dk.differential());
        let cr = BlockMap {
            b01: k,
            ..BlockMap::identity(&m0, &m1)
        };
        let m = Typewriter::new(m0, m1, d_f, d_h, cr).map_err(|e| e.to_string())?;
        ensure(check_typewriter(&m).is_valid(), || format!("instance {count} is invalid"))?;
        ensure(is_partially_extendable(&m).map_err(|e| e.to_string())?, || {
            format!("instance {count} with invertible D_CR is not partially extendable")
        })?;
        count += 1;
    }
    Ok(format!("model m rejected, {count} typewriters with invertible D_CR accepted"))
}

fn strip(n: &TypeDStructure) -> TypeDStructure {
    n.renamed(|s| split_pair_name(s).expect("pair name").1.to_string())
        .expect("distinct names")
}

fn strip_dd(m: &DDBimodule) -> DDBimodule {
    m.renamed(|s| split_pair_name(s).expect("pair name").1.to_string())
        .expect("distinct names")
}

fn criterion_9() -> Outcome {
    let mut rng = seeded(9);
    let das: Vec<DABimodule> = algebras().iter().map(identity_da).collect();
    let mut structures = 0;
    let mut morphisms = 0;
    for k in 0..60 {
        let alg = algebras()[k % 3].clone();
        let len = rng.gen_range(0..=4);
        let n = random_structure(&mut rng, &alg, "x", len);
        let boxed = box_type_d(&das[k % 3], &n).map_err(|e| e.to_string())?;
        ensure(strip(&boxed) == n, || format!("structure {k}: identity ⊠ N differs from N"))?;
        structures += 1;
        let len = rng.gen_range(0..=4);
        let n2 = random_structure(&mut rng, &alg, "y", len);
        let phi = random_closed_morphism(&mut rng, &n, &n2);
        let boxed = box_morphism(&das[k % 3], &phi).map_err(|e| e.to_string())?;
        ensure(boxed.map() == phi.map(), || format!("morphism {k}: identity ⊠ φ differs from φ"))?;
        morphisms += 1;
    }
    let id = cfdd_identity();
    let boxed = box_dd(&identity_da(id.left()), &id).map_err(|e| e.to_string())?;
    ensure(strip_dd(&boxed) == id, || "identity ⊠ CFDD(I) differs".into())?;
    let m = model_m();
    let boxed = box_typewriter(&identity_da(m.algebra()), &m).map_err(|e| e.to_string())?;
    let stripped = Typewriter::new(
        strip(boxed.m0()),
        strip(boxed.m1()),
        boxed.d_f().clone(),
        boxed.d_h().clone(),
        boxed.d_cr().clone(),
    )
    .map_err(|e| e.to_string())?;
    ensure(stripped == m, || "identity ⊠ m differs from m".into())?;
    let mut slices = 0;
    while slices < 120 {
        let alg = [torus_algebra(), strand_algebra_torus()][slices % 2].clone();
        let len = rng.gen_range(0..=5);
        let n = random_structure(&mut rng, &alg, "x", len);
        for i in 0..alg.vertex_count() {
            let e = elementary_module(&alg, i).map_err(|e| e.to_string())?;
            let boxed = box_type_d(&e, &n).map_err(|e| e.to_string())?;
            let slice = idempotent_slice(&n, i).map_err(|e| e.to_string())?;
            ensure(strip(&boxed) == slice, || format!("slice {slices} at vertex {i} disagrees"))?;
        }
        slices += 1;
    }
    Ok(format!(
        "{structures} structures, {morphisms} morphisms, CFDD(I) and m fixed; {slices} slice agreements"
    ))
}

fn criterion_10() -> Outcome {
    let mut rng = seeded(10);
    let fixtures = std::env::temp_dir().join("twk-star-counterexamples");
    let mut failures = Vec::new();
    let mut count = 0;
    let pool = [PathAlgebra::trivial(), strand_algebra_torus()];
    while count < 240 {
        let m = random_typewriter(&mut rng, &pool[count % 2], 3);
        let n = random_composable(&mut rng, &m, 3);
        let s = star(&m, &n).map_err(|e| e.to_string())?;
        if !s.report.is_valid() {
            std::fs::create_dir_all(&fixtures).map_err(|e| e.to_string())?;
            for (tag, t) in [("left", &m), ("right", &n)] {
                let path = fixtures.join(format!("star-{count}-{tag}.json"));
                let text = to_json(&Object::Typewriter(t.clone())).map_err(|e| e.to_string())?;
                std::fs::write(&path, text).map_err(|e| e.to_string())?;
            }
            failures.push(count);
        }
        count += 1;
    }
    ensure(failures.is_empty(), || {
        format!(
            "{} of {count} star products invalid; counterexamples in {}",
            failures.len(),
            fixtures.display()
        )
    })?;
    Ok(format!("{count} star products pass check_typewriter"))
}

fn criterion_11() -> Outcome {
    let mut rng = seeded(11);
    let mut count = 0;
    while count < 150 {
        let f = random_flip_module(&mut rng, 4);
        let n = bsd_infty(&f).map_err(|e| e.to_string())?;
        let r = check_structure(&n);
        ensure(r.is_valid(), || format!("flip module {count}: {:?}", r.violations))?;
        count += 1;
    }
    for len in 0..=5 {
        let c = random_structure(&mut rng, &PathAlgebra::trivial(), "x", len);
        let f = FlipModule::new(c.clone(), CoeffMap::new(), CoeffMap::new(), BlockMap::identity(&c, &c))
            .map_err(|e| e.to_string())?;
        let n = bsd_infty(&f).map_err(|e| e.to_string())?;
        ensure(n.len() == 2 * len, || format!("|M| = {len} gave {} generators", n.len()))?;
        ensure(check_structure(&n).is_valid(), || format!("|M| = {len} output invalid"))?;
    }
    Ok(format!("{count} random flip modules valid; U = V = 0 gives 2|M| generators"))
}

fn write_fixture(dir: &Path, name: &str, o: &Object) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, to_json(o).expect("serializable fixture")).expect("writable temp dir");
    path
}

fn fixture_set(dir: &Path) -> BTreeMap<&'static str, PathBuf> {
    let mut rng = seeded(12);
    let m = model_m();
    let a = random_typewriter(&mut rng, &strand_algebra_torus(), 3);
    let b = random_typewriter(&mut rng, &strand_algebra_torus(), 3);
    let t = random_typewriter_morphism(&mut rng, &a, &b);
    let h = random_typewriter_homotopy(&mut rng, &a, &b);
    let n = random_structure(&mut rng, &torus_algebra(), "x", 4);
    let phi = random_closed_morphism(&mut rng, &n, &n);
    let next = random_composable(&mut rng, &a, 3);
    let flip = random_flip_module(&mut rng, 3);
    let dd = cmd_object(&a).unwrap();
    let dd_phi = cmd_morphism(&t).unwrap();
    let entries: Vec<(&'static str, Object)> = vec![
        ("m.json", Object::Typewriter(m)),
        ("cfdd.json", Object::Dd(cfdd_identity())),
        ("torus.json", Object::Algebra(torus_algebra())),
        ("a.json", Object::Typewriter(a.clone())),
        ("next.json", Object::Typewriter(next)),
        ("t.json", Object::Morphism(Morphism::Typewriter(t.clone()))),
        ("h.json", Object::Homotopy(Morphism::Typewriter(h))),
        ("n.json", Object::Typed(n)),
        ("phi.json", Object::Morphism(Morphism::Typed(phi))),
        ("dd.json", Object::Dd(dd.clone())),
        (
            "dd_phi.json",
            Object::Morphism(Morphism::Dd {
                source: dd,
                target: cmd_object(&b).unwrap(),
                map: dd_phi,
            }),
        ),
        ("id_torus.json", Object::Da(identity_da(&torus_algebra()))),
        ("id_strands.json", Object::Da(identity_da(&strand_algebra_torus()))),
        ("flip.json", Object::Flip(flip)),
    ];
    entries
        .into_iter()
        .map(|(name, o)| (name, write_fixture(dir, name, &o)))
        .collect()
}

fn criterion_12() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let f = fixture_set(dir.path());
    let p = |k: &str| f[k].to_str().unwrap().to_string();
    let mut runs: Vec<Vec<String>> = Vec::new();
    for k in f.keys() {
        runs.push(vec!["verify".into(), p(k)]);
    }
    for k in ["m.json", "a.json", "t.json", "h.json"] {
        runs.push(vec!["cmd".into(), p(k)]);
    }
    for k in ["cfdd.json", "dd.json", "dd_phi.json"] {
        runs.push(vec!["uncmd".into(), p(k)]);
    }
    for of in ["f", "h", "cr"] {
        runs.push(vec!["cone".into(), p("a.json"), "--of".into(), of.into()]);
    }
    runs.push(vec!["cone".into(), p("phi.json")]);
    runs.push(vec!["cone".into(), p("dd_phi.json")]);
    for k in ["n.json", "dd.json", "cfdd.json"] {
        runs.push(vec!["reduce".into(), p(k)]);
    }
    runs.push(vec!["equiv".into(), p("cfdd.json"), "models:cfdd-id".into()]);
    runs.push(vec!["equiv".into(), p("dd.json"), p("cfdd.json")]);
    runs.push(vec!["equiv".into(), p("n.json"), p("n.json")]);
    for k in ["n.json", "phi.json"] {
        runs.push(vec!["box".into(), p("id_torus.json"), p(k)]);
    }
    for k in ["m.json", "a.json", "cfdd.json", "dd_phi.json"] {
        runs.push(vec!["box".into(), p("id_strands.json"), p(k)]);
    }
    runs.push(vec!["star".into(), p("a.json"), p("next.json")]);
    for k in ["m.json", "cfdd.json", "dd.json"] {
        runs.push(vec!["semiextend".into(), p(k)]);
    }
    runs.push(vec!["flip".into(), p("flip.json")]);
    runs.push(vec!["flip".into(), p("flip.json"), "--typewriter".into()]);
    runs.push(vec!["models".into()]);
    for name in ["m", "cfdd-id", "torus", "strands-torus"] {
        runs.push(vec!["models".into(), name.into()]);
    }
    let bin = env!("CARGO_BIN_EXE_twk");
    let mut reparsed = 0;
    for args in &runs {
        let first = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        let second = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        let code = first.status.code();
        ensure(matches!(code, Some(0 | 1)), || {
            format!("twk {}: exit {code:?}: {}", args.join(" "), String::from_utf8_lossy(&first.stderr))
        })?;
        ensure(first.stdout == second.stdout && code == second.status.code(), || {
            format!("twk {} is not reproducible", args.join(" "))
        })?;
        let text = String::from_utf8_lossy(&first.stdout);
        if text.contains("\"version\"") {
            parse(&text).map_err(|e| format!("twk {}: output does not re-parse: {e}", args.join(" ")))?;
            reparsed += 1;
        }
    }
    Ok(format!("{} invocations byte-identical, {reparsed} outputs re-parse", runs.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("torus algebras", criterion_1),
        ("model identification", criterion_2),
        ("structure soundness", criterion_3),
        ("cmd equivalence on objects", criterion_4),
        ("cmd functoriality", criterion_5),
        ("homotopy transport", criterion_6),
        ("semi-extension solver", criterion_7),
        ("partial extendability", criterion_8),
        ("box tensor unit laws", criterion_9),
        ("star product", criterion_10),
        ("flip pipeline", criterion_11),
        ("determinism", criterion_12),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.2}s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.2}s): {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
