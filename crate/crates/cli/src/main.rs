use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use twk_core::boxtensor::{check_da, default_cap, BoxTensor};
use twk_core::cmdfunctor::{cmd_homotopy, cmd_morphism, cmd_object, uncmd, uncmd_morphism};
use twk_core::ddcoeff::{check_generalized, dd_check, semi_extend, DDBimodule};
use twk_core::format::{parse, to_json, Morphism, Object};
use twk_core::kernel::PathAlgebra;
use twk_core::models::{bsd_infty, cfdd_identity, check_flip, div_functor, model_m};
use twk_core::typed::{check_structure, cone, equivalent, reduce, Equivalence, TypeDStructure};
use twk_core::typewriter::{check_typewriter, check_typewriter_morphism, star};
use twk_core::{Error, Report};

#[derive(Parser)]
#[command(name = "twk", version, about = "Typewriters, DD bimodules and box tensor products over F2")]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structure relations of any object.
    Verify { input: String },
    /// Typewriter (or typewriter morphism/homotopy) to DD bimodule.
    Cmd { input: String },
    /// DD bimodule (or DD morphism) back to a typewriter.
    Uncmd { input: String },
    /// Mapping cone of a morphism, or of one map of a typewriter.
    Cone {
        input: String,
        #[arg(long, value_enum, default_value_t = ConeOf::Cr)]
        of: ConeOf,
    },
    /// Cancel every arrow with an invertible coefficient.
    Reduce { input: String },
    /// Decide homotopy equivalence of two structures or bimodules.
    Equiv { left: String, right: String },
    /// Box tensor product of a DA bimodule with another object.
    Box {
        da: String,
        input: String,
        /// Path-length cap for the expansion (default: TWK_CAP or 64).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Star product of two composable typewriters.
    Star { left: String, right: String },
    /// Solve for generalized coefficient maps of a DD bimodule.
    Semiextend { input: String },
    /// Type D structure over the torus algebra of a flip module.
    Flip {
        input: String,
        /// Emit the intermediate typewriter instead.
        #[arg(long)]
        typewriter: bool,
    },
    /// Print a built-in object: m, cfdd-id, torus, strands-torus.
    Models { name: Option<String> },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConeOf {
    F,
    H,
    Cr,
}

const MODEL_NAMES: [&str; 4] = ["m", "cfdd-id", "torus", "strands-torus"];

enum Failure {
    Usage(String),
    Checked(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonTerminatingBoxTensor { .. } => Failure::Checked(e.to_string()),
            Error::ConeIdentificationFailed(_) => Failure::Internal(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Result of a subcommand: text to emit and whether the check passed.
struct Outcome {
    text: String,
    ok: bool,
    note: Option<String>,
}

impl Outcome {
    fn object(o: &Object) -> Result<Self, Failure> {
        Ok(Self {
            text: to_json(o)?,
            ok: true,
            note: None,
        })
    }

    fn report(kind: &str, r: &Report) -> Self {
        let value = json!({ "kind": kind, "valid": r.is_valid(), "violations": r.violations });
        Self {
            text: pretty(&value),
            ok: r.is_valid(),
            note: None,
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn model(name: &str) -> Result<Object, Failure> {
    Ok(match name {
        "m" => Object::Typewriter(model_m()),
        "cfdd-id" => Object::Dd(cfdd_identity()),
        "torus" => Object::Algebra(PathAlgebra::torus()),
        "strands-torus" => Object::Algebra(PathAlgebra::strands_torus()),
        other => {
            return Err(Failure::Usage(format!(
                "unknown model {other:?}; expected one of {}",
                MODEL_NAMES.join(", ")
            )))
        }
    })
}

fn load(input: &str) -> Result<Object, Failure> {
    if let Some(name) = input.strip_prefix("models:") {
        return model(name);
    }
    let text = if input == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(input).map_err(|e| Failure::Usage(format!("{input}: {e}")))?
    };
    Ok(parse(&text)?)
}

fn wrong_kind(what: &str, o: &Object) -> Failure {
    Failure::Usage(format!("expected {what}, found a {} file", o.kind()))
}

fn verify(o: &Object) -> Result<Outcome, Failure> {
    let report = match o {
        Object::Algebra(a) => {
            let mut r = Report::new();
            for (x, y, z) in a.associativity_failures() {
                r.push(format!("associativity fails on basis elements {x}, {y}, {z}"));
            }
            if !a.is_unital() {
                r.push("sum of idempotents is not a unit");
            }
            r
        }
        Object::Typed(n) => check_structure(n),
        Object::Dd(m) => dd_check(m),
        Object::Da(p) => check_da(p),
        Object::Typewriter(m) => check_typewriter(m),
        Object::Morphism(Morphism::Typed(phi)) | Object::Morphism(Morphism::Dd { map: phi, .. }) => {
            phi.closedness_report()
        }
        Object::Morphism(Morphism::Typewriter(t)) => check_typewriter_morphism(t),
        Object::Homotopy(_) => Report::new(),
        Object::Flip(f) => check_flip(f),
        Object::Generalized(g) => check_generalized(g),
    };
    Ok(Outcome::report(o.kind(), &report))
}

fn cmd(o: Object) -> Result<Outcome, Failure> {
    let out = match o {
        Object::Typewriter(m) => Object::Dd(cmd_object(&m)?),
        Object::Morphism(Morphism::Typewriter(t)) => Object::Morphism(Morphism::Dd {
            source: cmd_object(t.source())?,
            target: cmd_object(t.target())?,
            map: cmd_morphism(&t)?,
        }),
        Object::Homotopy(Morphism::Typewriter(h)) => Object::Homotopy(Morphism::Dd {
            source: cmd_object(h.source())?,
            target: cmd_object(h.target())?,
            map: cmd_homotopy(&h)?,
        }),
        other => return Err(wrong_kind("a typewriter, typewriter morphism or homotopy", &other)),
    };
    Outcome::object(&out)
}

fn uncmd_any(o: Object) -> Result<Outcome, Failure> {
    let out = match o {
        Object::Dd(m) => Object::Typewriter(uncmd(&m)?),
        Object::Morphism(Morphism::Dd { source, target, map }) => {
            let (s, t) = (uncmd(&source)?, uncmd(&target)?);
            Object::Morphism(Morphism::Typewriter(uncmd_morphism(&s, &t, &map)?))
        }
        Object::Homotopy(Morphism::Dd { source, target, map }) => {
            let (s, t) = (uncmd(&source)?, uncmd(&target)?);
            Object::Homotopy(Morphism::Typewriter(uncmd_morphism(&s, &t, &map)?))
        }
        other => return Err(wrong_kind("a DD bimodule or DD morphism", &other)),
    };
    Outcome::object(&out)
}

fn cone_any(o: Object, of: ConeOf) -> Result<Outcome, Failure> {
    let out = match o {
        Object::Morphism(Morphism::Typed(phi)) => Object::Typed(cone(&phi)?),
        Object::Morphism(Morphism::Dd { source, map, .. }) => Object::Dd(DDBimodule::from_flat(
            source.left().clone(),
            source.right().clone(),
            cone(&map)?,
        )?),
        Object::Typewriter(m) => Object::Typed(match of {
            ConeOf::F => m.cone_f(),
            ConeOf::H => m.cone_h(),
            ConeOf::Cr => m.cone_cr(),
        }),
        other => return Err(wrong_kind("a morphism or typewriter", &other)),
    };
    Outcome::object(&out)
}

fn reduce_any(o: Object) -> Result<Outcome, Failure> {
    let out = match o {
        Object::Typed(n) => Object::Typed(reduce(&n).reduced),
        Object::Dd(m) => Object::Dd(DDBimodule::from_flat(
            m.left().clone(),
            m.right().clone(),
            reduce(m.as_type_d()).reduced,
        )?),
        other => return Err(wrong_kind("a type D structure or DD bimodule", &other)),
    };
    Outcome::object(&out)
}

fn as_structure(o: &Object) -> Result<TypeDStructure, Failure> {
    match o {
        Object::Typed(n) => Ok(n.clone()),
        Object::Dd(m) => Ok(m.as_type_d().clone()),
        other => Err(wrong_kind("a type D structure or DD bimodule", other)),
    }
}

fn equiv(a: Object, b: Object) -> Result<Outcome, Failure> {
    if a.kind() != b.kind() {
        return Err(Failure::Usage(format!("cannot compare a {} with a {}", a.kind(), b.kind())));
    }
    let (x, y) = (as_structure(&a)?, as_structure(&b)?);
    let result = equivalent(&x, &y)?;
    let (status, detail) = match &result {
        Equivalence::Relabelling { mapping } => {
            let reduced = reduce(&x).reduced;
            let target = reduce(&y).reduced;
            let pairs: serde_json::Map<String, serde_json::Value> = mapping
                .iter()
                .enumerate()
                .map(|(i, &j)| (reduced.generator(i).name.clone(), json!(target.generator(j).name)))
                .collect();
            ("relabelling", json!(pairs))
        }
        Equivalence::Isomorphism(_) => ("isomorphism", json!(null)),
        Equivalence::NotEquivalent => ("not-equivalent", json!(null)),
        Equivalence::Undecided { closed_dim } => ("undecided", json!({ "closed_dim": closed_dim })),
    };
    let value = json!({ "equivalent": result.is_equivalent(), "status": status, "witness": detail });
    Ok(Outcome {
        text: pretty(&value),
        ok: result.is_equivalent(),
        note: matches!(result, Equivalence::Undecided { .. })
            .then(|| "closed morphism space too large to search; equivalence undecided".to_string()),
    })
}

fn box_any(da: Object, x: Object, cap: Option<usize>) -> Result<Outcome, Failure> {
    let Object::Da(p) = da else {
        return Err(wrong_kind("a DA bimodule", &da));
    };
    let bt = BoxTensor::new(cap.unwrap_or_else(default_cap));
    let out = match x {
        Object::Typed(n) => Object::Typed(bt.type_d(&p, &n)?),
        Object::Dd(m) => Object::Dd(bt.dd(&p, &m)?),
        Object::Typewriter(m) => Object::Typewriter(bt.typewriter(&p, &m)?),
        Object::Morphism(Morphism::Typed(phi)) => Object::Morphism(Morphism::Typed(bt.morphism(&p, &phi)?)),
        Object::Morphism(Morphism::Dd { source, target, map }) => {
            let boxed = bt.dd_morphism(&p, &source, &target, &map)?;
            Object::Morphism(Morphism::Dd {
                source: bt.dd(&p, &source)?,
                target: bt.dd(&p, &target)?,
                map: boxed,
            })
        }
        other => return Err(wrong_kind("a structure, DD bimodule, typewriter or morphism", &other)),
    };
    Outcome::object(&out)
}

fn star_any(a: Object, b: Object) -> Result<Outcome, Failure> {
    let (Object::Typewriter(m), Object::Typewriter(n)) = (&a, &b) else {
        return Err(Failure::Usage("star takes two typewriters".into()));
    };
    let s = star(m, n)?;
    let mut out = Outcome::object(&Object::Typewriter(s.typewriter))?;
    if !s.report.is_valid() {
        out.ok = false;
        out.note = Some(format!("star product fails its checks: {}", s.report.violations.join("; ")));
    }
    Ok(out)
}

fn semiextend_any(o: Object) -> Result<Outcome, Failure> {
    let m = match o {
        Object::Dd(m) => m,
        Object::Typewriter(t) => cmd_object(&t)?,
        other => return Err(wrong_kind("a DD bimodule or typewriter", &other)),
    };
    match semi_extend(&m)? {
        Some(g) => Outcome::object(&Object::Generalized(g)),
        None => {
            let message = "no generalized coefficient system exists";
            Ok(Outcome {
                text: pretty(&json!({ "semi_extendable": false, "message": message })),
                ok: false,
                note: Some(message.into()),
            })
        }
    }
}

fn flip_any(o: Object, typewriter: bool) -> Result<Outcome, Failure> {
    let Object::Flip(f) = o else {
        return Err(wrong_kind("a flip module", &o));
    };
    if typewriter {
        Outcome::object(&Object::Typewriter(div_functor(&f)?))
    } else {
        Outcome::object(&Object::Typed(bsd_infty(&f)?))
    }
}

fn execute(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Verify { input } => verify(&load(&input)?),
        Command::Cmd { input } => cmd(load(&input)?),
        Command::Uncmd { input } => uncmd_any(load(&input)?),
        Command::Cone { input, of } => cone_any(load(&input)?, of),
        Command::Reduce { input } => reduce_any(load(&input)?),
        Command::Equiv { left, right } => equiv(load(&left)?, load(&right)?),
        Command::Box { da, input, cap } => box_any(load(&da)?, load(&input)?, cap),
        Command::Star { left, right } => star_any(load(&left)?, load(&right)?),
        Command::Semiextend { input } => semiextend_any(load(&input)?),
        Command::Flip { input, typewriter } => flip_any(load(&input)?, typewriter),
        Command::Models { name: Some(name) } => Outcome::object(&model(&name)?),
        Command::Models { name: None } => Ok(Outcome {
            text: pretty(&json!(MODEL_NAMES)),
            ok: true,
            note: None,
        }),
    }
}

fn emit(output: Option<&PathBuf>, text: &str) -> io::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    let result = std::panic::catch_unwind(move || execute(cli.command));
    let code = match result {
        Ok(Ok(outcome)) => match emit(output.as_ref(), &outcome.text) {
            Err(e) => {
                eprintln!("twk: {e}");
                2
            }
            Ok(()) => {
                if let Some(note) = &outcome.note {
                    eprintln!("twk: {note}");
                }
                if outcome.ok {
                    0
                } else {
                    1
                }
            }
        },
        Ok(Err(Failure::Usage(msg))) => {
            eprintln!("twk: {msg}");
            2
        }
        Ok(Err(Failure::Checked(msg))) => {
            eprintln!("twk: {msg}");
            1
        }
        Ok(Err(Failure::Internal(msg))) => {
            eprintln!("twk: internal error: {msg}");
            3
        }
        Err(_) => 3,
    };
    ExitCode::from(code)
}
