//! `projlift` command line. Every subcommand prints a JSON run report.
//!
//! Exit codes: 0 positive verdict or success, 1 negative verdict, 2 bad
//! arguments or malformed input, 3 constructor error, 4 search cap exceeded.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use projlift::classify::{classify, BundleOptions, ClassifyOptions, Predicate};
use projlift::examples::{ExampleError, ExampleSpec};
use projlift::geometry::{
    check_closure_laws, check_geometry_axioms, check_morphism, quotient, FiniteGeometry,
    MorphismCheckOptions,
};
use projlift::gf::{GaloisField, GfError};
use projlift::io::{load_geometry, GeometryFile, IoError, MapFile, ResultFile, SemilinearFile};
use projlift::projective::{
    check_projective_axioms, quotient_iso, LinearSubspace, ProjectiveCheckOptions,
};
use projlift::reconstruct::{
    brute_force_oracle, certify_side_conditions, reconstruct, DeclaredKind, MorphismInstance,
    ReconstructError, DEFAULT_ORACLE_CAP,
};

#[derive(Parser)]
#[command(
    name = "projlift",
    version,
    about = "Finite projective geometry and semilinear map reconstruction"
)]
struct Cli {
    /// Enumeration cap: sampling threshold for the checkers, search space cap for the oracle.
    #[arg(long, global = true)]
    limit: Option<u64>,
    /// Seed for every sampler.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Include witness details in classification reports.
    #[arg(long, global = true)]
    witnesses: bool,
    /// Output file: the geometry, quotient or reconstruction; the report otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axioms {
    /// G1 to G4.
    G,
    /// P1 to P3, generation by lines and the dimension formula.
    P,
    /// Extensive, monotone, idempotent closure.
    Closure,
    /// The point map of --map is a morphism.
    Morphism,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a named example geometry.
    MakeExample {
        #[arg(long)]
        name: String,
        #[arg(long)]
        field: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        subfield: Option<String>,
        #[arg(long)]
        remove: Option<usize>,
    },
    /// Check axioms of a geometry, or the morphism property of a map.
    Check {
        #[arg(long, value_enum, default_value = "g")]
        axioms: Axioms,
        #[arg(long)]
        geometry: PathBuf,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Evaluate classification predicates.
    Classify {
        #[arg(long)]
        geometry: PathBuf,
        /// Expected root space, e.g. pg(3,3).
        #[arg(long)]
        ambient: Option<String>,
        #[arg(long = "predicate", value_delimiter = ',')]
        predicates: Vec<Predicate>,
    },
    /// Quotient of a geometry by the flat spanned by some of its points.
    Quotient {
        #[arg(long)]
        geometry: PathBuf,
        #[arg(long, value_delimiter = ',')]
        points: Vec<usize>,
    },
    /// Reconstruct the semilinear map behind a point map.
    Reconstruct {
        #[arg(long)]
        geometry: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value = "lp")]
        kind: DeclaredKind,
    },
    /// Enumerate every semilinear map inducing a point map and compare with the reconstruction.
    Oracle {
        #[arg(long)]
        geometry: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value = "lp")]
        kind: DeclaredKind,
    },
}

enum Failure {
    Input(String),
    Constructor(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Constructor(_) => 3,
            Failure::Cap(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Constructor(m) | Failure::Cap(m) => m,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Outcome {
    result: Value,
    positive: bool,
    /// Written to `--out` instead of the report.
    artifact: Option<String>,
}

struct Ctx {
    limit: Option<u64>,
    seed: Option<u64>,
    witnesses: bool,
    inputs: BTreeMap<String, String>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes =
            fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        self.inputs.insert(
            path.display().to_string(),
            hex::encode(Sha256::digest(&bytes)),
        );
        String::from_utf8(bytes)
            .map_err(|_| Failure::Input(format!("{}: not UTF-8", path.display())))
    }

    fn geometry(&mut self, path: &Path) -> Result<FiniteGeometry, Failure> {
        let text = self.read(path)?;
        load_geometry(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn map_file(&mut self, path: &Path) -> Result<MapFile, Failure> {
        let text = self.read(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::Input(format!("{}: {}", path.display(), IoError::from(e))))
    }

    fn projective_opts(&self) -> ProjectiveCheckOptions {
        let d = ProjectiveCheckOptions::default();
        ProjectiveCheckOptions {
            limit: self.limit.unwrap_or(d.limit),
            seed: self.seed.unwrap_or(d.seed),
        }
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn example_failure(e: ExampleError) -> Failure {
    match e {
        ExampleError::UnknownName(_)
        | ExampleError::BadParams(_)
        | ExampleError::Gf(GfError::BadDesignator(_)) => Failure::Input(e.to_string()),
        _ => Failure::Constructor(e.to_string()),
    }
}

fn make_example(spec: ExampleSpec) -> Result<Outcome, Failure> {
    let g = spec.build().map_err(example_failure)?;
    Ok(Outcome {
        result: json!({ "label": g.label(), "points": g.len() }),
        positive: true,
        artifact: Some(GeometryFile::from_geometry(&g).to_json()),
    })
}

fn check(
    ctx: &mut Ctx,
    axioms: Axioms,
    geometry: &Path,
    map: Option<&Path>,
) -> Result<Outcome, Failure> {
    let g = ctx.geometry(geometry)?;
    let (result, positive) = match axioms {
        Axioms::G => {
            let r = check_geometry_axioms(&g);
            (to_value(&r), r.all_hold())
        }
        Axioms::P => {
            let r = check_projective_axioms(&g, ctx.projective_opts());
            (to_value(&r), r.is_projective)
        }
        Axioms::Closure => {
            let samples = ctx.limit.unwrap_or(20_000) as usize;
            let r = check_closure_laws(&g, samples, ctx.seed.unwrap_or(0xC105));
            (to_value(&r), r.all_hold())
        }
        Axioms::Morphism => {
            let path = map.ok_or_else(|| Failure::Input("--axioms morphism needs --map".into()))?;
            let (target, pm) = ctx.map_file(path)?.point_map(&g)?;
            let d = MorphismCheckOptions::default();
            let opts = MorphismCheckOptions {
                subset_cap: ctx.limit.unwrap_or(d.subset_cap),
                seed: ctx.seed.unwrap_or(d.seed),
            };
            let opt: Vec<Option<usize>> = pm.into_iter().map(Some).collect();
            let r = check_morphism(&g, &target, &opt, opts)
                .map_err(|e| Failure::Input(e.to_string()))?;
            (to_value(&r), r.is_morphism())
        }
    };
    Ok(Outcome {
        result: json!({ "geometry": g.label(), "points": g.len(), "report": result }),
        positive,
        artifact: None,
    })
}

/// `pg(n,q)`.
fn parse_ambient(s: &str) -> Result<(usize, &'static GaloisField), Failure> {
    let bad = || Failure::Input(format!("malformed ambient {s:?}, expected pg(n,q)"));
    let inner = s
        .trim()
        .strip_prefix("pg(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (n, q) = inner.split_once(',').ok_or_else(bad)?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    let field = GaloisField::parse(&format!("gf({})", q.trim()))
        .map_err(|e| Failure::Input(e.to_string()))?;
    Ok((n, field))
}

fn classify_cmd(
    ctx: &mut Ctx,
    geometry: &Path,
    ambient: Option<&str>,
    predicates: &[Predicate],
) -> Result<Outcome, Failure> {
    let g = ctx.geometry(geometry)?;
    if let Some(a) = ambient {
        let (n, field) = parse_ambient(a)?;
        let (p, _) = g.root_embedding();
        let ok = p
            .linear_rep()
            .is_some_and(|r| r.ambient_dim() == n && r.field() == field);
        if !ok {
            return Err(Failure::Input(format!("geometry does not live in {a}")));
        }
    }
    let preds = if predicates.is_empty() {
        Predicate::ALL.to_vec()
    } else {
        predicates.to_vec()
    };
    let bd = BundleOptions::default();
    let opts = ClassifyOptions {
        projective: ctx.projective_opts(),
        bundle: BundleOptions {
            limit: ctx.limit.unwrap_or(bd.limit),
            seed: ctx.seed.unwrap_or(bd.seed),
            ..bd
        },
    };
    let mut r = classify(&g, &preds, &opts);
    let positive = r
        .verdicts
        .values()
        .all(|v| v.as_bool() == Some(true) || v.as_str() == Some("not-applicable"));
    if !ctx.witnesses {
        r.details.clear();
    }
    Ok(Outcome {
        result: to_value(&r),
        positive,
        artifact: None,
    })
}

fn quotient_cmd(ctx: &mut Ctx, geometry: &Path, points: &[usize]) -> Result<Outcome, Failure> {
    let g = ctx.geometry(geometry)?;
    if let Some(&bad) = points.iter().find(|&&x| x >= g.len()) {
        return Err(Failure::Input(format!(
            "point {bad} outside a geometry of {} points",
            g.len()
        )));
    }
    let e = g.closure_of(points);
    let (q, _) = quotient(&g, &e).map_err(|e| Failure::Input(e.to_string()))?;
    let data = q.quotient_data().expect("quotient geometry");
    let classes: Vec<Vec<usize>> = (0..q.len()).map(|c| data.class(c).to_vec()).collect();
    let full = g.linear_rep().filter(|r| {
        let qq = r.field().order() as usize;
        g.len() == (qq.pow(r.ambient_dim() as u32 + 1) - 1) / (qq - 1)
    });
    let artifact = match full {
        Some(rep) if !e.is_empty() => {
            let rows: Vec<Vec<u8>> = e.iter().map(|x| rep.coords(x).to_vec()).collect();
            let w = LinearSubspace::span(rep.field(), rep.ambient_dim() + 1, &rows);
            let iso = quotient_iso(&g, &w).map_err(|e| Failure::Input(e.to_string()))?;
            GeometryFile::from_geometry(&iso.pg)
        }
        _ => GeometryFile::from_geometry(&q),
    };
    Ok(Outcome {
        result: json!({
            "geometry": g.label(),
            "exceptional": e.to_vec(),
            "classes": classes.len(),
            "dim": q.dim(),
            "members": classes,
        }),
        positive: true,
        artifact: Some(artifact.to_json()),
    })
}

/// Loads the instance; a map that is not a morphism is a negative result.
fn instance(
    ctx: &mut Ctx,
    geometry: &Path,
    map: &Path,
    kind: DeclaredKind,
) -> Result<Result<MorphismInstance, Value>, Failure> {
    let g = ctx.geometry(geometry)?;
    match ctx.map_file(map)?.instance(&g, kind) {
        Ok(i) => Ok(Ok(i)),
        Err(IoError::Reconstruct(e)) => Ok(Err(json!({ "error": e.to_string() }))),
        Err(e) => Err(e.into()),
    }
}

fn reconstruct_cmd(
    ctx: &mut Ctx,
    geometry: &Path,
    map: &Path,
    kind: DeclaredKind,
) -> Result<Outcome, Failure> {
    let inst = match instance(ctx, geometry, map, kind)? {
        Ok(i) => i,
        Err(v) => {
            return Ok(Outcome {
                result: v,
                positive: false,
                artifact: None,
            })
        }
    };
    match reconstruct(&inst) {
        Ok(r) => {
            let file = ResultFile::new(&r);
            let side =
                certify_side_conditions(&r, &inst).map_err(|e| Failure::Input(e.to_string()))?;
            Ok(Outcome {
                result: json!({
                    "kind": kind,
                    "result": to_value(&file),
                    "side_conditions": to_value(&side),
                }),
                positive: true,
                artifact: Some(serde_json::to_string_pretty(&file).expect("serializes")),
            })
        }
        Err(e) => Ok(Outcome {
            result: json!({ "kind": kind, "error": e.to_string() }),
            positive: false,
            artifact: None,
        }),
    }
}

fn oracle_cmd(
    ctx: &mut Ctx,
    geometry: &Path,
    map: &Path,
    kind: DeclaredKind,
) -> Result<Outcome, Failure> {
    let inst = match instance(ctx, geometry, map, kind)? {
        Ok(i) => i,
        Err(v) => {
            return Ok(Outcome {
                result: v,
                positive: false,
                artifact: None,
            })
        }
    };
    let cap = ctx.limit.unwrap_or(DEFAULT_ORACLE_CAP);
    let found = match brute_force_oracle(&inst, cap) {
        Ok(f) => f,
        Err(e @ ReconstructError::CapExceeded { .. }) => return Err(Failure::Cap(e.to_string())),
        Err(e) => return Err(Failure::Input(e.to_string())),
    };
    let rec = reconstruct(&inst);
    let equivalent = match &rec {
        Ok(r) => found.len() == 1 && found[0] == r.phi,
        Err(_) => found.is_empty(),
    };
    let reconstruction = match &rec {
        Ok(r) => to_value(&SemilinearFile::from_map(&r.phi)),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let candidates: Vec<SemilinearFile> = found.iter().map(SemilinearFile::from_map).collect();
    Ok(Outcome {
        result: json!({
            "kind": kind,
            "cap": cap,
            "candidates": candidates,
            "reconstruction": reconstruction,
            "equivalent": equivalent,
        }),
        positive: equivalent,
        artifact: None,
    })
}

/// First sampling seed recorded anywhere in a result.
fn sampling_seed(v: &Value) -> Option<u64> {
    match v {
        Value::Object(m) => {
            if m.get("exhaustive") == Some(&Value::Bool(false)) {
                if let Some(s) = m.get("seed").and_then(Value::as_u64) {
                    return Some(s);
                }
            }
            m.values().find_map(sampling_seed)
        }
        Value::Array(a) => a.iter().find_map(sampling_seed),
        _ => None,
    }
}

/// Ignores a closed stdout, as when piped into `head`.
fn print(text: &str) {
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn write_out(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, format!("{text}\n"))
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let mut ctx = Ctx {
        limit: cli.limit,
        seed: cli.seed,
        witnesses: cli.witnesses,
        inputs: BTreeMap::new(),
    };
    let is_make = matches!(cli.cmd, Cmd::MakeExample { .. });
    let outcome = match &cli.cmd {
        Cmd::MakeExample {
            name,
            field,
            dim,
            subfield,
            remove,
        } => make_example(ExampleSpec {
            name: name.clone(),
            field: field.clone(),
            dim: *dim,
            subfield: subfield.clone(),
            remove: *remove,
        }),
        Cmd::Check {
            axioms,
            geometry,
            map,
        } => check(&mut ctx, *axioms, geometry, map.as_deref()),
        Cmd::Classify {
            geometry,
            ambient,
            predicates,
        } => classify_cmd(&mut ctx, geometry, ambient.as_deref(), predicates),
        Cmd::Quotient { geometry, points } => quotient_cmd(&mut ctx, geometry, points),
        Cmd::Reconstruct {
            geometry,
            map,
            kind,
        } => reconstruct_cmd(&mut ctx, geometry, map, *kind),
        Cmd::Oracle {
            geometry,
            map,
            kind,
        } => oracle_cmd(&mut ctx, geometry, map, *kind),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message());
            return ExitCode::from(f.code());
        }
    };

    // a bare make-example prints the geometry itself
    if is_make && cli.out.is_none() {
        print(&outcome.artifact.expect("geometry"));
        return ExitCode::SUCCESS;
    }
    let mut report = serde_json::Map::new();
    report.insert("command".into(), json!(echo));
    report.insert("inputs".into(), json!(ctx.inputs));
    if let Some(s) = sampling_seed(&outcome.result) {
        report.insert("seed".into(), json!(s));
    }
    report.insert("ok".into(), json!(outcome.positive));
    report.insert("result".into(), outcome.result);
    report.insert(
        "elapsed_ms".into(),
        json!(start.elapsed().as_millis() as u64),
    );
    let text = serde_json::to_string_pretty(&Value::Object(report)).expect("serializes");
    if let Some(out) = &cli.out {
        let body = outcome.artifact.as_deref().unwrap_or(&text);
        if let Err(f) = write_out(out, body) {
            eprintln!("error: {}", f.message());
            return ExitCode::from(f.code());
        }
    }
    print(&text);
    if outcome.positive {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
