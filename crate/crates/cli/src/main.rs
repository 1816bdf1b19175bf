use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use curvbound::construct::{
    build_fixture, build_jerrycan, AssemblyManifest, FixtureKind, JerrycanSpec, DEFAULT_RESOLUTION,
    DEFAULT_THINNESS,
};
use curvbound::mesh::{export, import, MeshError, MeshFormat, TriMesh};
use curvbound::planar::{certify_unit_disc, random_corpus, ArcSpline, DiscCertificate};
use curvbound::profile::{constants_table, eval_constants};
use curvbound::report::{builtin_expectations, verify_manifest, verify_mesh, VerifyOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

/// Area of the unit disc minus the planar certification tolerance.
const AREA_TOL: f64 = 1e-6;
const INRADIUS_TOL: f64 = 1e-3;

#[derive(Parser)]
#[command(
    name = "curvbound",
    version,
    about = "Closed surfaces with bounded curvature: construction and verification"
)]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true, env = "CURVBOUND_THREADS")]
    threads: Option<usize>,
    /// Seed for every randomized sampling step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the jerrycan surface and write its mesh and manifest.
    Build(BuildArgs),
    /// Verify a mesh, a manifest or a built-in surface.
    Verify(VerifyArgs),
    /// Print the volume constants and their bounds.
    Volumes {
        #[arg(long)]
        json: bool,
    },
    /// Certify planar curves of curvature at most 1.
    Planar(PlanarArgs),
    /// Export a manifest as patch files, or as a stitched mesh.
    Export(ExportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Obj,
    Stl,
}

impl From<Format> for MeshFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Obj => MeshFormat::Obj,
            Format::Stl => MeshFormat::StlBinary,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    Jerrycan,
    Sphere,
    Torus,
    Genus2,
}

impl Builtin {
    fn name(self) -> &'static str {
        match self {
            Builtin::Jerrycan => "jerrycan",
            Builtin::Sphere => "sphere",
            Builtin::Torus => "torus",
            Builtin::Genus2 => "genus2",
        }
    }
}

#[derive(Args)]
struct Shape {
    /// Width of the thin chambers.
    #[arg(long, default_value_t = DEFAULT_THINNESS)]
    thinness: f64,
    /// Cells around the axis.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: usize,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    shape: Shape,
    #[arg(long, default_value = "jerrycan.obj")]
    output: PathBuf,
    /// Mesh format; defaults to the output extension, else obj.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Manifest path (default: next to the mesh, `.manifest.json`).
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// OBJ or STL mesh, or a manifest JSON written by `build`.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    #[arg(long, default_value_t = 1.0)]
    curvature_bound: f64,
    #[arg(long, default_value_t = 64)]
    sdf_resolution: usize,
    #[command(flatten)]
    shape: Shape,
    /// Print the JSON report instead of the text summary.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct PlanarArgs {
    /// Curve JSON: `{"edges": [...]}` or a list of such curves.
    #[arg(conflicts_with = "random", required_unless_present = "random")]
    curve: Option<PathBuf>,
    /// Certify this many random curves instead.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExportArgs {
    /// Manifest JSON written by `build`.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    manifest: Option<PathBuf>,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    #[command(flatten)]
    shape: Shape,
    /// A directory for patch files, or a `.obj`/`.stl` path for one mesh.
    #[arg(long)]
    output: PathBuf,
}

fn exit_code(error: &anyhow::Error) -> u8 {
    for cause in error.chain() {
        if cause.is::<std::io::Error>() {
            return EXIT_IO;
        }
        if let Some(MeshError::Io(_)) = cause.downcast_ref::<MeshError>() {
            return EXIT_IO;
        }
    }
    EXIT_USAGE
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn builtin_manifest(b: Builtin, shape: &Shape) -> Result<AssemblyManifest> {
    let m = match b {
        Builtin::Jerrycan => build_jerrycan(&JerrycanSpec::new(shape.thinness, shape.resolution))?,
        Builtin::Sphere => build_fixture(FixtureKind::Sphere, shape.resolution)?,
        Builtin::Torus => build_fixture(FixtureKind::Torus, shape.resolution)?,
        Builtin::Genus2 => build_fixture(FixtureKind::Genus2, shape.resolution)?,
    };
    Ok(m)
}

fn load_manifest(path: &Path) -> Result<AssemblyManifest> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| anyhow!("malformed manifest {}: {e}", path.display()))
}

fn mesh_format(path: &Path) -> Result<MeshFormat> {
    MeshFormat::from_path(path).ok_or_else(|| anyhow!("unknown mesh extension: {}", path.display()))
}

fn stitched(m: &AssemblyManifest) -> Result<TriMesh> {
    Ok(m.tessellate()?.mesh)
}

fn cmd_build(args: &BuildArgs) -> Result<u8> {
    let format = match args.format {
        Some(f) => f.into(),
        None => MeshFormat::from_path(&args.output).unwrap_or(MeshFormat::Obj),
    };
    let m = build_jerrycan(&JerrycanSpec::new(
        args.shape.thinness,
        args.shape.resolution,
    ))?;
    let mesh = stitched(&m)?;
    export(&mesh, &args.output, format)?;
    let manifest = args
        .manifest
        .clone()
        .unwrap_or_else(|| args.output.with_extension("manifest.json"));
    write(&manifest, &serde_json::to_string_pretty(&m)?)?;
    println!(
        "wrote {} ({} vertices, {} faces) and {}",
        args.output.display(),
        mesh.vertices.len(),
        mesh.triangles.len(),
        manifest.display()
    );
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8> {
    let opts = VerifyOptions {
        curvature_bound: args.curvature_bound,
        sdf_resolution: args.sdf_resolution,
        ..Default::default()
    };
    let report = match (&args.input, args.builtin) {
        (_, Some(b)) => {
            let m = builtin_manifest(b, &args.shape)?;
            verify_manifest(
                &format!("builtin:{}", b.name()),
                &m,
                &builtin_expectations(b.name()),
                &opts,
            )?
        }
        (Some(path), None) => {
            let label = path.display().to_string();
            if path.extension().is_some_and(|e| e == "json") {
                let m = load_manifest(path)?;
                let expect = builtin_expectations(&m.name);
                verify_manifest(&label, &m, &expect, &opts)?
            } else {
                let mesh = import(path, mesh_format(path)?)?;
                verify_mesh(&label, &mesh, &opts)?
            }
        }
        (None, None) => bail!("one of --input or --builtin is required"),
    };
    let json = report.to_json();
    if let Some(p) = &args.report {
        write(p, &json)?;
    }
    if args.json {
        println!("{json}");
    } else {
        print!("{}", report.to_text());
    }
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}

fn cmd_volumes(json: bool) -> Result<u8> {
    let rows = constants_table();
    let k = eval_constants();
    let pass = rows.iter().all(|r| r.pass);
    if json {
        let out = serde_json::json!({
            "constants": k,
            "rows": rows,
            "ratio": k.ratio(),
            "pass": pass,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!(
            "{:<10} {:>14} {:>14} {:>10} {:>10}  result",
            "name", "closed form", "reconstructed", "|diff|", "bound"
        );
        for r in &rows {
            let rec = r.reconstructed.map_or("-".into(), |v| format!("{v:.9}"));
            let diff = r.difference.map_or("-".into(), |v| format!("{v:.1e}"));
            let bound = r.bound.map_or("-".into(), |v| format!("{v:.6}"));
            println!(
                "{:<10} {:>14.9} {:>14} {:>10} {:>10}  {}",
                r.name,
                r.closed_form,
                rec,
                diff,
                bound,
                if r.pass { "pass" } else { "FAIL" }
            );
        }
        println!("ratio total / unit ball = {:.6}", k.ratio());
    }
    Ok(if pass { 0 } else { EXIT_FAIL })
}

fn parse_curves(text: &str) -> Result<Vec<ArcSpline>> {
    if let Ok(many) = serde_json::from_str::<Vec<ArcSpline>>(text) {
        return Ok(many);
    }
    serde_json::from_str::<ArcSpline>(text)
        .map(|c| vec![c])
        .map_err(|e| anyhow!("malformed curve JSON: {e}"))
}

fn cmd_planar(args: &PlanarArgs, seed: u64) -> Result<u8> {
    let curves = match (&args.curve, args.random) {
        (_, Some(n)) => random_corpus(&mut ChaCha8Rng::seed_from_u64(seed), n),
        (Some(path), None) => parse_curves(&read_to_string(path)?)?,
        (None, None) => bail!("a curve file or --random is required"),
    };
    let certs: Vec<DiscCertificate> = curves
        .iter()
        .enumerate()
        .map(|(i, c)| certify_unit_disc(c).with_context(|| format!("curve {i}")))
        .collect::<Result<_>>()?;
    let area_bound = std::f64::consts::PI - AREA_TOL;
    let inradius_bound = 1.0 - INRADIUS_TOL;
    let ok = |c: &DiscCertificate| c.area >= area_bound && c.inradius >= inradius_bound;
    let pass = certs.iter().all(ok);
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(
                &serde_json::json!({ "certificates": certs, "pass": pass })
            )?
        );
    } else {
        for (i, (curve, c)) in curves.iter().zip(&certs).enumerate() {
            println!(
                "curve {i:>3}  edges {:>2}  {}  area {:.9}  inradius {:.6} at ({:.4}, {:.4})  {}",
                curve.edges.len(),
                if curve.is_convex() {
                    "convex   "
                } else {
                    "nonconvex"
                },
                c.area,
                c.inradius,
                c.center[0],
                c.center[1],
                if ok(c) { "pass" } else { "FAIL" }
            );
        }
    }
    Ok(if pass { 0 } else { EXIT_FAIL })
}

fn cmd_export(args: &ExportArgs) -> Result<u8> {
    let m = match (&args.manifest, args.builtin) {
        (_, Some(b)) => builtin_manifest(b, &args.shape)?,
        (Some(path), None) => load_manifest(path)?,
        (None, None) => bail!("one of --manifest or --builtin is required"),
    };
    if let Some(format) = MeshFormat::from_path(&args.output) {
        let mesh = stitched(&m)?;
        export(&mesh, &args.output, format)?;
        println!(
            "wrote {} ({} faces)",
            args.output.display(),
            mesh.triangles.len()
        );
        return Ok(0);
    }
    let dir = &args.output;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (i, p) in m.patches.iter().enumerate() {
        let file = dir.join(format!("patch-{i:03}.json"));
        write(&file, &serde_json::to_string_pretty(p)?)?;
    }
    write(
        &dir.join("seams.json"),
        &serde_json::to_string_pretty(&m.seams)?,
    )?;
    println!(
        "wrote {} patches and seams.json to {}",
        m.patches.len(),
        dir.display()
    );
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| anyhow!("configuring the thread pool: {e}"))?;
    }
    match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Volumes { json } => cmd_volumes(*json),
        Command::Planar(a) => cmd_planar(a, cli.seed),
        Command::Export(a) => cmd_export(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
