use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyplane::config::{InputKind, PipelineConfig};
use polyplane::io::{self, CloudFormat};
use polyplane::pipeline::{self, SceneInput, SceneResult};
use polyplane::{Error, Result};

/// Planar segments and polygons from point clouds and meshes.
#[derive(Parser)]
#[command(name = "polyplane", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract polygons from an unorganized cloud whose planes face +z.
    ExtractUnorganized(ExtractArgs),
    /// Extract polygons from an organized (grid) cloud.
    ExtractOrganized(ExtractArgs),
    /// Extract polygons from a triangle mesh (PLY or OBJ).
    ExtractMesh(ExtractArgs),
    /// Estimate dominant plane normals only.
    Peaks(PeaksArgs),
    /// Time every stage and sweep thread counts for segmentation.
    Bench(BenchArgs),
}

#[derive(Args)]
struct Common {
    /// Input file.
    input: PathBuf,
    /// Pipeline configuration (TOML). Defaults fit the input kind.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads, overriding the configuration. 0 uses every core.
    #[arg(long)]
    threads: Option<usize>,
    /// Cloud file format when the extension does not tell.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    common: Common,
    /// Polygon document to write; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write the unwrapped normal histogram as a graymap.
    #[arg(long)]
    emit_image: Option<PathBuf>,
}

#[derive(Args)]
struct PeaksArgs {
    #[command(flatten)]
    common: Common,
    /// Peak table to write; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    emit_image: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 10)]
    repetitions: usize,
    /// Largest thread count of the sweep.
    #[arg(long, default_value_t = 8)]
    max_threads: usize,
    /// Report to write; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Xyz,
    Ply,
    Grid,
}

impl From<Format> for CloudFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Xyz => CloudFormat::Xyz,
            Format::Ply => CloudFormat::Ply,
            Format::Grid => CloudFormat::Grid,
        }
    }
}

const STAGE_INPUT: &str = "input";
const STAGE_OUTPUT: &str = "output";

fn load_config(common: &Common, kind: Option<InputKind>) -> Result<Option<PipelineConfig>> {
    let mut config = match &common.config {
        Some(path) => PipelineConfig::load(path)?,
        None => match kind {
            Some(kind) => PipelineConfig::new(kind),
            None => return Ok(None),
        },
    };
    if let Some(kind) = kind {
        if config.input.kind != kind {
            return Err(Error::InvalidParameter(format!(
                "configuration is for {} input but the command reads {kind} input",
                config.input.kind
            )));
        }
    }
    if let Some(t) = common.threads {
        config.runtime.threads = t;
    }
    Ok(Some(config))
}

fn is_mesh_file(path: &Path) -> Result<bool> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    Ok(match ext.as_str() {
        "obj" => true,
        "ply" => !io::parse_ply(&std::fs::read(path)?)?.faces.is_empty(),
        _ => false,
    })
}

fn load_input(common: &Common, kind: Option<InputKind>) -> Result<SceneInput> {
    let path = &common.input;
    let want_mesh = match kind {
        Some(k) => k == InputKind::Mesh,
        None => common.format.is_none() && is_mesh_file(path)?,
    };
    if want_mesh {
        return Ok(SceneInput::Mesh(io::load_mesh(path)?));
    }
    let input = SceneInput::from(io::load_cloud(path, common.format.map(Into::into))?);
    match kind {
        Some(k) if k != input.kind() => Err(Error::InvalidParameter(format!(
            "{} holds {} data, expected {k}",
            path.display(),
            input.kind()
        ))),
        _ => Ok(input),
    }
}

/// Config and input for commands that accept any input kind.
fn resolve(common: &Common, kind: Option<InputKind>) -> Result<(PipelineConfig, SceneInput)> {
    let config = load_config(common, kind).map_err(|e| e.in_stage("config"))?;
    let kind = kind.or(config.as_ref().map(|c| c.input.kind));
    let input = load_input(common, kind).map_err(|e| e.in_stage(STAGE_INPUT))?;
    let config = match config {
        Some(c) => c,
        None => {
            let mut c = PipelineConfig::new(input.kind());
            if let Some(t) = common.threads {
                c.runtime.threads = t;
            }
            c
        }
    };
    Ok((config, input))
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn emit_image(path: Option<&Path>, result: &SceneResult) -> Result<()> {
    let (Some(path), Some(img)) = (path, &result.image) else {
        if path.is_some() {
            log::warn!("no histogram image: dominant normals were fixed in the configuration");
        }
        return Ok(());
    };
    io::write_pgm(path, img.rows, img.cols, &img.to_bytes())
}

fn summary(result: &SceneResult) {
    log::info!(
        "{} dominant normals, {} segments, {} polygons ({} before filtering, {} failed)",
        result.dominant_normals.len(),
        result.segments.len(),
        result.polygons.len(),
        result.raw_polygons.len(),
        result.polygon_failures
    );
    for t in &result.timings {
        log::info!("{:<14} {:>10.3} ms", t.stage, t.ms);
    }
}

fn extract(args: &ExtractArgs, kind: InputKind) -> Result<()> {
    let (config, input) = resolve(&args.common, Some(kind))?;
    let result = pipeline::run_scene(&config, input)?;
    summary(&result);
    emit(args.output.as_deref(), io::format_polygons(&result.polygons).as_bytes()).map_err(|e| e.in_stage(STAGE_OUTPUT))?;
    emit_image(args.emit_image.as_deref(), &result).map_err(|e| e.in_stage(STAGE_OUTPUT))
}

fn peaks(args: &PeaksArgs) -> Result<()> {
    let (config, input) = resolve(&args.common, None)?;
    let result = pipeline::run_peaks(&config, input)?;
    let mut table = format!("{:>12} {:>12} {:>12} {:>10}\n", "nx", "ny", "nz", "weight");
    for p in &result.peaks {
        table += &format!("{:>12.6} {:>12.6} {:>12.6} {:>10.3}\n", p.normal.x, p.normal.y, p.normal.z, p.weight);
    }
    emit(args.output.as_deref(), table.as_bytes()).map_err(|e| e.in_stage(STAGE_OUTPUT))?;
    emit_image(args.emit_image.as_deref(), &result).map_err(|e| e.in_stage(STAGE_OUTPUT))
}

fn bench(args: &BenchArgs) -> Result<()> {
    let (config, input) = resolve(&args.common, None)?;
    let report = pipeline::bench(&config, &input, args.repetitions, args.max_threads)?;
    emit(args.output.as_deref(), report.to_string().as_bytes()).map_err(|e| e.in_stage(STAGE_OUTPUT))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::ExtractUnorganized(a) => extract(a, InputKind::Unorganized),
        Command::ExtractOrganized(a) => extract(a, InputKind::Organized),
        Command::ExtractMesh(a) => extract(a, InputKind::Mesh),
        Command::Peaks(a) => peaks(a),
        Command::Bench(a) => bench(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
