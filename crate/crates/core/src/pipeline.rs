//! End-to-end scene processing with per-stage timings.

use std::time::Instant;

use crate::cloud::{OrganizedCloud, UnorganizedCloud};
use crate::config::{InputKind, PipelineConfig};
use crate::fastga::{find_dominant_normals, GaussianAccumulator, Peak, UnwrappedImage};
use crate::geometry::Vec3;
use crate::mesh::{mesh_from_opc, triangulate_unorganized, HalfEdgeMesh};
use crate::postprocess::{postprocess_all, PlanarPolygon};
use crate::segmentation::{extract_planes_and_polygons, PlanarSegment, SegmentationParams};
use crate::smoothing::{bilateral_filter_opc, laplacian_filter_opc};
use crate::{Error, Result};

pub const STAGE_LAPLACIAN: &str = "laplacian";
pub const STAGE_MESH: &str = "mesh";
pub const STAGE_BILATERAL: &str = "bilateral";
pub const STAGE_FASTGA: &str = "fastga";
pub const STAGE_SEGMENTATION: &str = "segmentation";
pub const STAGE_POSTPROCESS: &str = "postprocess";

#[derive(Debug, Clone)]
pub enum SceneInput {
    Unorganized(UnorganizedCloud),
    Organized(OrganizedCloud),
    Mesh(HalfEdgeMesh),
}

impl SceneInput {
    pub fn kind(&self) -> InputKind {
        match self {
            SceneInput::Unorganized(_) => InputKind::Unorganized,
            SceneInput::Organized(_) => InputKind::Organized,
            SceneInput::Mesh(_) => InputKind::Mesh,
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            SceneInput::Unorganized(c) => c.is_empty(),
            SceneInput::Organized(c) => c.valid_count() == 0,
            SceneInput::Mesh(m) => m.num_triangles() == 0,
        }
    }
}

impl From<crate::io::Cloud> for SceneInput {
    fn from(c: crate::io::Cloud) -> Self {
        match c {
            crate::io::Cloud::Unorganized(c) => SceneInput::Unorganized(c),
            crate::io::Cloud::Organized(c) => SceneInput::Organized(c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageTiming {
    pub stage: &'static str,
    pub ms: f64,
}

#[derive(Debug, Clone, Default)]
pub struct SceneResult {
    /// The mesh the segments index into.
    pub mesh: Option<HalfEdgeMesh>,
    pub dominant_normals: Vec<Vec3>,
    /// Peaks and histogram image when normals were estimated.
    pub peaks: Vec<Peak>,
    pub image: Option<UnwrappedImage>,
    pub segments: Vec<PlanarSegment>,
    /// Polygons straight from extraction, one per segment that closed.
    pub raw_polygons: Vec<PlanarPolygon>,
    /// Segments whose boundary could not be walked.
    pub polygon_failures: usize,
    /// Polygons after simplification, buffering and filtering.
    pub polygons: Vec<PlanarPolygon>,
    /// Stages in execution order.
    pub timings: Vec<StageTiming>,
}

impl SceneResult {
    pub fn timing(&self, stage: &str) -> Option<f64> {
        self.timings.iter().find(|t| t.stage == stage).map(|t| t.ms)
    }

    pub fn total_ms(&self) -> f64 {
        self.timings.iter().map(|t| t.ms).sum()
    }
}

fn timed<T>(timings: &mut Vec<StageTiming>, stage: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f().map_err(|e| e.in_stage(stage))?;
    timings.push(StageTiming {
        stage,
        ms: start.elapsed().as_secs_f64() * 1e3,
    });
    Ok(out)
}

fn thread_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {threads} worker threads: {e}")))
}

/// Runs the whole pipeline on `input` inside a pool of
/// `config.runtime.threads` workers.
pub fn run_scene(config: &PipelineConfig, input: SceneInput) -> Result<SceneResult> {
    check(config, &input)?;
    if input.is_empty() {
        return Ok(SceneResult::default());
    }
    thread_pool(config.runtime.threads)?.install(|| run_stages(config, input))
}

/// Runs the front end and normal estimation only. Fixed normals in the
/// configuration are ignored.
pub fn run_peaks(config: &PipelineConfig, input: SceneInput) -> Result<SceneResult> {
    check(config, &input)?;
    if input.is_empty() {
        return Ok(SceneResult::default());
    }
    thread_pool(config.runtime.threads)?.install(|| {
        let mut r = SceneResult::default();
        let mesh = front_end(config, input, &mut r.timings)?;
        estimate(config, &mesh, &mut r)?;
        r.mesh = Some(mesh);
        Ok(r)
    })
}

fn check(config: &PipelineConfig, input: &SceneInput) -> Result<()> {
    config.validate()?;
    if input.kind() != config.input.kind {
        return Err(Error::InvalidParameter(format!(
            "configuration expects {} input, got {}",
            config.input.kind,
            input.kind()
        )));
    }
    Ok(())
}

fn front_end(config: &PipelineConfig, input: SceneInput, timings: &mut Vec<StageTiming>) -> Result<HalfEdgeMesh> {
    Ok(match input {
        SceneInput::Unorganized(cloud) => timed(timings, STAGE_MESH, || triangulate_unorganized(&cloud))?,
        SceneInput::Mesh(mesh) => mesh,
        SceneInput::Organized(mut opc) => {
            if let Some(p) = &config.laplacian {
                opc = timed(timings, STAGE_LAPLACIAN, || laplacian_filter_opc(&opc, p))?;
            }
            let mut mesh = timed(timings, STAGE_MESH, || mesh_from_opc(&opc))?;
            if let Some(p) = &config.bilateral {
                let trimap = mesh.trimap.as_ref().expect("organized meshes carry a triangle map");
                mesh.normals = timed(timings, STAGE_BILATERAL, || bilateral_filter_opc(&opc, trimap, p))?;
            }
            mesh
        }
    })
}

fn estimate(config: &PipelineConfig, mesh: &HalfEdgeMesh, r: &mut SceneResult) -> Result<()> {
    let (peaks, image) = timed(&mut r.timings, STAGE_FASTGA, || {
        let mut ga = GaussianAccumulator::new(config.fastga.level)?;
        find_dominant_normals(&mut ga, &mesh.normals, &config.fastga)
    })?;
    r.dominant_normals = peaks.iter().map(|p| p.normal).collect();
    r.image = Some(image);
    r.peaks = peaks;
    Ok(())
}

fn run_stages(config: &PipelineConfig, input: SceneInput) -> Result<SceneResult> {
    let mut r = SceneResult::default();
    let mut mesh = front_end(config, input, &mut r.timings)?;
    match config.fixed_normals() {
        Some(ns) => r.dominant_normals = ns,
        None => estimate(config, &mesh, &mut r)?,
    }

    let groups = timed(&mut r.timings, STAGE_SEGMENTATION, || {
        extract_planes_and_polygons(&mesh, &r.dominant_normals, &config.segmentation)
    })?;
    for g in groups {
        for (segment, polygon) in g.segments.into_iter().zip(g.polygons) {
            match polygon {
                Ok(p) => r.raw_polygons.push(PlanarPolygon::from_polygon(&p, &mesh.points)),
                Err(e) => {
                    log::warn!("segment of {} triangles has no polygon: {e}", segment.triangles.len());
                    r.polygon_failures += 1;
                }
            }
            r.segments.push(segment);
        }
    }

    r.polygons = timed(&mut r.timings, STAGE_POSTPROCESS, || postprocess_all(&r.raw_polygons, &config.postprocess))?;
    mesh.trimap = None;
    r.mesh = Some(mesh);
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageStats {
    pub stage: &'static str,
    pub mean_ms: f64,
    pub std_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub normals: usize,
    pub threads: usize,
    pub ms: f64,
    /// Time with one thread divided by this row's time.
    pub speedup: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub repetitions: usize,
    pub stages: Vec<StageStats>,
    pub total: StageStats,
    pub sweep: Vec<SweepRow>,
}

impl std::fmt::Display for BenchReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{:<14} {:>10} {:>10}   ({} runs)", "stage", "mean ms", "std ms", self.repetitions)?;
        for s in self.stages.iter().chain(std::iter::once(&self.total)) {
            writeln!(f, "{:<14} {:>10.3} {:>10.3}", s.stage, s.mean_ms, s.std_ms)?;
        }
        if !self.sweep.is_empty() {
            writeln!(f, "\n{:<8} {:>8} {:>10} {:>8}", "normals", "threads", "ms", "speedup")?;
            for row in &self.sweep {
                writeln!(f, "{:<8} {:>8} {:>10.3} {:>8.2}", row.normals, row.threads, row.ms, row.speedup)?;
            }
        }
        Ok(())
    }
}

fn stats(stage: &'static str, samples: &[f64]) -> StageStats {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n;
    StageStats {
        stage,
        mean_ms: mean,
        std_ms: var.sqrt(),
    }
}

/// Times `repetitions` full runs, then re-runs segmentation and polygon
/// extraction with 1 to `max_threads` workers (powers of two) for the first
/// 1 to 4 dominant normals.
pub fn bench(config: &PipelineConfig, input: &SceneInput, repetitions: usize, max_threads: usize) -> Result<BenchReport> {
    if repetitions == 0 {
        return Err(Error::InvalidParameter("repetitions must be at least 1".into()));
    }
    let mut runs = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        runs.push(run_scene(config, input.clone())?);
    }
    let last = runs.last().expect("at least one run");
    let stages = last
        .timings
        .iter()
        .map(|t| {
            let samples: Vec<f64> = runs.iter().filter_map(|r| r.timing(t.stage)).collect();
            stats(t.stage, &samples)
        })
        .collect();
    let totals: Vec<f64> = runs.iter().map(SceneResult::total_ms).collect();

    let mut sweep = Vec::new();
    if let Some(mesh) = &last.mesh {
        let mut counts: Vec<usize> = (1..=last.dominant_normals.len().min(4)).collect();
        counts.dedup();
        for k in counts {
            let normals = &last.dominant_normals[..k];
            let mut base = None;
            let mut t = 1;
            while t <= max_threads.max(1) {
                let ms = time_segmentation(mesh, normals, &config.segmentation, t, repetitions)?;
                let one = *base.get_or_insert(ms);
                sweep.push(SweepRow {
                    normals: k,
                    threads: t,
                    ms,
                    speedup: one / ms,
                });
                t *= 2;
            }
        }
    }
    Ok(BenchReport {
        repetitions,
        stages,
        total: stats("total", &totals),
        sweep,
    })
}

fn time_segmentation(
    mesh: &HalfEdgeMesh,
    normals: &[Vec3],
    params: &SegmentationParams,
    threads: usize,
    repetitions: usize,
) -> Result<f64> {
    let pool = thread_pool(threads)?;
    let mut total = 0.0;
    for _ in 0..repetitions {
        let start = Instant::now();
        pool.install(|| extract_planes_and_polygons(mesh, normals, params))?;
        total += start.elapsed().as_secs_f64() * 1e3;
    }
    Ok(total / repetitions as f64)
}
