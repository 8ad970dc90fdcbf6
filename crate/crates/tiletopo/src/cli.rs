//! Subcommand dispatch: configuration in, reproducible artifacts out.
//!
//! Exit codes: 0 success (and all requested checks passed), 1 a
//! verification check failed, 2 usage, configuration, or resource errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::RunConfig;
use crate::criteria;
use crate::linalg::Scalar;
use crate::error::{Error, Result};
use crate::io::{prism_surface_mesh, rasterize, read_cloud, write_cloud, write_obj, write_pgm};
use crate::prism::{compose_h, prism_for_pair};
use crate::tile::{approximate, estimate_measure, tiling_overlap_check};
use crate::verify::{
    check_convergence, check_height_properties, check_injectivity, fmt_f64, VerificationReport,
};

#[derive(Parser)]
#[command(
    name = "tiletopo",
    about = "Self-affine tiles: construction, topology classification, and prism-deformation verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Obj,
    Pgm,
}

#[derive(Args)]
pub struct CommonArgs {
    /// Run configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override the configured seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cap the worker count (0 = all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory for artifacts (default: current directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Artifact format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Enumerate a level-n tile approximation and export the cloud.
    Approximate(CommonArgs),
    /// Closed-form topology verdict for the configured pair.
    Classify(CommonArgs),
    /// Run the prism deformation and export each stage.
    Iterate(CommonArgs),
    /// Run the verification harness; exits 1 if any check fails.
    Verify(CommonArgs),
    /// Convert an exported cloud between formats.
    Export {
        /// Cloud file to convert.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn load_config(common: &CommonArgs) -> Result<RunConfig> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Error::Usage("--config is required".into()))?;
    let text = fs::read_to_string(path)?;
    let mut cfg = RunConfig::parse(&text)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
        cfg.echo.push(("cli.seed".into(), seed.to_string()));
    }
    if let Some(threads) = common.threads {
        cfg.threads = threads;
        cfg.echo.push(("cli.threads".into(), threads.to_string()));
    }
    cfg.echo.push(("run.seed_effective".into(), cfg.seed.to_string()));
    Ok(cfg)
}

fn artifact_path(common: &CommonArgs, name: &str) -> Result<PathBuf> {
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    Ok(dir.join(name))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(bytes)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Exit code for an error: anything that is not a failed check is a
/// usage/configuration problem.
pub fn exit_code(err: &Error) -> i32 {
    let _ = err;
    2
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Classify(common) => {
            let cfg = load_config(&common)?;
            let d = cfg.p.len();
            let verdict =
                criteria::classify(&cfg.p[..d - 1], &cfg.s_exact(), cfg.p[d - 1])?;
            println!(
                "criterion={} classification={}",
                fmt_f64(verdict.criterion_value.to_f64()),
                verdict.classification
            );
            Ok(0)
        }
        Command::Approximate(common) => {
            let cfg = load_config(&common)?;
            let pair = cfg.pair_f64()?;
            let cloud = approximate(&pair, cfg.level, cfg.budget)?;
            match common.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut bytes = Vec::new();
                    write_cloud(&mut bytes, cloud.flat(), pair.dim(), cloud.level, &cfg.echo)?;
                    let path = artifact_path(
                        &common,
                        &format!("cloud_d{}_n{}.csv", pair.dim(), cloud.level),
                    )?;
                    write_file(&path, &bytes)?;
                }
                Format::Pgm => {
                    let (w, h) = cfg.raster;
                    let pixels = rasterize(cloud.flat(), pair.dim(), w, h)?;
                    let mut bytes = Vec::new();
                    write_pgm(&mut bytes, w, h, &pixels)?;
                    let path = artifact_path(
                        &common,
                        &format!("cloud_d{}_n{}.pgm", pair.dim(), cloud.level),
                    )?;
                    write_file(&path, &bytes)?;
                }
                Format::Obj => {
                    return Err(Error::Usage(
                        "clouds export as csv or pgm; obj is for iterate".into(),
                    ))
                }
            }
            println!(
                "points={} cell_radius={}",
                cloud.point_count(),
                fmt_f64(cloud.cell_radius)
            );
            Ok(0)
        }
        Command::Iterate(common) => {
            let cfg = load_config(&common)?;
            let pair = cfg.pair_f64()?;
            let prism = prism_for_pair(&pair)?;
            let profile = cfg.profile_f64(&pair)?;
            let map = compose_h(&prism, &pair, &profile, cfg.depth)?;
            match common.format.unwrap_or(Format::Obj) {
                Format::Obj => {
                    let (vertices, faces) = prism_surface_mesh(&prism, cfg.surface_grid)?;
                    for m in 0..=cfg.depth {
                        let mapped: Vec<f64> = vertices
                            .chunks(3)
                            .flat_map(|v| map.apply_prefix(v, m))
                            .collect();
                        let mut bytes = Vec::new();
                        write_obj(&mut bytes, &mapped, &faces)?;
                        let path =
                            artifact_path(&common, &format!("iterate_depth{m}.obj"))?;
                        write_file(&path, &bytes)?;
                    }
                }
                Format::Csv => {
                    let grid = prism.volume_grid(cfg.samples as usize);
                    for m in 0..=cfg.depth {
                        let mapped: Vec<f64> = grid
                            .chunks(pair.dim())
                            .flat_map(|v| map.apply_prefix(v, m))
                            .collect();
                        let mut bytes = Vec::new();
                        write_cloud(&mut bytes, &mapped, pair.dim(), m, &cfg.echo)?;
                        let path =
                            artifact_path(&common, &format!("iterate_depth{m}.csv"))?;
                        write_file(&path, &bytes)?;
                    }
                }
                Format::Pgm => {
                    return Err(Error::Usage(
                        "deformation traces export as obj or csv".into(),
                    ))
                }
            }
            Ok(0)
        }
        Command::Verify(common) => {
            let cfg = load_config(&common)?;
            let pair = cfg.pair_f64()?;
            let prism = prism_for_pair(&pair)?;
            let profile = cfg.profile_f64(&pair)?;
            let mut reports: Vec<VerificationReport> = Vec::new();

            let map_depth = cfg.depth.max(cfg.stabilize_by + 2);
            let map = compose_h(&prism, &pair, &profile, map_depth)?;
            reports.push(check_injectivity(
                &map, &prism, cfg.pairs, cfg.delta, cfg.seed, cfg.threads,
            )?);
            reports.push(check_height_properties(
                &map,
                &prism,
                cfg.samples.min(100_000),
                cfg.seed,
                cfg.stabilize_by,
                cfg.threads,
            )?);
            reports.push(check_convergence(
                &pair,
                &prism,
                &profile,
                cfg.depth,
                cfg.level,
                cfg.tolerance,
                cfg.samples as usize,
                cfg.budget,
                cfg.threads,
            )?);
            if !cfg.translates.is_empty() {
                let t: Vec<crate::linalg::Vector<f64>> = cfg
                    .translates
                    .iter()
                    .map(|v| crate::linalg::Vector::new(v.clone()))
                    .collect();
                let (lo, hi) = cfg.sample_box.clone().ok_or_else(|| {
                    Error::Usage("translates given without a sample box".into())
                })?;
                let rep = tiling_overlap_check(
                    &pair, &t, cfg.level, cfg.samples, cfg.seed, &lo, &hi, cfg.budget,
                    cfg.threads,
                )?;
                let mut r = VerificationReport::new("tiling_overlap", cfg.seed);
                r.param("level", cfg.level)
                    .param("samples", cfg.samples)
                    .param("duplicates", rep.duplicate_translates)
                    .stat("coverage_fraction", rep.coverage_fraction)
                    .stat("overlap_measure", rep.overlap_measure);
                r.pass = rep.coverage_fraction >= 0.99 && rep.overlap_measure <= 0.02;
                reports.push(r);

                let m = estimate_measure(
                    &pair, cfg.level, cfg.samples, cfg.seed, cfg.budget, cfg.threads,
                )?;
                let mut r = VerificationReport::new("measure", cfg.seed);
                r.param("level", cfg.level)
                    .param("samples", cfg.samples)
                    .stat("measure", m.measure);
                r.pass = (m.measure - 1.0).abs() <= 0.05;
                reports.push(r);
            }

            for report in &reports {
                println!("{report}");
            }
            if common.out.is_some() {
                let mut bytes = Vec::new();
                for report in &reports {
                    for line in report.kv_lines() {
                        bytes.extend_from_slice(line.as_bytes());
                        bytes.push(b'\n');
                    }
                    bytes.push(b'\n');
                }
                let path = artifact_path(&common, "verify_reports.kv")?;
                write_file(&path, &bytes)?;
            }
            Ok(if reports.iter().all(|r| r.pass) { 0 } else { 1 })
        }
        Command::Export { input, common } => {
            let text = fs::read_to_string(&input)?;
            let cloud = read_cloud(text.as_bytes())?;
            let stem = input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "cloud".into());
            match common.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut bytes = Vec::new();
                    write_cloud(&mut bytes, &cloud.points, cloud.dim, cloud.level, &[])?;
                    let path = artifact_path(&common, &format!("{stem}_export.csv"))?;
                    write_file(&path, &bytes)?;
                }
                Format::Pgm => {
                    let pixels = rasterize(&cloud.points, cloud.dim, 512, 512)?;
                    let mut bytes = Vec::new();
                    write_pgm(&mut bytes, 512, 512, &pixels)?;
                    let path = artifact_path(&common, &format!("{stem}_export.pgm"))?;
                    write_file(&path, &bytes)?;
                }
                Format::Obj => {
                    return Err(Error::Usage(
                        "clouds convert to csv or pgm; obj needs a mesh".into(),
                    ))
                }
            }
            Ok(0)
        }
    }
}
