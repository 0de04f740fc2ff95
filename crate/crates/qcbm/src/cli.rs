//! The `qcbm` command line.
//!
//! Exit codes: 0 on success, 1 for usage and configuration errors, 2 when a
//! computation fails.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qcbm_core::analysis::{
    depolarized_reference, empirical_marginals, exact_marginals, finite_shot_percentile, mixed_baseline_l1,
    sample_shots,
};
use qcbm_core::circuit::{compile_to_basis, Basis, GridLayout, HierarchySchedule};
use qcbm_core::dist::{classical_fidelity, kl_divergence, tvd, ProbabilityVector};
use qcbm_core::imgio::{distribution_to_image, image_to_distribution, pad_to_pow2, BlockGeometry, GrayImage};
use qcbm_core::train::{hierarchical_train_with, TrainResult};
use serde_json::json;

use crate::checkpoint::{Checkpoint, ImageMeta, CHECKPOINT_VERSION};
use crate::config::{RunConfig, CONFIG_KEYS};
use crate::export::{export_circuit, ExportFormat};
use crate::parallel::train_bae_parallel;
use crate::pgm::{read_pgm, write_pgm};
use crate::report::{bar_chart_svg, write_counts_csv, write_loss_csv, write_stage_csv, write_table};
use crate::timing::StageClock;

#[derive(Debug, Parser)]
#[command(
    name = "qcbm",
    version,
    about = "Train quantum circuit Born machines that load grayscale images",
    after_long_help = CONFIG_KEYS
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hierarchical (or flat) training on one image.
    #[command(after_long_help = CONFIG_KEYS)]
    Train(TrainArgs),
    /// Block-amplitude encoding: one circuit per image tile.
    #[command(name = "train-bae", after_long_help = CONFIG_KEYS)]
    TrainBae(BaeArgs),
    /// KL, TVD and fidelity of a checkpoint against an image.
    Metrics(MetricsArgs),
    /// Draw measurement shots from a checkpoint.
    Sample(SampleArgs),
    /// Marginal L1 statistics against the maximally mixed baseline.
    Analyze(AnalyzeArgs),
    /// Print a checkpoint's circuit as OpenQASM 2 or JSON.
    Export(ExportArgs),
}

/// Options shared by the training commands. Each flag overrides the
/// matching config key.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Input PGM image [key: input].
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output directory [key: output, default qcbm-out].
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Seed [key: seed, default 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Adam learning rate [key: optimizer.learning_rate, default 0.01].
    #[arg(long)]
    pub learning_rate: Option<f64>,
    /// Print training progress to stderr.
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Layers per stage, comma separated [key: schedule.layers, default 1].
    #[arg(long, value_delimiter = ',')]
    pub layers: Option<Vec<usize>>,
    /// Adam steps per stage, comma separated [key: schedule.iterations].
    #[arg(long, value_delimiter = ',')]
    pub iterations: Option<Vec<usize>>,
    /// Total Adam steps split across stages [key: schedule.total_iterations, default 1000].
    #[arg(long)]
    pub total_iterations: Option<usize>,
    /// Parameter budget used when no layers are given [key: schedule.budget].
    #[arg(long)]
    pub budget: Option<usize>,
    /// Train every qubit at once instead of coarse to fine.
    #[arg(long)]
    pub flat: bool,
    /// Layers for --flat [key: schedule.flat_layers, default: match the hierarchical parameter count].
    #[arg(long)]
    pub flat_layers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BaeArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Block parameter; the image splits into 2*b^2 tiles [key: bae.b, default 2].
    #[arg(short = 'b', long = "blocks")]
    pub b: Option<usize>,
    /// Layers per stage in every block [key: bae.layers, default 1].
    #[arg(long)]
    pub block_layers: Option<usize>,
    /// Adam steps per stage in every block [key: bae.iterations, default 100].
    #[arg(long)]
    pub block_iterations: Option<usize>,
    /// Worker threads [key: bae.parallel, default 1].
    #[arg(long)]
    pub parallel: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// Image the checkpoint is compared with.
    #[arg(long)]
    pub image: PathBuf,
    /// Resolutions in qubits; repeat or comma separate [default: full register].
    #[arg(short = 'm', long = "resolution", value_delimiter = ',')]
    pub resolutions: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for counts.csv and empirical.pgm.
    #[arg(long, default_value = "qcbm-out")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// One or more checkpoints; rows are ordered by two-qubit gate count.
    #[arg(long, required = true, num_args = 1..)]
    pub checkpoint: Vec<PathBuf>,
    /// Image giving the ideal marginals [default: each checkpoint's own exact state].
    #[arg(long)]
    pub image: Option<PathBuf>,
    /// Qubit subset, comma separated [default: v1, v2, h1, h2].
    #[arg(long, value_delimiter = ',')]
    pub subset: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 99.0)]
    pub percentile: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use exact marginals of each checkpoint instead of sampled ones.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value = "qcbm-out")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// qasm2 or json.
    #[arg(long, default_value = "qasm2")]
    pub format: String,
    /// Two-qubit basis: rzz or cnot.
    #[arg(long, default_value = "rzz")]
    pub basis: String,
    /// Output file [default: stdout].
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A command failure with its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    Compute(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Compute(_) => 2,
        }
    }
}

trait Classify<T> {
    fn usage(self) -> Result<T, Failure>;
    fn compute(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn usage(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Usage(e.into()))
    }

    fn compute(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Compute(e.into()))
    }
}

type CmdResult = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(failure) => {
            match &failure {
                Failure::Usage(e) => eprintln!("error: {e:#}"),
                Failure::Compute(e) => eprintln!("computation failed: {e:#}"),
            }
            failure.exit_code()
        }
    }
}

pub fn execute(command: Command) -> CmdResult {
    match command {
        Command::Train(args) => cmd_train(args),
        Command::TrainBae(args) => cmd_train_bae(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Export(args) => cmd_export(args),
    }
}

fn base_config(run: &RunArgs) -> Result<RunConfig, Failure> {
    let mut config = match &run.config {
        Some(path) => RunConfig::load(path).usage()?,
        None => RunConfig::default(),
    };
    if let Some(v) = &run.input {
        config.input = Some(v.clone());
    }
    if let Some(v) = &run.output {
        config.output = v.clone();
    }
    if let Some(v) = run.seed {
        config.seed = v;
    }
    if let Some(v) = run.learning_rate {
        config.optimizer.learning_rate = v;
    }
    Ok(config)
}

/// Loaded image together with its zero-padded power-of-two version.
struct Input {
    original: GrayImage,
    padded: GrayImage,
    target: ProbabilityVector,
}

impl Input {
    fn load(path: &Path) -> Result<Self, Failure> {
        let original = read_pgm(path).usage()?;
        let padded = pad_to_pow2(&original);
        let target = image_to_distribution(&padded).usage()?;
        Ok(Self { original, padded, target })
    }

    fn meta(&self) -> ImageMeta {
        ImageMeta {
            height: self.original.height(),
            width: self.original.width(),
            padded_height: self.padded.height(),
            padded_width: self.padded.width(),
            norm_constant: self.target.norm_constant(),
        }
    }
}

fn create_dir(path: &Path) -> CmdResult {
    fs::create_dir_all(path).map_err(crate::Error::io(path)).usage()
}

/// Pixel image of `p` at the padded size, cropped to the original size.
fn reconstruct(p: &ProbabilityVector, meta: &ImageMeta) -> qcbm_core::Result<GrayImage> {
    distribution_to_image(p, meta.padded_height, meta.padded_width, meta.norm_constant)?.crop(
        0,
        0,
        meta.height,
        meta.width,
    )
}

fn write_json(path: &Path, value: &serde_json::Value) -> CmdResult {
    let text = serde_json::to_string_pretty(value).compute()? + "\n";
    fs::write(path, text).map_err(crate::Error::io(path)).compute()
}

fn summary_metrics(target: &ProbabilityVector, q: &ProbabilityVector) -> qcbm_core::Result<(f64, f64, f64)> {
    let n = target.num_qubits();
    Ok((kl_divergence(target, q, n)?, tvd(target, q, n)?, classical_fidelity(target, q, n)?))
}

fn cmd_train(args: TrainArgs) -> CmdResult {
    let mut config = base_config(&args.run)?;
    let s = &mut config.schedule;
    if let Some(v) = args.layers {
        s.layers = Some(v);
    }
    if let Some(v) = args.iterations {
        s.iterations = Some(v);
    }
    if let Some(v) = args.total_iterations {
        s.total_iterations = v;
    }
    if let Some(v) = args.budget {
        s.budget = Some(v);
    }
    if let Some(v) = args.flat_layers {
        s.flat_layers = Some(v);
    }
    config.validate().usage()?;

    let input = Input::load(config.input.as_deref().expect("validated"))?;
    let layout = GridLayout::for_image(input.padded.height(), input.padded.width()).usage()?;
    config.check_layout(&layout).usage()?;
    let schedule =
        if args.flat { config.flat_schedule(&layout) } else { config.hierarchical_schedule(&layout) }.usage()?;
    create_dir(&config.output)?;

    let mut clock = StageClock::new(args.run.verbose);
    let result = hierarchical_train_with(&input.padded, &layout, &schedule, &config.train_config(), &mut clock)
        .map_err(|e| anyhow::anyhow!("training failed: {e}"))
        .compute()?;
    write_training_artifacts(&config.output, &input, layout, schedule, &config, args.flat, &result)
}

fn write_training_artifacts(
    out: &Path,
    input: &Input,
    layout: GridLayout,
    schedule: HierarchySchedule,
    config: &RunConfig,
    flat: bool,
    result: &TrainResult,
) -> CmdResult {
    let checkpoint = Checkpoint {
        version: CHECKPOINT_VERSION,
        image: input.meta(),
        layout,
        schedule,
        seed: config.seed,
        flat,
        circuit: result.circuit.clone(),
        params: result.params.clone(),
    };
    checkpoint.save(out.join("checkpoint.json")).compute()?;
    write_json(&out.join("params.json"), &json!(result.params))?;
    write_loss_csv(&out.join("loss.csv"), &result.reports).compute()?;
    write_stage_csv(&out.join("stages.csv"), &result.reports).compute()?;

    let q = result.distribution().compute()?;
    write_pgm(out.join("reconstruction.pgm"), &reconstruct(&q, &checkpoint.image).compute()?, 65535).compute()?;
    let (kl, tvd, fidelity) = summary_metrics(&input.target, &q).compute()?;
    let metrics = json!({
        "qubits": layout.num_qubits(),
        "params": result.circuit.num_params(),
        "two_qubit_gates": result.circuit.count_two_qubit_gates(),
        "flat": flat,
        "kl": kl,
        "tvd": tvd,
        "fidelity": fidelity,
    });
    write_json(&out.join("metrics.json"), &metrics)?;
    println!(
        "qubits={} params={} two_qubit_gates={} KL={kl} TVD={tvd} F={fidelity}",
        layout.num_qubits(),
        result.circuit.num_params(),
        result.circuit.count_two_qubit_gates()
    );
    Ok(())
}

/// Header of the block-amplitude summary table.
pub const BAE_SUMMARY_HEADER: [&str; 5] = ["blocks", "qubits_per_block", "total_qubits", "total_params", "tvd"];

fn cmd_train_bae(args: BaeArgs) -> CmdResult {
    let mut config = base_config(&args.run)?;
    if let Some(v) = args.b {
        config.bae.b = v;
    }
    if let Some(v) = args.block_layers {
        config.bae.layers = v;
    }
    if let Some(v) = args.block_iterations {
        config.bae.iterations = v;
    }
    if let Some(v) = args.parallel {
        config.bae.parallel = v;
    }
    config.validate().usage()?;
    let input = Input::load(config.input.as_deref().expect("validated"))?;
    let (h, w) = (input.padded.height(), input.padded.width());
    let geometry = BlockGeometry::new(h, w, config.bae.b).usage()?;
    let qubits = geometry.qubits_per_block().usage()?;
    let tile_layout = GridLayout::for_image(geometry.tile_height, geometry.tile_width).usage()?;
    let template = config.block_template();
    let schedule = template.schedule(&tile_layout).usage()?;
    create_dir(&config.output)?;

    let train_config = config.train_config();
    let result =
        train_bae_parallel(&input.padded, config.bae.b, &template, &train_config, config.bae.parallel).compute()?;

    let mut manifest_blocks = Vec::new();
    for block in &result.blocks {
        let dir = config.output.join(format!("block_{:04}", block.index));
        create_dir(&dir)?;
        let checkpoint = Checkpoint {
            version: CHECKPOINT_VERSION,
            image: ImageMeta {
                height: geometry.tile_height,
                width: geometry.tile_width,
                padded_height: geometry.tile_height,
                padded_width: geometry.tile_width,
                norm_constant: block.norm,
            },
            layout: tile_layout,
            schedule: schedule.clone(),
            seed: qcbm_core::rng::derive_seed(config.seed, block.index as u64),
            flat: false,
            circuit: block.circuit.clone(),
            params: block.params.clone(),
        };
        checkpoint.save(dir.join("checkpoint.json")).compute()?;
        write_loss_csv(&dir.join("loss.csv"), &block.reports).compute()?;
        manifest_blocks.push(json!({
            "index": block.index,
            "row": block.origin.0,
            "col": block.origin.1,
            "height": geometry.tile_height,
            "width": geometry.tile_width,
            "qubits": qubits,
            "params": block.circuit.num_params(),
            "norm": block.norm,
            "blank": block.blank,
            "checkpoint": format!("block_{:04}/checkpoint.json", block.index),
        }));
    }
    let manifest = json!({
        "b": config.bae.b,
        "image": input.meta(),
        "grid_rows": geometry.grid_rows,
        "grid_cols": geometry.grid_cols,
        "blocks": manifest_blocks,
    });
    write_json(&config.output.join("manifest.json"), &manifest)?;
    let assembled = result.assembled.crop(0, 0, input.original.height(), input.original.width()).compute()?;
    write_pgm(config.output.join("assembled.pgm"), &assembled, 65535).compute()?;

    let row = vec![
        geometry.num_blocks().to_string(),
        qubits.to_string(),
        (qubits * geometry.num_blocks()).to_string(),
        result.total_params().to_string(),
        result.tvd.to_string(),
    ];
    write_table(&config.output.join("summary.csv"), &BAE_SUMMARY_HEADER, std::slice::from_ref(&row)).compute()?;
    println!("{}", BAE_SUMMARY_HEADER.join(","));
    println!("{}", row.join(","));
    Ok(())
}

fn cmd_metrics(args: MetricsArgs) -> CmdResult {
    let checkpoint = Checkpoint::load(&args.checkpoint).usage()?;
    let input = Input::load(&args.image)?;
    let n = checkpoint.circuit.num_qubits();
    if input.target.num_qubits() != n {
        return Err(Failure::Usage(anyhow::anyhow!(
            "image encodes {} qubits but the checkpoint has {n}",
            input.target.num_qubits()
        )));
    }
    let resolutions = if args.resolutions.is_empty() { vec![n] } else { args.resolutions };
    if let Some(m) = resolutions.iter().find(|&&m| m == 0 || m > n) {
        return Err(Failure::Usage(anyhow::anyhow!("resolution {m} outside 1..={n}")));
    }
    let q = checkpoint.distribution().compute()?;
    for m in resolutions {
        let kl = kl_divergence(&input.target, &q, m).compute()?;
        let t = tvd(&input.target, &q, m).compute()?;
        let f = classical_fidelity(&input.target, &q, m).compute()?;
        println!("m={m} KL={kl} TVD={t} F={f}");
    }
    Ok(())
}

fn cmd_sample(args: SampleArgs) -> CmdResult {
    let checkpoint = Checkpoint::load(&args.checkpoint).usage()?;
    create_dir(&args.output)?;
    let p = checkpoint.distribution().compute()?;
    let counts = sample_shots(&p, args.shots, args.seed).compute()?;
    write_counts_csv(&args.output.join("counts.csv"), &counts).compute()?;
    let empirical = counts.empirical_distribution().compute()?;
    write_pgm(args.output.join("empirical.pgm"), &reconstruct(&empirical, &checkpoint.image).compute()?, 65535)
        .compute()?;
    let t = tvd(&p, &empirical, p.num_qubits()).compute()?;
    println!("shots={} distinct={} TVD_to_exact={t}", counts.total(), counts.counts().len());
    Ok(())
}

fn qubit_label(layout: &GridLayout, q: usize) -> String {
    if q < layout.vertical() {
        format!("v{}", q + 1)
    } else {
        format!("h{}", q - layout.vertical() + 1)
    }
}

fn default_subset(layout: &GridLayout) -> Vec<usize> {
    let (j, k) = (layout.vertical(), layout.horizontal());
    let mut s: Vec<usize> = (0..j.min(2)).chain((j..j + k.min(2)).take(2)).collect();
    s.sort_unstable();
    s
}

fn cmd_analyze(args: AnalyzeArgs) -> CmdResult {
    if !(args.percentile > 0.0 && args.percentile <= 100.0) {
        return Err(Failure::Usage(anyhow::anyhow!("percentile must lie in (0, 100]")));
    }
    if args.trials == 0 {
        return Err(Failure::Usage(anyhow::anyhow!("trials must be at least 1")));
    }
    let mut loaded = Vec::new();
    for path in &args.checkpoint {
        loaded.push((path.clone(), Checkpoint::load(path).usage()?));
    }
    loaded.sort_by_key(|(_, c)| c.circuit.count_two_qubit_gates());
    let image_target = match &args.image {
        Some(path) => Some(Input::load(path)?.target),
        None => None,
    };
    create_dir(&args.output)?;

    let layout = loaded[0].1.layout;
    let subset = args.subset.clone().unwrap_or_else(|| default_subset(&layout));
    if subset.is_empty() {
        return Err(Failure::Usage(anyhow::anyhow!("qubit subset is empty")));
    }
    let labels: Vec<String> = subset.iter().map(|&q| qubit_label(&layout, q)).collect();
    let mut marginal_rows = Vec::new();
    let mut l1_rows = Vec::new();
    let mut chart_series: Vec<(String, Vec<f64>)> = Vec::new();
    let mut l1_chart = (Vec::new(), Vec::new(), Vec::new());
    let mut ideal_for_chart = Vec::new();

    for (path, checkpoint) in &loaded {
        let n = checkpoint.circuit.num_qubits();
        if let Some(&q) = subset.iter().find(|&&q| q >= n) {
            return Err(Failure::Usage(anyhow::anyhow!(
                "qubit {q} outside the {n}-qubit register of {}",
                path.display()
            )));
        }
        let p = checkpoint.distribution().compute()?;
        let ideal = match &image_target {
            Some(t) if t.num_qubits() == n => exact_marginals(t, &subset).compute()?,
            Some(t) => {
                return Err(Failure::Usage(anyhow::anyhow!(
                    "image encodes {} qubits but {} has {n}",
                    t.num_qubits(),
                    path.display()
                )))
            }
            None => exact_marginals(&p, &subset).compute()?,
        };
        let observed = if args.exact {
            exact_marginals(&p, &subset).compute()?
        } else {
            empirical_marginals(&sample_shots(&p, args.shots, args.seed).compute()?, &subset).compute()?
        };
        let l1 = qcbm_core::analysis::l1_marginals(&observed, &ideal).compute()?;
        let baseline = mixed_baseline_l1(&ideal);
        let pct = finite_shot_percentile(&ideal, args.shots, args.trials, args.percentile, args.seed).compute()?;
        let name = path.display().to_string();
        let gates = checkpoint.circuit.count_two_qubit_gates();
        for (i, &q) in subset.iter().enumerate() {
            marginal_rows.push(vec![
                name.clone(),
                gates.to_string(),
                q.to_string(),
                labels[i].clone(),
                observed[i].to_string(),
                ideal[i].to_string(),
            ]);
        }
        l1_rows.push(vec![name.clone(), gates.to_string(), l1.to_string(), baseline.to_string(), pct.to_string()]);
        println!("{name} two_qubit_gates={gates} L1={l1} mixed_baseline={baseline} p{}={pct}", args.percentile);
        chart_series.push((format!("P ({gates} 2q)"), observed));
        l1_chart.0.push(format!("{gates} 2q"));
        l1_chart.1.push(l1);
        l1_chart.2.push(baseline);
        ideal_for_chart = ideal;
    }
    let reference = depolarized_reference(&subset, &ideal_for_chart).compute()?;
    l1_rows.push(vec![
        "depolarized".into(),
        String::new(),
        reference.l1().to_string(),
        mixed_baseline_l1(&ideal_for_chart).to_string(),
        String::new(),
    ]);
    println!("depolarized L1={}", reference.l1());

    write_table(
        &args.output.join("marginals.csv"),
        &["checkpoint", "two_qubit_gates", "qubit", "label", "p", "p_ideal"],
        &marginal_rows,
    )
    .compute()?;
    write_table(
        &args.output.join("l1.csv"),
        &["checkpoint", "two_qubit_gates", "l1", "mixed_baseline", "percentile"],
        &l1_rows,
    )
    .compute()?;
    let mut series: Vec<(&str, &[f64])> = chart_series.iter().map(|(n, v)| (n.as_str(), v.as_slice())).collect();
    series.push(("P*", &ideal_for_chart));
    series.push(("mixed", &reference.observed));
    let svg = bar_chart_svg("P vs P*", &labels, &series);
    let chart = args.output.join("marginals.svg");
    fs::write(&chart, svg).map_err(crate::Error::io(&chart)).compute()?;
    let svg = bar_chart_svg(
        "L1 vs two-qubit gates",
        &l1_chart.0,
        &[("L1", l1_chart.1.as_slice()), ("mixed baseline", l1_chart.2.as_slice())],
    );
    let chart = args.output.join("l1.svg");
    fs::write(&chart, svg).map_err(crate::Error::io(&chart)).compute()
}

fn cmd_export(args: ExportArgs) -> CmdResult {
    let format: ExportFormat = args.format.parse().usage()?;
    let basis: Basis = args.basis.parse().usage()?;
    let checkpoint = Checkpoint::load(&args.checkpoint).usage()?;
    let circuit = compile_to_basis(&checkpoint.circuit, basis).compute()?;
    let text = export_circuit(&circuit, &checkpoint.params, format).compute()?;
    match args.output {
        Some(path) => fs::write(&path, text).map_err(crate::Error::io(&path)).compute(),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn default_subset_picks_leading_qubits() {
        assert_eq!(default_subset(&GridLayout::new(5, 5).unwrap()), vec![0, 1, 5, 6]);
        assert_eq!(default_subset(&GridLayout::new(1, 2).unwrap()), vec![0, 1, 2]);
        assert_eq!(qubit_label(&GridLayout::new(2, 3).unwrap(), 3), "h2");
    }
}
