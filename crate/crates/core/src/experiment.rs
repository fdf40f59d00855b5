//! Repeated-run studies over the generator presets: cumulative random
//! re-insertion, collapse into the root, and flattening with level-preserving
//! errors. Results aggregate to mean and population standard deviation over
//! repetitions and serialise to semicolon-separated tables.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::{generate_with_rng, stream_rng, GeneratedInstance, Preset, TssbParams};
use crate::hierarchy::{Hierarchy, Instance, NodeId};
use crate::measures::{classic_fscore, hierarchical_fscore, partial_order_fscore, Direction};
use crate::perturbation::{
    apply_reinsertions, collapse_to_root, flatten_with_origin, reinsert_flat, FlatSticks,
    ReinsertOptions,
};

pub const CURVE_HEADER: &str = "number-of-random-changes;standard-mean;standard-std;\
partialOrder-mean;partialOrder-std;adapted-mean;adapted-std";

pub const SUMMARY_HEADER: &str =
    "preset;standard-mean;standard-std;partialOrder-mean;partialOrder-std;adapted-mean;adapted-std";

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub presets: Vec<Preset>,
    pub n_points: usize,
    pub repetitions: usize,
    /// Cumulative error counts at which the model is scored.
    pub error_grid: Vec<usize>,
    pub seed: u64,
    pub max_depth: usize,
    pub allow_new_nodes: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            presets: Preset::ALL.to_vec(),
            n_points: crate::generator::DEFAULT_N_POINTS,
            repetitions: 30,
            error_grid: error_grid(100, 1000),
            seed: 0,
            max_depth: crate::generator::DEFAULT_MAX_DEPTH,
            allow_new_nodes: true,
        }
    }
}

/// `0, step, 2·step, …` up to and including `max` when it is a multiple.
pub fn error_grid(step: usize, max: usize) -> Vec<usize> {
    if step == 0 {
        return vec![0];
    }
    (0..=max).step_by(step).collect()
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.presets.is_empty() {
            return bad("no presets selected");
        }
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1");
        }
        if self.error_grid.first() != Some(&0) {
            return bad("error grid must start at 0");
        }
        if self.error_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("error grid must be strictly ascending");
        }
        self.params(Preset::S00).validate()
    }

    pub fn params(&self, preset: Preset) -> TssbParams {
        preset
            .params()
            .with_n_points(self.n_points)
            .with_max_depth(self.max_depth)
    }

    fn reinsert_options(&self) -> ReinsertOptions {
        ReinsertOptions {
            allow_new_nodes: self.allow_new_nodes,
        }
    }

    fn generate(&self, preset: Preset, rep: usize) -> Result<(GeneratedInstance, crate::generator::StreamRng)> {
        let stream = stream_id(preset, rep);
        let mut rng = stream_rng(self.seed, stream);
        let mut gi = generate_with_rng(&self.params(preset), &mut rng)?;
        gi.seed = self.seed;
        gi.stream = stream;
        Ok((gi, rng))
    }
}

/// Stream of repetition `rep` of `preset`: preset index in the high 32 bits,
/// repetition in the low 32. Generation and all later perturbation of that
/// repetition consume this one stream.
pub fn stream_id(preset: Preset, rep: usize) -> u64 {
    ((preset.index() as u64) << 32) | rep as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureScores {
    pub classic: f64,
    pub partial_order: f64,
    pub hierarchical: f64,
}

pub fn score_all(inst: &Instance) -> MeasureScores {
    MeasureScores {
        classic: classic_fscore(inst),
        partial_order: partial_order_fscore(inst, Direction::Sub),
        hierarchical: hierarchical_fscore(inst).overall,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    /// Mean and population standard deviation.
    pub fn of(values: &[f64]) -> Stat {
        if values.is_empty() {
            return Stat::default();
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Stat {
            mean,
            std: var.sqrt(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureStats {
    pub classic: Stat,
    pub partial_order: Stat,
    pub hierarchical: Stat,
}

impl MeasureStats {
    fn of(scores: &[MeasureScores]) -> Self {
        let col = |f: fn(&MeasureScores) -> f64| Stat::of(&scores.iter().map(f).collect::<Vec<_>>());
        MeasureStats {
            classic: col(|s| s.classic),
            partial_order: col(|s| s.partial_order),
            hierarchical: col(|s| s.hierarchical),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub errors: usize,
    pub stats: MeasureStats,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    pub rows: Vec<CurveRow>,
}

/// Scores of one repetition at every grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct RepetitionTrace {
    pub stream: u64,
    /// Deepest data-bearing level of the ground truth.
    pub ground_truth_depth: usize,
    pub scores: Vec<MeasureScores>,
    /// Flatten study only: classic score of the unflattened model carrying the
    /// same point partition as the flat one.
    pub twin_classic: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveStudy {
    pub preset: Preset,
    pub table: CurveTable,
    pub repetitions: Vec<RepetitionTrace>,
}

fn aggregate(grid: &[usize], reps: &[RepetitionTrace]) -> CurveTable {
    let rows = grid
        .iter()
        .enumerate()
        .map(|(g, &errors)| {
            let at: Vec<MeasureScores> = reps.iter().map(|r| r.scores[g]).collect();
            CurveRow {
                errors,
                stats: MeasureStats::of(&at),
            }
        })
        .collect();
    CurveTable { rows }
}

/// Cumulative random re-insertion: each repetition follows one degradation
/// trajectory, scored at every grid point.
pub fn run_random_errors(cfg: &ExperimentConfig) -> Result<Vec<CurveStudy>> {
    cfg.validate()?;
    let opts = cfg.reinsert_options();
    let mut studies = Vec::with_capacity(cfg.presets.len());
    for &preset in &cfg.presets {
        let mut reps = Vec::with_capacity(cfg.repetitions);
        for rep in 0..cfg.repetitions {
            let (mut gi, mut rng) = cfg.generate(preset, rep)?;
            let ground_truth_depth = gi.instance.ground_truth().data_depth();
            let mut applied = 0;
            let mut scores = Vec::with_capacity(cfg.error_grid.len());
            for &target in &cfg.error_grid {
                apply_reinsertions(&mut gi, target - applied, &opts, &mut rng);
                applied = target;
                scores.push(score_all(&gi.instance));
            }
            reps.push(RepetitionTrace {
                stream: gi.stream,
                ground_truth_depth,
                scores,
                twin_classic: Vec::new(),
            });
        }
        studies.push(CurveStudy {
            preset,
            table: aggregate(&cfg.error_grid, &reps),
            repetitions: reps,
        });
    }
    Ok(studies)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub preset: Preset,
    pub stats: MeasureStats,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub rows: Vec<SummaryRow>,
}

/// Every point moved into the root cluster, no further errors.
pub fn run_collapse_study(cfg: &ExperimentConfig) -> Result<SummaryTable> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.presets.len());
    for &preset in &cfg.presets {
        let mut scores = Vec::with_capacity(cfg.repetitions);
        for rep in 0..cfg.repetitions {
            let (gi, _) = cfg.generate(preset, rep)?;
            let collapsed = collapse_to_root(gi.instance.model());
            scores.push(score_all(&gi.instance.with_model(collapsed)?));
        }
        rows.push(SummaryRow {
            preset,
            stats: MeasureStats::of(&scores),
        });
    }
    Ok(SummaryTable { rows })
}

/// Flattened model with level-preserving re-insertions.
///
/// Alongside the flat model each repetition carries an unflattened twin: the
/// original model with every flat move mirrored onto the node the flat leaf
/// came from (new flat leaves become new children of the original root). The
/// twin has the same point partition as the flat model at every grid point.
pub fn run_flatten_study(cfg: &ExperimentConfig) -> Result<Vec<CurveStudy>> {
    cfg.validate()?;
    let opts = cfg.reinsert_options();
    let mut studies = Vec::with_capacity(cfg.presets.len());
    for &preset in &cfg.presets {
        let mut reps = Vec::with_capacity(cfg.repetitions);
        for rep in 0..cfg.repetitions {
            let (gi, mut rng) = cfg.generate(preset, rep)?;
            let ground_truth_depth = gi.instance.ground_truth().data_depth();
            let (gt, mut twin) = gi.instance.clone().into_parts();
            let (mut flat, mut origin) = flatten_with_origin(&twin);
            let mut sticks = FlatSticks::new(&flat, &gi.params, &mut rng);

            let mut applied = 0;
            let mut scores = Vec::with_capacity(cfg.error_grid.len());
            let mut twin_classic = Vec::with_capacity(cfg.error_grid.len());
            for &target in &cfg.error_grid {
                let record = reinsert_flat(
                    &mut flat,
                    &mut sticks,
                    &gi.params,
                    target - applied,
                    &opts,
                    &mut rng,
                );
                applied = target;
                mirror_moves(&mut twin, &mut origin, &flat, &record.moved_points);
                scores.push(score_all(&Instance::new(gt.clone(), flat.clone())?));
                twin_classic.push(classic_fscore(&Instance::new(gt.clone(), twin.clone())?));
            }
            reps.push(RepetitionTrace {
                stream: gi.stream,
                ground_truth_depth,
                scores,
                twin_classic,
            });
        }
        studies.push(CurveStudy {
            preset,
            table: aggregate(&cfg.error_grid, &reps),
            repetitions: reps,
        });
    }
    Ok(studies)
}

fn mirror_moves(
    twin: &mut Hierarchy,
    origin: &mut Vec<NodeId>,
    flat: &Hierarchy,
    moves: &[crate::perturbation::MovedPoint],
) {
    for _ in origin.len()..flat.node_count() {
        let root = twin.root();
        origin.push(twin.add_child(root));
    }
    for m in moves {
        twin.move_point(m.point, origin[m.to.index()]);
    }
}

fn push_stats(line: &mut String, stats: &MeasureStats) {
    for s in [stats.classic, stats.partial_order, stats.hierarchical] {
        write!(line, ";{:.6};{:.6}", s.mean, s.std).expect("writing to a String");
    }
}

/// Semicolon-separated curve table, LF line endings, six decimals.
pub fn curve_csv(table: &CurveTable) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for row in &table.rows {
        out.push_str(&row.errors.to_string());
        push_stats(&mut out, &row.stats);
        out.push('\n');
    }
    out
}

pub fn summary_csv(table: &SummaryTable) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for row in &table.rows {
        out.push_str(row.preset.name());
        push_stats(&mut out, &row.stats);
        out.push('\n');
    }
    out
}

pub fn emit_csv(table: &CurveTable, path: &Path) -> Result<()> {
    std::fs::write(path, curve_csv(table)).map_err(|e| Error::io(path, e))
}

pub fn emit_summary_csv(table: &SummaryTable, path: &Path) -> Result<()> {
    std::fs::write(path, summary_csv(table)).map_err(|e| Error::io(path, e))
}

fn csv_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: "<csv>".into(),
        line,
        column: 1,
        message: message.into(),
    }
}

fn parse_stats(fields: &[&str], line: usize) -> Result<MeasureStats> {
    let v: Vec<f64> = fields
        .iter()
        .map(|f| f.parse::<f64>().map_err(|e| csv_error(line, format!("`{f}`: {e}"))))
        .collect::<Result<_>>()?;
    let stat = |i: usize| Stat {
        mean: v[i],
        std: v[i + 1],
    };
    Ok(MeasureStats {
        classic: stat(0),
        partial_order: stat(2),
        hierarchical: stat(4),
    })
}

/// Reads back a table written by [`curve_csv`].
pub fn parse_curve_csv(text: &str) -> Result<CurveTable> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CURVE_HEADER => {}
        _ => return Err(csv_error(1, "missing or unexpected header")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(';').collect();
        if fields.len() != 7 {
            return Err(csv_error(i + 1, format!("expected 7 fields, found {}", fields.len())));
        }
        let errors = fields[0]
            .parse()
            .map_err(|e| csv_error(i + 1, format!("`{}`: {e}", fields[0])))?;
        rows.push(CurveRow {
            errors,
            stats: parse_stats(&fields[1..], i + 1)?,
        });
    }
    Ok(CurveTable { rows })
}
