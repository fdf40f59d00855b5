use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hierscore::experiment::{
    emit_csv, emit_summary_csv, error_grid, run_collapse_study, run_flatten_study,
    run_random_errors, ExperimentConfig,
};
use hierscore::generator::{generate_instance, stream_rng, Preset, DEFAULT_MAX_DEPTH};
use hierscore::io::{read_hierarchy, read_instance, read_sticks, write_hierarchy, write_sticks, SticksFile};
use hierscore::measures::score_instance;
use hierscore::perturbation::{
    collapse_to_root, flatten_one_level, reinsert_flat, reinsert_model, FlatSticks, ReinsertOptions,
};
use hierscore::{Error, Result};

#[derive(Parser)]
#[command(name = "hierscore", version, about = "Score and study hierarchies of clusters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a ground truth; writes ground_truth.json, model.json and sticks.json into --out.
    Generate {
        #[arg(long, default_value = "s00")]
        preset: Preset,
        #[arg(long, default_value_t = 1000)]
        n_points: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Degrade a model hierarchy and write the result to --out.
    Perturb {
        #[arg(long, value_enum)]
        kind: PerturbKind,
        #[arg(long)]
        model: PathBuf,
        /// Sticks of the model; required for errors.
        #[arg(long)]
        sticks: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        errors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep re-insertions inside already existing nodes.
        #[arg(long)]
        no_new_nodes: bool,
        #[arg(long)]
        out: PathBuf,
        /// Where to write the extended sticks after re-insertion.
        #[arg(long)]
        sticks_out: Option<PathBuf>,
    },
    /// Score a model file against a ground-truth file.
    Score {
        ground_truth: PathBuf,
        model: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run one of the repeated studies over the presets.
    Experiment {
        #[arg(value_enum)]
        study: Study,
        /// Repeatable; all presets when omitted.
        #[arg(long)]
        preset: Vec<Preset>,
        #[arg(long, default_value_t = 1000)]
        n_points: usize,
        #[arg(long, default_value_t = 30)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        step: usize,
        #[arg(long, default_value_t = 1000)]
        max_errors: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PerturbKind {
    Reinsert,
    Collapse,
    Flatten,
}

#[derive(Clone, Copy, ValueEnum)]
enum Study {
    RandomErrors,
    Collapse,
    Flatten,
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate {
            preset,
            n_points,
            max_depth,
            seed,
            out,
        } => {
            let params = preset.params().with_n_points(n_points).with_max_depth(max_depth);
            let gi = generate_instance(&params, seed)?;
            create_dir(&out)?;
            write_hierarchy(&out.join("ground_truth.json"), gi.instance.ground_truth())?;
            write_hierarchy(&out.join("model.json"), gi.instance.model())?;
            write_sticks(
                &out.join("sticks.json"),
                &SticksFile {
                    params,
                    seed,
                    sticks: gi.sticks,
                },
            )?;
            let gt = gi.instance.ground_truth();
            println!(
                "{preset}: {} points, {} nodes, data depth {}",
                gt.n_points(),
                gt.node_count(),
                gt.data_depth()
            );
        }
        Command::Perturb {
            kind,
            model,
            sticks,
            errors,
            seed,
            no_new_nodes,
            out,
            sticks_out,
        } => {
            let mut h = read_hierarchy(&model)?;
            let opts = ReinsertOptions {
                allow_new_nodes: !no_new_nodes,
            };
            let mut rng = stream_rng(seed, 0);
            let need_sticks = || {
                sticks
                    .as_deref()
                    .map(read_sticks)
                    .unwrap_or_else(|| Err(Error::InvalidConfig("--sticks is required for errors".into())))
            };
            let moved = match kind {
                PerturbKind::Collapse => {
                    h = collapse_to_root(&h);
                    0
                }
                PerturbKind::Reinsert => {
                    let mut file = need_sticks()?;
                    file.sticks.check_matches(&h)?;
                    let rec = reinsert_model(&mut h, &mut file.sticks, &file.params, errors, &opts, &mut rng);
                    if let Some(path) = &sticks_out {
                        write_sticks(path, &file)?;
                    }
                    rec.errors_applied
                }
                PerturbKind::Flatten => {
                    h = flatten_one_level(&h);
                    if errors > 0 {
                        let params = need_sticks()?.params;
                        let mut flat_sticks = FlatSticks::new(&h, &params, &mut rng);
                        reinsert_flat(&mut h, &mut flat_sticks, &params, errors, &opts, &mut rng)
                            .errors_applied
                    } else {
                        0
                    }
                }
            };
            write_hierarchy(&out, &h)?;
            println!("wrote {} ({} nodes, {moved} re-insertions)", out.display(), h.node_count());
        }
        Command::Score {
            ground_truth,
            model,
            json,
        } => {
            let inst = read_instance(&ground_truth, &model)?;
            let report = score_instance(&inst);
            assert_eq!(
                report.partial_order.to_bits(),
                report.partial_order_sup.to_bits(),
                "partial-order directions disagree"
            );
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("plain data"));
            } else {
                print_report(&report);
            }
        }
        Command::Experiment {
            study,
            preset,
            n_points,
            reps,
            seed,
            step,
            max_errors,
            max_depth,
            out,
        } => {
            let cfg = ExperimentConfig {
                presets: if preset.is_empty() { Preset::ALL.to_vec() } else { preset },
                n_points,
                repetitions: reps,
                error_grid: error_grid(step, max_errors),
                seed,
                max_depth,
                allow_new_nodes: true,
            };
            create_dir(&out)?;
            match study {
                Study::RandomErrors => {
                    for s in run_random_errors(&cfg)? {
                        let path = out.join(format!("{}.csv", s.preset));
                        emit_csv(&s.table, &path)?;
                        println!("wrote {}", path.display());
                    }
                }
                Study::Flatten => {
                    for s in run_flatten_study(&cfg)? {
                        let path = out.join(format!("{}-flat-clustering.csv", s.preset));
                        emit_csv(&s.table, &path)?;
                        println!("wrote {}", path.display());
                    }
                }
                Study::Collapse => {
                    let table = run_collapse_study(&cfg)?;
                    let path = out.join("all-in-root.csv");
                    emit_summary_csv(&table, &path)?;
                    for row in &table.rows {
                        println!(
                            "{}  classic {:.4} ({:.4})  partial-order {:.4} ({:.4})  hierarchical {:.4} ({:.4})",
                            row.preset,
                            row.stats.classic.mean,
                            row.stats.classic.std,
                            row.stats.partial_order.mean,
                            row.stats.partial_order.std,
                            row.stats.hierarchical.mean,
                            row.stats.hierarchical.std,
                        );
                    }
                    println!("wrote {}", path.display());
                }
            }
        }
    }
    Ok(())
}

fn print_report(r: &hierscore::measures::ScoreReport) {
    let c = &r.classic_counts;
    let p = &r.partial_order_counts;
    println!("classic F        {:.6}  (tp {} fp {} fn {} tn {})", r.classic, c.true_pos, c.false_pos, c.false_neg, c.true_neg);
    println!("partial-order F  {:.6}  (tp {} fp {} fn {} tn {})", r.partial_order, p.true_pos, p.false_pos, p.false_neg, p.true_neg);
    println!("hierarchical F   {:.6}", r.hierarchical.overall);
    println!();
    println!("{:>8} {:>8} {:>10} {:>8}", "class", "weight", "F_c", "cluster");
    for row in &r.hierarchical.classes {
        println!("{:>8} {:>8} {:>10.6} {:>8}", row.class, row.weight, row.f, row.best_cluster);
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}
