// Degrades generated models by cumulative random re-insertion and prints the
// averaged curves as semicolon-separated tables.
//
//     cargo run --release --example random_errors

use hierscore::experiment::{curve_csv, error_grid, run_random_errors, ExperimentConfig};
use hierscore::generator::Preset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig {
        presets: vec![Preset::S00, Preset::S07],
        n_points: 500,
        repetitions: 10,
        error_grid: error_grid(100, 500),
        seed: 1,
        ..ExperimentConfig::default()
    };
    for study in run_random_errors(&cfg)? {
        println!("# {}", study.preset);
        print!("{}", curve_csv(&study.table));
    }
    Ok(())
}
