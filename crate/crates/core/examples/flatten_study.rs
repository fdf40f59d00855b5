// Removes the hierarchy from generated models, keeps perturbing them within a
// single level, and shows that only the classic F-score does not notice.
//
//     cargo run --release --example flatten_study

use hierscore::experiment::{curve_csv, error_grid, run_flatten_study, ExperimentConfig};
use hierscore::generator::Preset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig {
        presets: vec![Preset::S03],
        n_points: 500,
        repetitions: 10,
        error_grid: error_grid(100, 500),
        seed: 5,
        ..ExperimentConfig::default()
    };
    for study in run_flatten_study(&cfg)? {
        println!("# {} flattened", study.preset);
        print!("{}", curve_csv(&study.table));
        let identical = study
            .repetitions
            .iter()
            .all(|r| r.scores.iter().zip(&r.twin_classic).all(|(s, t)| s.classic == *t));
        println!("classic equals its unflattened twin everywhere: {identical}");
    }
    Ok(())
}
