// Moves every point of each generated model into the root cluster and
// compares how far each measure falls.
//
//     cargo run --release --example collapse_study

use hierscore::experiment::{run_collapse_study, summary_csv, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig {
        repetitions: 10,
        error_grid: vec![0],
        seed: 3,
        ..ExperimentConfig::default()
    };
    let table = run_collapse_study(&cfg)?;
    print!("{}", summary_csv(&table));
    for row in &table.rows {
        assert!(row.stats.partial_order.mean > row.stats.classic.mean);
    }
    Ok(())
}
