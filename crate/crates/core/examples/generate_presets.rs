// Samples ground truths from every generator preset and reports their shape.
//
//     cargo run --release --example generate_presets

use hierscore::generator::{generate_instance, Preset};

const SEEDS: u64 = 30;
const N_POINTS: usize = 1000;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("preset  alpha0 lambda gamma   nodes  data-depth  root-share  occupied");
    for preset in Preset::ALL {
        let params = preset.params().with_n_points(N_POINTS);
        let (mut nodes, mut depth, mut root, mut occupied) = (0.0, 0.0, 0.0, 0.0);
        for seed in 0..SEEDS {
            let gi = generate_instance(&params, seed)?;
            let gt = gi.instance.ground_truth();
            nodes += gt.node_count() as f64;
            depth += gt.data_depth() as f64;
            root += gt.points(gt.root()).len() as f64 / N_POINTS as f64;
            occupied += gt.node_ids().filter(|&n| !gt.points(n).is_empty()).count() as f64;
        }
        let k = SEEDS as f64;
        println!(
            "{preset}     {:>5} {:>6} {:>5} {:>7.1} {:>11.2} {:>11.3} {:>9.1}",
            params.alpha0,
            params.lambda,
            params.gamma,
            nodes / k,
            depth / k,
            root / k,
            occupied / k
        );
    }
    Ok(())
}
