//! Rate-distortion curves of a uniform three-symbol source under Hamming and
//! semantic distortion, normalized to a unit maximum.

use semcom::equilibria::table1_game;
use semcom::limits::{binary_entropy, hamming_matrix, normalize_max, rate_at_distortion, rate_distortion_curve, IterationOptions};
use semcom::FiniteDistribution;

fn main() -> semcom::Result<()> {
    let fair = FiniteDistribution::uniform(2);
    let p = rate_at_distortion(&fair, &hamming_matrix(2), 0.1, IterationOptions::default())?;
    println!("binary Hamming: R(0.1) = {:.6}, closed form {:.6}", p.rate, 1.0 - binary_entropy(0.1));

    let source = FiniteDistribution::uniform(3);
    let semantic = normalize_max(&table1_game(1.0, 1.0).dec_distortion);
    let multipliers: Vec<f64> = (0..=12).map(|i| 10f64.powf(-1.0 + i as f64 / 4.0)).collect();
    for (name, d) in [("hamming", hamming_matrix(3)), ("semantic", semantic.clone())] {
        println!("{name}:");
        for pt in rate_distortion_curve(&source, &d, &multipliers)? {
            println!("  s = {:>8.3}  D = {:.4}  R = {:.4}", pt.lagrange_multiplier, pt.distortion, pt.rate);
        }
    }
    println!("matched distortion probes:");
    for t in [0.1, 0.2, 0.3, 0.4] {
        let h = rate_at_distortion(&source, &hamming_matrix(3), t, IterationOptions::default())?;
        let s = rate_at_distortion(&source, &semantic, t, IterationOptions::default())?;
        println!("  D = {t:.2}: hamming {:.4}  semantic {:.4}", h.rate, s.rate);
    }
    Ok(())
}
