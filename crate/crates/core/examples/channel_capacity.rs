//! Capacity of a few discrete memoryless channels, with the bracket that
//! certifies convergence, and the resulting rate budget of a chain.

use semcom::limits::{binary_entropy, channel_capacity, RateBudget};
use semcom::ConditionalKernel;

fn main() -> semcom::Result<()> {
    let channels = [
        ("bsc(0.1)", ConditionalKernel::new(vec![vec![0.9, 0.1], vec![0.1, 0.9]])?),
        ("identity(3)", ConditionalKernel::identity(3)),
        ("z-channel(0.3)", ConditionalKernel::new(vec![vec![1.0, 0.0], vec![0.3, 0.7]])?),
        ("erasure(0.25)", ConditionalKernel::new(vec![vec![0.75, 0.25, 0.0], vec![0.0, 0.25, 0.75]])?),
    ];
    for (name, ch) in &channels {
        let c = channel_capacity(ch, 1e-12)?;
        println!(
            "{name:<15} C = {:.9} bits  (upper bound {:.9}, {} iterations, input {:?})",
            c.capacity,
            c.upper_bound,
            c.iterations,
            c.optimal_input.probs().iter().map(|p| format!("{p:.4}")).collect::<Vec<_>>()
        );
    }
    println!("closed form 1 - H2(0.1) = {:.9}", 1.0 - binary_entropy(0.1));
    let c = channel_capacity(&channels[0].1, 1e-12)?.capacity;
    for ratio in [0.5, 1.0, 2.0] {
        println!("k/m = {ratio}: budget {:.6} bits per symbol", RateBudget::new(c, ratio)?.budget);
    }
    Ok(())
}
