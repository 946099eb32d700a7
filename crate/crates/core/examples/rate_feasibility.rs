//! Which encoders fit through the channel: the rate test against the
//! capacity budget, on a useful and on a useless channel. The test channel is
//! noiseless, so the rate is what the encoder reveals about the source.

use semcom::limits::feasibility_check;
use semcom::{ChainModel, ConditionalKernel, DistortionSpec, EncoderStrategy, FiniteDistribution};

fn chain(channel: ConditionalKernel, ratio: f64) -> semcom::Result<ChainModel> {
    ChainModel::new(
        FiniteDistribution::uniform(2),
        ConditionalKernel::new(vec![vec![0.9, 0.1], vec![0.1, 0.9]])?,
        2,
        1,
        channel,
        DistortionSpec::hamming(2, 2, 1),
        ratio,
    )
}

fn main() -> semcom::Result<()> {
    let bsc = ConditionalKernel::new(vec![vec![0.9, 0.1], vec![0.1, 0.9]])?;
    let dead = ConditionalKernel::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]])?;
    let encoders = [
        ("constant", EncoderStrategy::deterministic(2, &[0, 0])),
        ("noisy", EncoderStrategy::new(ConditionalKernel::new(vec![vec![0.7, 0.3], vec![0.3, 0.7]])?)),
        ("identity", EncoderStrategy::deterministic(2, &[0, 1])),
    ];
    let z = ConditionalKernel::identity(2);
    for (cname, ch) in [("bsc(0.1)", &bsc), ("useless", &dead)] {
        for ratio in [0.25, 1.0] {
            let model = chain(ch.clone(), ratio)?;
            for (gname, g) in &encoders {
                let f = feasibility_check(&model, g, &z)?;
                println!(
                    "{cname:<9} k/m={ratio:<4} {gname:<9} rate {:.4}  budget {:.4}  margin {:+.4}  {}",
                    f.rate,
                    f.budget,
                    f.margin + 0.0,
                    if f.feasible { "ok" } else { "infeasible" }
                );
            }
        }
    }
    Ok(())
}
