//! Optimistic and robust Stackelberg solutions and all Nash equilibria of a
//! small chain, without and with a rate constraint.

use semcom::equilibria::{solve_ne_chain, solve_ose, solve_rse, SolverOptions};
use semcom::experiments::runs::strategy_string;
use semcom::{ChainModel, ConditionalKernel, DistortionSpec, FiniteDistribution};

fn main() -> semcom::Result<()> {
    let enc = vec![vec![0.6, 0.0], vec![1.0, 0.0]];
    let dec = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
    for ratio in [1.0, 0.1] {
        let model = ChainModel::new(
            FiniteDistribution::uniform(2),
            ConditionalKernel::new(vec![vec![0.54, 0.36, 0.06, 0.04], vec![0.04, 0.06, 0.36, 0.54]])?,
            2,
            2,
            ConditionalKernel::new(vec![vec![0.95, 0.05], vec![0.05, 0.95]])?,
            DistortionSpec::reduced(&enc, &dec, 2, 2)?,
            ratio,
        )?;
        let opts = SolverOptions {
            rate_constrained: ratio < 1.0,
            ..SolverOptions::default()
        };
        println!("k/m = {ratio} (rate constraint {})", if opts.rate_constrained { "on" } else { "off" });
        for o in [solve_ose(&model, &opts)?, solve_rse(&model, &opts)?] {
            println!(
                "  {}: D_E = {:.6}  D_D = {:.6}  exact = {}  rate = {:?}  g = [{}]",
                o.kind.as_str(),
                o.enc_value,
                o.dec_value,
                o.diagnostics.exact,
                o.diagnostics.rate_status,
                strategy_string(&o.g.kernel)
            );
        }
        let ne = solve_ne_chain(&model, &opts)?;
        for e in &ne.equilibria {
            println!("  ne: D_E = {:.6}  D_D = {:.6}  g = [{}]", e.enc_value, e.dec_value, strategy_string(&e.g.kernel));
        }
    }
    Ok(())
}
