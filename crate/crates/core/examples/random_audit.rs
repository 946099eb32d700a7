//! Solves OSE, RSE and all enumerable NE on seeded random chains and counts
//! ordering violations.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use semcom::equilibria::{random_chain_model, theorem2_audit, RandomInstanceOptions, SolverOptions};

fn main() -> semcom::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let start = Instant::now();
    let opts = SolverOptions::default();
    let audits: Vec<_> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(i);
            let model = random_chain_model(&mut rng, &RandomInstanceOptions::default())?;
            let t = Instant::now();
            let a = theorem2_audit(&model, &opts)?;
            Ok((i, a, t.elapsed().as_secs_f64(), model.sizes))
        })
        .collect::<semcom::Result<Vec<_>>>()?;
    let bad21 = audits.iter().filter(|(_, a, _, _)| !a.flags.rse_ge_ose).count();
    let bad23 = audits.iter().filter(|(_, a, _, _)| !a.flags.ose_le_all_ne).count();
    let slowest = audits.iter().max_by(|a, b| a.2.total_cmp(&b.2)).unwrap();
    println!("instances: {n}, rse<ose: {bad21}, ose>ne: {bad23}");
    println!("slowest instance {} took {:.2}s ({:?})", slowest.0, slowest.2, slowest.3);
    println!("total {:.1}s", start.elapsed().as_secs_f64());
    Ok(())
}
