//! A continuous game where every decoder action is a best response: the
//! robust leader pays 1 while every Nash equilibrium costs at most 0.

use semcom::scalar::{audit_counterexample, inner_max, payoff, ScalarProfile};

fn main() -> semcom::Result<()> {
    for g in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let (worst, h) = inner_max(g);
        println!("commit g = {g:+.1}: worst case {worst:.2} at h = {h:+.0}");
    }
    for (g, h) in [(1.0, 0.5), (-1.0, -0.5), (0.3, 0.0)] {
        println!("NE profile ({g:+.1}, {h:+.1}) costs {:+.3}", payoff(ScalarProfile::new(g, h)?));
    }
    let a = audit_counterexample(1e-3)?;
    println!(
        "robust value {} (grid {:.6}), Nash values in [{}, {}] (grid max {:.2e}), separation {}",
        a.rse_value, a.rse_grid_value, a.min_ne_value, a.max_ne_value, a.max_ne_grid_value, a.separation
    );
    Ok(())
}
