//! The three-symbol semantic game: its payoff table, equilibria at
//! alpha = beta = 1, and how the robust value moves with the decoder offset.

use semcom::equilibria::{solve_ne, solve_ose_game, solve_rse_game, table1_game, theorem2_audit_game, SolverOptions};

fn main() -> semcom::Result<()> {
    let opts = SolverOptions::default();
    let game = table1_game(1.0, 1.0);
    for (i, (a, b)) in game.enc_distortion.iter().zip(&game.dec_distortion).enumerate() {
        let cells: Vec<String> = a.iter().zip(b).map(|(x, y)| format!("({x}, {y})")).collect();
        println!("g{i}: {}", cells.join("  "));
    }
    let ose = solve_ose_game(&game, &opts)?;
    let rse = solve_rse_game(&game, &opts)?;
    println!("OSE {:.3}  RSE {:.3}", ose.enc_value, rse.enc_value);
    for e in solve_ne(&game, &opts)?.equilibria {
        println!("NE  {:.3}  x = {:?}  y = {:?}", e.enc_value, e.g.kernel.row(0), e.h.kernel.row(0));
    }
    println!("beta   OSE    RSE    min NE  ordering holds");
    for beta in [0.0, 1.0, 1.2, 2.0, 5.0] {
        let a = theorem2_audit_game(&table1_game(1.0, beta), &opts)?;
        let min_ne = a.ne.iter().map(|e| e.enc_value).fold(f64::INFINITY, f64::min);
        println!(
            "{beta:<5}  {:.3}  {:.3}  {min_ne:.3}   {}",
            a.ose.enc_value,
            a.rse.enc_value,
            a.flags.rse_ge_ose && a.flags.ose_le_all_ne
        );
    }
    Ok(())
}
