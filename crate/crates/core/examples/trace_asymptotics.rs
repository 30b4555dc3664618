//! Scaled trace powers against their limits in both regimes.

use eginoe::asymptotics::{convergence_report, Quantity, Regime};

fn main() -> eginoe::Result<()> {
    let grid = [100, 200, 400, 800];
    for regime in [Regime::Strong(0.0), Regime::Strong(0.5), Regime::Weak(1.0)] {
        for m in 1..=3 {
            let r = convergence_report(Quantity::TraceLimit { m }, regime, &grid)?;
            println!("{} {:?}, m = {m}: limit {:.8}", regime.name(), regime.param(), r.rows[0].limit);
            for row in &r.rows {
                println!("  n = {:4}  finite {:.8}  rel err {:.2e}", row.n, row.finite, row.rel_error);
            }
        }
    }
    Ok(())
}
