//! Probability of no real eigenvalues and its large-deviation rate.

use eginoe::asymgap::ldp_table;
use eginoe::asymptotics::Regime;

fn main() -> eginoe::Result<()> {
    for regime in [Regime::Strong(0.0), Regime::Strong(0.5), Regime::Weak(1.0), Regime::Weak(3.0)] {
        println!("{} regime, param {}", regime.name(), regime.param());
        for e in ldp_table(regime, &[50, 200, 800])? {
            println!(
                "  N = {:5}  scaled log p = {:.6}  limit {:.6} ({:?})  K = {}  remainder {:.2e} <= {:.2e}",
                e.big_n, e.scaled_log_p, e.limit, e.relation, e.k_used, e.remainder, e.remainder_bound
            );
        }
    }
    Ok(())
}
