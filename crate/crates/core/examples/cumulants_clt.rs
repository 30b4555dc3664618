//! Exact cumulants of the real-eigenvalue count and the limiting
//! variance-to-mean ratio.

use eginoe::asymptotics::{clt_sigma2, cumulants, Regime};
use eginoe::genmatrix::build;
use eginoe::spectrum::eigendecompose;

fn main() -> eginoe::Result<()> {
    for regime in [Regime::Strong(0.25), Regime::Weak(1.0)] {
        println!("{} {}: predicted var/mean {:.6}", regime.name(), regime.param(), clt_sigma2(regime)?);
        for n in [50, 200, 800] {
            let s = eigendecompose(&build(n, regime.tau_at(n))?)?;
            let k = cumulants(&s, 3)?;
            println!(
                "  N = {:5}  mean {:10.4}  var {:10.4}  kappa_3 {:9.4}  var/mean {:.6}",
                2 * n,
                k[0],
                k[1],
                k[2],
                k[1] / k[0]
            );
        }
    }
    Ok(())
}
