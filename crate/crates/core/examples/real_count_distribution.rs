//! Exact distribution of the number of real eigenvalues.

use eginoe::genmatrix::build;
use eginoe::probabilities::{distribution, prob_zero_forrester_nagao};
use eginoe::spectrum::eigendecompose;

fn main() -> eginoe::Result<()> {
    for tau in [0.0, 0.5, 0.9] {
        let d = distribution(&eigendecompose(&build(5, tau)?)?)?;
        println!("N = 10, tau = {tau}");
        for k in 0..=d.n() {
            println!("  P(#real = {:2}) = {:.12e}", 2 * k, d.prob(k));
        }
    }

    // closed forms for N = 2 and N = 4
    for n in [1, 2] {
        let s = eigendecompose(&build(n, 0.0)?)?;
        println!(
            "p_{},0: determinant {:.15}, alternative {:.15}",
            2 * n,
            distribution(&s)?.prob(0),
            prob_zero_forrester_nagao(n, 0.0)?
        );
    }

    // tiny probabilities keep their exponent
    let d = distribution(&eigendecompose(&build(20, 0.0)?)?)?;
    let big_n = 40.0f64;
    println!(
        "N = 40: ln p(all real) = {:.6} (closed form {:.6})",
        d.log_prob(20),
        big_n * (big_n - 1.0) / 4.0 * 0.5f64.ln()
    );
    let d = distribution(&eigendecompose(&build(400, 0.0)?)?)?;
    println!("N = 800: ln p(none real) = {:.6}", d.log_p_zero);
    Ok(())
}
