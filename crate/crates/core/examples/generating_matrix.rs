//! Build the generating matrix by both routes and compare them.

use eginoe::genmatrix::{build, build_hypergeometric, compare_routes, Tolerance};
use eginoe::spectrum::eigendecompose;

fn main() -> eginoe::Result<()> {
    let (n, tau) = (6, 0.5);
    let m = build(n, tau)?;
    println!("M_{n} at tau = {tau} ({} route):", m.route().as_str());
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:9.6}")).collect();
        println!("  {}", cells.join(" "));
    }

    let h = build_hypergeometric(n, tau)?;
    println!("hypergeometric M[1,1] = {:.15}, quadrature M[1,1] = {:.15}", h.entry(1, 1), m.entry(1, 1));

    let tol = Tolerance::DEFAULT;
    for tau in [-0.5, 0.0, 0.9, 0.99] {
        let m = build(48, tau)?;
        let c = compare_routes(&m, 48)?;
        println!(
            "n = 48, tau = {tau:5}: max rel diff {:.1e}, max abs diff on small entries {:.1e}",
            c.max_relative(tol.small_entry),
            c.max_absolute_small(tol.small_entry)
        );
    }

    let s = eigendecompose(&m)?;
    println!("eigenvalues: {:?}", s.lambdas);
    Ok(())
}
