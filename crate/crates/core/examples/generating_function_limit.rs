//! `N^{-1/2} log E[x^{#real/2}]` against its polylogarithm limit.

use eginoe::asymgap::genfun_limit_check;

fn main() -> eginoe::Result<()> {
    let t = genfun_limit_check(&[100, 400, 1000], 0.0, &[0.25, 0.5, 1.0, 1.5, 1.9])?;
    for row in &t.rows {
        println!(
            "x = {:4}  N = {:5}  finite {:+.8}  limit {:+.8}  err {:.2e}",
            row.x, row.big_n, row.finite, row.limit, row.abs_error
        );
    }
    for (x, ok) in &t.shrinking {
        println!("x = {x}: error shrinking with N: {ok}");
    }
    Ok(())
}
