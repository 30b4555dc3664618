//! The constants c(alpha) and d(alpha) that interpolate between the real
//! Ginibre and GOE limits.

use eginoe::asymptotics::{c_alpha, d_alpha, CMethod, DMethod};
use eginoe::specfun::zeta_three_halves;

fn main() -> eginoe::Result<()> {
    println!("alpha      c(bessel)          c(erf)             d(series)          d(integral)        d/c");
    for alpha in [0.1, 0.5, 1.0, 2.0, 4.0, 10.0, 50.0] {
        let c = c_alpha(alpha, CMethod::Bessel)?;
        let ce = c_alpha(alpha, CMethod::ErfIntegral)?;
        let d = d_alpha(alpha, DMethod::Series)?;
        let di = d_alpha(alpha, DMethod::Integral)?;
        println!("{alpha:5}  {c:.15}  {ce:.15}  {d:.15}  {di:.15}  {:.6}", d / c);
    }
    println!("large-alpha ratio zeta(3/2)/2 = {:.6}", 0.5 * zeta_three_halves());
    Ok(())
}
