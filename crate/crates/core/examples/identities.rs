//! Numerical checks of the identities the library relies on.

fn main() -> eginoe::Result<()> {
    for c in eginoe::identities::run_all()? {
        println!(
            "{:5} {:48} cases {:7}  max err {:.2e}  tol {:.0e}",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.cases,
            c.max_error,
            c.tolerance
        );
    }
    Ok(())
}
