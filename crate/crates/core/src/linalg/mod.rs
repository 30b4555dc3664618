//! Dense and tridiagonal eigenvalue kernels.

mod householder;
mod jacobi;
mod lu;
mod tridiagonal;

pub use householder::tridiagonalize;
pub use jacobi::gram_eigenvalues;
pub use lu::Lu;
pub use tridiagonal::tridiagonal_eigenvalues;
