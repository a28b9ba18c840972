//! Small numerical kernels used by the physics modules.

mod fit;
mod quadrature;
mod roots;

pub use fit::{linear_fit, LinearFit};
pub use quadrature::{integrate_complex, QuadratureOptions};
pub use roots::brent;
