//! Numerical laboratory for Chazy's equation and the generalised Chazy
//! equation
//!
//! ```text
//! y''' - 2 y y'' + 3 y'^2 - 4/(36 - k^2) (6 y' - y^2)^2 = 0
//! ```
//!
//! written as the first-order system in `(P, Q, R)`:
//!
//! ```text
//! P' = (P^2 - Q) / 6
//! Q' = 2/3 (P Q - R)
//! R' = P R + c Q^2,    c = k^2 / (36 - k^2)   (c = -1 when k = ∞)
//! ```
//!
//! The crate is organised around the pieces needed to check solution
//! transformations numerically:
//!
//! * [`param`] and [`system`]: the parameter `k`, the system right-hand
//!   side and the residual used by every check.
//! * [`rational`]: the closed-form solutions `y = a / (x - c)`, used as ground
//!   truth.
//! * [`halphen`]: the generalised Darboux–Halphen system and the weighted
//!   combinations of its solutions that solve the generalised Chazy equation.
//! * [`roots`]: closed-form quadratic/cubic/quartic solvers and branch
//!   tracking.
//! * [`odeint`]: Dormand–Prince 5(4) integration with dense output.
//! * [`transforms`]: the catalog `T1`..`T19` of automorphisms and
//!   cross-parameter maps, with composition.
//! * [`verify`]: residual reports, commutation checks and seeded audits.
//!
//! ```
//! use chazy::{Parameter, SystemSpec, Triple, rational::RationalSolutionSpec};
//! use num_complex::Complex64;
//!
//! let k2 = Parameter::integer(2).unwrap();
//! let spec = SystemSpec::new(k2);
//! let sol = RationalSolutionSpec::new(k2, Complex64::new(-2.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
//! let x = Complex64::new(1.0, 0.0);
//! let t = sol.triple(x).unwrap();
//! let dt = sol.derivative(x).unwrap();
//! assert!(spec.residual(&t, &dt) < 1e-14);
//! ```

pub mod error;
pub mod field;
pub mod halphen;
pub mod odeint;
pub mod param;
pub mod rational;
pub mod roots;
pub mod sampling;
pub mod system;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use param::{chazy_coefficient, Parameter};
pub use system::{residual, system_rhs, SystemSpec, Triple};

/// Complex scalar used for all state.
pub type C64 = num_complex::Complex64;
