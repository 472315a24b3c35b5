//! Planar travelling waves for a free-interface combustion model with
//! fractional reaction order 0 < α < 1.
//!
//! The wave is found in three nested stages. For a front value v0 the
//! speed c(v0) is the unique c at which the stable manifold of
//! x' = y, Λy' = cy + x^α passes through the initial state; the trailing
//! interface R is the finite time the manifold takes to reach the origin;
//! and v0 itself is fixed by requiring the reconstructed temperature to
//! equal θ at the front.
//!
//! Everything is generic over the scalar type through [`Real`]; the
//! aliases below fix it to `f64`.
//!
//! ```
//! use flamewave::{Config, Params};
//!
//! let p = Params::new(0.5, 1.0, 0.5).unwrap();
//! let sol = flamewave::solve_full(&p, &Config::default()).unwrap();
//! assert_eq!(sol.closure.v0_star, 0.5);
//! assert!(sol.diagnostics.all_pass());
//! ```

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod fixedpoint;
pub mod interp;
pub mod limits;
pub mod manifold;
pub mod model;
pub mod ode;
pub mod profiles;
pub mod quad;
pub mod real;
pub mod roots;
pub mod settling;
pub mod speed;

pub use diagnostics::{run_diagnostics, Check, CheckKind, DiagnosticsReport};
pub use error::{Error, Result};
pub use fixedpoint::{solve_closure, solve_wave, Branch, ClosureResult, ScalarWave};
pub use limits::{LimitCase, LimitKind, LimitSolution};
pub use manifold::{grow_manifold, sample_phase_portrait, BoundingBox, ManifoldCurve, Polyline};
pub use model::{Bracket, ClosureInterval, ClosureMode, PhaseState, PhysicalParams, SolverConfig};
pub use profiles::{extend_full_line, solve_full, Profile, Region, WaveSolution};
pub use real::Real;
pub use settling::{settling_time, trailing_interface, SettlingResult};
pub use speed::{psi, solve_speed, SpeedResult};

pub type Params = PhysicalParams<f64>;
pub type Config = SolverConfig<f64>;
pub type Manifold = ManifoldCurve<f64>;
pub type Wave = WaveSolution<f64>;
pub type Closure = ClosureResult<f64>;
pub type Speed = SpeedResult<f64>;
pub type WaveProfile = Profile<f64>;
