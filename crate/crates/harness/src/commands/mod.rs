pub mod convergence;
pub mod evolve;
pub mod geometry;
pub mod landau_check;
pub mod momentum_audit;

pub use convergence::cmd_convergence;
pub use evolve::cmd_evolve;
pub use geometry::cmd_geometry_verify;
pub use landau_check::cmd_landau_check;
pub use momentum_audit::cmd_momentum_audit;
