//! Optimal-prediction reductions of linear systems and the moment-closure
//! solvers built on them.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod model_problem;
pub mod moments;
pub mod op_engine;
pub mod solver1d;
pub mod solver2d;
pub mod spatial_moments;

pub use error::{Error, Result};
pub use gaussian::{GaussianMeasure, ProjectionPair};
pub use moments::{
    build_matrices, closure_coefficients, ClosureCoefficients, ClosureFamily, ClosureSpec, Coefficient,
    MomentMatrices,
};
pub use op_engine::{CMatrix, CVector, KernelTrace, LinearSystem, MemoryPolicy};
pub use solver1d::{MomentField1D, Simulation1D, Snapshot};
pub use solver2d::{Boundary, Closure2D, Field2D, Geometry, MaterialMap2D};
pub use spatial_moments::SpatialMomentTable;
