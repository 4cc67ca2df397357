//! Traveling waves of FPU-type lattices as fixed points of
//! `w = A^2 (mu w + w^m)`, represented by Legendre-series arcs on unit
//! intervals, solved by Newton's method and certified with ball arithmetic
//! through a quasi-Newton contraction argument.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ball;
pub mod scalar;
pub mod legendre;
pub mod arc;
pub mod config;
pub mod chain;
pub mod aop;
pub mod exec;
pub mod solver;
pub mod validate;
pub mod wave;

pub use aop::{AOp, AopError};
pub use arc::{Arc, ArcError, ArcSpace};
pub use ball::{Ball, BallError};
pub use chain::{Chain, ChainError, ChainSpace, TailWeight};
pub use config::{ConfigError, Rational, SolveConfig};
pub use exec::{Executor, Sequential};
pub use solver::{Basis, Bump, FiniteRankM, NewtonState, Problem, SolveError};
pub use validate::{Certificate, CertifyError, Clause, ModeSet, ProfileExpect};
pub use scalar::Scalar;
