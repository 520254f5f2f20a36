//! Assignment of university class sections to professors with a genetic
//! algorithm.
//!
//! The pipeline is: load an [`domain::Instance`], evolve chromosomes with
//! [`engine::run`], score schedules with [`fitness`], audit the result with
//! [`postopt`], and write artifacts with [`io`].

pub mod chromosome;
pub mod domain;
pub mod engine;
pub mod fitness;
pub mod io;
pub mod postopt;
pub mod synth;
