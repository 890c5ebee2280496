//! Statistical inference for budget-reduced (incomplete) U-statistics.
//!
//! A complete degree-`r` U-statistic averages a symmetric kernel over all
//! `C(n, r)` index tuples, which is often too expensive. This crate averages
//! over a *design*: a multiset of roughly `n^alpha` tuples (`1 < alpha <= r`),
//! and still delivers calibrated inference (confidence intervals, p-values)
//! by correcting the normal approximation of the studentized statistic with
//! Edgeworth expansions and inverting them into Cornish-Fisher quantiles.
//!
//! Module map:
//!
//! - [`kernel`]: sample containers and the built-in kernels.
//! - [`design`]: deterministic and randomized tuple designs, subset counts.
//! - [`estimate`]: `U_J` and the `O(n^alpha)` plug-in moment estimators.
//! - [`edgeworth`]: CDF expansions for every supported design/case.
//! - [`inference`]: Cornish-Fisher inversion, smoothers, CIs and p-values.
//! - [`network`]: graphon graphs, motif moments, and their inference.
//! - [`validate`]: Monte Carlo harness, brute-force oracles, KS utilities.

pub mod design;
pub mod edgeworth;
pub mod error;
pub mod estimate;
pub mod inference;
pub mod kernel;
pub mod network;
pub mod rng;
pub mod validate;

pub use design::{Alpha, Design, Scheme, SubsetCounts};
pub use edgeworth::{Expansion, ExpansionKind};
pub use error::{Error, Result};
pub use estimate::{MomentEstimates, StudentizedValue};
pub use inference::{CfQuantile, InferenceReport};
pub use kernel::{Dataset, Kernel, SamplePoint};
pub use network::{Graph, GraphonSpec, MotifSpec};
pub use validate::{McConfig, McResult};
