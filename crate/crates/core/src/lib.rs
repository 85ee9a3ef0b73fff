//! Solvers and analysis tools for interdependent security games on networks.
//!
//! Players on an undirected graph choose security investments in `[0, 1]`.
//! Each player perceives her probability of being successfully attacked
//! through a probability weighting function (Prelec or identity), and the
//! attack probability depends on neighbors' investments through one of three
//! externalities: total effort (neighborhood average), weakest link
//! (neighborhood minimum), or best shot (neighborhood maximum).
//!
//! The crate computes pure Nash equilibria of these games by best-response
//! dynamics, by a linear-complementarity formulation solved with Lemke's
//! method, and by direct solution of the interior fixed-point system. It
//! also provides the scalar critical points that drive the equilibrium
//! structure, comparative statics in the weighting parameter, and the graph
//! machinery (generators, maximal independent sets, labeled trees) the
//! equilibrium characterizations rely on.

// Reference constants in tests keep their full oracle precision even where
// it exceeds f64; truncating them by hand would only invite typos.
#![allow(clippy::excessive_precision)]

pub mod critical;
pub mod lcp;
pub mod network;
pub mod statics;
pub mod total_effort;
pub mod weighting;
pub mod wl_bs;
