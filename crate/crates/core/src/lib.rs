//! Exact ranks of conformal-blocks bundles for finite fusion rings.
//!
//! The crate computes the rank of the g₂ level-1 bundle on the moduli space of
//! stable `n`-pointed genus-`g` curves three ways (a golden-ratio closed form
//! in ℚ(√5), clutching factorization, and elliptic-tail factorization) and
//! cross-checks them against independent oracles:
//!
//! * [`qfield`]: exact arithmetic in ℚ(√5), Fibonacci numbers and binomials.
//! * [`fusion`]: fusion-ring data with validation and a JSON loader.
//! * [`rank_engine`]: genus-0 recursion, clutching, dual-graph factorization
//!   and a brute-force oracle that shares no recursion path with the engine.
//! * [`closed_form`]: the golden-ratio closed form and the two Fibonacci sums.
//! * [`verlinde_numeric`]: the trigonometric Verlinde sum for g₂.
//! * [`graph_oracle`]: no-leaf edge-subgraph counts of Möbius ladders.
//! * [`cli`]: the `fusion-rank` command-line front end.

pub mod cli;
pub mod closed_form;
pub mod fusion;
pub mod graph_oracle;
pub mod qfield;
pub mod rank_engine;
pub mod verlinde_numeric;

pub use closed_form::{closed_rank, gregoire_rank, sum_clutch, sum_tails, verify_theorem, RankReport};
pub use fusion::{builtin_g2_level1, load_fusion, FusionData, Label};
pub use graph_oracle::{count_noleaf_subgraphs, moebius_ladder, SimpleGraph};
pub use qfield::{binom, fib, Q5, Rat};
pub use rank_engine::{DualGraph, RankEngine, Vertex};
