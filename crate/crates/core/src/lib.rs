//! Guillotine strip packing toolkit.
//!
//! Packs axis-aligned rectangles into a fixed-width strip under the
//! guillotine constraint: every item must be separable from the packing by a
//! recursive sequence of edge-to-edge axis-parallel cuts. The crate provides
//! the data model and verifiers, a cut-tree checker, shelf heuristics, an
//! exact generalized-assignment DP, nice-packing containers, an exact oracle
//! for tiny instances, and two container-based approximation pipelines.
//!
//! ```
//! use gspkit::model::{frac, verify_packing, Instance};
//! use gspkit::guillotine::check_separable;
//! use gspkit::solvers::{solve_portfolio, SolveBudgets};
//!
//! let instance = Instance::new(10, &[(5, 4), (5, 4), (6, 3)]);
//! let result = solve_portfolio(&instance, frac(1, 4), &SolveBudgets::default()).unwrap();
//!
//! assert_eq!(result.height, 7);
//! assert!(verify_packing(&instance, &result.packing).is_empty());
//! check_separable(&instance, &result.packing).unwrap();
//! ```

pub mod containers;
pub mod gap;
pub mod generators;
pub mod guillotine;
pub mod heuristics;
pub mod model;
pub mod solvers;

pub use model::{Classification, ConstantProfile, Instance, Item, ItemClass, Packing, Placement};
