//! Toolkit for SLCO models of communicating objects: parsing and
//! validation, state-space generation, labeled transition systems in
//! several file formats, and bisimulation reduction and comparison.
//!
//! ```
//! use slco::{cs, lts, reduce, syntax};
//!
//! let model = syntax::load_model(
//!     "model M {
//!        classes
//!          C {
//!            state machines
//!              SM {
//!                initial A final B
//!                transitions
//!                  go from A to B { }
//!              }
//!          }
//!        objects c : C
//!        channels
//!      }",
//! )
//! .unwrap();
//! let graph = cs::explore(&model, cs::ExploreLimits::default()).unwrap();
//! let l = lts::cs_to_lts(&graph);
//! assert_eq!(l.num_states, 2);
//! assert_eq!(reduce::reduce(&l, reduce::Relation::Branching).unwrap().num_states, 2);
//! ```

pub mod cli;
pub mod cs;
pub mod lts;
pub mod reduce;
pub mod syntax;

/// Version of the `.lts` and CS text formats written by this crate.
pub const FORMAT_VERSION: u32 = 1;
