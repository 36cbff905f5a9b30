//! Multivalued Datalog.
//!
//! Programs are Datalog rules annotated with an implication operator and an
//! uncertainty level, evaluated over one of five value systems: fuzzy
//! scalars, intuitionistic pairs, interval-valued pairs or two bipolar
//! variants. A knowledge base adds proximity relations between constants and
//! between predicates, so that facts also hold, to a degree, for their
//! neighbours.
//!
//! ```
//! use mvdatalog::{engine, lang, Mode};
//!
//! let program = lang::parse_program(
//!     "%system fuzzy.
//!      fact p(a) = 0.8.
//!      rule q(X) <- p(X) : godel, 0.7.",
//! )?;
//! let report = engine::fixpoint(&program, Mode::Det, None, 100)?;
//! let q = lang::Atom::ground("q", &["a"]);
//! assert_eq!(report.interpretation.get(&q).unwrap().first(), 0.7);
//! # Ok::<(), mvdatalog::Error>(())
//! ```

pub mod cli;
pub mod engine;
mod error;
pub mod implications;
pub mod kb;
pub mod lang;
pub mod query;
pub mod values;

pub use engine::{FixpointReport, Interpretation, Mode};
pub use error::{Error, Result, Span};
pub use implications::ImplicationId;
pub use lang::{Atom, Program, Term};
pub use values::{TruthValue, ValueSystem};
