//! Combinatorial derived invariants of gentle algebras.
//!
//! A gentle algebra is presented by a bound quiver `(Q, I)`: a finite quiver
//! together with a set of length-2 relations subject to degree and
//! successor-uniqueness constraints. This crate computes, with exact
//! arithmetic throughout:
//!
//! - validation of (local) gentleness, threads, cycles and path bases
//!   ([`quiver`]);
//! - the blossoming completion and the thread permutation Φ ([`blossom`]);
//! - the Avella-Alaminos–Geiss invariant φ, its graded variant, Hochschild
//!   dimension formulas, the repetition formula and its Möbius inversion
//!   ([`invariants`]);
//! - finite gentle repetitions `A^(k)`, weldings, generalized
//!   Auslander-Platzeck-Reiten reflections, bound-quiver isomorphism and a
//!   seeded random generator ([`construct`]);
//! - the associated semisimple algebra `V(A)`, the embedding `η_A`, the
//!   upper-triangular realization of `A^(k)` and the almost-standard-dual
//!   structure of `Cok η_A` ([`matrix`]);
//! - a line-oriented `.qvr` text format and deterministic structured output
//!   ([`io`]).
//!
//! Everything is a pure function on immutable data; all identities checked by
//! [`invariants::consistency_suite`] are exact integer or rational equalities.
//!
//! ```
//! use gentle_kit::fixtures;
//! use gentle_kit::invariants::phi;
//!
//! let (q, l, count) = phi(&fixtures::ex1()).unwrap().entries()[0];
//! assert_eq!((q, l, count), (0, 3, 1)); // one anticycle of length 3
//! ```

pub mod blossom;
pub mod construct;
pub mod fixtures;
pub mod invariants;
pub mod io;
pub mod matrix;
pub mod quiver;

mod report;

pub use report::{CheckItem, CheckReport};

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A `.qvr` document failed to parse; positions are 1-based.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// The standing assumption `|Q1| > 0` is violated.
    #[error("quiver has no arrows; at least one arrow is required")]
    EmptyQuiver,

    /// An operation required a (locally) gentle input and validation failed.
    #[error("quiver '{name}' is not {mode}: {first_violation}")]
    NotGentle {
        name: String,
        mode: &'static str,
        first_violation: String,
    },

    /// An operation-specific precondition failed.
    #[error("{0}")]
    Precondition(String),

    /// The isomorphism search exceeded its node budget.
    #[error("isomorphism search budget exceeded after {0} nodes")]
    SearchBudget(usize),

    /// The random generator could not produce a valid quiver.
    #[error("generation budget exhausted: {0}")]
    Generation(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

// Book chapters double as doc-tests so the guide stays in sync with the API.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            #[allow(dead_code)]
            struct $name;
        };
    }

    chapter!(BoundQuivers, "../../../book/src/bound-quivers.md");
    chapter!(
        ThreadsAndBlossoming,
        "../../../book/src/threads-and-blossoming.md"
    );
    chapter!(AgInvariants, "../../../book/src/ag-invariants.md");
    chapter!(Repetitions, "../../../book/src/repetitions-and-welding.md");
    chapter!(Reflections, "../../../book/src/apr-reflections.md");
    chapter!(MatrixRealization, "../../../book/src/matrix-realization.md");
    chapter!(CliAndFormats, "../../../book/src/cli-and-formats.md");
}
