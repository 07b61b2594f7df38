//! The running example quivers used throughout the tests and the guide.
//!
//! The same quivers ship as `.qvr` documents in the crate's `fixtures/`
//! directory for use with the CLI.

use crate::quiver::BoundQuiver;

/// Six vertices, seven arrows, four relations; the recurring worked example.
///
/// `M = {al·be·ze, ga·th·ka, la}`, `T = {a, g}`, one anticycle `be·ga·la`,
/// and `φ = {(0,3): 1, (2,2): 1, (3,2): 1}`.
pub fn ex1() -> BoundQuiver {
    BoundQuiver::build(
        "ex1",
        vec!["a", "b", "c", "d", "f", "g"],
        vec![
            ("al", "a", "b"),
            ("be", "b", "c"),
            ("ga", "c", "d"),
            ("ze", "c", "f"),
            ("la", "d", "b"),
            ("th", "d", "f"),
            ("ka", "f", "g"),
        ],
        vec![("be", "ga"), ("ga", "la"), ("la", "be"), ("ze", "ka")],
    )
}

/// The path algebra of the linearly oriented A2 quiver: one arrow, no
/// relations.
pub fn a2() -> BoundQuiver {
    BoundQuiver::build("a2", vec!["a", "b"], vec![("al", "a", "b")], vec![])
}

/// The Kronecker quiver: two parallel arrows, no relations.
pub fn kronecker() -> BoundQuiver {
    BoundQuiver::build(
        "kr",
        vec!["a", "b"],
        vec![("al", "a", "b"), ("be", "a", "b")],
        vec![],
    )
}

/// A seven-vertex gentle quiver with a central vertex `x` of in- and
/// out-degree 2 satisfying the strengthened reflection conditions, used to
/// exercise the generalized APR reflection.
pub fn ex2() -> BoundQuiver {
    BoundQuiver::build(
        "ex2",
        vec!["c1", "c2", "b1", "b2", "x", "a1", "a2"],
        vec![
            ("g1", "c1", "b1"),
            ("g2", "c2", "b2"),
            ("b1x", "b1", "x"),
            ("b2x", "b2", "x"),
            ("xa1", "x", "a1"),
            ("xa2", "x", "a2"),
        ],
        vec![("g1", "b1x"), ("g2", "b2x"), ("b1x", "xa2"), ("b2x", "xa1")],
    )
}

/// All fixtures, used by corpus-style tests.
pub fn all() -> Vec<BoundQuiver> {
    vec![ex1(), a2(), kronecker(), ex2()]
}
