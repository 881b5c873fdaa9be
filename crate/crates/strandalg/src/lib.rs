//! Exact symbolic engine for bigraded differential graded rings spanned by
//! dotted strand diagrams.
//!
//! The rings R(n, m) handled here are generated by braid-like diagrams on
//! n fermionic and m bosonic strands. Bosonic strands interact through the
//! nilHecke relations (dots and divided-difference crossings), fermionic
//! strands through the signed strand-algebra relations (square-zero
//! crossings, distant anticommutativity and a differential resolving
//! crossings), and the two families are coupled by mixed crossings. The
//! crate provides:
//!
//! - exact Laurent-polynomial and symmetric-group combinatorics,
//! - the normal-form rewriting engine and basis enumeration,
//! - the faithful polynomial representation used as a correctness oracle,
//! - homology, contraction witnesses and idempotent truncations,
//! - divided-power idempotents and projective decomposition certificates.

pub mod diagram;
pub mod dg;
pub mod error;
pub mod k0;
pub mod laurent;
pub mod linalg;
pub mod perm;
pub mod pol;
pub mod rewrite;

pub use diagram::{BiDegree, DiagramTerm, Element, Seq, StrandKind, Token};
pub use error::{Error, Result};
pub use laurent::LaurentInt;
pub use perm::{Perm, ReducedWord};
