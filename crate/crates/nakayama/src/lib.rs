//! Exact-arithmetic computations in the representation theory of the
//! Nakayama truncated algebras KZ_n/J^d with d = p^m <= n over F_p:
//! tensor-product decompositions of the uniserial modules M(i, j),
//! Green-ring structure constants and generator expressions, the
//! Pascal-triangle construction of indecomposable submodules, polynomial
//! presentations Z[y, z, w1..w_{m-1}]/(g_0..g_m), and, for d = 2, homology
//! and homotopy-category decompositions of tensor products of string
//! complexes together with a scanner for the open s > s' > 1 case.

// vertex-indexed loops over several parallel per-vertex structures read
// better than chained enumerate/zip here
#![allow(clippy::needless_range_loop)]

pub mod derived;
pub mod error;
pub mod greenring;
pub mod hopf;
pub mod linalg;
pub mod modcat;
pub mod pascal;
pub mod presentation;
pub mod util;

pub use error::{Error, Result};
pub use hopf::{validate_hopf, AlgebraParams};
pub use modcat::{make_uniserial, tensor, Decomposition, QuiverRep, UniserialClass};
