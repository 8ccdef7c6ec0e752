//! Intersecting families of q-ary vectors under sum-type intersection:
//! vector and family types, colex orderings and shadows, extremal
//! constructions, exact branch-and-bound search, and vector-pair systems.

pub mod bitset;
pub mod constructions;
pub mod counting;
pub mod error;
pub mod io;
pub mod ivp;
pub mod order;
pub mod qvec;
pub mod scalar;
pub mod search;

pub use error::{Error, Result};
pub use ivp::{PairSystem, SystemKind, WeightedReportExact, WeightedReportF64};
pub use order::IndexSet;
pub use qvec::{
    enumerate_slice, family_check, intersection_size, measures, Mode, PredicateSpec, QVec, SliceKind, VecFamily,
};
pub use scalar::{Rational, Scalar};
pub use search::{max_family, SearchProblem, SearchResult};
