//! Exact computations around degenerating mixed Hodge structures:
//! Deligne bigradings and splittings over Q(i), monodromy weight
//! filtrations, polarized nilpotent orbit tests, SL(2)-orbit data,
//! root fans, and the monoidal, ratio and valuative combinatorics of
//! boundary charts.  Everything is rational arithmetic unless a routine
//! says otherwise.

pub mod scalar;
pub mod mat;
pub mod subspace;
pub mod filtration;
pub mod cones;
pub mod fans;
pub mod mhs;
pub mod monoid;
pub mod monodromy;
pub mod nilporb;
pub mod polarized;
pub mod sl2;
