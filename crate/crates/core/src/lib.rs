//! Exact decision procedures for logarithmic derivation modules of central
//! hyperplane arrangements: the determinant (free basis) criterion, the
//! minor-coefficient (minimal plus-one generation) criterion, and an
//! independent graded linear-algebra oracle that cross-checks both. All
//! arithmetic is over the rationals with unbounded integers; every verdict
//! comes with a re-checkable certificate.

pub mod arrangement;
pub mod cert;
pub mod criteria;
pub mod derivation;
pub mod linalg;
pub mod minors;
pub mod oracle;
pub mod poly;
pub mod rational;
