//! Algebraic-geometric evaluation codes whose automorphism groups contain
//! the group generated by two (or more) Galois-point groups of a plane curve.
//!
//! The pipeline: pick a curve with automorphism groups `G1`, `G2`, a point
//! `Q` whose orbit sums under both groups agree (the divisor `D`), and a
//! rational point `Q'` whose orbit `S` under `<G1, G2>` is larger than
//! `|G1|`. Evaluating `L(D)` on `S` gives a code of length `#S` and minimum
//! distance at least `#S - |G1|`, on which `<G1, G2>` acts faithfully.
//!
//! ```
//! use agcode::{analysis, construction, families::Family};
//!
//! let inst = construction::Instance::builtin(Family::ProjLine, 5).unwrap();
//! let built = construction::build_code(&inst).unwrap();
//! assert_eq!((built.code.n(), built.code.k()), (5, 3));
//! let d = analysis::min_distance_exact(&built.code, 1 << 20).unwrap();
//! assert_eq!(d.distance, 3);
//! ```

pub mod analysis;
pub mod autgroup;
pub mod construction;
pub mod families;
pub mod geometry;
pub mod gf;
pub mod schema;

pub use analysis::{CoordPermutation, EvalCode};
pub use autgroup::{AutGroup, ProjMap};
pub use construction::{Divisor, EvalBasis, Instance};
pub use families::Family;
pub use geometry::{Form, PlaneCurve, ProjPoint};
pub use gf::{Embedding, FieldElement, FieldSpec};
