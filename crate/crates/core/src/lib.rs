//! Search, verification and bound bookkeeping for small complete arcs in
//! the Desarguesian projective plane PG(2,q).

pub mod arc;
pub mod bounds;
pub mod certify;
pub mod gf;
pub mod greedy;
pub mod plane;

pub use arc::{verify_arc, verify_complete, Arc, ArcError, CoverageState};
pub use bounds::{BoundRecord, KnownTable};
pub use certify::{read_and_verify, write_certificate, CertError, Certificate, Verdict};
pub use gf::{Field, FieldElement, GfError};
pub use greedy::{search, CandidatePolicy, SearchConfig, SearchError, SearchReport};
pub use plane::{LineId, PlaneError, PlaneIndex, PointId};
