//! External-memory machine simulator with I/O-efficient algorithms, fine-grained
//! reductions between them, and a divide-and-conquer recurrence solver.

pub mod algos;
pub mod error;
pub mod extprims;
pub mod fit;
pub mod formats;
pub mod gen;
pub mod graph;
pub mod harness;
pub mod instances;
pub mod iomachine;
pub mod oracles;
pub mod recurrence;
pub mod verify;
pub mod reductions;

pub use error::{Error, Result};
pub use graph::{Edge, Graph};
pub use instances::{HsInstance, Matrix, OvInstance, ThreeSumInstance, TriangleInstance, TriangleTarget, VectorSets};
pub use iomachine::{checked_word, sat_add, Machine, MachineConfig, Mark, Mode, Region, Stats, Word, INF};
