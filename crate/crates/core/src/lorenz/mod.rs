//! Lorenz maps in the family `F(c, v, φ)`.

mod io;
mod map;
mod pl;

pub use io::{parse_map, write_graph, write_map};
pub use map::{FirstReturnSample, LorenzRep, RangePolicy, RenormCheck, ReturnData, ReturnPoint};
pub use pl::{uniform_nodes, PlHomeo};
