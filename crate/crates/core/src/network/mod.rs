//! The class `H_{m,a}` of shallow ReLU networks, its closure elements and the constructions
//! that move between them.

mod closure;
mod relu;
mod signs;

pub use closure::{realization_bound, realize_closure, replicate, ClosureElement, JTerm, KTerm};
pub use relu::ReluNetwork;
pub use signs::{reorder_alternating, Reordering, SignPattern};
