//! Runs the code listings in `book/src` as doctests. mdbook cannot resolve
//! crate dependencies on its own, so each chapter is pulled in here as the
//! docs of an empty module and `cargo test --doc` does the rest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/fock-states.md")]
pub mod fock_states {}
#[doc = include_str!("../../../book/src/optics.md")]
pub mod optics {}
#[doc = include_str!("../../../book/src/circuits.md")]
pub mod circuits {}
#[doc = include_str!("../../../book/src/graphs.md")]
pub mod graphs {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
