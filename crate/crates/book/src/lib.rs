//! The guide's chapters, compiled so that `cargo test` runs their code
//! listings. mdbook cannot link against workspace crates on its own.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/equations.md")]
pub mod equations {}
#[doc = include_str!("../../../book/src/sonic.md")]
pub mod sonic {}
#[doc = include_str!("../../../book/src/extension.md")]
pub mod extension {}
#[doc = include_str!("../../../book/src/shooting.md")]
pub mod shooting {}
#[doc = include_str!("../../../book/src/certificates.md")]
pub mod certificates {}
#[doc = include_str!("../../../book/src/physical.md")]
pub mod physical {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
