//! The chazy guide: every chapter of `book/` is compiled here so its code
//! snippets run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/systems.md")]
pub mod systems {}

#[doc = include_str!("../../../book/src/rational.md")]
pub mod rational {}

#[doc = include_str!("../../../book/src/integration.md")]
pub mod integration {}

#[doc = include_str!("../../../book/src/roots.md")]
pub mod roots {}

#[doc = include_str!("../../../book/src/transforms.md")]
pub mod transforms {}

#[doc = include_str!("../../../book/src/halphen.md")]
pub mod halphen {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
