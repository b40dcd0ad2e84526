//! The guide's listings, compiled as doctests: one module per chapter so a
//! failure names its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/groups.md")]
pub mod groups {}
#[doc = include_str!("../../../book/src/domains.md")]
pub mod domains {}
#[doc = include_str!("../../../book/src/transforms.md")]
pub mod transforms {}
#[doc = include_str!("../../../book/src/range-functions.md")]
pub mod range_functions {}
#[doc = include_str!("../../../book/src/pg-example.md")]
pub mod pg_example {}
#[doc = include_str!("../../../book/src/poisson.md")]
pub mod poisson {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
