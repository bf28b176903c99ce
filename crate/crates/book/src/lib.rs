//! The guide in `book/src`, compiled as doc-tests so its snippets cannot
//! drift from the library.

#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}

    #[doc = include_str!("../../../book/src/kernels.md")]
    pub mod kernels {}

    #[doc = include_str!("../../../book/src/register.md")]
    pub mod register {}

    #[doc = include_str!("../../../book/src/paths.md")]
    pub mod paths {}

    #[doc = include_str!("../../../book/src/quadrature.md")]
    pub mod quadrature {}

    #[doc = include_str!("../../../book/src/oracle.md")]
    pub mod oracle {}

    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
