pub mod amplitude;
pub mod angle;
pub mod checks;
pub mod circuit;
pub mod experiments;
pub mod hilbert;
pub mod outcome;
pub mod pathintegral;
pub mod rng;
pub mod streams;

/// Library version, recorded in output headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/circuits.md")]
    struct Circuits;
    #[doc = include_str!("../../../book/src/streams.md")]
    struct Streams;
    #[doc = include_str!("../../../book/src/hilbert.md")]
    struct Hilbert;
    #[doc = include_str!("../../../book/src/experiments.md")]
    struct Experiments;
    #[doc = include_str!("../../../book/src/sampling.md")]
    struct Sampling;
    #[doc = include_str!("../../../book/src/path-integral.md")]
    struct PathIntegral;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
