//! Generators, brute-force oracles and executable property suites.
pub mod brute;
pub mod gen;
pub mod suites;
pub use brute::brute_equiv;
pub use gen::{gen_types, gen_well_typed_terms, GenConfig};
pub use suites::{run_suite, Failure, Suite, SuiteReport};
