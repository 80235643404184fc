//! Holds the `acceptance` test target, which checks the library end to end
//! at full scale and prints one PASS or FAIL line per criterion.
//!
//! Run it alone with `cargo test -p ieta-tests --test acceptance`.
