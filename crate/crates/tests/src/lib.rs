//! Holds the `acceptance` test target, which exercises both crates end to end.
