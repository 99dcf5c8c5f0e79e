//! Criterion benchmarks for `deformopt`; see `benches/solvers.rs`.
