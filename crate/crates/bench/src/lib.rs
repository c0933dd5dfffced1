//! Criterion benchmarks for coulomb-core live in `benches/`.
