//! Criterion benchmarks for nosig-core; see `benches/`.
