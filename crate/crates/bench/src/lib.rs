//! Criterion benchmarks for sequence construction and simulation; see `benches/`.
