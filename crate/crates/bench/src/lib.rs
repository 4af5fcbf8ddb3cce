//! Criterion benchmarks for `auerbach`; see `benches/`.
