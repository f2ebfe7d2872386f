//! Criterion benchmarks for `unlockable-core`; see `benches/`.
