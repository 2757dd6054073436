//! Criterion benchmarks for `ttc-core`; see `benches/`.
