//! Criterion benchmarks for cxell; see `benches/`.
