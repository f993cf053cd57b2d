//! Benchmarks for the twk pipeline live under `benches/`.
