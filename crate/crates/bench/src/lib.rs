//! Criterion benchmarks for the framed-betti engine live in `benches/`.
