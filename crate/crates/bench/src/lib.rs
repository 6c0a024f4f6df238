//! Criterion benchmarks for the crescendo kernels; see `benches/`.
