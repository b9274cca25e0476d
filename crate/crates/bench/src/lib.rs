//! Criterion benchmarks for the segpipe stages live under `benches/`.
