//! Benchmark harness for the typicality library; see `benches/`.
