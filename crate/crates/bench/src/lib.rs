//! Criterion benchmarks live in `benches/`; run them with
//! `cargo bench -p ris-v2v-bench`.
