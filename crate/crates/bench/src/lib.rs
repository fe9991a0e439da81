//! Criterion benchmarks for the `weingarten` engine. Run with `cargo bench -p weingarten-bench`.
