//! Benchmark fixtures for the buildinglab crate.
