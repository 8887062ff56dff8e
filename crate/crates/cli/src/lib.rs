//! Report format shared by the `convalg` binary and its tests.

pub mod report;
