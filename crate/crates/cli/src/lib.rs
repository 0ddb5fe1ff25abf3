//! Front end for the `gridpattern` simulator: file formats, reports,
//! rendering, random inputs and fuzzing.

pub mod analyze;
pub mod config_file;
pub mod fuzz;
pub mod render;
pub mod report;
pub mod sample;
