//! JSON project-file parsing and schedule-report emission for the `tropsched`
//! command-line tool.

pub mod project;
pub mod report;
