//! File formats, SVG output and the command line tool for `tritile-core`.

pub mod cli;
pub mod io;
pub mod report;
pub mod svg;
