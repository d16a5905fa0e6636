//! Exploration scans and their bit-stable CSV / JSON / text output.

mod scans;
mod table;

pub use scans::{
    prop3_scan, q1_scan, q2_points, q2_sample_points, q2_scan, q3_scan, Prop3Params, Q2Point, NEAR_CANCELLATION,
};
pub use table::{render_reports, render_table, Cell, Format, Manifest, ScanRow, ScanTable};
