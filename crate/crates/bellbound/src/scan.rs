//! Parallel surface scan and its CSV rendering.

use bellbound_core::bounds::{scan_row, BoundSurface};
use rayon::prelude::*;

use crate::format::{csv_line, format_sig};

pub const CSV_HEADER: [&str; 8] = [
    "p1", "p2", "h_B", "h_Bxorb", "p_max_a0", "p_max_a1", "beta_max", "alpha_max",
];

/// Rows are evaluated in parallel and reassembled in order.
pub fn scan_parallel(resolution: usize) -> bellbound_core::Result<BoundSurface> {
    let points = (0..resolution)
        .into_par_iter()
        .map(|row| scan_row(row, resolution))
        .collect::<Vec<_>>()
        .concat();
    BoundSurface::from_points(resolution, points)
}

pub fn surface_csv(surface: &BoundSurface) -> String {
    let mut out = csv_line(&CSV_HEADER.map(String::from));
    for p in &surface.points {
        out.push_str(&csv_line(
            &[p.p1, p.p2, p.h_b, p.h_bxorb, p.p_max_a0, p.p_max_a1, p.beta_max, p.alpha_max]
                .map(format_sig),
        ));
    }
    out
}
