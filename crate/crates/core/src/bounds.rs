//! Fano-bound surfaces.
//!
//! Fix one value `(lambda0, chi0)` of Alice's resources and suppose Bob's
//! setting is still uniform given it. With `P1 = P(B=0 | b=0, ...)` and
//! `P2 = P(B=0 | b=1, ...)` the conditional entropies of `B` and `B xor b`
//! are binary entropies of `(P1 + P2)/2` and `(1 + P1 - P2)/2`. Inverting
//! the binary Fano bound on each gives the largest achievable match
//! probabilities, hence `beta_max` and `alpha_max` at that point.

use alloc::vec::Vec;

use crate::bell::LOCAL_BOUND;
use crate::info::{h2, inv_h2_upper};
use crate::{Error, Result};

/// Slack used when checking `beta_max <= 3/4` and `alpha_max <= 1`.
pub const THEOREM_TOLERANCE: f64 = 1e-9;

/// Upper bound on the information-causality functional.
pub const IC_BOUND: f64 = 1.0;

/// Points within this distance of an extremum are reported as attaining it.
const ARG_TOLERANCE: f64 = 1e-12;

fn check_prob(what: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain { what, value: p })
    }
}

/// `H(B | lambda0, chi0)` as a function of `(P1, P2)`.
pub fn h_b_point(p1: f64, p2: f64) -> Result<f64> {
    check_prob("P1", p1)?;
    check_prob("P2", p2)?;
    Ok(h2(0.5 * (p1 + p2)))
}

/// `H(B xor b | lambda0, chi0)` as a function of `(P1, P2)`.
pub fn h_bxorb_point(p1: f64, p2: f64) -> Result<f64> {
    check_prob("P1", p1)?;
    check_prob("P2", p2)?;
    Ok(h2(0.5 * (1.0 + p1 - p2)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub p1: f64,
    pub p2: f64,
    pub h_b: f64,
    pub h_bxorb: f64,
    pub p_max_a0: f64,
    pub p_max_a1: f64,
    pub beta_max: f64,
    pub alpha_max: f64,
}

impl SurfacePoint {
    /// Evaluates every field at `(p1, p2)` without checking the bounds.
    pub fn evaluate(p1: f64, p2: f64) -> Result<Self> {
        let h_b = h_b_point(p1, p2)?;
        let h_bxorb = h_bxorb_point(p1, p2)?;
        let p_max_a0 = inv_h2_upper(h_b);
        let p_max_a1 = inv_h2_upper(h_bxorb);
        let u = 2.0 * p_max_a0 - 1.0;
        let w = 2.0 * p_max_a1 - 1.0;
        Ok(Self {
            p1,
            p2,
            h_b,
            h_bxorb,
            p_max_a0,
            p_max_a1,
            beta_max: 0.5 * (p_max_a0 + p_max_a1),
            alpha_max: u * u + w * w,
        })
    }

    pub fn within_bounds(&self) -> bool {
        self.beta_max <= LOCAL_BOUND + THEOREM_TOLERANCE
            && self.alpha_max <= IC_BOUND + THEOREM_TOLERANCE
    }
}

/// Surface point with the postcondition `beta_max <= 3/4 + 1e-9` enforced.
pub fn beta_max_point(p1: f64, p2: f64) -> Result<SurfacePoint> {
    let pt = SurfacePoint::evaluate(p1, p2)?;
    if pt.beta_max > LOCAL_BOUND + THEOREM_TOLERANCE {
        return Err(Error::InvariantBreach(alloc::format!(
            "beta_max {} exceeds 3/4 at ({p1}, {p2})",
            pt.beta_max
        )));
    }
    Ok(pt)
}

/// `alpha_max` at `(p1, p2)`, with `alpha_max <= 1 + 1e-9` enforced.
pub fn alpha_max_point(p1: f64, p2: f64) -> Result<f64> {
    let pt = SurfacePoint::evaluate(p1, p2)?;
    if pt.alpha_max > IC_BOUND + THEOREM_TOLERANCE {
        return Err(Error::InvariantBreach(alloc::format!(
            "alpha_max {} exceeds 1 at ({p1}, {p2})",
            pt.alpha_max
        )));
    }
    Ok(pt.alpha_max)
}

/// Coordinate `i` of an inclusive uniform grid with `resolution` nodes.
pub fn grid_coordinate(i: usize, resolution: usize) -> f64 {
    if i + 1 == resolution {
        1.0
    } else {
        i as f64 / (resolution - 1) as f64
    }
}

/// One row (fixed `p1` index) of the grid.
pub fn scan_row(row: usize, resolution: usize) -> Vec<SurfacePoint> {
    let p1 = grid_coordinate(row, resolution);
    (0..resolution)
        .map(|j| {
            SurfacePoint::evaluate(p1, grid_coordinate(j, resolution))
                .expect("grid coordinates lie in [0, 1]")
        })
        .collect()
}

/// Extremes of a scanned surface.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSummary {
    pub max_beta_max: f64,
    pub argmax_beta_max: Vec<(f64, f64)>,
    pub min_beta_max: f64,
    pub argmin_beta_max: Vec<(f64, f64)>,
    pub max_alpha_max: f64,
    pub argmax_alpha_max: Vec<(f64, f64)>,
    /// Points with `beta_max > 3/4 + 1e-9` or `alpha_max > 1 + 1e-9`.
    pub bound_violations: Vec<(f64, f64)>,
}

impl SurfaceSummary {
    pub fn theorem_holds(&self) -> bool {
        self.bound_violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundSurface {
    pub resolution: usize,
    /// Row-major, `p1` outer.
    pub points: Vec<SurfacePoint>,
    pub summary: SurfaceSummary,
}

impl BoundSurface {
    /// Assembles a surface from row-major points (e.g. rows computed in
    /// parallel by [`scan_row`]).
    pub fn from_points(resolution: usize, points: Vec<SurfacePoint>) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Domain {
                what: "resolution",
                value: resolution as f64,
            });
        }
        if points.len() != resolution * resolution {
            return Err(Error::InvariantBreach(alloc::format!(
                "expected {} surface points, got {}",
                resolution * resolution,
                points.len()
            )));
        }
        let summary = summarize(&points);
        Ok(Self {
            resolution,
            points,
            summary,
        })
    }

    pub fn point(&self, i: usize, j: usize) -> &SurfacePoint {
        &self.points[i * self.resolution + j]
    }
}

fn summarize(points: &[SurfacePoint]) -> SurfaceSummary {
    let max_beta = points.iter().map(|p| p.beta_max).fold(f64::MIN, f64::max);
    let min_beta = points.iter().map(|p| p.beta_max).fold(f64::MAX, f64::min);
    let max_alpha = points.iter().map(|p| p.alpha_max).fold(f64::MIN, f64::max);
    let at = |pred: &dyn Fn(&SurfacePoint) -> bool| {
        points
            .iter()
            .filter(|p| pred(p))
            .map(|p| (p.p1, p.p2))
            .collect::<Vec<_>>()
    };
    SurfaceSummary {
        max_beta_max: max_beta,
        argmax_beta_max: at(&|p| p.beta_max >= max_beta - ARG_TOLERANCE),
        min_beta_max: min_beta,
        argmin_beta_max: at(&|p| p.beta_max <= min_beta + ARG_TOLERANCE),
        max_alpha_max: max_alpha,
        argmax_alpha_max: at(&|p| p.alpha_max >= max_alpha - ARG_TOLERANCE),
        bound_violations: at(&|p| !p.within_bounds()),
    }
}

/// Evaluates the surface on the inclusive `resolution x resolution` grid.
pub fn scan_surface(resolution: usize) -> Result<BoundSurface> {
    if resolution < 2 {
        return Err(Error::Domain {
            what: "resolution",
            value: resolution as f64,
        });
    }
    let points = (0..resolution)
        .flat_map(|i| scan_row(i, resolution))
        .collect();
    BoundSurface::from_points(resolution, points)
}

/// Information-level bound on β:
/// `[Hinv(h_B - I_B) + Hinv(h_Bxorb - I_Bxorb)] / 2`, where `Hinv` is the
/// upper-branch inverse of the binary entropy and differences are clamped
/// into `[0, 1]`.
pub fn beta_max_from_info(i_big_b: f64, i_bxorb: f64, h_big_b: f64, h_bxorb: f64) -> Result<f64> {
    for (what, v) in [
        ("I(B; lambda, chi)", i_big_b),
        ("I(B xor b; lambda, chi)", i_bxorb),
        ("H(B)", h_big_b),
        ("H(B xor b)", h_bxorb),
    ] {
        check_prob(what, v)?;
    }
    let r0 = (h_big_b - i_big_b).clamp(0.0, 1.0);
    let r1 = (h_bxorb - i_bxorb).clamp(0.0, 1.0);
    Ok(0.5 * (inv_h2_upper(r0) + inv_h2_upper(r1)))
}

/// Conditional statistics of one `(lambda0, chi0)` cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellStats {
    pub lambda: u32,
    pub chi: u32,
    /// `P(lambda = lambda0, chi = chi0)`
    pub weight: f64,
    /// `P(B = 0 | b = 0, lambda0, chi0)`, if `b = 0` is possible in the cell.
    pub p1: Option<f64>,
    /// `P(B = 0 | b = 1, lambda0, chi0)`, if `b = 1` is possible in the cell.
    pub p2: Option<f64>,
}

/// `sum_cells P(cell) beta_max(P1, P2)`: an upper bound on β for protocols
/// whose message carries no information about Bob's setting. `None` if
/// some cell lacks one of the settings.
pub fn averaged_beta_bound(cells: &[CellStats]) -> Option<f64> {
    let mut total = 0.0;
    for c in cells {
        let pt = SurfacePoint::evaluate(c.p1?, c.p2?).ok()?;
        total += c.weight * pt.beta_max;
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_point_examples() {
        assert_eq!(h_b_point(0.5, 0.5).unwrap(), 1.0);
        assert_eq!(h_b_point(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(h_b_point(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(h_bxorb_point(0.5, 0.5).unwrap(), 1.0);
        assert_eq!(h_bxorb_point(1.0, 0.0).unwrap(), 0.0);
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            assert_eq!(h_bxorb_point(p, p).unwrap(), 1.0);
        }
        assert!(h_b_point(1.1, 0.0).is_err());
        assert!(h_bxorb_point(0.0, -0.1).is_err());
    }

    #[test]
    fn beta_max_examples() {
        assert_eq!(beta_max_point(0.5, 0.5).unwrap().beta_max, 0.5);
        assert_eq!(beta_max_point(1.0, 0.0).unwrap().beta_max, 0.75);
        let pt = beta_max_point(0.0, 0.0).unwrap();
        assert_eq!((pt.p_max_a0, pt.p_max_a1, pt.beta_max), (1.0, 0.5, 0.75));
    }

    #[test]
    fn alpha_max_examples() {
        assert_eq!(alpha_max_point(0.5, 0.5).unwrap(), 0.0);
        assert_eq!(alpha_max_point(1.0, 0.0).unwrap(), 1.0);
        assert!((alpha_max_point(0.7, 0.7).unwrap() - 0.16).abs() < 1e-12);
    }

    #[test]
    fn small_scans() {
        let s = scan_surface(2).unwrap();
        assert_eq!(s.points.len(), 4);
        assert_eq!(s.summary.max_beta_max, 0.75);
        assert_eq!(s.summary.min_beta_max, 0.75);
        assert!(s.summary.argmax_beta_max.contains(&(0.0, 1.0)));
        assert!(s.summary.argmax_beta_max.contains(&(1.0, 0.0)));

        let s = scan_surface(3).unwrap();
        assert_eq!(s.summary.min_beta_max, 0.5);
        assert_eq!(s.summary.argmin_beta_max, [(0.5, 0.5)]);
        assert_eq!(s.point(1, 1).beta_max, 0.5);
        assert!(s.summary.theorem_holds());

        assert!(scan_surface(1).is_err());
        assert!(scan_surface(0).is_err());
    }

    #[test]
    fn info_bound_examples() {
        assert_eq!(beta_max_from_info(0.0, 0.0, 1.0, 1.0).unwrap(), 0.5);
        assert_eq!(beta_max_from_info(1.0, 1.0, 1.0, 1.0).unwrap(), 1.0);
        let h08 = h2(0.8);
        assert!((beta_max_from_info(0.0, 1.0, h08, 1.0).unwrap() - 0.9).abs() < 1e-12);
        // h - i below zero is clamped
        assert_eq!(beta_max_from_info(0.5, 0.5, 0.4, 0.4).unwrap(), 1.0);
        assert!(beta_max_from_info(-0.1, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn averaged_bound_needs_both_settings() {
        let full = CellStats {
            lambda: 0,
            chi: 0,
            weight: 1.0,
            p1: Some(1.0),
            p2: Some(0.0),
        };
        assert_eq!(averaged_beta_bound(&[full]), Some(0.75));
        let partial = CellStats { p2: None, ..full };
        assert_eq!(averaged_beta_bound(&[partial]), None);
    }
}
