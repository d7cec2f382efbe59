//! The length measure on the x-axis lifted to the Takagi graph: every depth-m
//! cylinder carries mass `2^-m`, so strip censuses turn directly into
//! certified mass bounds. On top of that sit finite-scale pointwise-dimension
//! estimates and the dimension-conservation diagnostics.

use serde::Serialize;

use crate::slicer::{
    census_profile, least_squares_slope, slice_census, strip_containment_census,
    strip_radius_constant, Line, SliceSystem, Strip, Target,
};
use crate::takagi::{self, HullKind};
use crate::{Error, Result};

/// Certified two-sided bounds on the lifted measure of a strip at cylinder
/// depth `m`: `lower` scales the count of cylinders certified to lie inside
/// the strip (their full mass sits inside), `upper` the count of cylinders
/// that might meet it. An intersection certificate alone is not enough for
/// the lower bound, since only part of a crossing cylinder's mass is in the
/// strip.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StripMassBounds {
    pub depth: usize,
    pub lower: f64,
    pub upper: f64,
}

/// Bound the mass of `strip` from the depth-`m` containment census.
pub fn strip_mass(
    lambda: f64,
    strip: &Strip,
    depth: usize,
    hull: HullKind,
) -> Result<StripMassBounds> {
    const MAX_DEPTH: usize = 24;
    if depth > MAX_DEPTH {
        return Err(Error::DepthTooLarge {
            requested: depth,
            max: MAX_DEPTH,
        });
    }
    let system = SliceSystem::takagi(lambda, hull)?;
    let census = strip_containment_census(&system, strip, depth, None)?;
    let scale = 0.5_f64.powi(depth as i32);
    let bounds = StripMassBounds {
        depth,
        lower: census.contained as f64 * scale,
        upper: census.possible as f64 * scale,
    };
    debug_assert!(bounds.lower <= bounds.upper && bounds.upper <= 1.0 + 1e-12);
    Ok(bounds)
}

/// Finite-scale dimension-conservation report along one slice.
///
/// The mass slope is regressed from the strip masses at radii `c lambda^n`;
/// the census slope from the line censuses over the same depths. The residual
/// measures how far the pair sits from the conservation identity
/// `slope_nu + (log(1/2)/log lambda) slope_sigma = log(1/2)/log lambda`.
#[derive(Debug, Clone, Serialize)]
pub struct ConservationReport {
    pub radii: Vec<f64>,
    pub mass_lower: Vec<f64>,
    pub mass_upper: Vec<f64>,
    pub slope_nu: f64,
    pub slope_sigma: f64,
    pub residual: f64,
}

/// Extra cylinder depth used to resolve a strip of radius `c lambda^n`:
/// masses are censused at depth `n + MASS_DEPTH_MARGIN`. Tunable; larger
/// margins tighten bounds at exponential cost.
pub const MASS_DEPTH_MARGIN: usize = 4;

/// Estimate the pointwise dimension of the projected measure along the slice
/// and combine it with the census slope into a conservation residual.
///
/// Regressions use the midpoint of each certified bound pair; both endpoints
/// are retained in the report so either side can be re-regressed. A slice
/// whose masses all vanish has no pointwise dimension (the point is off the
/// support) and reports [`Error::MassVanishes`] instead of zero.
pub fn pointwise_dim_estimate(
    lambda: f64,
    line: Line,
    n_lo: usize,
    n_hi: usize,
    hull: HullKind,
) -> Result<ConservationReport> {
    if n_hi < n_lo + 2 {
        return Err(Error::InsufficientData(
            "conservation estimates need at least 3 consecutive depths".into(),
        ));
    }
    let params = takagi::constants(lambda)?;
    let c = strip_radius_constant(&params);
    let mut radii = Vec::new();
    let mut mass_lower = Vec::new();
    let mut mass_upper = Vec::new();
    for n in n_lo..=n_hi {
        let radius = c * lambda.powi(n as i32);
        let strip = Strip::new(line, radius)?;
        let bounds = strip_mass(lambda, &strip, n + MASS_DEPTH_MARGIN, hull)?;
        radii.push(radius);
        mass_lower.push(bounds.lower);
        mass_upper.push(bounds.upper);
    }
    if mass_upper.iter().all(|&u| u == 0.0) {
        return Err(Error::MassVanishes);
    }

    let mass_points: Vec<(f64, f64)> = radii
        .iter()
        .zip(mass_lower.iter().zip(&mass_upper))
        .filter(|(_, (&lo, &up))| 0.5 * (lo + up) > 0.0)
        .map(|(&r, (&lo, &up))| (r.ln(), (0.5 * (lo + up)).ln()))
        .collect();
    if mass_points.len() < 3 {
        return Err(Error::InsufficientData(
            "fewer than 3 depths carry positive mass".into(),
        ));
    }
    let (slope_nu, _) = least_squares_slope(&mass_points);

    let system = SliceSystem::takagi(lambda, hull)?;
    let profile = census_profile(&system, &Target::Line(line), n_hi, None)?;
    let census_points: Vec<(f64, f64)> = (n_lo..=n_hi)
        .filter(|&n| profile[n].definite + profile[n].possible > 0)
        .map(|n| {
            let mid = 0.5 * (profile[n].definite as f64 + profile[n].possible as f64);
            (n as f64 * std::f64::consts::LN_2, mid.ln())
        })
        .collect();
    let slope_sigma = if census_points.len() >= 2 {
        least_squares_slope(&census_points).0
    } else {
        0.0
    };

    let conversion = 0.5_f64.ln() / lambda.ln();
    let residual = (slope_nu + conversion * slope_sigma - conversion).abs();
    Ok(ConservationReport {
        radii,
        mass_lower,
        mass_upper,
        slope_nu,
        slope_sigma,
        residual,
    })
}

/// Exact inequality from the conservation proof: every definite line cylinder
/// at depth `n` lies inside the strip of radius `c lambda^n` (its diameter is
/// at most that), so the strip's possible census dominates the line's
/// definite census. Compared in integer counts, zero tolerance.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SandwichCheck {
    pub depth: usize,
    pub radius: f64,
    pub line_definite: u64,
    pub strip_possible: u64,
    pub pass: bool,
}

pub fn conservation_sandwich_check(
    lambda: f64,
    line: Line,
    depth: usize,
    hull: HullKind,
) -> Result<SandwichCheck> {
    const MAX_DEPTH: usize = 20;
    if depth > MAX_DEPTH {
        return Err(Error::DepthTooLarge {
            requested: depth,
            max: MAX_DEPTH,
        });
    }
    let params = takagi::constants(lambda)?;
    let radius = strip_radius_constant(&params) * lambda.powi(depth as i32);
    let system = SliceSystem::takagi(lambda, hull)?;
    let line_census = slice_census(&system, &Target::Line(line), depth, None)?;
    let strip = Strip::new(line, radius)?;
    let strip_census = slice_census(&system, &Target::Strip(strip), depth, None)?;
    Ok(SandwichCheck {
        depth,
        radius,
        line_definite: line_census.definite,
        strip_possible: strip_census.possible,
        pass: strip_census.possible >= line_census.definite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg2::Vec2;

    const LAMBDA: f64 = 2.0 / 3.0;

    #[test]
    fn full_width_strip_has_unit_mass() {
        let strip = Strip::new(Line::horizontal(0.5), 10.0).unwrap();
        for m in [0, 4, 9] {
            let b = strip_mass(LAMBDA, &strip, m, HullKind::Box).unwrap();
            assert_eq!(b.lower, 1.0);
            assert_eq!(b.upper, 1.0);
        }
    }

    #[test]
    fn distant_strip_has_zero_mass() {
        let strip = Strip::new(Line::horizontal(25.0), 0.5).unwrap();
        let b = strip_mass(LAMBDA, &strip, 8, HullKind::Box).unwrap();
        assert_eq!(b.lower, 0.0);
        assert_eq!(b.upper, 0.0);
    }

    #[test]
    fn mass_bounds_nest_with_depth() {
        let radius = 0.08;
        let strip = Strip::new(Line::sloped(0.4, Vec2::new(0.3, 0.4)).unwrap(), radius).unwrap();
        let mut prev = strip_mass(LAMBDA, &strip, 6, HullKind::Box).unwrap();
        for m in 7..=13 {
            let next = strip_mass(LAMBDA, &strip, m, HullKind::Box).unwrap();
            assert!(next.lower >= prev.lower - 1e-12, "lower bound dropped at {m}");
            assert!(next.upper <= prev.upper + 1e-12, "upper bound rose at {m}");
            prev = next;
        }
    }

    #[test]
    fn vanishing_mass_is_an_error() {
        // depths start at 10 so that even the widest strip radius c lambda^n
        // stays below the 0.1 gap between the line and the graph
        let err = pointwise_dim_estimate(LAMBDA, Line::horizontal(-0.1), 10, 14, HullKind::Box)
            .unwrap_err();
        assert_eq!(err, Error::MassVanishes);
    }

    #[test]
    fn conservation_residual_on_graph_slice() {
        let (y, _) = takagi::eval(LAMBDA, 0.375, 1e-12).unwrap();
        let line = Line::sloped(0.5, Vec2::new(0.375, y)).unwrap();
        let report = pointwise_dim_estimate(LAMBDA, line, 8, 13, HullKind::Box).unwrap();
        assert!(report.residual <= 0.2, "residual {}", report.residual);
        assert!(report.mass_lower.iter().zip(&report.mass_upper).all(|(l, u)| l <= u));
    }

    #[test]
    fn sandwich_check_cases() {
        // empty slice: 0 >= 0
        let check =
            conservation_sandwich_check(LAMBDA, Line::horizontal(-5.0), 8, HullKind::Box).unwrap();
        assert!(check.pass);
        assert_eq!(check.strip_possible, 0);

        let check =
            conservation_sandwich_check(LAMBDA, Line::horizontal(0.3), 10, HullKind::Box).unwrap();
        assert!(check.pass);
        assert!(check.strip_possible >= check.line_definite);

        let (y, _) = takagi::eval(0.75, 0.3125, 1e-12).unwrap();
        let line = Line::sloped(1.0, Vec2::new(0.3125, y)).unwrap();
        let check = conservation_sandwich_check(0.75, line, 10, HullKind::Box).unwrap();
        assert!(check.pass);
    }

    #[test]
    fn diameter_premise_holds() {
        // hull diameters bound cylinder diameters from above, so this is the
        // sound direction of the proof's diameter estimate
        use crate::affine_ifs::cylinder_hull;
        use crate::wordspace::{enumerate_level, Visit};
        for lambda in [0.6, LAMBDA, 0.8] {
            let params = takagi::constants(lambda).unwrap();
            let c = strip_radius_constant(&params);
            let ifs = takagi::takagi_ifs(lambda).unwrap();
            for n in [4_usize, 8] {
                let bound = c * lambda.powi(n as i32);
                let mut max_diam = 0.0_f64;
                enumerate_level(2, n, &mut |w| {
                    if w.len() == n {
                        let d = cylinder_hull(&ifs, w).unwrap().diameter();
                        if d > max_diam {
                            max_diam = d;
                        }
                    }
                    Visit::Descend
                })
                .unwrap();
                assert!(
                    max_diam <= bound + 1e-12,
                    "lambda {lambda} depth {n}: {max_diam} > {bound}"
                );
            }
        }
    }
}
