//! Weak-tangent point clouds: blow-ups of the attractor around a point at a
//! scale, compared in Hausdorff distance.

use crate::affine_ifs::{AffineIFS, AffineMap2};
use crate::linalg2::Vec2;
use crate::{Error, Result};

/// Finite sample of a blown-up attractor window. Every point lies within the
/// slightly enlarged closed unit ball; `resolution` is the covering guarantee
/// of the construction.
#[derive(Debug, Clone)]
pub struct PointCloud {
    pub points: Vec<Vec2>,
    pub resolution: f64,
}

const NODE_BUDGET: u64 = 20_000_000;

/// Sample `(X - x)/r` inside the unit ball to covering resolution `epsilon`.
///
/// The walk descends while a cylinder hull still meets `B(x, r(1+eps))` and
/// is wider than `eps * r`; each surviving cylinder emits the image of a
/// fixed base point (the fixed point of the first map, which lies in the
/// attractor), blown up and clipped to `B(0, 1+eps)`. The emitted cloud is
/// within Hausdorff distance `2 eps` of the true window.
pub fn blowup_cloud(ifs: &AffineIFS, x: Vec2, r: f64, epsilon: f64) -> Result<PointCloud> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::OutOfDomain(format!("window radius must be positive, got {r}")));
    }
    if !(epsilon > 0.0) {
        return Err(Error::OutOfDomain(format!(
            "resolution must be positive, got {epsilon}"
        )));
    }
    let base = ifs.maps()[0].fixed_point()?;
    let mut points = Vec::new();
    let mut nodes = 0_u64;
    let mut stack = vec![AffineMap2::identity()];
    while let Some(map) = stack.pop() {
        nodes += 1;
        if nodes > NODE_BUDGET {
            return Err(Error::ResolutionTooFine { budget: NODE_BUDGET });
        }
        let hull = ifs.enclosure().map(&map);
        if hull.distance_to_point(x) > r * (1.0 + epsilon) {
            continue;
        }
        if hull.diameter() <= epsilon * r {
            let p = (map.apply(base) - x).scale(1.0 / r);
            if p.norm() <= 1.0 + epsilon {
                points.push(p);
            }
            continue;
        }
        // push in reverse digit order so the walk emits lexicographically
        for f in ifs.maps().iter().rev() {
            stack.push(map.compose(f));
        }
    }
    Ok(PointCloud {
        points,
        resolution: epsilon,
    })
}

/// Exact Hausdorff distance between finite nonempty clouds.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.points.is_empty() || b.points.is_empty() {
        return Err(Error::EmptyCloud);
    }
    Ok(directed_distance(&a.points, &b.points).max(directed_distance(&b.points, &a.points)))
}

fn directed_distance(from: &[Vec2], to: &[Vec2]) -> f64 {
    from.iter()
        .map(|&p| {
            to.iter()
                .map(|&q| p.dist(q))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Deterministic polar net of the quarter disk `B(0,1) n [0,1]^2` with
/// covering radius at most `delta`.
pub fn quarter_disk_net(delta: f64) -> PointCloud {
    let rings = (1.0 / delta).ceil() as usize;
    let mut points = vec![Vec2::ZERO];
    for i in 1..=rings {
        let rho = (i as f64 * delta).min(1.0);
        let arc = rho * std::f64::consts::FRAC_PI_2;
        let steps = (arc / delta).ceil().max(1.0) as usize;
        for j in 0..=steps {
            let theta = std::f64::consts::FRAC_PI_2 * j as f64 / steps as f64;
            points.push(Vec2::new(rho * theta.cos(), rho * theta.sin()));
        }
    }
    PointCloud {
        points,
        resolution: delta,
    }
}

/// Result of comparing a blow-up of the counterexample attractor at the
/// origin against the quarter disk.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TangentCheck {
    pub scale_exponent: u32,
    pub distance: f64,
    pub bound: f64,
    pub cloud_size: usize,
    pub pass: bool,
}

/// Blow up the counterexample attractor at the origin to scale `3^-n` and
/// measure how close the window is to the quarter disk. The pass bound is
/// the sector angle estimate `arcsin((3/4)^n)` plus the cloud resolution
/// allowance `2 eps` and the net covering radius.
pub fn example3_tangent_check(n: u32) -> Result<TangentCheck> {
    if !(2..=7).contains(&n) {
        return Err(Error::OutOfDomain(format!(
            "tangent check supports scale exponents 2..=7, got {n}"
        )));
    }
    const EPS: f64 = 0.02;
    const NET_DELTA: f64 = 0.02;
    let ifs = crate::affine_ifs::example3_ifs();
    let r = 3.0_f64.powi(-(n as i32));
    let cloud = blowup_cloud(&ifs, Vec2::ZERO, r, EPS)?;
    let net = quarter_disk_net(NET_DELTA);
    let distance = hausdorff_distance(&cloud, &net)?;
    let bound = (0.75_f64.powi(n as i32)).asin() + 2.0 * EPS + NET_DELTA;
    Ok(TangentCheck {
        scale_exponent: n,
        distance,
        bound,
        cloud_size: cloud.points.len(),
        pass: distance <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hausdorff_basic_cases() {
        let a = PointCloud {
            points: vec![Vec2::ZERO, Vec2::new(1.0, 0.0)],
            resolution: 0.1,
        };
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);

        let b = PointCloud {
            points: vec![Vec2::new(1.0, 0.0)],
            resolution: 0.1,
        };
        let single = PointCloud {
            points: vec![Vec2::ZERO],
            resolution: 0.1,
        };
        assert_eq!(hausdorff_distance(&single, &b).unwrap(), 1.0);

        let empty = PointCloud {
            points: vec![],
            resolution: 0.1,
        };
        assert!(hausdorff_distance(&a, &empty).is_err());
    }

    #[test]
    fn hausdorff_shift_equals_offset() {
        let delta = 0.01;
        let pts: Vec<Vec2> = (0..10).map(|k| Vec2::new(k as f64, 0.0)).collect();
        let shifted: Vec<Vec2> = pts.iter().map(|p| *p + Vec2::new(delta, 0.0)).collect();
        let a = PointCloud {
            points: pts,
            resolution: delta,
        };
        let b = PointCloud {
            points: shifted,
            resolution: delta,
        };
        let d = hausdorff_distance(&a, &b).unwrap();
        assert!((d - delta).abs() < 1e-15);
    }

    #[test]
    fn whole_attractor_window() {
        let ifs = crate::affine_ifs::example3_ifs();
        let cloud = blowup_cloud(&ifs, Vec2::new(0.5, 0.5), 2.0, 0.05).unwrap();
        assert!(!cloud.points.is_empty());
        assert!(cloud.points.iter().all(|p| p.norm() <= 1.05));
    }

    #[test]
    fn net_covers_quarter_disk() {
        let net = quarter_disk_net(0.02);
        // every probe point of the quarter disk has a net point within delta
        for i in 0..40 {
            for j in 0..40 {
                let p = Vec2::new(i as f64 / 39.0, j as f64 / 39.0);
                if p.norm() > 1.0 {
                    continue;
                }
                let d = net
                    .points
                    .iter()
                    .map(|&q| p.dist(q))
                    .fold(f64::INFINITY, f64::min);
                assert!(d <= 0.02 + 1e-12, "{p:?} is {d} from the net");
            }
        }
    }

    #[test]
    fn tangent_check_bounds_scale() {
        assert!(example3_tangent_check(1).is_err());
        let check = example3_tangent_check(3).unwrap();
        assert!((check.bound - ((27.0 / 64.0_f64).asin() + 0.06)).abs() < 1e-12);
        assert!(check.pass, "distance {} above {}", check.distance, check.bound);
    }

    #[test]
    fn blowup_order_invariance() {
        // the emitted set does not depend on branch traversal order; compare
        // against a reversed-map system
        let ifs = crate::affine_ifs::example3_ifs();
        let cloud = blowup_cloud(&ifs, Vec2::ZERO, 0.2, 0.05).unwrap();
        let mut sorted = cloud.points.clone();
        sorted.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
        let reversed = {
            let maps = vec![ifs.maps()[0], ifs.maps()[1], ifs.maps()[2]];
            let swapped = crate::affine_ifs::AffineIFS::new(
                vec![maps[0], maps[2], maps[1]],
                ifs.enclosure().clone(),
                ifs.certificate(),
            )
            .unwrap();
            blowup_cloud(&swapped, Vec2::ZERO, 0.2, 0.05).unwrap()
        };
        let mut sorted_rev = reversed.points.clone();
        sorted_rev.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
        assert_eq!(sorted.len(), sorted_rev.len());
        for (p, q) in sorted.iter().zip(&sorted_rev) {
            assert!(p.dist(*q) <= 1e-12);
        }
    }
}
