//! Exact-formula 2x2 linear algebra and the real projective line.
//!
//! Everything here is closed form: the SVD comes from the quadratic formula on
//! the Gram matrix, never from an iterative kernel, so results are
//! deterministic across platforms and thread schedules. Projective points are
//! canonicalized (unit norm, first nonzero component positive) and compared in
//! the angle metric; containment predicates always take an explicit margin.

use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::{Error, Result};

/// Determinant magnitude below which a matrix is treated as singular.
pub const DET_SLACK: f64 = 1e-14;

/// Points of the real projective line live on a circle of circumference pi.
pub const PROJ_CIRCUMFERENCE: f64 = std::f64::consts::PI;

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the exterior product; zero iff the vectors are parallel.
    pub fn wedge(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn scale(self, c: f64) -> Vec2 {
        Vec2::new(c * self.x, c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        self.scale(rhs)
    }
}

impl Serialize for Vec2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&self.x)?;
        seq.serialize_element(&self.y)?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Vec2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Vec2;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a [x, y] pair")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Vec2, A::Error> {
                let x = seq
                    .next_element::<f64>()?
                    .ok_or_else(|| serde::de::Error::invalid_length(0, &self))?;
                let y = seq
                    .next_element::<f64>()?
                    .ok_or_else(|| serde::de::Error::invalid_length(1, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(serde::de::Error::invalid_length(3, &self));
                }
                Ok(Vec2::new(x, y))
            }
        }
        deserializer.deserialize_seq(V)
    }
}

/// A 2x2 real matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a11: 1.0,
        a12: 0.0,
        a21: 0.0,
        a22: 1.0,
    };

    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn rows(r1: [f64; 2], r2: [f64; 2]) -> Self {
        Mat2::new(r1[0], r1[1], r2[0], r2[1])
    }

    pub fn diag(d1: f64, d2: f64) -> Self {
        Mat2::new(d1, 0.0, 0.0, d2)
    }

    pub fn det(self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn transpose(self) -> Mat2 {
        Mat2::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn apply(self, v: Vec2) -> Vec2 {
        Vec2::new(
            self.a11 * v.x + self.a12 * v.y,
            self.a21 * v.x + self.a22 * v.y,
        )
    }

    pub fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 * rhs.a11 + self.a12 * rhs.a21,
            self.a11 * rhs.a12 + self.a12 * rhs.a22,
            self.a21 * rhs.a11 + self.a22 * rhs.a21,
            self.a21 * rhs.a12 + self.a22 * rhs.a22,
        )
    }

    pub fn inverse(self) -> Result<Mat2> {
        let det = self.det();
        if det.abs() <= DET_SLACK {
            return Err(Error::SingularMatrix { det });
        }
        Ok(Mat2::new(
            self.a22 / det,
            -self.a12 / det,
            -self.a21 / det,
            self.a11 / det,
        ))
    }

    /// Operator norm, i.e. the larger singular value.
    pub fn op_norm(self) -> f64 {
        svd2(self).alpha1
    }
}

impl std::ops::Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::mul(self, rhs)
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = [[self.a11, self.a12], [self.a21, self.a22]];
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = <[[f64; 2]; 2]>::deserialize(deserializer)?;
        Ok(Mat2::rows(rows[0], rows[1]))
    }
}

/// Closed-form singular value decomposition data of a 2x2 matrix: the two
/// singular values and the principal right-singular direction. `eta1` is
/// `None` when the singular values coincide (within the isotropy slack), in
/// which case every direction is principal.
#[derive(Debug, Clone, Copy)]
pub struct Svd2 {
    pub alpha1: f64,
    pub alpha2: f64,
    pub eta1: Option<ProjLine>,
}

/// Singular values and principal direction via the quadratic formula on the
/// Gram matrix `A^T A`. The discriminant is computed in its explicitly
/// non-negative form, and `alpha2` through the product identity
/// `alpha1 * alpha2 = |det A|`, which is better conditioned than the small
/// eigenvalue's difference form.
pub fn svd2(m: Mat2) -> Svd2 {
    let g = m.transpose().mul(m);
    let (p, q, r) = (g.a11, g.a12, g.a22);
    let t = 0.5 * (p + r);
    let half_gap = 0.5 * (p - r);
    let disc = half_gap * half_gap + q * q;
    let s = disc.sqrt();
    let alpha1 = (t + s).max(0.0).sqrt();
    let alpha2 = if alpha1 > 0.0 {
        m.det().abs() / alpha1
    } else {
        0.0
    };
    let eta1 = if disc <= 1e-14 * t * t {
        None
    } else {
        let lam1 = t + s;
        let v1 = Vec2::new(q, lam1 - p);
        let v2 = Vec2::new(lam1 - r, q);
        let v = if v1.norm_sq() >= v2.norm_sq() { v1 } else { v2 };
        ProjLine::try_new(v).ok()
    };
    Svd2 {
        alpha1,
        alpha2,
        eta1,
    }
}

/// A point of the real projective line: a line through the origin, stored as
/// a unit direction with canonical sign (first nonzero component positive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjLine {
    direction: Vec2,
}

impl ProjLine {
    /// Canonicalize a nonzero vector. Returns an error on (near-)zero input.
    pub fn try_new(v: Vec2) -> Result<ProjLine> {
        let n = v.norm();
        if !(n > 0.0) || !v.is_finite() {
            return Err(Error::OutOfDomain(
                "projective point needs a nonzero finite direction".into(),
            ));
        }
        let mut d = v.scale(1.0 / n);
        if d.x < 0.0 || (d.x == 0.0 && d.y < 0.0) {
            d = d.scale(-1.0);
        }
        if d.x == 0.0 {
            // normalize -0.0 and force the exact vertical representative
            d = Vec2::new(0.0, 1.0);
        }
        Ok(ProjLine { direction: d })
    }

    pub fn new(v: Vec2) -> ProjLine {
        ProjLine::try_new(v).expect("nonzero direction")
    }

    /// The line of slope `t` through the origin, `<(1, t)>`.
    pub fn from_slope(t: f64) -> ProjLine {
        ProjLine::new(Vec2::new(1.0, t))
    }

    /// The vertical line `<(0, 1)>`.
    pub fn vertical() -> ProjLine {
        ProjLine {
            direction: Vec2::new(0.0, 1.0),
        }
    }

    /// The line at angle coordinate `theta` (radians, taken mod pi).
    pub fn from_angle(theta: f64) -> ProjLine {
        ProjLine::new(Vec2::new(theta.cos(), theta.sin()))
    }

    pub fn direction(self) -> Vec2 {
        self.direction
    }

    /// Angle coordinate in `[0, pi)`.
    pub fn angle_coord(self) -> f64 {
        let mut theta = self.direction.y.atan2(self.direction.x);
        if theta < 0.0 {
            theta += PROJ_CIRCUMFERENCE;
        }
        if theta >= PROJ_CIRCUMFERENCE {
            theta -= PROJ_CIRCUMFERENCE;
        }
        theta
    }

    /// Slope of the line; `None` for the vertical.
    pub fn slope(self) -> Option<f64> {
        if self.direction.x == 0.0 {
            None
        } else {
            Some(self.direction.y / self.direction.x)
        }
    }
}

/// Angle metric on the projective line, in `[0, pi/2]`.
///
/// Computed as `atan2(|v ^ w|, |v . w|)`, which agrees with the arccos form
/// for well-separated lines and with the arcsin (wedge) form for nearly equal
/// lines, where the inner product alone would lose all precision.
pub fn proj_angle(v: ProjLine, w: ProjLine) -> f64 {
    let a = v.direction();
    let b = w.direction();
    let dot = a.dot(b).abs();
    let wedge = a.wedge(b).abs();
    wedge.atan2(dot)
}

/// Action of an invertible matrix on the projective line, `A<v> = <Av>`.
pub fn act(m: Mat2, v: ProjLine) -> Result<ProjLine> {
    let det = m.det();
    if det.abs() <= DET_SLACK {
        return Err(Error::SingularMatrix { det });
    }
    ProjLine::try_new(m.apply(v.direction()))
}

/// A closed arc of the projective line: the counterclockwise sweep from `lo`
/// to `hi` in the angle coordinate. Arc length is always `< pi`.
#[derive(Debug, Clone, Copy)]
pub struct ProjInterval {
    lo: ProjLine,
    hi: ProjLine,
    start: f64,
    length: f64,
}

impl ProjInterval {
    pub fn new(lo: ProjLine, hi: ProjLine) -> ProjInterval {
        let start = lo.angle_coord();
        let mut length = hi.angle_coord() - start;
        if length < 0.0 {
            length += PROJ_CIRCUMFERENCE;
        }
        ProjInterval {
            lo,
            hi,
            start,
            length,
        }
    }

    /// The arc of lines with slope in `[t_lo, t_hi]` (never containing the
    /// vertical).
    pub fn from_slopes(t_lo: f64, t_hi: f64) -> ProjInterval {
        assert!(t_lo <= t_hi, "slope interval must be ordered");
        ProjInterval::new(ProjLine::from_slope(t_lo), ProjLine::from_slope(t_hi))
    }

    pub fn lo(&self) -> ProjLine {
        self.lo
    }

    pub fn hi(&self) -> ProjLine {
        self.hi
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn midpoint(&self) -> ProjLine {
        ProjLine::from_angle(self.start + 0.5 * self.length)
    }

    /// Offset of `line` past `lo`, counterclockwise, in `[0, pi)`.
    fn offset_of(&self, line: ProjLine) -> f64 {
        let mut d = line.angle_coord() - self.start;
        if d < 0.0 {
            d += PROJ_CIRCUMFERENCE;
        }
        d
    }

    pub fn contains(&self, line: ProjLine, slack: f64) -> bool {
        let d = self.offset_of(line);
        d <= self.length + slack || d >= PROJ_CIRCUMFERENCE - slack
    }

    /// True iff `inner` sits inside `self` with angular clearance at least
    /// `margin` on both sides.
    pub fn contains_interval(&self, inner: &ProjInterval, margin: f64) -> bool {
        let off = self.offset_of(inner.lo);
        let off = if off >= PROJ_CIRCUMFERENCE - 1e-15 {
            0.0
        } else {
            off
        };
        off >= margin && off + inner.length <= self.length - margin
    }
}

/// Image of a projective interval under an invertible matrix.
///
/// The two endpoint images bound two complementary arcs; the image arc is the
/// one containing the image of the source midpoint.
pub fn map_interval(m: Mat2, interval: &ProjInterval) -> Result<ProjInterval> {
    let lo = act(m, interval.lo())?;
    let hi = act(m, interval.hi())?;
    let mid = act(m, interval.midpoint())?;
    let forward = ProjInterval::new(lo, hi);
    let backward = ProjInterval::new(hi, lo);
    let slack = 1e-12;
    if forward.contains(mid, slack) && (!backward.contains(mid, slack) || forward.length <= backward.length) {
        Ok(forward)
    } else {
        Ok(backward)
    }
}

/// A finite union of pairwise disjoint closed projective intervals.
#[derive(Debug, Clone)]
pub struct MultiCone {
    intervals: Vec<ProjInterval>,
}

impl MultiCone {
    /// Build from arbitrary intervals, merging overlaps. Fails if the union
    /// covers the whole projective line (a multicone is a proper subset).
    pub fn from_intervals(intervals: Vec<ProjInterval>) -> Result<MultiCone> {
        if intervals.is_empty() {
            return Err(Error::OutOfDomain("multicone needs at least one interval".into()));
        }
        let merged = merge_arcs(intervals)?;
        Ok(MultiCone { intervals: merged })
    }

    pub fn single(interval: ProjInterval) -> MultiCone {
        MultiCone {
            intervals: vec![interval],
        }
    }

    pub fn intervals(&self) -> &[ProjInterval] {
        &self.intervals
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(|i| i.length()).sum()
    }

    pub fn contains(&self, line: ProjLine, slack: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(line, slack))
    }

    /// True iff some member interval contains `inner` with clearance `margin`
    /// (negative margins permit boundary contact within `-margin`).
    pub fn contains_interval(&self, inner: &ProjInterval, margin: f64) -> bool {
        self.intervals
            .iter()
            .any(|i| i.contains_interval(inner, margin))
    }

    pub fn contains_cone(&self, other: &MultiCone, margin: f64) -> bool {
        other
            .intervals
            .iter()
            .all(|i| self.contains_interval(i, margin))
    }

    /// Extreme slopes over all interval endpoints; `None` if an endpoint is
    /// vertical.
    pub fn slope_extremes(&self) -> Option<(f64, f64)> {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for i in &self.intervals {
            for line in [i.lo(), i.hi()] {
                let t = line.slope()?;
                min = min.min(t);
                max = max.max(t);
            }
        }
        Some((min, max))
    }
}

/// Merge closed arcs on the circle of circumference pi. Touching arcs
/// (endpoint gap below 1e-15) are coalesced.
fn merge_arcs(mut arcs: Vec<ProjInterval>) -> Result<Vec<ProjInterval>> {
    const TOUCH: f64 = 1e-15;
    arcs.sort_by(|a, b| a.start.partial_cmp(&b.start).unwrap());
    let total: f64 = arcs.iter().map(|a| a.length).sum();
    if total >= PROJ_CIRCUMFERENCE {
        // overlaps may still reduce the union below full measure; merge in
        // linear coordinates and check afterwards
    }
    // unroll to [start, end] pairs on the real line, duplicating wrapped arcs
    let mut segs: Vec<(f64, f64)> = Vec::with_capacity(arcs.len() * 2);
    for a in &arcs {
        let end = a.start + a.length;
        if end <= PROJ_CIRCUMFERENCE {
            segs.push((a.start, end));
        } else {
            segs.push((a.start, PROJ_CIRCUMFERENCE));
            segs.push((0.0, end - PROJ_CIRCUMFERENCE));
        }
    }
    segs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(segs.len());
    for (s, e) in segs {
        match merged.last_mut() {
            Some(last) if s <= last.1 + TOUCH => last.1 = last.1.max(e),
            _ => merged.push((s, e)),
        }
    }
    // wrap-around: last segment touching pi joins a first segment touching 0
    if merged.len() > 1 {
        let first = merged[0];
        let last = *merged.last().unwrap();
        if last.1 >= PROJ_CIRCUMFERENCE - TOUCH && first.0 <= TOUCH {
            merged[0] = (last.0 - PROJ_CIRCUMFERENCE, first.1.max(last.1 - PROJ_CIRCUMFERENCE));
            merged.pop();
        }
    }
    let covered: f64 = merged.iter().map(|(s, e)| e - s).sum();
    if covered >= PROJ_CIRCUMFERENCE - TOUCH {
        return Err(Error::OutOfDomain(
            "multicone union covers the whole projective line".into(),
        ));
    }
    Ok(merged
        .into_iter()
        .map(|(s, e)| {
            ProjInterval::new(ProjLine::from_angle(s), ProjLine::from_angle(e))
        })
        .collect())
}

/// Certified strict cone mapping: true iff `m` sends every interval of `cone`
/// into the interior of `target` with angular clearance at least `margin`.
/// Images of projective intervals under invertible maps are projective
/// intervals, so checking the image arcs is exact up to the margin.
pub fn cone_strictly_maps_into(
    m: Mat2,
    cone: &MultiCone,
    target: &MultiCone,
    margin: f64,
) -> Result<bool> {
    if !(margin > 0.0) {
        return Err(Error::OutOfDomain("margin must be positive".into()));
    }
    for interval in cone.intervals() {
        let image = map_interval(m, interval)?;
        if !target.contains_interval(&image, margin) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn svd_identity_is_isotropic() {
        let s = svd2(Mat2::IDENTITY);
        assert_close(s.alpha1, 1.0, 1e-15);
        assert_close(s.alpha2, 1.0, 1e-15);
        assert!(s.eta1.is_none());
    }

    #[test]
    fn svd_diagonal() {
        let s = svd2(Mat2::diag(3.0, 2.0));
        assert_close(s.alpha1, 3.0, 1e-14);
        assert_close(s.alpha2, 2.0, 1e-14);
        let eta = s.eta1.expect("distinct singular values");
        assert!(proj_angle(eta, ProjLine::from_slope(0.0)) < 1e-12);
    }

    #[test]
    fn svd_takagi_generator() {
        // rows (1/2, 0), (1/2, 2/3): eigenvalues of the Gram matrix are
        // (17 +- sqrt(145))/36
        let m = Mat2::rows([0.5, 0.0], [0.5, 2.0 / 3.0]);
        let s = svd2(m);
        let lam1 = (17.0 + 145.0_f64.sqrt()) / 36.0;
        assert_close(s.alpha1, lam1.sqrt(), 1e-12);
        assert_close(s.alpha1 * s.alpha2, 1.0 / 3.0, 1e-12);
        assert_close(s.alpha2, (1.0 / 3.0) / lam1.sqrt(), 1e-12);
    }

    #[test]
    fn svd_zero_matrix() {
        let s = svd2(Mat2::new(0.0, 0.0, 0.0, 0.0));
        assert_eq!(s.alpha1, 0.0);
        assert_eq!(s.alpha2, 0.0);
        assert!(s.eta1.is_none());
    }

    #[test]
    fn proj_angle_examples() {
        let e1 = ProjLine::new(Vec2::new(1.0, 0.0));
        let e2 = ProjLine::new(Vec2::new(0.0, 1.0));
        assert_close(proj_angle(e1, e2), std::f64::consts::FRAC_PI_2, 1e-15);
        let diag = ProjLine::new(Vec2::new(1.0, 1.0));
        assert_close(proj_angle(diag, e1), std::f64::consts::FRAC_PI_4, 1e-15);
        let neg = ProjLine::new(Vec2::new(-1.0, 0.0));
        assert_eq!(proj_angle(e1, neg), 0.0);
        assert_eq!(e1, neg);
    }

    #[test]
    fn act_examples() {
        let v = ProjLine::from_slope(1.0);
        let id = act(Mat2::IDENTITY, v).unwrap();
        assert!(proj_angle(id, v) < 1e-15);

        let w = act(Mat2::diag(2.0, 1.0), v).unwrap();
        assert!(proj_angle(w, ProjLine::new(Vec2::new(2.0, 1.0))) < 1e-15);

        // inverse Takagi generator at lambda = 2/3 sends <(1,0)> to <(1,-3/4)>
        let a1 = Mat2::rows([0.5, 0.0], [0.5, 2.0 / 3.0]);
        let inv = a1.inverse().unwrap();
        let img = act(inv, ProjLine::from_slope(0.0)).unwrap();
        assert!(proj_angle(img, ProjLine::from_slope(-0.75)) < 1e-12);
    }

    #[test]
    fn act_rejects_singular() {
        let m = Mat2::new(1.0, 2.0, 2.0, 4.0);
        assert!(matches!(
            act(m, ProjLine::from_slope(0.0)),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn interval_contains_wraps() {
        // arc from slope 2 through the vertical to slope -2
        let arc = ProjInterval::new(ProjLine::from_slope(2.0), ProjLine::from_slope(-2.0));
        assert!(arc.contains(ProjLine::vertical(), 0.0));
        assert!(!arc.contains(ProjLine::from_slope(0.0), 1e-9));
        assert!(arc.length() < PROJ_CIRCUMFERENCE);
    }

    #[test]
    fn cone_identity_is_not_strict() {
        let c = MultiCone::single(ProjInterval::from_slopes(-1.0, 1.0));
        let ok = cone_strictly_maps_into(Mat2::IDENTITY, &c, &c, 1e-3).unwrap();
        assert!(!ok);
    }

    #[test]
    fn cone_contraction_is_strict() {
        // diag(2, 1/2) sends slopes [-1, 1] to [-1/4, 1/4]
        let c = MultiCone::single(ProjInterval::from_slopes(-1.0, 1.0));
        let ok = cone_strictly_maps_into(Mat2::diag(2.0, 0.5), &c, &c, 0.01).unwrap();
        assert!(ok);
    }

    #[test]
    fn multicone_merges_overlaps() {
        let c = MultiCone::from_intervals(vec![
            ProjInterval::from_slopes(-1.0, 0.5),
            ProjInterval::from_slopes(0.0, 1.0),
            ProjInterval::from_slopes(3.0, 4.0),
        ])
        .unwrap();
        assert_eq!(c.intervals().len(), 2);
        assert!(c.contains(ProjLine::from_slope(0.75), 0.0));
        assert!(!c.contains(ProjLine::from_slope(2.0), 1e-9));
    }

    #[test]
    fn multicone_rejects_full_circle() {
        let all = vec![
            ProjInterval::new(ProjLine::from_angle(0.0), ProjLine::from_angle(1.8)),
            ProjInterval::new(ProjLine::from_angle(1.7), ProjLine::from_angle(3.1)),
            ProjInterval::new(ProjLine::from_angle(3.0), ProjLine::from_angle(0.1)),
        ];
        assert!(MultiCone::from_intervals(all).is_err());
    }

    #[test]
    fn map_interval_follows_midpoint() {
        let arc = ProjInterval::from_slopes(-1.0, 1.0);
        let img = map_interval(Mat2::diag(1.0, -1.0), &arc).unwrap();
        // reflection reverses orientation but the image is still slopes [-1,1]
        assert!(img.contains(ProjLine::from_slope(0.0), 1e-12));
        assert_close(img.length(), arc.length(), 1e-12);
    }

    #[test]
    fn serde_roundtrip() {
        let m = Mat2::rows([0.5, 0.0], [0.5, 2.0 / 3.0]);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "[[0.5,0.0],[0.5,0.6666666666666666]]");
        let back: Mat2 = serde_json::from_str(&json).unwrap();
        assert_eq!(m, back);
        let v = Vec2::new(1.0, -2.5);
        let back: Vec2 = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, back);
    }
}
