//! Planar affine iterated function systems: cylinder maps and hulls,
//! domination diagnostics, Furstenberg direction enclosures, the
//! neighborhood-count probe, and singular-value pressure.
//!
//! Cylinder correctness rests on one containment: the stored enclosure is a
//! convex superset of the attractor, so the image of the enclosure under a
//! cylinder map is a convex superset of that cylinder. The enclosure is either
//! certified invariant (`phi_i(P) subset P` checked vertex-wise) or supplied
//! with an external justification; the certificate records which.

use serde::{Deserialize, Serialize};

use crate::linalg2::{
    cone_strictly_maps_into, map_interval, svd2, Mat2, MultiCone, ProjInterval, ProjLine, Vec2,
    DET_SLACK,
};
use crate::wordspace::Word;
use crate::{Error, Result};

/// An invertible affine map `x -> Ax + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap2 {
    #[serde(rename = "A")]
    pub linear: Mat2,
    #[serde(rename = "b")]
    pub translation: Vec2,
}

impl AffineMap2 {
    pub fn new(linear: Mat2, translation: Vec2) -> Result<AffineMap2> {
        let det = linear.det();
        if det.abs() <= DET_SLACK {
            return Err(Error::SingularMatrix { det });
        }
        Ok(AffineMap2 {
            linear,
            translation,
        })
    }

    pub fn identity() -> AffineMap2 {
        AffineMap2 {
            linear: Mat2::IDENTITY,
            translation: Vec2::ZERO,
        }
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        self.linear.apply(v) + self.translation
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &AffineMap2) -> AffineMap2 {
        AffineMap2 {
            linear: self.linear.mul(other.linear),
            translation: self.linear.apply(other.translation) + self.translation,
        }
    }

    pub fn inverse(&self) -> Result<AffineMap2> {
        let inv = self.linear.inverse()?;
        Ok(AffineMap2 {
            linear: inv,
            translation: inv.apply(self.translation).scale(-1.0),
        })
    }

    /// The fixed point `(I - A)^{-1} b`, when `I - A` is invertible.
    pub fn fixed_point(&self) -> Result<Vec2> {
        let m = Mat2::new(
            1.0 - self.linear.a11,
            -self.linear.a12,
            -self.linear.a21,
            1.0 - self.linear.a22,
        );
        Ok(m.inverse()?.apply(self.translation))
    }
}

/// A convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
}

impl ConvexPolygon {
    pub fn new(mut vertices: Vec<Vec2>) -> Result<ConvexPolygon> {
        if vertices.len() < 3 {
            return Err(Error::DegenerateHull(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateHull("non-finite vertex".into()));
        }
        let area2 = signed_area2(&vertices);
        if area2 == 0.0 || !area2.is_finite() {
            return Err(Error::DegenerateHull("zero or non-finite area".into()));
        }
        if area2 < 0.0 {
            vertices.reverse();
        }
        // convexity: every consecutive edge turn is a left turn (collinear
        // vertices allowed within a relative slack)
        let n = vertices.len();
        let scale = diameter_of(&vertices);
        let slack = 1e-12 * scale * scale;
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if (b - a).wedge(c - b) < -slack {
                return Err(Error::DegenerateHull("vertices are not convex".into()));
            }
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<ConvexPolygon> {
        ConvexPolygon::new(vec![
            Vec2::new(x0, y0),
            Vec2::new(x1, y0),
            Vec2::new(x1, y1),
            Vec2::new(x0, y1),
        ])
    }

    pub fn unit_square() -> ConvexPolygon {
        ConvexPolygon::rect(0.0, 0.0, 1.0, 1.0).expect("unit square is a polygon")
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn diameter(&self) -> f64 {
        diameter_of(&self.vertices)
    }

    /// Image under an affine map, reoriented counterclockwise when the map
    /// reverses orientation.
    pub fn map(&self, f: &AffineMap2) -> ConvexPolygon {
        let mut vertices: Vec<Vec2> = self.vertices.iter().map(|&v| f.apply(v)).collect();
        if f.linear.det() < 0.0 {
            vertices.reverse();
        }
        ConvexPolygon { vertices }
    }

    /// True iff `p` lies at signed distance `>= margin` inside every edge.
    /// Negative margins admit points slightly outside.
    pub fn contains_point(&self, p: Vec2, margin: f64) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let e = b - a;
            let len = e.norm();
            if e.wedge(p - a) < margin * len {
                return false;
            }
        }
        true
    }

    /// Euclidean distance from `p` to the polygon (zero inside).
    pub fn distance_to_point(&self, p: Vec2) -> f64 {
        if self.contains_point(p, 0.0) {
            return 0.0;
        }
        let n = self.vertices.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            best = best.min(point_segment_distance(p, a, b));
        }
        best
    }
}

fn signed_area2(vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    let mut acc = 0.0;
    for i in 0..n {
        acc += vertices[i].wedge(vertices[(i + 1) % n]);
    }
    acc
}

fn diameter_of(vertices: &[Vec2]) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..vertices.len() {
        for j in (i + 1)..vertices.len() {
            best = best.max(vertices[i].dist(vertices[j]));
        }
    }
    best
}

fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// How the attractor enclosure is justified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnclosureCertificate {
    /// `phi_i(P) subset P` was checked for every map.
    VerifiedInvariant,
    /// Containment of the attractor is justified outside the system, e.g. by
    /// a closed-form bound on the attractor.
    AssertedExternal,
}

/// An affine IFS together with a convex enclosure of its attractor.
#[derive(Debug, Clone)]
pub struct AffineIFS {
    maps: Vec<AffineMap2>,
    enclosure: ConvexPolygon,
    certificate: EnclosureCertificate,
}

impl AffineIFS {
    pub fn new(
        maps: Vec<AffineMap2>,
        enclosure: ConvexPolygon,
        certificate: EnclosureCertificate,
    ) -> Result<AffineIFS> {
        if maps.len() < 2 {
            return Err(Error::OutOfDomain(format!(
                "an IFS needs at least 2 maps, got {}",
                maps.len()
            )));
        }
        if maps.len() > u8::MAX as usize {
            return Err(Error::OutOfDomain("too many maps".into()));
        }
        for m in &maps {
            let det = m.linear.det();
            if det.abs() <= DET_SLACK {
                return Err(Error::SingularMatrix { det });
            }
        }
        Ok(AffineIFS {
            maps,
            enclosure,
            certificate,
        })
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn alphabet_size(&self) -> u8 {
        self.maps.len() as u8
    }

    pub fn maps(&self) -> &[AffineMap2] {
        &self.maps
    }

    pub fn map(&self, index_1based: u8) -> &AffineMap2 {
        &self.maps[(index_1based - 1) as usize]
    }

    pub fn enclosure(&self) -> &ConvexPolygon {
        &self.enclosure
    }

    pub fn certificate(&self) -> EnclosureCertificate {
        self.certificate
    }
}

impl Serialize for AffineIFS {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            maps: &'a [AffineMap2],
            enclosure: &'a [Vec2],
        }
        Wire {
            maps: &self.maps,
            enclosure: self.enclosure.vertices(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AffineIFS {
    /// Deserialized systems carry the `asserted-external` certificate; callers
    /// that need an invariant enclosure must re-verify it.
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            maps: Vec<AffineMap2>,
            enclosure: Vec<Vec2>,
        }
        let wire = Wire::deserialize(deserializer)?;
        let enclosure = ConvexPolygon::new(wire.enclosure).map_err(serde::de::Error::custom)?;
        AffineIFS::new(wire.maps, enclosure, EnclosureCertificate::AssertedExternal)
            .map_err(serde::de::Error::custom)
    }
}

/// Composition `phi_{i_1} . ... . phi_{i_n}` along a word; the empty word
/// gives the identity.
pub fn cylinder_map(ifs: &AffineIFS, word: &Word) -> Result<AffineMap2> {
    if word.alphabet_size() as usize > ifs.len() {
        return Err(Error::OutOfRange(format!(
            "word over alphabet {} used with an IFS of {} maps",
            word.alphabet_size(),
            ifs.len()
        )));
    }
    let mut acc = AffineMap2::identity();
    for &d in word.raw_digits() {
        acc = acc.compose(&ifs.maps[d as usize]);
    }
    Ok(acc)
}

/// The convex superset `phi_i(enclosure)` of the cylinder `phi_i(X)`.
pub fn cylinder_hull(ifs: &AffineIFS, word: &Word) -> Result<ConvexPolygon> {
    let map = cylinder_map(ifs, word)?;
    Ok(ifs.enclosure().map(&map))
}

/// Vertex-wise check that `phi_i(p) subset p` for every map, with clearance
/// `margin`. A true answer certifies that the attractor lies in `p`.
pub fn verify_invariant_enclosure(ifs: &AffineIFS, p: &ConvexPolygon, margin: f64) -> bool {
    let slack = 1e-12 * (1.0 + p.diameter());
    ifs.maps().iter().all(|f| {
        p.vertices()
            .iter()
            .all(|&v| p.contains_point(f.apply(v), margin - slack))
    })
}

/// Per-level maxima of the singular value ratio `alpha2/alpha1` over all
/// cylinder matrices, exhaustively to `depth`. Geometric decay of these maxima
/// is the quantitative form of domination.
pub fn domination_report(ifs: &AffineIFS, depth: usize) -> Result<Vec<f64>> {
    const MAX_DEPTH: usize = 22;
    if depth > MAX_DEPTH {
        return Err(Error::DepthTooLarge {
            requested: depth,
            max: MAX_DEPTH,
        });
    }
    let mut maxima = vec![0.0_f64; depth];
    fn rec(ifs: &AffineIFS, m: Mat2, level: usize, depth: usize, maxima: &mut [f64]) {
        if level > 0 {
            let s = svd2(m);
            let ratio = if s.alpha1 > 0.0 { s.alpha2 / s.alpha1 } else { 1.0 };
            if ratio > maxima[level - 1] {
                maxima[level - 1] = ratio;
            }
        }
        if level == depth {
            return;
        }
        for f in ifs.maps() {
            rec(ifs, m.mul(f.linear), level + 1, depth, maxima);
        }
    }
    rec(ifs, Mat2::IDENTITY, 0, depth, &mut maxima);
    Ok(maxima)
}

/// Which product family a Furstenberg enclosure iterates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeDirection {
    /// Inverse matrices: encloses the backward directions `X_F`.
    Backward,
    /// Forward matrices: encloses the forward directions `Y_F`.
    Forward,
}

/// Depth-`n` outer enclosure of the Furstenberg directions: the union of the
/// images of `seed` under all length-`n` products of the (forward or inverse)
/// generator matrices, with overlapping projective intervals merged after
/// every level.
///
/// The seed must be strongly invariant for the chosen direction; every image
/// interval is checked against it and an escape reports `ConeNotInvariant`.
/// Under that hypothesis the outputs are nested in `n` and contain the true
/// direction set at every depth.
pub fn furstenberg_enclosure(
    ifs: &AffineIFS,
    seed: &MultiCone,
    depth: usize,
    direction: ConeDirection,
) -> Result<MultiCone> {
    let mats: Vec<Mat2> = match direction {
        ConeDirection::Forward => ifs.maps().iter().map(|f| f.linear).collect(),
        ConeDirection::Backward => ifs
            .maps()
            .iter()
            .map(|f| f.linear.inverse())
            .collect::<Result<_>>()?,
    };
    let mut cone = seed.clone();
    for level in 1..=depth {
        let mut images = Vec::with_capacity(cone.intervals().len() * mats.len());
        for m in &mats {
            for interval in cone.intervals() {
                let img = map_interval(*m, interval)?;
                if !seed.contains_interval(&img, -1e-9) {
                    return Err(Error::ConeNotInvariant { level });
                }
                images.push(img);
            }
        }
        cone = MultiCone::from_intervals(images)?;
    }
    Ok(cone)
}

/// Counts cylinder maps whose singular value window brackets `r` and whose
/// hull meets the closed ball `B(x, r)`.
///
/// The window is `alpha2(A_i) <= r < alpha2(A_(i-))`; since `alpha2` is
/// nonincreasing along branches for contractive systems, a depth-first walk
/// descends while `alpha2 > r` and tests the window exactly once per branch.
/// Branches whose hull misses the ball are pruned. The hull test makes the
/// count an upper bound for the true neighborhood count at `(x, r)`.
pub fn wbnc_probe(ifs: &AffineIFS, x: Vec2, r: f64) -> Result<u64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfDomain(format!(
            "probe radius must lie in (0, 1), got {r}"
        )));
    }
    // root has alpha2(identity) = 1 > r, so descend from the top
    fn rec(ifs: &AffineIFS, map: &AffineMap2, x: Vec2, r: f64) -> u64 {
        let hull = ifs.enclosure().map(map);
        if hull.distance_to_point(x) > r {
            return 0;
        }
        let s = svd2(map.linear);
        if s.alpha2 <= r {
            return 1;
        }
        ifs.maps()
            .iter()
            .map(|f| rec(ifs, &map.compose(f), x, r))
            .sum()
    }
    Ok(ifs
        .maps()
        .iter()
        .map(|f| rec(ifs, &AffineMap2::identity().compose(f), x, r))
        .sum())
}

/// The singular value function: an `s`-dimensional volume of the image
/// ellipse of the unit ball.
pub fn singular_value_function(alpha1: f64, alpha2: f64, s: f64) -> f64 {
    if s <= 1.0 {
        alpha1.powf(s)
    } else if s <= 2.0 {
        alpha1 * alpha2.powf(s - 1.0)
    } else {
        (alpha1 * alpha2).powf(0.5 * s)
    }
}

/// Exhaustive singular values of every depth-`n` cylinder matrix.
///
/// Bounded by both the depth cap and a total word budget so the result always
/// fits in memory.
pub fn level_singular_values(ifs: &AffineIFS, depth: usize) -> Result<Vec<(f64, f64)>> {
    const MAX_DEPTH: usize = 18;
    const WORD_BUDGET: u64 = 1 << 22;
    let n_words = (ifs.len() as u64).checked_pow(depth as u32);
    let max_for_alphabet = (0..=MAX_DEPTH)
        .take_while(|&k| {
            (ifs.len() as u64)
                .checked_pow(k as u32)
                .is_some_and(|w| w <= WORD_BUDGET)
        })
        .last()
        .unwrap_or(0);
    if depth > MAX_DEPTH || n_words.is_none_or(|w| w > WORD_BUDGET) {
        return Err(Error::DepthTooLarge {
            requested: depth,
            max: max_for_alphabet,
        });
    }
    let mut out = Vec::with_capacity(n_words.unwrap() as usize);
    fn rec(ifs: &AffineIFS, m: Mat2, remaining: usize, out: &mut Vec<(f64, f64)>) {
        if remaining == 0 {
            let s = svd2(m);
            out.push((s.alpha1, s.alpha2));
            return;
        }
        for f in ifs.maps() {
            rec(ifs, m.mul(f.linear), remaining - 1, out);
        }
    }
    rec(ifs, Mat2::IDENTITY, depth, &mut out);
    Ok(out)
}

/// Two-sided finite-depth pressure enclosure.
#[derive(Debug, Clone, Serialize)]
pub struct PressureCurve {
    pub s_grid: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub depth: usize,
}

fn max_generator_condition(ifs: &AffineIFS) -> f64 {
    ifs.maps()
        .iter()
        .map(|f| {
            let s = svd2(f.linear);
            s.alpha1 / s.alpha2
        })
        .fold(1.0, f64::max)
}

fn pressure_upper(svals: &[(f64, f64)], depth: usize, s: f64) -> f64 {
    let sum: f64 = svals
        .iter()
        .map(|&(a1, a2)| singular_value_function(a1, a2, s))
        .sum();
    sum.ln() / depth as f64
}

/// Pressure bounds at depth `n` on a grid of `s` values.
///
/// By sub-multiplicativity of the singular value function, the exact depth-`n`
/// sum gives an upper bound for the limit pressure. The lower curve subtracts
/// the distortion term `log C(s) / n` with `C(s) = (max_i cond A_i)^s`, the
/// documented enclosure choice for this artifact; tests pin `lower <= upper`
/// and root bracketing rather than depth monotonicity of the lower curve.
pub fn pressure_curve(ifs: &AffineIFS, s_grid: &[f64], depth: usize) -> Result<PressureCurve> {
    let svals = level_singular_values(ifs, depth)?;
    let log_cond = max_generator_condition(ifs).ln();
    let mut lower = Vec::with_capacity(s_grid.len());
    let mut upper = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let up = pressure_upper(&svals, depth, s);
        upper.push(up);
        lower.push(up - s * log_cond / depth as f64);
    }
    Ok(PressureCurve {
        s_grid: s_grid.to_vec(),
        lower,
        upper,
        depth,
    })
}

/// Bracketing interval `[s_lo, s_hi]` for the affinity dimension: the roots of
/// the depth-`n` lower and upper pressure curves, found by bisection to 1e-6
/// and clamped to `[0, 2]`. The bracket is rounded outward by the bisection
/// width, so the true roots never fall outside it.
pub fn affinity_dimension(ifs: &AffineIFS, depth: usize) -> Result<(f64, f64)> {
    let svals = level_singular_values(ifs, depth)?;
    let log_cond = max_generator_condition(ifs).ln();
    let upper = |s: f64| pressure_upper(&svals, depth, s);
    let lower = |s: f64| upper(s) - s * log_cond / depth as f64;
    Ok((bisect_root(lower).0, bisect_root(upper).1))
}

/// Bracket `lo <= root <= hi` with `hi - lo <= 1e-6` for a decreasing
/// function on `[0, 2]`.
fn bisect_root(f: impl Fn(f64) -> f64) -> (f64, f64) {
    if f(0.0) <= 0.0 {
        return (0.0, 0.0);
    }
    if f(2.0) >= 0.0 {
        return (2.0, 2.0);
    }
    let (mut lo, mut hi) = (0.0_f64, 2.0_f64);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// The three-map counterexample system: satisfies the strong open set
/// condition with the open unit square but fails the weak bounded
/// neighborhood condition at the origin.
pub fn example3_ifs() -> AffineIFS {
    let a1 = Mat2::rows([1.0 / 3.0, 1.0 / 4.0], [0.0, 1.0 / 4.0]);
    let a2 = Mat2::rows([1.0 / 4.0, 0.0], [1.0 / 4.0, 1.0 / 3.0]);
    let a3 = Mat2::rows([1.0 / 3.0, 1.0 / 12.0], [1.0 / 4.0, 1.0 / 2.0]);
    let maps = vec![
        AffineMap2::new(a1, Vec2::ZERO).unwrap(),
        AffineMap2::new(a2, Vec2::ZERO).unwrap(),
        AffineMap2::new(a3, Vec2::new(7.0 / 12.0, 1.0 / 4.0)).unwrap(),
    ];
    AffineIFS::new(
        maps,
        ConvexPolygon::unit_square(),
        EnclosureCertificate::VerifiedInvariant,
    )
    .unwrap()
}

/// The first-quadrant direction cone `C_eps`, bounded by `<(1,-eps)>` and
/// `<(-eps,1)>` and containing `<(1,1)>`.
pub fn example3_cone(eps: f64) -> ProjInterval {
    ProjInterval::new(
        ProjLine::new(Vec2::new(1.0, -eps)),
        ProjLine::new(Vec2::new(-eps, 1.0)),
    )
}

/// The backward cone `D_0`, bounded by `<(1,-3)>` and `<(3,-1)>` and
/// containing `<(1,-1)>`.
pub fn example3_backward_cone() -> ProjInterval {
    ProjInterval::new(
        ProjLine::new(Vec2::new(1.0, -3.0)),
        ProjLine::new(Vec2::new(3.0, -1.0)),
    )
}

/// Numeric verification report for the counterexample system.
#[derive(Debug, Clone, Serialize)]
pub struct Example3Report {
    /// Largest operator norm over the three matrices; must stay below 0.62.
    pub max_norm: f64,
    pub norm_bound_ok: bool,
    /// Minimum of `|A_i v|` over unit directions sampled in the quadrant cone;
    /// must stay at least 1/3.
    pub min_cone_stretch: f64,
    pub cone_stretch_ok: bool,
    /// Maximum of `|A_i^{-1}|_V|^{-1}` over directions sampled in the backward
    /// cone, bounded by `(7/12) sqrt(5/17) < 0.32`.
    pub max_inverse_costretch: f64,
    pub inverse_costretch_bound: f64,
    pub inverse_costretch_ok: bool,
    /// Strict invariance of the cone `C_0.05` under all three matrices.
    pub cone_invariant: bool,
    /// Strong open set condition witness: the unit square maps into itself.
    pub unit_square_invariant: bool,
}

impl Example3Report {
    pub fn all_pass(&self) -> bool {
        self.norm_bound_ok
            && self.cone_stretch_ok
            && self.inverse_costretch_ok
            && self.cone_invariant
            && self.unit_square_invariant
    }
}

/// Run all counterexample checks with deterministic direction sampling
/// (10^4 equispaced angles per cone).
pub fn example3_checks() -> Result<Example3Report> {
    let ifs = example3_ifs();
    const SAMPLES: usize = 10_000;
    let fp_slack = 1e-12;

    let max_norm = ifs
        .maps()
        .iter()
        .map(|f| svd2(f.linear).alpha1)
        .fold(0.0, f64::max);

    let quadrant = example3_cone(0.0);
    let mut min_cone_stretch = f64::INFINITY;
    for k in 0..SAMPLES {
        let theta = quadrant.lo().angle_coord()
            + quadrant.length() * (k as f64) / ((SAMPLES - 1) as f64);
        let v = Vec2::new(theta.cos(), theta.sin());
        for f in ifs.maps() {
            min_cone_stretch = min_cone_stretch.min(f.linear.apply(v).norm());
        }
    }

    let backward = example3_backward_cone();
    let mut max_inverse_costretch: f64 = 0.0;
    for k in 0..SAMPLES {
        let theta =
            backward.lo().angle_coord() + backward.length() * (k as f64) / ((SAMPLES - 1) as f64);
        let v = Vec2::new(theta.cos(), theta.sin());
        for f in ifs.maps() {
            let stretch = f.linear.inverse()?.apply(v).norm();
            max_inverse_costretch = max_inverse_costretch.max(1.0 / stretch);
        }
    }
    let inverse_costretch_bound = (7.0 / 12.0) * (5.0_f64 / 17.0).sqrt();

    let cone = MultiCone::single(example3_cone(0.05));
    let mut cone_invariant = true;
    for f in ifs.maps() {
        cone_invariant &= cone_strictly_maps_into(f.linear, &cone, &cone, 1e-3)?;
    }

    let unit_square_invariant = verify_invariant_enclosure(&ifs, &ConvexPolygon::unit_square(), 0.0);

    Ok(Example3Report {
        max_norm,
        norm_bound_ok: max_norm < 0.62,
        min_cone_stretch,
        cone_stretch_ok: min_cone_stretch >= 1.0 / 3.0 - fp_slack,
        max_inverse_costretch,
        inverse_costretch_bound,
        inverse_costretch_ok: max_inverse_costretch <= inverse_costretch_bound + fp_slack,
        cone_invariant,
        unit_square_invariant,
    })
}
