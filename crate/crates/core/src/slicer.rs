//! Certified slice censuses: classification of cylinder hulls against lines
//! and strips, the pruned depth-first census, Minkowski slope estimators,
//! bad-word tallies, and slope/offset scans.
//!
//! Every count is two-sided. `definite` counts cylinders whose graph piece
//! provably crosses the target (endpoint signs plus connectedness), `possible`
//! counts cylinders whose hull could not be separated from it. The true census
//! always lies between the two, so theorem checks use the sound direction:
//! `definite` for upper-bound statements, `possible` for emptiness claims.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::affine_ifs::{cylinder_map, AffineIFS, AffineMap2, ConvexPolygon};
use crate::linalg2::Vec2;
use crate::takagi::{self, HullKind, TakagiParams};
use crate::wordspace::Word;
use crate::{Error, Result};

/// Maximum census depth; `2^26` leaves is the largest tree the engine walks.
pub const MAX_CENSUS_DEPTH: usize = 26;

/// An affine line in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Line {
    /// `{(s, t s) : s} + point`.
    Sloped { slope: f64, point: Vec2 },
    /// `{x = x0}`.
    Vertical { x0: f64 },
}

impl Line {
    pub fn sloped(slope: f64, point: Vec2) -> Result<Line> {
        if !slope.is_finite() || !point.is_finite() {
            return Err(Error::OutOfDomain(
                "sloped lines need finite slope and base point; the vertical line is its own variant".into(),
            ));
        }
        Ok(Line::Sloped { slope, point })
    }

    pub fn horizontal(y: f64) -> Line {
        Line::Sloped {
            slope: 0.0,
            point: Vec2::new(0.0, y),
        }
    }

    pub fn vertical(x0: f64) -> Line {
        Line::Vertical { x0 }
    }

    /// Perpendicular signed distance from `p` to the line.
    pub fn signed_distance(&self, p: Vec2) -> f64 {
        match *self {
            Line::Sloped { slope: t, point } => {
                (t * (p.x - point.x) - (p.y - point.y)) / (1.0 + t * t).sqrt()
            }
            Line::Vertical { x0 } => p.x - x0,
        }
    }

    /// y-intercept for sloped lines, x-offset for the vertical; feeds the
    /// slack scale.
    pub fn offset(&self) -> f64 {
        match *self {
            Line::Sloped { slope: t, point } => point.y - t * point.x,
            Line::Vertical { x0 } => x0,
        }
    }
}

/// A closed `r`-neighborhood of a line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strip {
    pub line: Line,
    pub radius: f64,
}

impl Strip {
    pub fn new(line: Line, radius: f64) -> Result<Strip> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::OutOfDomain(format!(
                "strip radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Strip { line, radius })
    }
}

/// A census target: a line or a strip around one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Line(Line),
    Strip(Strip),
}

impl Target {
    pub fn line(&self) -> &Line {
        match self {
            Target::Line(line) => line,
            Target::Strip(strip) => &strip.line,
        }
    }

    pub fn radius(&self) -> f64 {
        match self {
            Target::Line(_) => 0.0,
            Target::Strip(strip) => strip.radius,
        }
    }
}

/// Outcome of the certified three-way cylinder test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// The graph piece provably meets the target.
    Definite,
    /// Neither certificate applies.
    Possible,
    /// The hull provably misses the target.
    Empty,
}

/// Classify one cylinder against a line or strip.
///
/// `Empty` requires every hull vertex strictly on one side at signed distance
/// beyond `radius + slack`; since the hull is convex this separates the whole
/// cylinder. `Definite` requires the two graph-piece endpoints strictly on
/// opposite sides of a line (the connected piece must cross it), or, for a
/// strip, one endpoint strictly inside it or the whole hull strictly inside
/// it. Anything else is `Possible`.
pub fn classify_cylinder(
    hull: &ConvexPolygon,
    endpoints: (Vec2, Vec2),
    target: &Target,
    slack: f64,
) -> Result<Classification> {
    classify_with_containment(hull, endpoints, target, slack).map(|(class, _)| class)
}

/// Classification together with the strip-containment certificate: the bool
/// is true iff the whole hull lies strictly inside the strip, which certifies
/// that the full cylinder mass sits inside it. Always false for lines.
fn classify_with_containment(
    hull: &ConvexPolygon,
    endpoints: (Vec2, Vec2),
    target: &Target,
    slack: f64,
) -> Result<(Classification, bool)> {
    let scale = 1.0 + hull.diameter();
    if !hull.contains_point(endpoints.0, -1e-9 * scale)
        || !hull.contains_point(endpoints.1, -1e-9 * scale)
    {
        return Err(Error::DegenerateHull(
            "graph-piece endpoints fall outside the cylinder hull".into(),
        ));
    }
    let line = target.line();
    let r = target.radius();
    let mut dmin = f64::INFINITY;
    let mut dmax = f64::NEG_INFINITY;
    for &v in hull.vertices() {
        let d = line.signed_distance(v);
        dmin = dmin.min(d);
        dmax = dmax.max(d);
    }
    if dmin > r + slack || dmax < -(r + slack) {
        return Ok((Classification::Empty, false));
    }
    let g1 = line.signed_distance(endpoints.0);
    let g2 = line.signed_distance(endpoints.1);
    let (definite, contained) = match target {
        Target::Line(_) => (
            (g1 > slack && g2 < -slack) || (g1 < -slack && g2 > slack),
            false,
        ),
        Target::Strip(strip) => {
            let contained = dmax < strip.radius - slack && dmin > -(strip.radius - slack);
            (
                g1.abs() < strip.radius - slack || g2.abs() < strip.radius - slack || contained,
                contained,
            )
        }
    };
    if definite {
        Ok((Classification::Definite, contained))
    } else {
        Ok((Classification::Possible, contained))
    }
}

/// A self-affine system prepared for slicing: the IFS plus two attractor
/// points joined by a path inside the attractor (the definite certificate
/// rides on that connectedness).
#[derive(Debug, Clone)]
pub struct SliceSystem {
    ifs: AffineIFS,
    path_endpoints: (Vec2, Vec2),
    /// Cylinders project to exact dyadic intervals on the x-axis; enables the
    /// closed-form answer for vertical targets.
    dyadic_x: bool,
}

impl SliceSystem {
    pub fn new(ifs: AffineIFS, path_endpoints: (Vec2, Vec2)) -> Result<SliceSystem> {
        let scale = 1.0 + ifs.enclosure().diameter();
        for p in [path_endpoints.0, path_endpoints.1] {
            if !ifs.enclosure().contains_point(p, -1e-9 * scale) {
                return Err(Error::DegenerateHull(
                    "path endpoints must lie in the enclosure".into(),
                ));
            }
        }
        Ok(SliceSystem {
            ifs,
            path_endpoints,
            dyadic_x: false,
        })
    }

    /// The Takagi graph with the chosen hull; the graph runs from `(0,0)` to
    /// `(1,0)`.
    pub fn takagi(lambda: f64, hull: HullKind) -> Result<SliceSystem> {
        let ifs = takagi::takagi_ifs_with_hull(lambda, hull)?;
        let mut sys = SliceSystem::new(ifs, (Vec2::ZERO, Vec2::new(1.0, 0.0)))?;
        sys.dyadic_x = true;
        Ok(sys)
    }

    /// The counterexample system; its attractor joins `(0,0)` to `(1,1)`.
    pub fn example3() -> SliceSystem {
        SliceSystem::new(
            crate::affine_ifs::example3_ifs(),
            (Vec2::ZERO, Vec2::new(1.0, 1.0)),
        )
        .expect("fixture endpoints lie in the unit square")
    }

    pub fn ifs(&self) -> &AffineIFS {
        &self.ifs
    }

    pub fn path_endpoints(&self) -> (Vec2, Vec2) {
        self.path_endpoints
    }

    /// Default classification slack for a target against this system.
    pub fn default_slack(&self, target: &Target) -> f64 {
        1e-9 * (1.0 + target.line().offset().abs() + self.ifs.enclosure().diameter())
    }
}

/// Certified census of depth-`n` cylinders against a target.
#[derive(Debug, Clone)]
pub struct SliceCensus {
    pub depth: usize,
    pub definite: u64,
    pub possible: u64,
    pub visited_nodes: u64,
    /// Possible-leaf words, when recording was requested.
    pub words: Option<Vec<Word>>,
}

impl Serialize for SliceCensus {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let fields = if self.words.is_some() { 5 } else { 4 };
        let mut st = serializer.serialize_struct("SliceCensus", fields)?;
        st.serialize_field("n", &self.depth)?;
        st.serialize_field("definite", &self.definite)?;
        st.serialize_field("possible", &self.possible)?;
        st.serialize_field("visited", &self.visited_nodes)?;
        if let Some(words) = &self.words {
            let rendered: Vec<String> = words.iter().map(|w| w.to_string()).collect();
            st.serialize_field("words", &rendered)?;
        }
        st.end()
    }
}

struct CensusWalk<'a> {
    system: &'a SliceSystem,
    target: &'a Target,
    slack: f64,
    depth: usize,
    definite: Vec<u64>,
    possible: Vec<u64>,
    contained: Vec<u64>,
    visited: Vec<u64>,
    words: Option<Vec<Word>>,
    word: Word,
}

impl<'a> CensusWalk<'a> {
    fn new(
        system: &'a SliceSystem,
        target: &'a Target,
        slack: f64,
        depth: usize,
        record_words: bool,
    ) -> Result<Self> {
        Ok(CensusWalk {
            system,
            target,
            slack,
            depth,
            definite: vec![0; depth + 1],
            possible: vec![0; depth + 1],
            contained: vec![0; depth + 1],
            visited: vec![0; depth + 1],
            words: record_words.then(Vec::new),
            word: Word::empty(system.ifs.alphabet_size())?,
        })
    }

    fn walk(&mut self, map: &AffineMap2, level: usize) -> Result<()> {
        let hull = self.system.ifs.enclosure().map(map);
        let endpoints = (
            map.apply(self.system.path_endpoints.0),
            map.apply(self.system.path_endpoints.1),
        );
        let (class, contained) =
            classify_with_containment(&hull, endpoints, self.target, self.slack)?;
        self.visited[level] += 1;
        match class {
            Classification::Empty => return Ok(()),
            Classification::Definite => {
                self.definite[level] += 1;
                self.possible[level] += 1;
            }
            Classification::Possible => {
                self.possible[level] += 1;
            }
        }
        if contained {
            self.contained[level] += 1;
        }
        if level == self.depth {
            if let Some(words) = &mut self.words {
                words.push(self.word.clone());
            }
            return Ok(());
        }
        for digit in 1..=self.system.ifs.alphabet_size() {
            self.word.push(digit).expect("digit in range");
            let child = map.compose(self.system.ifs.map(digit));
            self.walk(&child, level + 1)?;
            self.word = self.word.parent().expect("child word is nonempty");
        }
        Ok(())
    }
}

fn check_depth(depth: usize) -> Result<()> {
    if depth > MAX_CENSUS_DEPTH {
        return Err(Error::DepthTooLarge {
            requested: depth,
            max: MAX_CENSUS_DEPTH,
        });
    }
    Ok(())
}

/// Censuses at every depth `0..=depth` from one pruned walk.
///
/// An `Empty` ancestor prunes its subtree, which is sound because child
/// cylinders are subsets of the parent cylinder (not of the parent hull: the
/// hulls need not be nested, and the census is defined by this alive-chain
/// semantics). Counts are independent of traversal order.
pub fn census_profile(
    system: &SliceSystem,
    target: &Target,
    depth: usize,
    slack: Option<f64>,
) -> Result<Vec<SliceCensus>> {
    check_depth(depth)?;
    if matches!(target.line(), Line::Vertical { .. }) {
        if system.dyadic_x {
            return (0..=depth)
                .map(|n| vertical_census(system, target, n))
                .collect();
        }
        return Err(Error::OutOfDomain(
            "vertical targets have a closed form only for dyadic-column systems".into(),
        ));
    }
    let slack = slack.unwrap_or_else(|| system.default_slack(target));
    let mut walkctx = CensusWalk::new(system, target, slack, depth, false)?;
    walkctx.walk(&AffineMap2::identity(), 0)?;
    let mut out = Vec::with_capacity(depth + 1);
    let mut visited_cum = 0;
    for n in 0..=depth {
        visited_cum += walkctx.visited[n];
        let c = SliceCensus {
            depth: n,
            definite: walkctx.definite[n],
            possible: walkctx.possible[n],
            visited_nodes: visited_cum,
            words: None,
        };
        let n_words = (system.ifs.len() as u64).pow(n as u32);
        assert!(c.definite <= c.possible && c.possible <= n_words);
        out.push(c);
    }
    Ok(out)
}

/// Certified census at a single depth. See [`census_profile`].
pub fn slice_census(
    system: &SliceSystem,
    target: &Target,
    depth: usize,
    slack: Option<f64>,
) -> Result<SliceCensus> {
    Ok(census_profile(system, target, depth, slack)?
        .pop()
        .expect("profile is nonempty"))
}

/// Census with the possible-leaf words recorded.
pub fn slice_census_words(
    system: &SliceSystem,
    target: &Target,
    depth: usize,
    slack: Option<f64>,
) -> Result<SliceCensus> {
    check_depth(depth)?;
    if matches!(target.line(), Line::Vertical { .. }) {
        return Err(Error::OutOfDomain(
            "word recording is not available for the closed-form vertical census".into(),
        ));
    }
    let slack = slack.unwrap_or_else(|| system.default_slack(target));
    let mut walkctx = CensusWalk::new(system, target, slack, depth, true)?;
    walkctx.walk(&AffineMap2::identity(), 0)?;
    Ok(SliceCensus {
        depth,
        definite: walkctx.definite[depth],
        possible: walkctx.possible[depth],
        visited_nodes: walkctx.visited.iter().sum(),
        words: walkctx.words,
    })
}

/// Strip census specialized for measure bounds: `contained` counts depth-`n`
/// cylinders whose hull lies strictly inside the strip (full mass certified
/// inside), `possible` counts those that might meet it.
#[derive(Debug, Clone, Copy)]
pub struct ContainmentCensus {
    pub depth: usize,
    pub contained: u64,
    pub possible: u64,
}

pub fn strip_containment_census(
    system: &SliceSystem,
    strip: &Strip,
    depth: usize,
    slack: Option<f64>,
) -> Result<ContainmentCensus> {
    check_depth(depth)?;
    let target = Target::Strip(*strip);
    if let Line::Vertical { x0 } = strip.line {
        if !system.dyadic_x {
            return Err(Error::OutOfDomain(
                "vertical targets have a closed form only for dyadic-column systems".into(),
            ));
        }
        let possible = vertical_census(system, &target, depth)?.possible;
        // a column lies inside the strip iff both of its dyadic edges do
        let (a, b) = (x0 - strip.radius, x0 + strip.radius);
        let scale = (1u64 << depth) as f64;
        let contained = if b < 0.0 || a > 1.0 {
            0
        } else {
            let lo = (a * scale).ceil().max(0.0);
            let hi = (b * scale).floor().min(scale) - 1.0;
            if hi < lo {
                0
            } else {
                (hi - lo) as u64 + 1
            }
        };
        return Ok(ContainmentCensus {
            depth,
            contained,
            possible,
        });
    }
    let slack = slack.unwrap_or_else(|| system.default_slack(&target));
    let mut walkctx = CensusWalk::new(system, &target, slack, depth, false)?;
    walkctx.walk(&AffineMap2::identity(), 0)?;
    Ok(ContainmentCensus {
        depth,
        contained: walkctx.contained[depth],
        possible: walkctx.possible[depth],
    })
}

/// Closed-form census for vertical targets over dyadic columns: a depth-`n`
/// cylinder projects onto `[k 2^-n, (k+1) 2^-n]`, and the graph piece spans
/// the full column, so intersection with a vertical line or strip is decided
/// by exact interval overlap. The graph of a function meets a vertical line;
/// definite equals possible.
fn vertical_census(system: &SliceSystem, target: &Target, depth: usize) -> Result<SliceCensus> {
    let Line::Vertical { x0 } = *target.line() else {
        unreachable!("caller dispatches on the vertical variant");
    };
    let _ = system;
    let r = target.radius();
    let (a, b) = (x0 - r, x0 + r);
    let scale = (1u64 << depth) as f64;
    let count = if b < 0.0 || a > 1.0 {
        0
    } else {
        // columns k with k <= b*2^n and k+1 >= a*2^n, clipped to [0, 2^n - 1]
        let hi = (b * scale).floor().min(scale - 1.0).max(0.0) as u64;
        let lo_raw = (a * scale).ceil() - 1.0;
        let lo = lo_raw.max(0.0) as u64;
        hi.saturating_sub(lo) + 1
    };
    Ok(SliceCensus {
        depth,
        definite: count,
        possible: count,
        visited_nodes: 0,
        words: None,
    })
}

/// Unpruned reference classifier: classifies every depth-`n` word from
/// scratch, recomputing each prefix hull independently, and applies the
/// alive-chain census semantics without any shared traversal state. Used to
/// cross-check the pruned engine.
pub fn census_oracle(
    system: &SliceSystem,
    target: &Target,
    depth: usize,
    slack: Option<f64>,
) -> Result<(u64, u64)> {
    check_depth(depth)?;
    let slack = slack.unwrap_or_else(|| system.default_slack(target));
    let n = system.ifs.alphabet_size() as u64;
    let total = n.pow(depth as u32);
    let mut definite = 0;
    let mut possible = 0;
    for index in 0..total {
        // decode the word most-significant digit first
        let mut digits = vec![0u8; depth];
        let mut rem = index;
        for slot in (0..depth).rev() {
            digits[slot] = (rem % n) as u8 + 1;
            rem /= n;
        }
        let word = Word::from_digits(system.ifs.alphabet_size(), &digits)?;
        let mut alive = true;
        let mut leaf_class = Classification::Possible;
        for k in 0..=depth {
            let prefix = word.restrict(k)?;
            let map = cylinder_map(&system.ifs, &prefix)?;
            let hull = system.ifs.enclosure().map(&map);
            let endpoints = (
                map.apply(system.path_endpoints.0),
                map.apply(system.path_endpoints.1),
            );
            let class = classify_cylinder(&hull, endpoints, target, slack)?;
            if class == Classification::Empty {
                alive = false;
                break;
            }
            if k == depth {
                leaf_class = class;
            }
        }
        if alive {
            possible += 1;
            if leaf_class == Classification::Definite {
                definite += 1;
            }
        }
    }
    Ok((definite, possible))
}

/// Two-sided Minkowski dimension estimate from censuses at consecutive
/// depths: least-squares slopes of `log2 definite` (zeros omitted) and
/// `log2 possible` against depth.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SlopeEstimate {
    pub lower_dim: f64,
    pub upper_dim: f64,
    pub lower_residual: f64,
    pub upper_residual: f64,
}

pub fn minkowski_slope(censuses: &[SliceCensus]) -> Result<SlopeEstimate> {
    if censuses.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need censuses at 3 consecutive depths, got {}",
            censuses.len()
        )));
    }
    for pair in censuses.windows(2) {
        if pair[1].depth != pair[0].depth + 1 {
            return Err(Error::InsufficientData(
                "census depths must be consecutive".into(),
            ));
        }
    }
    let definite_pts: Vec<(f64, f64)> = censuses
        .iter()
        .filter(|c| c.definite > 0)
        .map(|c| (c.depth as f64, (c.definite as f64).log2()))
        .collect();
    let possible_pts: Vec<(f64, f64)> = censuses
        .iter()
        .filter(|c| c.possible > 0)
        .map(|c| (c.depth as f64, (c.possible as f64).log2()))
        .collect();
    let (lower_dim, lower_residual) = if definite_pts.len() >= 2 {
        least_squares_slope(&definite_pts)
    } else {
        (0.0, 0.0)
    };
    let (upper_dim, upper_residual) = if possible_pts.len() >= 2 {
        least_squares_slope(&possible_pts)
    } else {
        (0.0, 0.0)
    };
    Ok(SlopeEstimate {
        lower_dim,
        upper_dim,
        lower_residual,
        upper_residual,
    })
}

/// Slope and root-mean-square residual of the least-squares line.
pub(crate) fn least_squares_slope(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return (0.0, 0.0);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mse: f64 = points
        .iter()
        .map(|p| {
            let e = p.1 - (slope * p.0 + intercept);
            e * e
        })
        .sum::<f64>()
        / n;
    (slope, mse.sqrt())
}

/// Histogram of strip-census leaves that already left the line census,
/// bucketed by the level at which their prefix first went empty.
#[derive(Debug, Clone, Serialize)]
pub struct BadTally {
    pub depth: usize,
    /// Strip radius constant: the strip has radius `c lambda^depth`.
    pub radius_constant: f64,
    /// `bad[k-1]` counts strip-possible leaves generated at level `k`.
    pub bad_per_level: Vec<u64>,
    /// Possible line census at each level `1..=depth`.
    pub line_possible_per_level: Vec<u64>,
    /// Possible strip census at each level `1..=depth`.
    pub strip_possible_per_level: Vec<u64>,
    /// `bad_k / max(line_possible_k, 1)`, the boundedness diagnostic.
    pub ratios: Vec<f64>,
    pub line_census: u64,
    pub strip_census: u64,
}

struct BadWalk<'a> {
    system: &'a SliceSystem,
    line: Target,
    strip: Target,
    slack_line: f64,
    slack_strip: f64,
    depth: usize,
    bad: Vec<u64>,
    line_possible: Vec<u64>,
    strip_possible: Vec<u64>,
}

impl<'a> BadWalk<'a> {
    /// Walks the strip-alive tree; `line_dead_since` is the level of the
    /// first line-empty prefix, if any.
    fn walk(&mut self, map: &AffineMap2, level: usize, line_dead_since: Option<usize>) -> Result<()> {
        let hull = self.system.ifs().enclosure().map(map);
        let endpoints = (
            map.apply(self.system.path_endpoints.0),
            map.apply(self.system.path_endpoints.1),
        );
        let strip_class = classify_cylinder(&hull, endpoints, &self.strip, self.slack_strip)?;
        if strip_class == Classification::Empty {
            return Ok(());
        }
        let line_dead_since = match line_dead_since {
            Some(k) => Some(k),
            None => {
                let line_class = classify_cylinder(&hull, endpoints, &self.line, self.slack_line)?;
                if line_class == Classification::Empty {
                    // bad words are generated at levels >= 1; an empty root
                    // kills every level-1 prefix
                    Some(level.max(1))
                } else {
                    None
                }
            }
        };
        if level >= 1 {
            self.strip_possible[level - 1] += 1;
            if line_dead_since.is_none() {
                self.line_possible[level - 1] += 1;
            }
        }
        if level == self.depth {
            if let Some(k) = line_dead_since {
                self.bad[k - 1] += 1;
            }
            return Ok(());
        }
        for digit in 1..=self.system.ifs().alphabet_size() {
            let child = map.compose(self.system.ifs().map(digit));
            self.walk(&child, level + 1, line_dead_since)?;
        }
        Ok(())
    }
}

/// Single-walk tally of the bad words for a Takagi slice, with the strip
/// radius `c lambda^depth`, `c = sqrt(2) (K + M)`.
pub fn bad_word_tally(
    lambda: f64,
    line: Line,
    depth: usize,
    hull: HullKind,
) -> Result<BadTally> {
    const MAX_DEPTH: usize = 22;
    if depth > MAX_DEPTH {
        return Err(Error::DepthTooLarge {
            requested: depth,
            max: MAX_DEPTH,
        });
    }
    let params = takagi::constants(lambda)?;
    let c = std::f64::consts::SQRT_2 * (params.k_lambda + params.m_lambda);
    let radius = c * lambda.powi(depth as i32);
    bad_word_tally_with_radius(lambda, line, depth, hull, c, radius)
}

/// Same walk with an explicit strip radius (used by the zero-radius edge case
/// in tests and by diagnostics).
pub fn bad_word_tally_with_radius(
    lambda: f64,
    line: Line,
    depth: usize,
    hull: HullKind,
    radius_constant: f64,
    radius: f64,
) -> Result<BadTally> {
    let system = SliceSystem::takagi(lambda, hull)?;
    if matches!(line, Line::Vertical { .. }) {
        return Err(Error::OutOfDomain(
            "bad-word tallies are defined for non-vertical slices".into(),
        ));
    }
    let line_target = Target::Line(line);
    let strip_target = if radius > 0.0 {
        Target::Strip(Strip::new(line, radius)?)
    } else {
        Target::Line(line)
    };
    let mut walkctx = BadWalk {
        system: &system,
        slack_line: system.default_slack(&line_target),
        slack_strip: system.default_slack(&strip_target),
        line: line_target,
        strip: strip_target,
        depth,
        bad: vec![0; depth.max(1)],
        line_possible: vec![0; depth.max(1)],
        strip_possible: vec![0; depth.max(1)],
    };
    walkctx.walk(&AffineMap2::identity(), 0, None)?;
    let line_census = *walkctx.line_possible.last().unwrap_or(&0);
    let strip_census = *walkctx.strip_possible.last().unwrap_or(&0);
    let total_bad: u64 = walkctx.bad.iter().sum();
    assert_eq!(
        total_bad,
        strip_census - line_census,
        "every strip leaf is either line-alive or generated at one level"
    );
    let ratios = walkctx
        .bad
        .iter()
        .zip(&walkctx.line_possible)
        .map(|(&b, &p)| b as f64 / p.max(1) as f64)
        .collect();
    Ok(BadTally {
        depth,
        radius_constant,
        bad_per_level: walkctx.bad,
        line_possible_per_level: walkctx.line_possible,
        strip_possible_per_level: walkctx.strip_possible,
        ratios,
        line_census,
        strip_census,
    })
}

/// One row of the block-census bound check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundCheckRow {
    pub k: u32,
    pub depth: usize,
    pub definite: u64,
    pub possible: u64,
    pub bound: u64,
    /// Sound direction only: `definite <= bound`.
    pub pass: bool,
    /// Diagnostic: whether the possible count also meets the bound.
    pub possible_within: bool,
}

/// Check `definite #Sigma_(k n_lambda) <= (2^n_lambda - 1)^k` for
/// `k = 1..=k_max` along one slice.
pub fn count_bound_check(
    lambda: f64,
    line: Line,
    k_max: u32,
    hull: HullKind,
) -> Result<Vec<BoundCheckRow>> {
    let params = takagi::constants(lambda)?;
    let block = params.n_lambda as usize;
    let max_depth = k_max as usize * block;
    if max_depth > 24 {
        return Err(Error::DepthTooLarge {
            requested: max_depth,
            max: 24,
        });
    }
    let system = SliceSystem::takagi(lambda, hull)?;
    let target = Target::Line(line);
    let profile = census_profile(&system, &target, max_depth, None)?;
    let per_block = (1u64 << params.n_lambda) - 1;
    Ok((1..=k_max)
        .map(|k| {
            let depth = k as usize * block;
            let census = &profile[depth];
            let bound = per_block.pow(k);
            BoundCheckRow {
                k,
                depth,
                definite: census.definite,
                possible: census.possible,
                bound,
                pass: census.definite <= bound,
                possible_within: census.possible <= bound,
            }
        })
        .collect())
}

/// One scan cell: a slice line and its dimension estimates.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanRow {
    pub slope: f64,
    pub offset: f64,
    pub definite_dim: f64,
    pub possible_dim: f64,
    pub definite_n: u64,
    pub possible_n: u64,
}

/// Scan specification: all slope/anchor pairs in grid order (slopes outer,
/// anchors inner), censused to `depth` with slopes regressed over the last
/// `window + 1` depths.
#[derive(Debug, Clone)]
pub struct ScanSpec {
    pub slopes: Vec<f64>,
    pub anchors: Vec<Vec2>,
    pub depth: usize,
    pub window: usize,
}

/// Map a Minkowski slope estimate over every grid cell. Cells are independent
/// pure computations; they are processed in parallel and reassembled in grid
/// order, so the output is deterministic for any thread count.
pub fn scan_max_slice(system: &SliceSystem, spec: &ScanSpec) -> Result<(Vec<ScanRow>, f64)> {
    use rayon::prelude::*;
    if spec.window < 2 || spec.window > spec.depth {
        return Err(Error::InsufficientData(
            "scan window must span at least 3 depths within the census depth".into(),
        ));
    }
    for &t in &spec.slopes {
        if !t.is_finite() {
            return Err(Error::OutOfDomain(
                "scan slopes must be finite; the vertical direction meets the graph of a function in one point and is excluded".into(),
            ));
        }
    }
    let cells: Vec<(f64, Vec2)> = spec
        .slopes
        .iter()
        .flat_map(|&t| spec.anchors.iter().map(move |&p| (t, p)))
        .collect();
    let rows: Vec<ScanRow> = cells
        .par_iter()
        .map(|&(slope, anchor)| -> Result<ScanRow> {
            let line = Line::sloped(slope, anchor)?;
            let target = Target::Line(line);
            let profile = census_profile(system, &target, spec.depth, None)?;
            let windowed = &profile[spec.depth - spec.window..=spec.depth];
            let estimate = minkowski_slope(windowed)?;
            let last = &profile[spec.depth];
            Ok(ScanRow {
                slope,
                offset: line.offset(),
                definite_dim: estimate.lower_dim,
                possible_dim: estimate.upper_dim,
                definite_n: last.definite,
                possible_n: last.possible,
            })
        })
        .collect::<Result<_>>()?;
    let max = rows
        .iter()
        .map(|r| r.possible_dim)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((rows, max))
}

/// Grid parameters and system bundled for reuse by the CLI and tests.
pub fn takagi_scan(
    lambda: f64,
    hull: HullKind,
    spec: &ScanSpec,
) -> Result<(Vec<ScanRow>, f64)> {
    let system = SliceSystem::takagi(lambda, hull)?;
    scan_max_slice(&system, spec)
}

/// Reference constants used in slice experiments.
pub fn strip_radius_constant(params: &TakagiParams) -> f64 {
    std::f64::consts::SQRT_2 * (params.k_lambda + params.m_lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LAMBDA: f64 = 2.0 / 3.0;

    fn takagi_system() -> SliceSystem {
        SliceSystem::takagi(LAMBDA, HullKind::Box).unwrap()
    }

    #[test]
    fn classify_level_one_cylinder() {
        let system = takagi_system();
        let w = Word::parse(2, "1").unwrap();
        let map = cylinder_map(system.ifs(), &w).unwrap();
        let hull = system.ifs().enclosure().map(&map);
        let endpoints = (map.apply(Vec2::ZERO), map.apply(Vec2::new(1.0, 0.0)));

        let line = Target::Line(Line::horizontal(0.3));
        let class = classify_cylinder(&hull, endpoints, &line, 1e-9).unwrap();
        assert_eq!(class, Classification::Definite);

        // endpoint lands exactly on y = 0.5: tangency stays possible
        let line = Target::Line(Line::horizontal(0.5));
        let class = classify_cylinder(&hull, endpoints, &line, 1e-9).unwrap();
        assert_eq!(class, Classification::Possible);

        // a line above the enclosure is empty
        let line = Target::Line(Line::horizontal(1.5));
        let class = classify_cylinder(&hull, endpoints, &line, 1e-9).unwrap();
        assert_eq!(class, Classification::Empty);
    }

    #[test]
    fn census_high_line_is_empty() {
        let system = takagi_system();
        let target = Target::Line(Line::horizontal(1.5));
        for n in [0, 3, 8] {
            let c = slice_census(&system, &target, n, None).unwrap();
            assert_eq!(c.definite, 0);
            assert_eq!(c.possible, 0);
        }
    }

    #[test]
    fn census_level_one_crossing() {
        let system = takagi_system();
        let target = Target::Line(Line::horizontal(0.3));
        let c = slice_census(&system, &target, 1, None).unwrap();
        assert_eq!(c.definite, 2);
        assert_eq!(c.possible, 2);
    }

    #[test]
    fn census_profile_matches_single_runs() {
        let system = takagi_system();
        let target = Target::Line(Line::sloped(0.5, Vec2::new(0.25, 0.4)).unwrap());
        let profile = census_profile(&system, &target, 7, None).unwrap();
        for n in 0..=7 {
            let single = slice_census(&system, &target, n, None).unwrap();
            assert_eq!(profile[n].definite, single.definite);
            assert_eq!(profile[n].possible, single.possible);
        }
    }

    #[test]
    fn census_matches_oracle() {
        let system = takagi_system();
        for (slope, y) in [(0.0, 0.3), (0.5, 0.21), (-1.4, 0.74), (2.8, 0.05)] {
            let target = Target::Line(Line::sloped(slope, Vec2::new(0.0, y)).unwrap());
            let census = slice_census(&system, &target, 6, None).unwrap();
            let (definite, possible) = census_oracle(&system, &target, 6, None).unwrap();
            assert_eq!(census.definite, definite, "slope {slope} offset {y}");
            assert_eq!(census.possible, possible, "slope {slope} offset {y}");
        }
    }

    #[test]
    fn vertical_census_closed_form() {
        let system = takagi_system();
        // interior non-dyadic point: a single chain of cylinders
        let c = slice_census(&system, &Target::Line(Line::vertical(0.3)), 8, None).unwrap();
        assert_eq!(c.definite, 1);
        assert_eq!(c.possible, 1);
        // interior dyadic point: two touching chains
        let c = slice_census(&system, &Target::Line(Line::vertical(0.5)), 8, None).unwrap();
        assert_eq!(c.possible, 2);
        // endpoints: one chain
        let c = slice_census(&system, &Target::Line(Line::vertical(0.0)), 8, None).unwrap();
        assert_eq!(c.possible, 1);
        // outside the column range: empty
        let c = slice_census(&system, &Target::Line(Line::vertical(1.25)), 8, None).unwrap();
        assert_eq!(c.possible, 0);
        // full-width vertical strip covers every column
        let strip = Target::Strip(Strip::new(Line::vertical(0.5), 2.0).unwrap());
        let c = slice_census(&system, &strip, 6, None).unwrap();
        assert_eq!(c.definite, 64);
    }

    #[test]
    fn bad_tally_line_below_graph() {
        let tally = bad_word_tally(LAMBDA, Line::horizontal(-0.1), 2, HullKind::Box).unwrap();
        assert_eq!(tally.line_census, 0);
        assert_eq!(tally.strip_census, 4);
        assert_eq!(tally.bad_per_level, vec![4, 0]);
    }

    #[test]
    fn bad_tally_zero_radius_is_empty() {
        let tally = bad_word_tally_with_radius(
            LAMBDA,
            Line::horizontal(1.5),
            3,
            HullKind::Box,
            0.0,
            0.0,
        )
        .unwrap();
        assert_eq!(tally.strip_census, 0);
        assert!(tally.bad_per_level.iter().all(|&b| b == 0));
    }

    #[test]
    fn bad_tally_books_balance() {
        let tally = bad_word_tally(LAMBDA, Line::horizontal(0.3), 9, HullKind::Box).unwrap();
        let total: u64 = tally.bad_per_level.iter().sum();
        assert_eq!(total, tally.strip_census - tally.line_census);
        assert!(tally.ratios.iter().all(|r| r.is_finite()));
    }

    #[test]
    fn bound_check_rows() {
        let rows = count_bound_check(LAMBDA, Line::horizontal(1.0), 3, HullKind::Box).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].bound, 63);
        assert_eq!(rows[1].bound, 3969);
        assert!(rows.iter().all(|r| r.pass));
        // depth guard: k_max * n_lambda must stay within 24
        assert!(count_bound_check(LAMBDA, Line::horizontal(1.0), 5, HullKind::Box).is_err());
    }

    #[test]
    fn minkowski_slope_synthetic() {
        let mk = |depth: usize, count: u64| SliceCensus {
            depth,
            definite: count,
            possible: count,
            visited_nodes: 0,
            words: None,
        };
        // counts 2^(0.5 n)
        let censuses: Vec<SliceCensus> = (8..=16)
            .map(|n| mk(n, (2.0_f64.powf(0.5 * n as f64)).round() as u64))
            .collect();
        let est = minkowski_slope(&censuses).unwrap();
        assert!((est.upper_dim - 0.5).abs() < 0.02);

        // constant counts: slope zero
        let censuses: Vec<SliceCensus> = (4..=8).map(|n| mk(n, 1)).collect();
        let est = minkowski_slope(&censuses).unwrap();
        assert_eq!(est.lower_dim, 0.0);
        assert_eq!(est.upper_dim, 0.0);

        assert!(minkowski_slope(&censuses[..2]).is_err());
    }

    #[test]
    fn exact_synthetic_slope() {
        // exact powers make the regression exact
        let pts: Vec<(f64, f64)> = (8..=16).map(|n| (n as f64, 0.5 * n as f64)).collect();
        let (slope, residual) = least_squares_slope(&pts);
        assert!((slope - 0.5).abs() < 1e-9);
        assert!(residual < 1e-9);
    }

    #[test]
    fn scan_rejects_vertical_and_reports_max() {
        let system = takagi_system();
        let bad = ScanSpec {
            slopes: vec![f64::INFINITY],
            anchors: vec![Vec2::ZERO],
            depth: 6,
            window: 3,
        };
        assert!(scan_max_slice(&system, &bad).is_err());

        let spec = ScanSpec {
            slopes: vec![0.0],
            anchors: vec![Vec2::new(0.0, 1.5)],
            depth: 8,
            window: 4,
        };
        let (rows, max) = scan_max_slice(&system, &spec).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(max, 0.0);
    }

    #[test]
    fn slack_widening_moves_extremes_into_possible() {
        let system = takagi_system();
        let w = Word::parse(2, "1").unwrap();
        let map = cylinder_map(system.ifs(), &w).unwrap();
        let hull = system.ifs().enclosure().map(&map);
        let endpoints = (map.apply(Vec2::ZERO), map.apply(Vec2::new(1.0, 0.0)));
        let line = Target::Line(Line::horizontal(0.3));
        // definite at tiny slack becomes possible at huge slack, never empty
        let tight = classify_cylinder(&hull, endpoints, &line, 1e-9).unwrap();
        let loose = classify_cylinder(&hull, endpoints, &line, 0.5).unwrap();
        assert_eq!(tight, Classification::Definite);
        assert_eq!(loose, Classification::Possible);
    }

    #[test]
    fn census_json_shape() {
        let system = takagi_system();
        let c = slice_census(&system, &Target::Line(Line::horizontal(0.3)), 3, None).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.starts_with("{\"n\":3,\"definite\":"));
        assert!(json.contains("\"visited\":"));
    }
}
