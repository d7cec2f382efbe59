//! The Takagi function `T_lambda(x) = sum lambda^n dist(2^n x, Z)` for
//! `1/2 < lambda < 1`: certified series evaluation, the self-affine
//! representation, closed-form cylinder matrices, derived constants, the
//! pull-back slope recursion, and graph sampling.

use serde::{Deserialize, Serialize};

use crate::affine_ifs::{AffineIFS, AffineMap2, ConvexPolygon, EnclosureCertificate};
use crate::linalg2::{Mat2, MultiCone, ProjInterval, ProjLine, Vec2};
use crate::wordspace::Word;
use crate::{Error, Result};

/// Derived constants of the system at a fixed parameter.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TakagiParams {
    pub lambda: f64,
    /// `K = 1/(2 lambda - 1)`: the extreme pull-back slope.
    pub k_lambda: f64,
    /// `M = 1/(3(1 - lambda))`: the maximum of the function.
    pub m_lambda: f64,
    /// Census block length for the counting bound.
    pub n_lambda: u32,
    /// `2 - log lambda / log(1/2)`.
    pub dim_hausdorff: f64,
    /// `1 + log(2^n - 1) / log(2^n)` at `n = n_lambda`.
    pub assouad_upper: f64,
    /// Domination constant `sqrt((K+1)^2 + 1)` of the singular value sandwich.
    pub dom_constant_c: f64,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.5 && lambda < 1.0) {
        return Err(Error::OutOfDomain(format!(
            "lambda must lie strictly between 1/2 and 1, got {lambda}"
        )));
    }
    Ok(())
}

/// Evaluate every derived constant at `lambda`.
///
/// The block length is the ceiling of `log(2(K+M)) / (-log lambda)`; when the
/// argument sits within 1e-12 of an integer the ceiling is rounded up one
/// more, since enlarging the block only weakens the claimed census bound.
pub fn constants(lambda: f64) -> Result<TakagiParams> {
    check_lambda(lambda)?;
    let k_lambda = 1.0 / (2.0 * lambda - 1.0);
    let m_lambda = 1.0 / (3.0 * (1.0 - lambda));
    let raw = (2.0 * (k_lambda + m_lambda)).ln() / (-lambda.ln());
    let nearest = raw.round();
    let n_raw = if (raw - nearest).abs() <= 1e-12 {
        nearest + 1.0
    } else {
        raw.ceil()
    };
    let n_lambda = (n_raw.max(2.0)) as u32;
    let n = n_lambda as f64;
    let log2 = std::f64::consts::LN_2;
    // log(2^n - 1) = n log 2 + log(1 - 2^-n), stable for every block length
    let assouad_upper = 1.0 + (n * log2 + (-(0.5_f64.powi(n_lambda as i32))).ln_1p()) / (n * log2);
    Ok(TakagiParams {
        lambda,
        k_lambda,
        m_lambda,
        n_lambda,
        dim_hausdorff: 2.0 - lambda.ln() / 0.5_f64.ln(),
        assouad_upper,
        dom_constant_c: ((k_lambda + 1.0) * (k_lambda + 1.0) + 1.0).sqrt(),
    })
}

/// Shared series loop. `x_frac` is the fractional-part state in `[0, 1)`,
/// advanced by exact doubling; `tol = None` runs to exact termination, which
/// every binary float reaches once its mantissa bits are consumed.
fn series_f64(lambda: f64, x: f64, tol: Option<f64>) -> (f64, f64) {
    let tail_factor = lambda / (2.0 * (1.0 - lambda));
    let mut y = x - x.floor();
    let mut power = 1.0_f64;
    let mut total = 0.0_f64;
    let mut terms = 0_u64;
    loop {
        let dist = y.min(1.0 - y);
        total += power * dist;
        terms += 1;
        y *= 2.0;
        if y >= 1.0 {
            y -= 1.0;
        }
        if y == 0.0 {
            let rounding = 4.0 * terms as f64 * f64::EPSILON / (2.0 * (1.0 - lambda));
            return (total, rounding);
        }
        let tail = power * tail_factor;
        if let Some(tol) = tol {
            if tail <= tol {
                let rounding = 4.0 * terms as f64 * f64::EPSILON / (2.0 * (1.0 - lambda));
                return (total, tail + rounding);
            }
        }
        power *= lambda;
        if power == 0.0 {
            return (total, 0.0);
        }
    }
}

/// Certified evaluation of `T_lambda` at a binary float.
///
/// The series is truncated at the smallest depth whose tail bound
/// `lambda^(N+1) / (2(1-lambda))` drops below `tol`; dyadic rationals
/// terminate exactly before that. Returns the value and a certified error
/// bound (truncation tail plus an accumulated rounding allowance).
///
/// Note the input is the exact dyadic rational stored in the float: for
/// non-dyadic reals such as 1/3 use [`eval_rational`], since the function is
/// only Hoelder continuous and rounding `x` perturbs the value far more than
/// `tol` when `lambda` is close to 1.
pub fn eval(lambda: f64, x: f64, tol: f64) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    if !(tol > 0.0) {
        return Err(Error::OutOfDomain(format!("tol must be positive, got {tol}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain(format!("x must lie in [0, 1], got {x}")));
    }
    Ok(series_f64(lambda, x, Some(tol)))
}

/// Certified evaluation of `T_lambda` at the exact rational `num/den`.
///
/// The fractional state `p/den` is advanced by `p <- 2p mod den` in integer
/// arithmetic, so the distance terms are exact for every rational input.
pub fn eval_rational(lambda: f64, num: u64, den: u64, tol: f64) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    if !(tol > 0.0) {
        return Err(Error::OutOfDomain(format!("tol must be positive, got {tol}")));
    }
    if den == 0 || num > den || den > (1 << 62) {
        return Err(Error::OutOfDomain(format!(
            "rational {num}/{den} must lie in [0, 1] with denominator below 2^62"
        )));
    }
    let tail_factor = lambda / (2.0 * (1.0 - lambda));
    let mut p = num % den;
    let mut power = 1.0_f64;
    let mut total = 0.0_f64;
    let mut terms = 0_u64;
    loop {
        let dist = p.min(den - p) as f64 / den as f64;
        total += power * dist;
        terms += 1;
        p = (2 * p) % den;
        if p == 0 {
            let rounding = 4.0 * terms as f64 * f64::EPSILON / (2.0 * (1.0 - lambda));
            return Ok((total, rounding));
        }
        let tail = power * tail_factor;
        if tail <= tol {
            let rounding = 4.0 * terms as f64 * f64::EPSILON / (2.0 * (1.0 - lambda));
            return Ok((total, tail + rounding));
        }
        power *= lambda;
    }
}

/// The two-map affine system whose attractor is the graph of `T_lambda`,
/// with the box enclosure `[0,1] x [0, M]`. The box is not invariant under
/// the maps; it contains the graph by the closed-form maximum, so the
/// certificate is `asserted-external`.
pub fn takagi_ifs(lambda: f64) -> Result<AffineIFS> {
    takagi_ifs_with_hull(lambda, HullKind::Box)
}

/// Same system with a chosen graph hull as the enclosure.
pub fn takagi_ifs_with_hull(lambda: f64, kind: HullKind) -> Result<AffineIFS> {
    let params = constants(lambda)?;
    let a1 = Mat2::rows([0.5, 0.0], [0.5, lambda]);
    let a2 = Mat2::rows([0.5, 0.0], [-0.5, lambda]);
    let maps = vec![
        AffineMap2::new(a1, Vec2::ZERO)?,
        AffineMap2::new(a2, Vec2::new(0.5, 0.5))?,
    ];
    AffineIFS::new(
        maps,
        graph_hull(&params, kind).polygon,
        EnclosureCertificate::AssertedExternal,
    )
}

/// Which certified superset of the graph a census uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HullKind {
    /// `[0,1] x [0, M]`.
    Box,
    /// The box clipped by `y <= x + lambda M` and its mirror image; valid for
    /// the Takagi graph only, tightens censuses near the maximizers.
    Pentagon,
}

impl std::str::FromStr for HullKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<HullKind> {
        match s {
            "box" => Ok(HullKind::Box),
            "pentagon" => Ok(HullKind::Pentagon),
            other => Err(Error::OutOfRange(format!(
                "unknown hull kind {other:?}, expected box or pentagon"
            ))),
        }
    }
}

/// A convex polygon certified to contain the graph.
#[derive(Debug, Clone)]
pub struct GraphHull {
    pub kind: HullKind,
    pub polygon: ConvexPolygon,
}

/// Build the requested hull. The clipped hull cuts the top corners of the box
/// along `y = x + lambda M` and `y = (1 - x) + lambda M`; both lines bound the
/// graph from above, and they meet the top edge `y = M` at `x = 1/3` and
/// `x = 2/3` for every parameter.
pub fn graph_hull(params: &TakagiParams, kind: HullKind) -> GraphHull {
    let m = params.m_lambda;
    let lm = params.lambda * m;
    let polygon = match kind {
        HullKind::Box => ConvexPolygon::rect(0.0, 0.0, 1.0, m),
        HullKind::Pentagon => ConvexPolygon::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, lm),
            Vec2::new(2.0 / 3.0, m),
            Vec2::new(1.0 / 3.0, m),
            Vec2::new(0.0, lm),
        ]),
    }
    .expect("graph hulls are valid polygons");
    GraphHull { kind, polygon }
}

fn check_binary_word(word: &Word) -> Result<()> {
    if word.alphabet_size() != 2 {
        return Err(Error::OutOfRange(format!(
            "Takagi words use digits 1 and 2, got alphabet size {}",
            word.alphabet_size()
        )));
    }
    Ok(())
}

/// Closed-form cylinder matrix: lower triangular with diagonal
/// `(2^-n, lambda^n)` and subdiagonal
/// `sum_k (-1)^(i_(n-k+1)+1) 2^-k lambda^(n-k)`.
pub fn word_matrix(lambda: f64, word: &Word) -> Result<Mat2> {
    check_lambda(lambda)?;
    check_binary_word(word)?;
    let n = word.len() as i32;
    // re-indexed as 2^-n * sum_j sign(d_j) (2 lambda)^j over positions j = 0..n
    let mut acc = 0.0_f64;
    let mut pw = 1.0_f64;
    for &d in word.raw_digits() {
        let sign = if d == 0 { 1.0 } else { -1.0 };
        acc += sign * pw;
        pw *= 2.0 * lambda;
    }
    let half_n = 0.5_f64.powi(n);
    Ok(Mat2::new(half_n, 0.0, acc * half_n, lambda.powi(n)))
}

/// Closed-form inverse of the reversed-word matrix: lower triangular with
/// diagonal `(2^n, lambda^-n)` and subdiagonal
/// `sum_k (-1)^(i_k) 2^(n-k) lambda^-k`.
pub fn inverse_reversed_matrix(lambda: f64, word: &Word) -> Result<Mat2> {
    check_lambda(lambda)?;
    check_binary_word(word)?;
    let n = word.len() as i32;
    let two_n = 2.0_f64.powi(n);
    let inv_2l = 1.0 / (2.0 * lambda);
    let mut acc = 0.0_f64;
    let mut pw = inv_2l;
    for &d in word.raw_digits() {
        let sign = if d == 0 { -1.0 } else { 1.0 };
        acc += sign * pw;
        pw *= inv_2l;
    }
    Ok(Mat2::new(
        two_n,
        0.0,
        acc * two_n,
        lambda.powi(-n),
    ))
}

/// The pull-back slope recursion: the inverse cylinder map along `word` sends
/// a line of slope `t` to a line of slope
/// `sum_k (-1)^(i_k) (2 lambda)^-k / ... + (2 lambda)^-n t`, which never
/// leaves `[-max(K, |t|), max(K, |t|)]`.
pub fn pullback_slope(lambda: f64, word: &Word, t: f64) -> Result<f64> {
    let params = constants(lambda)?;
    check_binary_word(word)?;
    let inv_2l = 1.0 / (2.0 * lambda);
    let mut acc = 0.0_f64;
    let mut pw = inv_2l;
    for &d in word.raw_digits() {
        let sign = if d == 0 { -1.0 } else { 1.0 };
        acc += sign * pw;
        pw *= inv_2l;
    }
    let pulled = acc + (2.0 * lambda).powi(-(word.len() as i32)) * t;
    let bound = params.k_lambda.max(t.abs());
    assert!(
        pulled.abs() <= bound + 1e-12,
        "pull-back slope {pulled} escapes the invariant band {bound}"
    );
    Ok(pulled)
}

/// Exact graph polyline at the dyadic abscissae `k / 2^depth`.
pub fn graph_samples(lambda: f64, depth: usize) -> Result<Vec<Vec2>> {
    check_lambda(lambda)?;
    const MAX_DEPTH: usize = 24;
    if depth > MAX_DEPTH {
        return Err(Error::DepthTooLarge {
            requested: depth,
            max: MAX_DEPTH,
        });
    }
    let count = (1_u64 << depth) + 1;
    let scale = 0.5_f64.powi(depth as i32);
    let mut points = Vec::with_capacity(count as usize);
    for k in 0..count {
        let x = k as f64 * scale;
        let (value, _) = series_f64(lambda, x, None);
        points.push(Vec2::new(x, value));
    }
    Ok(points)
}

/// Slope band `[-(K+1), K+1]`: a strongly invariant seed for the backward
/// (inverse-matrix) cone iteration. The true backward direction set is the
/// slope interval `[-K, K]`; the widened band gives the strict-invariance
/// margin the iteration needs. Validated numerically in the tests, not taken
/// from a closed-form source.
pub fn backward_cone_seed(params: &TakagiParams) -> MultiCone {
    let b = params.k_lambda + 1.0;
    MultiCone::single(ProjInterval::from_slopes(-b, b))
}

/// Complement band through the vertical: a strongly invariant seed for the
/// forward cone iteration, which collapses onto the vertical direction.
pub fn forward_cone_seed(params: &TakagiParams) -> MultiCone {
    let b = params.k_lambda + 1.0;
    MultiCone::single(ProjInterval::new(
        ProjLine::from_slope(b),
        ProjLine::from_slope(-b),
    ))
}
