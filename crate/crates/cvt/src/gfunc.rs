//! The finite convex problem `G(a, m)`: minimize the second moment about the
//! centroid over convex polytopes of volume `a` with at most `m` faces, and
//! probe how the minimum behaves as a function of `m`.
//!
//! Polytopes are parameterized in face (support half-space) form: `m` unit
//! normals given by spherical angles plus `m` offsets. "At most m faces" is a
//! hard constraint there — redundant half-spaces simply degenerate away —
//! whereas it is ill-posed in vertex form; the vertex parameterization is
//! used only as an independent cross-check at m = 4 (see the test suite).
//!
//! The objective is scale-invariant: every candidate is evaluated as
//! `∫|x−c|²dx · |V|^{-5/3}` (the unit-volume normalization), and homogeneity
//! `I(cV) = c⁵ I(V)` gives `G(a, m) = a^{5/3} G(1, m)` exactly, so the search
//! runs at unit volume once and rescales. Minimization is a plain coordinate
//! pattern search: strictly decreasing accepted steps, step halving on
//! stalls, termination at step < 1e-8, multi-started from the canonical
//! solids that fit within m faces plus seeded random normal sets.

use crate::exec;
use crate::geom::solids::Solid;
use crate::geom::{ConvexPolytope, FaceTag, HalfSpace, Vec3};
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Offsets are clamped to this floor (in units of a^{1/3}) during the search
/// so the origin stays interior and the intersection cannot wander off.
const OFFSET_FLOOR: f64 = 0.02;

/// Offsets start at least this high at initialization.
const OFFSET_INIT_MIN: f64 = 0.05;

/// Pattern search terminates when the step size drops below this.
const STEP_TOL: f64 = 1e-8;

/// Faces contributing less area than `1e-8·a^{2/3}` do not count as effective.
const EFFECTIVE_FACE_AREA_REL: f64 = 1e-8;

/// Side of the bounding box used to detect unbounded intersections, in units
/// of a^{1/3}.
const BOUNDING_BOX_HALF: f64 = 10.0;

/// Face-normal-and-offset parameterization of an intersection of m
/// half-spaces: per face two spherical angles and an offset.
#[derive(Clone, Debug)]
pub struct FaceParam {
    /// Flat layout [θ₀, φ₀, d₀, θ₁, φ₁, d₁, …], length 3m.
    pub params: Vec<f64>,
}

impl FaceParam {
    pub fn m(&self) -> usize {
        self.params.len() / 3
    }

    pub fn half_spaces(&self) -> Vec<HalfSpace> {
        (0..self.m())
            .map(|i| {
                let theta = self.params[3 * i];
                let phi = self.params[3 * i + 1];
                let d = self.params[3 * i + 2];
                let n = Vec3::new(
                    theta.sin() * phi.cos(),
                    theta.sin() * phi.sin(),
                    theta.cos(),
                );
                HalfSpace {
                    normal: n,
                    offset: d,
                }
            })
            .collect()
    }

    /// Parameters of a canonical solid, padded with `extra` inactive faces
    /// whose planes sit far outside the solid.
    fn from_half_spaces(hs: &[HalfSpace], pad_to: usize, rng: &mut SplitMix64) -> Self {
        let mut params = Vec::with_capacity(3 * pad_to);
        let far = hs.iter().map(|h| h.offset).fold(0.0f64, f64::max) * 3.0;
        for h in hs {
            let (theta, phi) = angles_of(h.normal);
            params.extend_from_slice(&[theta, phi, h.offset]);
        }
        for _ in hs.len()..pad_to {
            let n = rng.unit_vector();
            let (theta, phi) = angles_of(n);
            params.extend_from_slice(&[theta, phi, far]);
        }
        Self { params }
    }

    fn random(m: usize, rng: &mut SplitMix64) -> Self {
        let mut params = Vec::with_capacity(3 * m);
        for _ in 0..m {
            let n = rng.unit_vector();
            let (theta, phi) = angles_of(n);
            params.extend_from_slice(&[theta, phi, rng.next_in(0.3, 0.7)]);
        }
        Self { params }
    }
}

fn angles_of(n: Vec3) -> (f64, f64) {
    (n.z.clamp(-1.0, 1.0).acos(), n.y.atan2(n.x))
}

/// Builds the intersection polytope at unit scale. `None` when the
/// intersection is empty or not bounded by the m half-spaces alone.
fn build_polytope(fp: &FaceParam) -> Option<ConvexPolytope> {
    let b = BOUNDING_BOX_HALF;
    let mut p = ConvexPolytope::cuboid(Vec3::new(-b, -b, -b), Vec3::new(b, b, b));
    for (i, h) in fp.half_spaces().iter().enumerate() {
        p = p.clip_tagged(h, FaceTag::Neighbor(i)).ok()?;
        if p.is_empty() {
            return None;
        }
    }
    // A surviving box wall means the half-spaces alone don't bound the set.
    if p.face_tags.contains(&FaceTag::Wall) {
        return None;
    }
    (p.volume() > 1e-12).then_some(p)
}

/// Unit-volume-normalized second moment about the centroid,
/// `I(V)·|V|^{-5/3}`; the quantity G minimizes at a = 1.
fn objective(fp: &FaceParam) -> Option<f64> {
    let p = build_polytope(fp)?;
    let m = p.moments(p.centroid());
    Some(m.second_moment * m.volume.powf(-5.0 / 3.0))
}

/// Coordinate pattern search: ± probes on every coordinate, strictly
/// decreasing accepted steps, step halved after a sweep without improvement.
/// Returns the best parameters, value, and the trace of accepted values.
fn pattern_search(
    start: FaceParam,
    eval_budget: usize,
    offset_floor: f64,
) -> Option<(FaceParam, f64, Vec<f64>)> {
    let mut x = start;
    let mut fx = objective(&x)?;
    let mut trace = vec![fx];
    let mut evals = 1usize;
    // Angles move slower than offsets at the same scale; one shared step
    // with per-coordinate multipliers keeps it simple.
    let mut step = 0.2;
    while step >= STEP_TOL && evals < eval_budget {
        let mut improved = false;
        for i in 0..x.params.len() {
            let scale = if i % 3 == 2 { 0.5 } else { 1.0 };
            for dir in [1.0, -1.0] {
                if evals >= eval_budget {
                    break;
                }
                let mut cand = x.clone();
                cand.params[i] += dir * step * scale;
                if i % 3 == 2 {
                    cand.params[i] = cand.params[i].max(offset_floor);
                }
                evals += 1;
                if let Some(fc) = objective(&cand) {
                    if fc < fx {
                        x = cand;
                        fx = fc;
                        trace.push(fx);
                        improved = true;
                        break;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Some((x, fx, trace))
}

/// Result of the constrained minimization.
#[derive(Clone, Debug)]
pub struct GMinResult {
    /// The G(a, m) estimate.
    pub value: f64,
    /// Best polytope found, rescaled to volume `a` about its centroid.
    pub polytope: ConvexPolytope,
    pub restarts_used: usize,
    /// Accepted objective values of the winning restart (unit volume scale).
    pub best_restart_trace: Vec<f64>,
    /// Faces with area ≥ 1e-8·a^{2/3}.
    pub effective_faces: usize,
    /// Final unit-volume values of every restart, for the noise estimate.
    pub restart_values: Vec<f64>,
}

/// Seeds: canonical solids with ≤ m faces (padded with inactive planes),
/// then deterministic random normal sets up to `restarts`.
fn seeds(m: usize, restarts: usize, seed: u64, extra: Option<&FaceParam>) -> Vec<FaceParam> {
    let mut rng = SplitMix64::new(seed ^ 0xc0ffee);
    let mut out: Vec<FaceParam> = Vec::new();
    if let Some(fp) = extra {
        // Chained seed from the previous m (convexity probe): pad with one
        // far plane per missing face.
        out.push(FaceParam::from_half_spaces(&fp.half_spaces(), m, &mut rng));
    }
    for s in Solid::ALL {
        if s.face_count() <= m && out.len() < restarts {
            // Normalize the canonical solid to roughly unit volume so all
            // starts live at a comparable scale.
            let p = s.polytope();
            let c = p.volume().powf(-1.0 / 3.0);
            let hs: Vec<HalfSpace> = s
                .half_spaces()
                .iter()
                .map(|h| HalfSpace {
                    normal: h.normal,
                    offset: (h.offset * c).max(OFFSET_INIT_MIN),
                })
                .collect();
            out.push(FaceParam::from_half_spaces(&hs, m, &mut rng));
        }
    }
    while out.len() < restarts {
        out.push(FaceParam::random(m, &mut rng));
    }
    out.truncate(restarts.max(1));
    out
}

fn minimize_unit(
    m: usize,
    restarts: usize,
    eval_budget: usize,
    seed: u64,
    chain: Option<&FaceParam>,
) -> Result<(FaceParam, f64, Vec<f64>, Vec<f64>)> {
    let starts = seeds(m, restarts, seed, chain);
    let n_starts = starts.len();
    let results = exec::map_indexed(n_starts, |i| {
        pattern_search(starts[i].clone(), eval_budget, OFFSET_FLOOR)
    });
    let mut best: Option<(usize, FaceParam, f64, Vec<f64>)> = None;
    let mut finals = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        if let Some((fp, v, trace)) = r {
            finals.push(v);
            // Ties resolve to the earliest seed: deterministic under any
            // parallel schedule.
            if best.as_ref().is_none_or(|(_, _, bv, _)| v < *bv) {
                best = Some((i, fp, v, trace));
            }
        }
    }
    match best {
        Some((_, fp, v, trace)) => Ok((fp, v, trace, finals)),
        None => Err(Error::Unbounded(n_starts)),
    }
}

/// Minimizes `∫_V |x−c|² dx` over convex polytopes with `|V| = a` and at most
/// `m` faces. Desk-scale m only (4 ≤ m ≤ 60).
pub fn minimize_g(
    a: f64,
    m: usize,
    restarts: usize,
    eval_budget: usize,
    seed: u64,
) -> Result<GMinResult> {
    validate_args(a, m)?;
    let (fp, unit_value, trace, finals) = minimize_unit(m, restarts, eval_budget, seed, None)?;
    finish(a, fp, unit_value, trace, finals, restarts)
}

fn validate_args(a: f64, m: usize) -> Result<()> {
    if a.is_nan() || a <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "volume a must be > 0, got {a}"
        )));
    }
    if !(4..=60).contains(&m) {
        return Err(Error::InvalidParameter(format!(
            "face budget m must be in 4..=60, got {m}"
        )));
    }
    Ok(())
}

fn finish(
    a: f64,
    fp: FaceParam,
    unit_value: f64,
    trace: Vec<f64>,
    finals: Vec<f64>,
    restarts: usize,
) -> Result<GMinResult> {
    let p = build_polytope(&fp).ok_or(Error::Unbounded(restarts))?;
    // Rescale to volume a about the centroid; value scales by a^{5/3}.
    let c = p.centroid();
    let s = (a / p.volume()).cbrt();
    let mut scaled = p.translated(-c).scaled(s).translated(c);
    scaled.generator_tag = None;
    let area_floor = EFFECTIVE_FACE_AREA_REL * a.powf(2.0 / 3.0);
    let effective_faces = (0..scaled.faces.len())
        .filter(|&f| face_area(&scaled, f) >= area_floor)
        .count();
    Ok(GMinResult {
        value: a.powf(5.0 / 3.0) * unit_value,
        polytope: scaled,
        restarts_used: restarts,
        best_restart_trace: trace,
        effective_faces,
        restart_values: finals,
    })
}

fn face_area(p: &ConvexPolytope, f: usize) -> f64 {
    let loop_ = &p.faces[f];
    let mut n = Vec3::ZERO;
    for i in 0..loop_.len() {
        let a = p.vertices[loop_[i]];
        let b = p.vertices[loop_[(i + 1) % loop_.len()]];
        n = n + a.cross(b);
    }
    0.5 * n.norm()
}

/// One row of the convexity probe.
#[derive(Clone, Debug)]
pub struct ProbeRow {
    pub m: usize,
    pub value: f64,
    /// First difference G(a,m) − G(a,m−1); `None` on the first row.
    pub d1: Option<f64>,
    /// Second difference G(a,m+1) − 2G(a,m) + G(a,m−1); `None` at the edges.
    pub d2: Option<f64>,
    /// Spread (standard deviation) of the restart finals: the noise floor.
    /// Second differences within 2σ of zero are inconclusive.
    pub sigma: f64,
    pub effective_faces: usize,
}

/// Evaluates G(a, m) for m in `[m_min, m_max]` and reports discrete first and
/// second differences with the restart-spread noise estimate. Each m is
/// additionally seeded with the previous best (feasible sets nest under
/// "at most m faces"), which makes the reported values non-increasing by
/// construction rather than by optimizer luck.
pub fn convexity_probe(
    a: f64,
    m_min: usize,
    m_max: usize,
    restarts: usize,
    eval_budget: usize,
    seed: u64,
) -> Result<Vec<ProbeRow>> {
    if !(4 <= m_min && m_min < m_max && m_max <= 60) {
        return Err(Error::InvalidParameter(format!(
            "probe range must satisfy 4 ≤ m_min < m_max ≤ 60, got {m_min}..{m_max}"
        )));
    }
    validate_args(a, m_min)?;
    let scale = a.powf(5.0 / 3.0);
    let mut chained: Option<FaceParam> = None;
    let mut values = Vec::new();
    let mut results = Vec::new();
    for m in m_min..=m_max {
        let (fp, unit_value, trace, finals) =
            minimize_unit(m, restarts, eval_budget, seed, chained.as_ref())?;
        let r = finish(a, fp.clone(), unit_value, trace, finals, restarts)?;
        values.push(scale * unit_value);
        results.push(r);
        chained = Some(fp);
    }
    let rows = (0..values.len())
        .map(|i| {
            let sigma = std_dev(&results[i].restart_values) * scale;
            ProbeRow {
                m: m_min + i,
                value: values[i],
                d1: (i > 0).then(|| values[i] - values[i - 1]),
                d2: (i > 0 && i + 1 < values.len())
                    .then(|| values[i + 1] - 2.0 * values[i] + values[i - 1]),
                sigma,
                effective_faces: results[i].effective_faces,
            }
        })
        .collect();
    Ok(rows)
}

fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
}
