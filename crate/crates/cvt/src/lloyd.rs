//! Lloyd iteration toward centroidal Voronoi tessellations, plus the
//! point-insertion and point-removal energy moves.
//!
//! A configuration is critical for the quantization energy exactly when every
//! generator coincides with the centroid of its own Voronoi cell, so the
//! fixed points of [`lloyd_step`] are the CVTs. Plain Lloyd (no acceleration)
//! decreases the energy monotonically, which the test suite relies on.
//!
//! [`insertion_gain`] measures how much energy the addition of a second point
//! `y'` removes from a single cell, `∫_V [|x−y|² − d²(x,{y,y'})] dx`,
//! evaluating each candidate exactly: clip the cell with the axial plane of
//! `(y, y')` and subtract the two second moments of the piece that changes
//! allegiance. [`removal_cost`] is the exact energy increase from deleting a
//! generator, recomputed locally over the face neighbors of the deleted cell.

use crate::geom::{ConvexPolytope, HalfSpace, Vec3};
use crate::rng::halton3;
use crate::voronoi::{build_tessellation, GeneratorSet, Tessellation};
use crate::{exec, Error, Result};

/// Stopping rules for [`optimize`]. Defaults reflect double-precision limits:
/// `move_tol = 1e-10`, `energy_tol = 1e-13` (relative), `max_iters = 10⁴`.
#[derive(Clone, Copy, Debug)]
pub struct OptimizeConfig {
    pub max_iters: usize,
    /// Max generator displacement per step below which iteration stops.
    pub move_tol: f64,
    /// Relative energy decrease below which iteration stops.
    pub energy_tol: f64,
    pub seed: u64,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            max_iters: 10_000,
            move_tol: 1e-10,
            energy_tol: 1e-13,
            seed: 0,
        }
    }
}

impl OptimizeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters < 1 {
            return Err(Error::InvalidParameter("max_iters must be ≥ 1".into()));
        }
        if self.move_tol.is_nan()
            || self.energy_tol.is_nan()
            || self.move_tol <= 0.0
            || self.energy_tol <= 0.0
        {
            return Err(Error::InvalidParameter("tolerances must be > 0".into()));
        }
        Ok(())
    }
}

/// Outcome of a Lloyd run.
#[derive(Clone, Debug)]
pub struct OptimizeResult {
    pub generators: GeneratorSet,
    /// Energy of the configuration at the start of each iteration.
    pub energy_trace: Vec<f64>,
    /// Max generator displacement at each iteration.
    pub move_trace: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl OptimizeResult {
    pub fn final_energy(&self) -> f64 {
        *self.energy_trace.last().expect("at least one iteration")
    }
}

/// Centroids of the cells of `t`, wrapped back into the domain.
fn centroid_update(t: &Tessellation) -> GeneratorSet {
    let domain = t.domain;
    let new_points = exec::map_indexed(t.cells.len(), |k| domain.wrap(t.cells[k].centroid()));
    // Centroids of disjoint positive-volume convex cells are distinct.
    GeneratorSet::from_vec_unchecked(new_points, domain)
}

/// One Lloyd step: every generator moves to the centroid of its cell
/// (torus: centroid of the unwrapped cell, re-wrapped).
pub fn lloyd_step(gens: &GeneratorSet) -> Result<GeneratorSet> {
    let t = build_tessellation(gens)?;
    Ok(centroid_update(&t))
}

/// Max displacement between two configurations in the domain metric.
pub fn max_move(old: &GeneratorSet, new: &GeneratorSet) -> f64 {
    let domain = old.domain();
    old.points()
        .iter()
        .zip(new.points())
        .map(|(a, b)| domain.dist2(*a, *b))
        .fold(0.0f64, f64::max)
        .sqrt()
}

/// Runs Lloyd iteration until the movement or energy tolerance is met.
pub fn optimize(gens: &GeneratorSet, cfg: &OptimizeConfig) -> Result<OptimizeResult> {
    cfg.validate()?;
    let mut current = gens.clone();
    let mut energy_trace = Vec::new();
    let mut move_trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut prev_energy = f64::INFINITY;
    for _ in 0..cfg.max_iters {
        let t = build_tessellation(&current)?;
        energy_trace.push(t.energy);
        let next = centroid_update(&t);
        let step = max_move(&current, &next);
        move_trace.push(step);
        current = next;
        iterations += 1;
        let rel_drop = (prev_energy - t.energy) / t.energy.abs().max(f64::MIN_POSITIVE);
        if step <= cfg.move_tol || (prev_energy.is_finite() && rel_drop <= cfg.energy_tol) {
            converged = true;
            break;
        }
        prev_energy = t.energy;
    }
    Ok(OptimizeResult {
        generators: current,
        energy_trace,
        move_trace,
        converged,
        iterations,
    })
}

/// Exact insertion gain of adding `y'` to a cell with generator `y`:
/// the piece of `V` closer to `y'` sheds `∫ (|x−y|² − |x−y'|²) dx`.
pub fn candidate_gain(cell: &ConvexPolytope, y: Vec3, y_prime: Vec3) -> Result<f64> {
    if y.dist2(y_prime) == 0.0 {
        return Ok(0.0);
    }
    // Keep the side of y′: flip the bisector that keeps y.
    let toward_prime = HalfSpace::bisector(y, y_prime)?.flipped();
    let piece = cell.clip(&toward_prime)?;
    if piece.is_empty() {
        return Ok(0.0);
    }
    let m_y = piece.moments(y).second_moment;
    let m_p = piece.moments(y_prime).second_moment;
    Ok(m_y - m_p)
}

/// The two constructive candidate families from the insertion-gain lower
/// bound: the point at distance `2r/5` from `y` toward the farthest boundary
/// point, and the centers of the six faces of the cube `Q(t)` with
/// `t³ = 2|V|/5`.
pub fn constructive_candidates(cell: &ConvexPolytope, y: Vec3) -> Result<Vec<Vec3>> {
    if cell.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let mut cands = Vec::with_capacity(7);
    // Farthest vertex realizes r = max_{z ∈ ∂V} |z − y|.
    let far = cell
        .vertices
        .iter()
        .copied()
        .max_by(|a, b| {
            a.dist2(y)
                .total_cmp(&b.dist2(y))
                .then(a.x.total_cmp(&b.x))
                .then(a.y.total_cmp(&b.y))
                .then(a.z.total_cmp(&b.z))
        })
        .expect("nonempty");
    cands.push(y + (far - y) * 0.4);
    let volume = cell.volume();
    let t = (0.4 * volume).cbrt();
    for axis in 0..3 {
        for sign in [-1.0, 1.0] {
            cands.push(y + Vec3::axis(axis) * (sign * 0.5 * t));
        }
    }
    Ok(cands)
}

/// Searches for the best single insertion point in a cell.
///
/// The candidate set is a deterministic Halton (2,3,5) sequence over the
/// cell's bounding box rejected into the cell — `budget` accepted points —
/// plus the constructive candidates, which already certify the lemma-level
/// lower bounds. Returns the best point and its exact gain (`≥ 0`).
pub fn insertion_gain(cell: &ConvexPolytope, y: Vec3, budget: usize) -> Result<(Vec3, f64)> {
    if budget < 1 {
        return Err(Error::InvalidParameter("budget must be ≥ 1".into()));
    }
    if !cell.contains_interior(y) {
        return Err(Error::PointNotInterior);
    }
    let mut candidates = constructive_candidates(cell, y)?;

    // Bounding box of the cell.
    let mut lo = cell.vertices[0];
    let mut hi = cell.vertices[0];
    for v in &cell.vertices[1..] {
        lo = Vec3::new(lo.x.min(v.x), lo.y.min(v.y), lo.z.min(v.z));
        hi = Vec3::new(hi.x.max(v.x), hi.y.max(v.y), hi.z.max(v.z));
    }
    let span = hi - lo;
    let mut accepted = 0usize;
    let mut index = 1u64;
    let max_tries = budget as u64 * 64;
    while accepted < budget && index <= max_tries {
        let u = halton3(index);
        let p = lo + Vec3::new(u.x * span.x, u.y * span.y, u.z * span.z);
        if cell.contains(p) {
            candidates.push(p);
            accepted += 1;
        }
        index += 1;
    }

    let mut best = (y, 0.0f64);
    for cand in candidates {
        let gain = candidate_gain(cell, y, cand)?;
        if gain > best.1 {
            best = (cand, gain);
        }
    }
    Ok(best)
}

/// Exact energy increase from deleting generator `index` and re-tessellating.
///
/// Only cells whose boundary involved the deleted generator change; they are
/// rebuilt against the remaining set and the difference is summed exactly.
pub fn removal_cost(t: &Tessellation, index: usize) -> Result<f64> {
    let n = t.generators.len();
    if index >= n {
        return Err(Error::IndexOutOfRange { index, n });
    }
    if n < 2 {
        return Err(Error::TooFewGenerators { needed: 2, got: n });
    }
    // Affected = face neighbors of the removed cell (symmetric, but take the
    // union of both directions to be safe against tolerance asymmetries).
    let mut affected: Vec<usize> = t.neighbor_ids[index].clone();
    for (j, ids) in t.neighbor_ids.iter().enumerate() {
        if j != index && ids.contains(&index) && !affected.contains(&j) {
            affected.push(j);
        }
    }
    affected.sort_unstable();
    affected.dedup();

    let remaining: Vec<Vec3> = t
        .generators
        .points()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != index)
        .map(|(_, p)| *p)
        .collect();
    let reduced = GeneratorSet::from_vec_unchecked(remaining, t.domain);
    let reduced_t = build_tessellation_subset(&reduced, &affected, index)?;

    let pts = t.generators.points();
    let mut old_terms = vec![t.cells[index].moments(pts[index]).second_moment];
    let mut new_terms = Vec::new();
    for (&j, new_cell) in affected.iter().zip(&reduced_t) {
        old_terms.push(t.cells[j].moments(pts[j]).second_moment);
        new_terms.push(new_cell.moments(pts[j]).second_moment);
    }
    Ok(exec::compensated_sum(&new_terms) - exec::compensated_sum(&old_terms))
}

/// Rebuilds only the cells of `affected` (indices in the original set, all
/// different from `removed`) against the reduced generator set.
fn build_tessellation_subset(
    reduced: &GeneratorSet,
    affected: &[usize],
    removed: usize,
) -> Result<Vec<ConvexPolytope>> {
    let reduced_indices: Vec<usize> = affected
        .iter()
        .map(|&j| if j > removed { j - 1 } else { j })
        .collect();
    crate::voronoi::build_cells_subset(reduced, &reduced_indices)
}
