//! Voronoi tessellations of the unit cube and the unit flat torus, and the
//! quantization energy `E(Y) = Σ_k ∫_{V_k} |x − y_k|² dx`.
//!
//! Each cell is built independently by half-space clipping. The cube domain
//! starts from `Q = [0,1]³` itself; the torus starts from the unit cube
//! centered on the generator, which is exactly the Voronoi cell of the
//! generator with respect to its own periodic images, so torus cells come out
//! canonically unwrapped around their generator and never straddle a seam.
//!
//! Candidate neighbors are gathered from a uniform bucket grid, ring by ring
//! in order of increasing distance. After finishing ring `ρ` every unexamined
//! image is at distance ≥ `ρ·h`, so gathering stops as soon as
//! `ρ·h ≥ 2·r_max` where `r_max` is the current bounding radius of the cell
//! about its generator: a bisector at distance `d` can only cut the cell when
//! `d < 2·r_max`. This security-radius certificate makes the construction
//! exact with an expected O(1) neighbors per cell.

use serde::{Deserialize, Serialize};

use crate::exec;
use crate::geom::{ConvexPolytope, FaceTag, HalfSpace, Vec3};
use crate::{Error, Result};

/// Minimum pairwise generator distance; duplicates below this are rejected.
pub const MIN_GENERATOR_SEPARATION: f64 = 1e-12;

/// Domain of the tessellation; side length fixed at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    #[serde(rename = "cube")]
    UnitCube,
    #[serde(rename = "torus")]
    UnitTorus,
}

impl Domain {
    /// Squared distance in the domain metric (geodesic on the torus).
    pub fn dist2(self, a: Vec3, b: Vec3) -> f64 {
        match self {
            Domain::UnitCube => a.dist2(b),
            Domain::UnitTorus => {
                let mut s = 0.0;
                for axis in 0..3 {
                    let d = a.component(axis) - b.component(axis);
                    let d = d - d.round();
                    s += d * d;
                }
                s
            }
        }
    }

    pub fn dist(self, a: Vec3, b: Vec3) -> f64 {
        self.dist2(a, b).sqrt()
    }

    /// Wraps a point into `[0,1)³` on the torus; identity on the cube.
    pub fn wrap(self, p: Vec3) -> Vec3 {
        match self {
            Domain::UnitCube => p,
            Domain::UnitTorus => Vec3::new(p.x - p.x.floor(), p.y - p.y.floor(), p.z - p.z.floor()),
        }
    }

    pub fn contains(self, p: Vec3) -> bool {
        match self {
            Domain::UnitCube => {
                (0.0..=1.0).contains(&p.x)
                    && (0.0..=1.0).contains(&p.y)
                    && (0.0..=1.0).contains(&p.z)
            }
            Domain::UnitTorus => p.is_finite(),
        }
    }
}

/// The generator set `Y = {y₁, …, y_n}`.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    points: Vec<Vec3>,
    domain: Domain,
}

impl GeneratorSet {
    /// Validates domain membership and pairwise distinctness.
    pub fn new(points: Vec<Vec3>, domain: Domain) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::TooFewGenerators { needed: 1, got: 0 });
        }
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() || !domain.contains(*p) {
                return Err(Error::OutOfDomain(i));
            }
        }
        let points: Vec<Vec3> = points.into_iter().map(|p| domain.wrap(p)).collect();
        let min_sep2 = MIN_GENERATOR_SEPARATION * MIN_GENERATOR_SEPARATION;
        let grid = BucketGrid::build(&points, domain);
        for (i, p) in points.iter().enumerate() {
            if let Some(j) = grid.scan_rings_for_duplicate(*p, i, min_sep2) {
                return Err(Error::DuplicateGenerators(i.min(j), i.max(j)));
            }
        }
        Ok(Self { points, domain })
    }

    /// Internal constructor for points already known distinct and in-domain
    /// (Lloyd centroids, lattice constructions).
    pub(crate) fn from_vec_unchecked(points: Vec<Vec3>, domain: Domain) -> Self {
        Self { points, domain }
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Uniform bucket grid over the unit cube, side ≈ n^{-1/3}.
struct BucketGrid {
    m: i64,
    h: f64,
    buckets: Vec<Vec<usize>>,
    points: Vec<Vec3>,
    wrap: bool,
}

impl BucketGrid {
    fn build(points: &[Vec3], domain: Domain) -> Self {
        let n = points.len();
        let m = ((n as f64).cbrt().round() as i64).max(1);
        let h = 1.0 / m as f64;
        let mut buckets = vec![Vec::new(); (m * m * m) as usize];
        for (i, p) in points.iter().enumerate() {
            let (bx, by, bz) = Self::bucket_index(m, *p);
            buckets[((bx * m + by) * m + bz) as usize].push(i);
        }
        Self {
            m,
            h,
            buckets,
            points: points.to_vec(),
            wrap: domain == Domain::UnitTorus,
        }
    }

    fn bucket_index(m: i64, p: Vec3) -> (i64, i64, i64) {
        let clamp = |x: f64| ((x * m as f64) as i64).clamp(0, m - 1);
        (clamp(p.x), clamp(p.y), clamp(p.z))
    }

    fn bucket_of(&self, p: Vec3) -> (i64, i64, i64) {
        Self::bucket_index(self.m, p)
    }

    /// Visits every generator image in the Chebyshev ring `ρ` of unwrapped
    /// buckets around `(bx, by, bz)`. On the torus, out-of-range bucket
    /// indices wrap and contribute the correspondingly translated image of
    /// each point; on the cube they are skipped.
    fn for_each_in_chebyshev_ring(
        &self,
        bx: i64,
        by: i64,
        bz: i64,
        ring: i64,
        mut visit: impl FnMut(usize, Vec3),
    ) {
        let m = self.m;
        for dx in -ring..=ring {
            for dy in -ring..=ring {
                for dz in -ring..=ring {
                    if dx.abs().max(dy.abs()).max(dz.abs()) != ring {
                        continue;
                    }
                    let (ix, ox) = Self::wrap_index(bx + dx, m);
                    let (iy, oy) = Self::wrap_index(by + dy, m);
                    let (iz, oz) = Self::wrap_index(bz + dz, m);
                    if !self.wrap && (ox != 0 || oy != 0 || oz != 0) {
                        continue;
                    }
                    let shift = Vec3::new(ox as f64, oy as f64, oz as f64);
                    for &j in &self.buckets[((ix * m + iy) * m + iz) as usize] {
                        visit(j, self.points[j] + shift);
                    }
                }
            }
        }
    }

    /// Euclidean-floor-divide wrap: returns (index mod m, offset in periods).
    fn wrap_index(u: i64, m: i64) -> (i64, i64) {
        let o = u.div_euclid(m);
        (u - o * m, o)
    }

    fn scan_rings_for_duplicate(&self, p: Vec3, skip: usize, min_sep2: f64) -> Option<usize> {
        let (bx, by, bz) = self.bucket_of(p);
        let mut hit = None;
        for ring in 0..=1 {
            self.for_each_in_chebyshev_ring(bx, by, bz, ring, |j, img| {
                if j != skip && img.dist2(p) <= min_sep2 && hit.is_none() {
                    hit = Some(j);
                }
            });
            if hit.is_some() {
                break;
            }
        }
        hit
    }
}

/// A full tessellation: generators, per-generator cells (torus cells
/// canonically unwrapped around their generator), face-neighbor ids, and the
/// quantization energy.
#[derive(Clone, Debug)]
pub struct Tessellation {
    pub generators: GeneratorSet,
    pub domain: Domain,
    pub cells: Vec<ConvexPolytope>,
    /// Per cell, the sorted generator indices whose axial planes contribute a face.
    pub neighbor_ids: Vec<Vec<usize>>,
    pub energy: f64,
}

/// Builds the cell of generator `k` against the candidates supplied by `grid`.
fn build_cell(gens: &GeneratorSet, grid: &BucketGrid, k: usize) -> Result<ConvexPolytope> {
    let y = gens.points()[k];
    let torus = gens.domain() == Domain::UnitTorus;
    let mut cell = if torus {
        ConvexPolytope::cuboid(y - Vec3::new(0.5, 0.5, 0.5), y + Vec3::new(0.5, 0.5, 0.5))
    } else {
        ConvexPolytope::unit_cube()
    };
    cell.generator_tag = Some(k);
    let mut r_max = cell.bounding_radius_about(y)?;

    let (bx, by, bz) = grid.bucket_of(y);
    let h = grid.h;
    // On the torus 2·r_max ≤ √3, so no image past this ring can ever matter;
    // reaching it with an unresolved cell means a logic error.
    let ring_cap = (2.0 * 3.0f64.sqrt() / h).ceil() as i64 + 2;
    let mut ring: i64 = 0;
    loop {
        // Deterministic processing order: collect the ring, sort by distance.
        let mut ring_candidates: Vec<(f64, usize, Vec3)> = Vec::new();
        grid.for_each_in_chebyshev_ring(bx, by, bz, ring, |j, img| {
            if j != k {
                ring_candidates.push((img.dist2(y), j, img));
            }
        });
        ring_candidates.sort_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then(a.1.cmp(&b.1))
                .then(a.2.x.total_cmp(&b.2.x))
                .then(a.2.y.total_cmp(&b.2.y))
                .then(a.2.z.total_cmp(&b.2.z))
        });
        for &(d2, j, img) in &ring_candidates {
            if d2 >= 4.0 * r_max * r_max {
                break; // sorted: no later candidate in this ring can cut either
            }
            let plane = HalfSpace::bisector(y, img)?;
            let clipped = cell.clip_tagged(&plane, FaceTag::Neighbor(j))?;
            if clipped.is_empty() {
                // y is strictly closer to itself than to any distinct
                // generator, so an empty cell signals a broken invariant.
                return Err(Error::SecurityRadius(k));
            }
            cell = clipped;
            r_max = cell.bounding_radius_about(y)?;
        }
        // Every image beyond ring ρ is at distance ≥ ρ·h.
        if ring as f64 * h >= 2.0 * r_max {
            break;
        }
        if !torus && ring >= grid.m {
            break; // the whole cube grid has been visited
        }
        if torus && ring > ring_cap {
            return Err(Error::SecurityRadius(k));
        }
        ring += 1;
    }
    Ok(cell)
}

/// Builds only the cells of the given generator indices (local rebuilds).
pub(crate) fn build_cells_subset(
    gens: &GeneratorSet,
    indices: &[usize],
) -> Result<Vec<ConvexPolytope>> {
    let grid = BucketGrid::build(gens.points(), gens.domain());
    let cells = exec::map_indexed(indices.len(), |i| build_cell(gens, &grid, indices[i]));
    cells.into_iter().collect()
}

/// Builds the Voronoi tessellation of `gens` over its domain.
pub fn build_tessellation(gens: &GeneratorSet) -> Result<Tessellation> {
    let n = gens.len();
    let grid = BucketGrid::build(gens.points(), gens.domain());
    let cells_r = exec::map_indexed(n, |k| build_cell(gens, &grid, k));
    let mut cells = Vec::with_capacity(n);
    for c in cells_r {
        cells.push(c?);
    }
    let neighbor_ids: Vec<Vec<usize>> = cells
        .iter()
        .map(|c| {
            let mut ids: Vec<usize> = c
                .face_tags
                .iter()
                .filter_map(|t| match t {
                    FaceTag::Neighbor(j) => Some(*j),
                    FaceTag::Wall => None,
                })
                .collect();
            ids.sort_unstable();
            ids.dedup();
            ids
        })
        .collect();
    let energy = quantization_energy(&cells, gens.points());
    Ok(Tessellation {
        generators: gens.clone(),
        domain: gens.domain(),
        cells,
        neighbor_ids,
        energy,
    })
}

/// `Σ_k ∫_{V_k} |x − y_k|² dx`, accumulated in generator index order with
/// compensated summation. Per-cell moments may run in parallel; the reduction
/// order is fixed, so the value is independent of the worker count.
pub fn quantization_energy(cells: &[ConvexPolytope], generators: &[Vec3]) -> f64 {
    let terms = exec::map_indexed(cells.len(), |k| {
        cells[k].moments(generators[k]).second_moment
    });
    exec::compensated_sum(&terms)
}

/// Recomputes the energy from the cells — the definitional identity
/// `E = Σ_k moments(V_k, y_k).second_moment`, usable as a self-test.
pub fn energy(t: &Tessellation) -> f64 {
    quantization_energy(&t.cells, t.generators.points())
}

/// Per-generator nearest-neighbor distances `σ(y) = min_{z ∈ Y\{y}} |y − z|`
/// (geodesic on the torus) and the global min/max.
#[derive(Clone, Debug)]
pub struct NeighborStats {
    pub sigma: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

pub fn nearest_neighbor_stats(gens: &GeneratorSet) -> Result<NeighborStats> {
    let n = gens.len();
    if n < 2 {
        return Err(Error::TooFewGenerators { needed: 2, got: n });
    }
    let pts = gens.points().to_vec();
    let domain = gens.domain();
    let sigma = exec::map_indexed(n, |i| {
        let mut best = f64::INFINITY;
        for (j, z) in pts.iter().enumerate() {
            if j != i {
                best = best.min(domain.dist2(pts[i], *z));
            }
        }
        best.sqrt()
    });
    let min = sigma.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = sigma.iter().cloned().fold(0.0f64, f64::max);
    Ok(NeighborStats { sigma, min, max })
}

/// One summary row per cell for the CSV interface.
#[derive(Clone, Debug)]
pub struct CellSummary {
    pub index: usize,
    pub volume: f64,
    pub diameter: f64,
    pub faces: usize,
    pub second_moment: f64,
    pub sigma: Option<f64>,
}

pub fn cell_summaries(t: &Tessellation) -> Result<Vec<CellSummary>> {
    let stats = if t.generators.len() >= 2 {
        Some(nearest_neighbor_stats(&t.generators)?)
    } else {
        None
    };
    let pts = t.generators.points();
    let rows = exec::map_indexed(t.cells.len(), |k| -> Result<CellSummary> {
        let cell = &t.cells[k];
        Ok(CellSummary {
            index: k,
            volume: cell.volume(),
            diameter: cell.diameter()?,
            faces: cell.face_count()?,
            second_moment: cell.moments(pts[k]).second_moment,
            sigma: stats.as_ref().map(|s| s.sigma[k]),
        })
    });
    rows.into_iter().collect()
}

/// Serializable dump matching the tessellation JSON schema.
#[derive(Serialize)]
pub struct TessellationDump<'a> {
    pub domain: Domain,
    pub generators: &'a [Vec3],
    pub cells: &'a [ConvexPolytope],
    pub energy: f64,
    pub n: usize,
}

impl Tessellation {
    pub fn dump(&self) -> TessellationDump<'_> {
        TessellationDump {
            domain: self.domain,
            generators: self.generators.points(),
            cells: &self.cells,
            energy: self.energy,
            n: self.generators.len(),
        }
    }

    /// `n^{2/3}·E`, the Zador-normalized energy density.
    pub fn energy_density(&self) -> f64 {
        (self.generators.len() as f64).powf(2.0 / 3.0) * self.energy
    }
}
