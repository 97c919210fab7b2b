//! Exact convex-polytope kernel: half-space clipping and moment integration.
//!
//! A cell is a bounded convex polytope stored as a vertex list plus face loops
//! that are counterclockwise seen from outside. Three primitives carry the
//! whole crate:
//!
//! * [`ConvexPolytope::clip`] — Sutherland–Hodgman-style clipping against a
//!   half-space, closed under the polytope invariants (a clip may produce the
//!   empty polytope, never an invalid one);
//! * [`ConvexPolytope::moments`] — volume, centroid and the quadratic moment
//!   `∫_V |x − q|² dx`, exact up to roundoff via tetrahedral decomposition;
//! * [`ConvexPolytope::face_count`] — geometric face count after merging
//!   coplanar mesh facets.
//!
//! On a tetrahedron with vertices `v₀..v₃` and signed volume `V`, the
//! quadratic moment about `q` has the closed form
//! `V/20 · (|Σᵢ yᵢ|² + Σᵢ |yᵢ|²)` with `yᵢ = vᵢ − q`; summing over a fan of
//! tetrahedra (apex at the vertex average, each face fanned from its first
//! vertex) integrates any convex cell exactly.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Relative scale for coplanarity / vertex-on-plane tests: `τ_plane = 1e-9 · diameter`.
///
/// Double precision with unit-scale domains leaves ~7 digits of slack below
/// this threshold. The polytope's bounding-box diagonal stands in for the
/// diameter (they agree within √3).
pub const PLANE_TOL_REL: f64 = 1e-9;

/// Absolute vertex deduplication threshold applied after clipping.
/// Prevents sliver faces from corrupting face counts.
pub const VERTEX_DEDUP_TOL: f64 = 1e-10;

/// Two mesh facets count as one geometric face when their unit normals agree
/// to this tolerance and they share an edge.
pub const FACE_MERGE_TOL: f64 = 1e-7;

// ---------------------------------------------------------------------------
// Vec3
// ---------------------------------------------------------------------------

/// Point or vector in ℝ³, double precision.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn dist2(self, o: Vec3) -> f64 {
        (self - o).norm2()
    }

    pub fn dist(self, o: Vec3) -> f64 {
        self.dist2(o).sqrt()
    }

    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self * (1.0 / n))
        } else {
            None
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn component(self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    /// Unit vector along the given axis (0 → x, 1 → y, 2 → z).
    pub fn axis(axis: usize) -> Vec3 {
        match axis {
            0 => Vec3::new(1.0, 0.0, 0.0),
            1 => Vec3::new(0.0, 1.0, 0.0),
            _ => Vec3::new(0.0, 0.0, 1.0),
        }
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl std::ops::Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl std::ops::Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

// Serialized as a bare coordinate triple, matching the polytope JSON schema.
impl Serialize for Vec3 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x, self.y, self.z].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vec3 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y, z] = <[f64; 3]>::deserialize(d)?;
        let v = Vec3::new(x, y, z);
        if !v.is_finite() {
            return Err(D::Error::custom("non-finite coordinate"));
        }
        Ok(v)
    }
}

// ---------------------------------------------------------------------------
// HalfSpace
// ---------------------------------------------------------------------------

/// The closed half-space `{ x : normal · x ≤ offset }`, with a unit normal.
#[derive(Clone, Copy, Debug)]
pub struct HalfSpace {
    pub normal: Vec3,
    pub offset: f64,
}

impl HalfSpace {
    /// Builds a half-space, normalizing the given normal.
    pub fn new(normal: Vec3, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if !(n.is_finite() && n > 1e-14) {
            return Err(Error::InvalidParameter(
                "half-space normal must be non-zero and finite".into(),
            ));
        }
        Ok(Self {
            normal: normal * (1.0 / n),
            offset: offset / n,
        })
    }

    /// Axial plane of the segment `y → z`, keeping the `y` side: the plane
    /// orthogonal to the segment through its midpoint.
    pub fn bisector(y: Vec3, z: Vec3) -> Result<Self> {
        let d = z - y;
        let mid = (y + z) * 0.5;
        let normal = d
            .normalized()
            .ok_or_else(|| Error::InvalidParameter("bisector of coincident points".into()))?;
        Ok(Self {
            normal,
            offset: normal.dot(mid),
        })
    }

    /// Signed distance of `p` from the boundary plane; positive outside.
    pub fn signed_distance(&self, p: Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }

    /// The complementary half-space `{ x : normal · x ≥ offset }`.
    pub fn flipped(&self) -> Self {
        Self {
            normal: -self.normal,
            offset: -self.offset,
        }
    }
}

// ---------------------------------------------------------------------------
// ConvexPolytope
// ---------------------------------------------------------------------------

/// Provenance of a face: a domain wall or the axial plane of a neighbor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceTag {
    Wall,
    Neighbor(usize),
}

/// Bounded convex cell: vertex list plus face loops (CCW from outside).
///
/// The empty polytope (no vertices, no faces) is a legal value and signals an
/// empty clip result; every other instance is expected to satisfy the usual
/// invariants (planar faces, convexity, Euler's relation, positive volume),
/// checkable with [`ConvexPolytope::validate`].
#[derive(Clone, Debug)]
pub struct ConvexPolytope {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<Vec<usize>>,
    /// Per-face provenance, parallel to `faces`.
    pub face_tags: Vec<FaceTag>,
    /// Index of the generator that owns this cell, if any.
    pub generator_tag: Option<usize>,
}

/// Exact cell moments relative to a query point.
#[derive(Clone, Copy, Debug)]
pub struct Moments {
    /// `|V|`.
    pub volume: f64,
    /// `|V|⁻¹ ∫_V x dx`.
    pub centroid: Vec3,
    /// `∫_V |x − q|² dx` for the query point `q`.
    pub second_moment: f64,
    /// Set when the polytope was empty; all other fields are zero then.
    pub empty: bool,
}

impl ConvexPolytope {
    pub fn empty() -> Self {
        Self {
            vertices: Vec::new(),
            faces: Vec::new(),
            face_tags: Vec::new(),
            generator_tag: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Axis-aligned box `[min, max]`.
    pub fn cuboid(min: Vec3, max: Vec3) -> Self {
        let v = vec![
            Vec3::new(min.x, min.y, min.z), // 0
            Vec3::new(max.x, min.y, min.z), // 1
            Vec3::new(max.x, max.y, min.z), // 2
            Vec3::new(min.x, max.y, min.z), // 3
            Vec3::new(min.x, min.y, max.z), // 4
            Vec3::new(max.x, min.y, max.z), // 5
            Vec3::new(max.x, max.y, max.z), // 6
            Vec3::new(min.x, max.y, max.z), // 7
        ];
        // CCW seen from outside.
        let faces = vec![
            vec![0, 3, 2, 1], // z = min
            vec![4, 5, 6, 7], // z = max
            vec![0, 1, 5, 4], // y = min
            vec![2, 3, 7, 6], // y = max
            vec![0, 4, 7, 3], // x = min
            vec![1, 2, 6, 5], // x = max
        ];
        let face_tags = vec![FaceTag::Wall; 6];
        Self {
            vertices: v,
            faces,
            face_tags,
            generator_tag: None,
        }
    }

    pub fn unit_cube() -> Self {
        Self::cuboid(Vec3::ZERO, Vec3::new(1.0, 1.0, 1.0))
    }

    /// Builds a polytope from raw vertices and face loops, validating the
    /// invariants. Face tags default to `Wall`.
    pub fn from_vertices_faces(vertices: Vec<Vec3>, faces: Vec<Vec<usize>>) -> Result<Self> {
        let n_faces = faces.len();
        let p = Self {
            vertices,
            faces,
            face_tags: vec![FaceTag::Wall; n_faces],
            generator_tag: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Bounding-box diagonal; the cheap stand-in for the diameter used to
    /// scale tolerances.
    pub fn scale(&self) -> f64 {
        if self.vertices.is_empty() {
            return 0.0;
        }
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices[1..] {
            lo = Vec3::new(lo.x.min(v.x), lo.y.min(v.y), lo.z.min(v.z));
            hi = Vec3::new(hi.x.max(v.x), hi.y.max(v.y), hi.z.max(v.z));
        }
        (hi - lo).norm()
    }

    fn plane_tol(&self) -> f64 {
        PLANE_TOL_REL * self.scale().max(1e-300)
    }

    /// Outward unit normal of face `f` (Newell's method).
    pub fn face_normal(&self, f: usize) -> Option<Vec3> {
        let loop_ = &self.faces[f];
        let mut n = Vec3::ZERO;
        for i in 0..loop_.len() {
            let a = self.vertices[loop_[i]];
            let b = self.vertices[loop_[(i + 1) % loop_.len()]];
            n = n + a.cross(b);
        }
        n.normalized()
    }

    /// Intersection with a closed half-space. The result may be empty; it is
    /// never invalid. New faces created on the cut plane are tagged `Wall`.
    pub fn clip(&self, h: &HalfSpace) -> Result<ConvexPolytope> {
        self.clip_tagged(h, FaceTag::Wall)
    }

    /// Like [`Self::clip`], tagging the cut face with the given provenance.
    pub fn clip_tagged(&self, h: &HalfSpace, tag: FaceTag) -> Result<ConvexPolytope> {
        if self.is_empty() {
            return Ok(ConvexPolytope::empty());
        }
        if self.vertices.len() < 4 || self.faces.len() < 4 {
            return Err(Error::DegeneratePolytope(format!(
                "clip input has {} vertices, {} faces",
                self.vertices.len(),
                self.faces.len()
            )));
        }
        let eps = self.plane_tol();
        let dist: Vec<f64> = self
            .vertices
            .iter()
            .map(|&v| h.signed_distance(v))
            .collect();
        // Vertices within eps of the plane count as inside; this keeps clip
        // results closed and deterministic.
        let inside: Vec<bool> = dist.iter().map(|&d| d <= eps).collect();
        if inside.iter().all(|&b| b) {
            let mut out = self.clone();
            out.generator_tag = self.generator_tag;
            return Ok(out);
        }
        if dist.iter().all(|&d| d >= -eps) {
            // Nothing strictly inside: at most a zero-volume sliver survives.
            return Ok(ConvexPolytope::empty());
        }

        let mut new_vertices: Vec<Vec3> = self.vertices.clone();
        // Intersection vertex on each cut edge, shared between the two faces
        // adjacent to the edge so the cut polygon closes exactly.
        let mut edge_cut: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        let mut cut_ids: Vec<usize> = Vec::new();
        let mut out_faces: Vec<Vec<usize>> = Vec::new();
        let mut out_tags: Vec<FaceTag> = Vec::new();

        for (f, loop_) in self.faces.iter().enumerate() {
            let mut out_loop: Vec<usize> = Vec::with_capacity(loop_.len() + 2);
            for i in 0..loop_.len() {
                let a = loop_[i];
                let b = loop_[(i + 1) % loop_.len()];
                if inside[a] {
                    out_loop.push(a);
                }
                if inside[a] != inside[b] {
                    let key = (a.min(b), a.max(b));
                    let id = *edge_cut.entry(key).or_insert_with(|| {
                        let t = dist[a] / (dist[a] - dist[b]);
                        let p = self.vertices[a] + (self.vertices[b] - self.vertices[a]) * t;
                        new_vertices.push(p);
                        cut_ids.push(new_vertices.len() - 1);
                        new_vertices.len() - 1
                    });
                    out_loop.push(id);
                }
            }
            if out_loop.len() >= 3 {
                out_faces.push(out_loop);
                out_tags.push(self.face_tags[f]);
            }
        }

        // Cap face on the cut plane, ordered CCW about the outward normal
        // (= h.normal: the removed side lies along +normal).
        if cut_ids.len() >= 3 {
            let cap = order_on_plane(&new_vertices, &cut_ids, h.normal);
            out_faces.push(cap);
            out_tags.push(tag);
        }

        let mut out = ConvexPolytope {
            vertices: new_vertices,
            faces: out_faces,
            face_tags: out_tags,
            generator_tag: self.generator_tag,
        };
        out.compact(VERTEX_DEDUP_TOL);
        if out.vertices.len() < 4 || out.faces.len() < 4 {
            return Ok(ConvexPolytope::empty());
        }
        Ok(out)
    }

    /// Drops unused vertices, welds vertices closer than `tol`, removes
    /// repeated indices inside loops and degenerate loops.
    #[allow(clippy::needless_range_loop)]
    fn compact(&mut self, tol: f64) {
        // Weld near-duplicates to the earliest representative.
        let n = self.vertices.len();
        let mut repr: Vec<usize> = (0..n).collect();
        let tol2 = tol * tol;
        for i in 0..n {
            if repr[i] != i {
                continue;
            }
            for j in (i + 1)..n {
                if repr[j] == j && self.vertices[i].dist2(self.vertices[j]) <= tol2 {
                    repr[j] = i;
                }
            }
        }
        let mut used = vec![false; n];
        for loop_ in &self.faces {
            for &v in loop_ {
                used[repr[v]] = true;
            }
        }
        let mut remap = vec![usize::MAX; n];
        let mut vertices = Vec::new();
        for i in 0..n {
            if used[i] && repr[i] == i {
                remap[i] = vertices.len();
                vertices.push(self.vertices[i]);
            }
        }
        let mut faces = Vec::new();
        let mut tags = Vec::new();
        for (loop_, &tag) in self.faces.iter().zip(&self.face_tags) {
            let mut out: Vec<usize> = Vec::with_capacity(loop_.len());
            for &v in loop_ {
                let m = remap[repr[v]];
                if out.last() != Some(&m) {
                    out.push(m);
                }
            }
            while out.len() > 1 && out.first() == out.last() {
                out.pop();
            }
            // A loop that collapsed below a triangle carries no area.
            let distinct = {
                let mut s = out.clone();
                s.sort_unstable();
                s.dedup();
                s.len()
            };
            if distinct >= 3 {
                faces.push(out);
                tags.push(tag);
            }
        }
        self.vertices = vertices;
        self.faces = faces;
        self.face_tags = tags;
    }

    /// Exact volume, centroid, and `∫_V |x − query|² dx`.
    ///
    /// An empty polytope yields zero moments with the `empty` flag set.
    pub fn moments(&self, query: Vec3) -> Moments {
        if self.is_empty() {
            return Moments {
                volume: 0.0,
                centroid: Vec3::ZERO,
                second_moment: 0.0,
                empty: true,
            };
        }
        // Apex: vertex average, interior for convex cells. Faces are fanned
        // from their first vertex; orientation keeps the signed volumes
        // positive, and tiny negatives from roundoff cancel exactly in the sum.
        let mut apex = Vec3::ZERO;
        for v in &self.vertices {
            apex = apex + *v;
        }
        apex = apex * (1.0 / self.vertices.len() as f64);

        let mut vol = 0.0;
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut cz = 0.0;
        let mut sm = 0.0;
        let ya = apex - query;
        for loop_ in &self.faces {
            let v0 = self.vertices[loop_[0]];
            let y0 = v0 - query;
            for i in 1..loop_.len() - 1 {
                let v1 = self.vertices[loop_[i]];
                let v2 = self.vertices[loop_[i + 1]];
                let vol_t = (v0 - apex).dot((v1 - apex).cross(v2 - apex)) / 6.0;
                vol += vol_t;
                let c = (apex + v0 + v1 + v2) * 0.25;
                cx += vol_t * c.x;
                cy += vol_t * c.y;
                cz += vol_t * c.z;
                let y1 = v1 - query;
                let y2 = v2 - query;
                let s = ya + y0 + y1 + y2;
                sm +=
                    vol_t / 20.0 * (s.norm2() + ya.norm2() + y0.norm2() + y1.norm2() + y2.norm2());
            }
        }
        let centroid = if vol.abs() > 0.0 {
            Vec3::new(cx / vol, cy / vol, cz / vol)
        } else {
            apex
        };
        Moments {
            volume: vol,
            centroid,
            second_moment: sm,
            empty: false,
        }
    }

    pub fn volume(&self) -> f64 {
        self.moments(Vec3::ZERO).volume
    }

    pub fn centroid(&self) -> Vec3 {
        self.moments(Vec3::ZERO).centroid
    }

    /// `∫_V |x − c|² dx` about the cell's own centroid.
    pub fn second_moment_about_centroid(&self) -> f64 {
        let c = self.centroid();
        self.moments(c).second_moment
    }

    /// Maximum pairwise vertex distance. The max of a convex function over a
    /// polytope is attained at a vertex, so this is the true diameter.
    pub fn diameter(&self) -> Result<f64> {
        if self.vertices.len() < 2 {
            return Err(Error::EmptyPolytope);
        }
        let mut best = 0.0f64;
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                best = best.max(self.vertices[i].dist2(self.vertices[j]));
            }
        }
        Ok(best.sqrt())
    }

    /// `max_{z ∈ V} |z − q|`, attained at a vertex.
    pub fn bounding_radius_about(&self, q: Vec3) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let mut best = 0.0f64;
        for v in &self.vertices {
            best = best.max(v.dist2(q));
        }
        Ok(best.sqrt())
    }

    /// Number of geometric faces: mesh facets merged when they share an edge
    /// and their outward normals agree within [`FACE_MERGE_TOL`].
    pub fn face_count(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let nf = self.faces.len();
        let normals: Vec<Option<Vec3>> = (0..nf).map(|f| self.face_normal(f)).collect();
        // Union-find over faces.
        let mut parent: Vec<usize> = (0..nf).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut i = i;
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut edge_owner: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        for (f, loop_) in self.faces.iter().enumerate() {
            for i in 0..loop_.len() {
                let a = loop_[i];
                let b = loop_[(i + 1) % loop_.len()];
                let key = (a.min(b), a.max(b));
                if let Some(&g) = edge_owner.get(&key) {
                    if let (Some(nf_), Some(ng)) = (normals[f], normals[g]) {
                        if 1.0 - nf_.dot(ng) <= FACE_MERGE_TOL {
                            let (rf, rg) = (find(&mut parent, f), find(&mut parent, g));
                            if rf != rg {
                                parent[rf] = rg;
                            }
                        }
                    }
                } else {
                    edge_owner.insert(key, f);
                }
            }
        }
        let mut roots: Vec<usize> = (0..nf).map(|f| find(&mut parent, f)).collect();
        roots.sort_unstable();
        roots.dedup();
        Ok(roots.len())
    }

    /// Strict interior test with the polytope's plane tolerance.
    pub fn contains_interior(&self, p: Vec3) -> bool {
        if self.is_empty() {
            return false;
        }
        let eps = self.plane_tol();
        self.faces
            .iter()
            .enumerate()
            .all(|(f, loop_)| match self.face_normal(f) {
                Some(n) => n.dot(p) - n.dot(self.vertices[loop_[0]]) < -eps,
                None => true,
            })
    }

    /// Closed containment test (boundary counts as inside).
    pub fn contains(&self, p: Vec3) -> bool {
        if self.is_empty() {
            return false;
        }
        let eps = self.plane_tol();
        self.faces
            .iter()
            .enumerate()
            .all(|(f, loop_)| match self.face_normal(f) {
                Some(n) => n.dot(p) - n.dot(self.vertices[loop_[0]]) <= eps,
                None => true,
            })
    }

    pub fn translated(&self, t: Vec3) -> ConvexPolytope {
        let mut out = self.clone();
        for v in &mut out.vertices {
            *v = *v + t;
        }
        out
    }

    /// Scales about the origin.
    pub fn scaled(&self, c: f64) -> ConvexPolytope {
        let mut out = self.clone();
        for v in &mut out.vertices {
            *v = *v * c;
        }
        out
    }

    /// Checks every invariant: finite coordinates, planar faces, convexity,
    /// Euler's relation `V − E + F = 2`, positive volume.
    pub fn validate(&self) -> Result<()> {
        if self.is_empty() {
            return Ok(());
        }
        if self.vertices.len() < 4 || self.faces.len() < 4 {
            return Err(Error::DegeneratePolytope(format!(
                "{} vertices, {} faces",
                self.vertices.len(),
                self.faces.len()
            )));
        }
        for v in &self.vertices {
            if !v.is_finite() {
                return Err(Error::DegeneratePolytope("non-finite vertex".into()));
            }
        }
        let eps = self.plane_tol();
        for (f, loop_) in self.faces.iter().enumerate() {
            if loop_.len() < 3 {
                return Err(Error::DegeneratePolytope(format!(
                    "face {f} has <3 vertices"
                )));
            }
            if loop_.iter().any(|&v| v >= self.vertices.len()) {
                return Err(Error::DegeneratePolytope(format!(
                    "face {f} has out-of-range vertex index"
                )));
            }
            let n = self
                .face_normal(f)
                .ok_or_else(|| Error::DegeneratePolytope(format!("face {f} has zero normal")))?;
            let d0 = n.dot(self.vertices[loop_[0]]);
            // Planarity of the loop itself.
            for &v in loop_ {
                if (n.dot(self.vertices[v]) - d0).abs() > eps {
                    return Err(Error::DegeneratePolytope(format!("face {f} is not planar")));
                }
            }
            // Convexity: every vertex weakly inside every face plane.
            for v in &self.vertices {
                if n.dot(*v) - d0 > eps {
                    return Err(Error::DegeneratePolytope(format!(
                        "vertex outside face {f} plane: not convex"
                    )));
                }
            }
        }
        // Euler relation.
        let mut edges = std::collections::HashSet::new();
        for loop_ in &self.faces {
            for i in 0..loop_.len() {
                let a = loop_[i];
                let b = loop_[(i + 1) % loop_.len()];
                edges.insert((a.min(b), a.max(b)));
            }
        }
        let v = self.vertices.len() as i64;
        let e = edges.len() as i64;
        let f = self.faces.len() as i64;
        if v - e + f != 2 {
            return Err(Error::DegeneratePolytope(format!(
                "Euler relation violated: V={v} E={e} F={f}"
            )));
        }
        if self.volume() <= 0.0 {
            return Err(Error::DegeneratePolytope("non-positive volume".into()));
        }
        Ok(())
    }
}

/// Orders point ids lying on a plane into a convex loop, CCW about `normal`.
fn order_on_plane(vertices: &[Vec3], ids: &[usize], normal: Vec3) -> Vec<usize> {
    let mut c = Vec3::ZERO;
    for &i in ids {
        c = c + vertices[i];
    }
    c = c * (1.0 / ids.len() as f64);
    // In-plane orthonormal frame (u, v) with u × v = normal.
    let seed = if normal.x.abs() < 0.9 {
        Vec3::new(1.0, 0.0, 0.0)
    } else {
        Vec3::new(0.0, 1.0, 0.0)
    };
    let u = normal
        .cross(seed)
        .normalized()
        .unwrap_or(Vec3::new(0.0, 0.0, 1.0));
    let v = normal.cross(u);
    let mut keyed: Vec<(f64, usize)> = ids
        .iter()
        .map(|&i| {
            let d = vertices[i] - c;
            (d.dot(v).atan2(d.dot(u)), i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, i)| i).collect()
}

// ---------------------------------------------------------------------------
// JSON schema {"vertices": [[x,y,z],...], "faces": [[i,j,...],...]}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PolytopeSchema {
    vertices: Vec<Vec3>,
    faces: Vec<Vec<usize>>,
}

impl Serialize for ConvexPolytope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeSchema {
            vertices: self.vertices.clone(),
            faces: self.faces.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConvexPolytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let schema = PolytopeSchema::deserialize(d)?;
        let n_faces = schema.faces.len();
        let p = ConvexPolytope {
            vertices: schema.vertices,
            faces: schema.faces,
            face_tags: vec![FaceTag::Wall; n_faces],
            generator_tag: None,
        };
        p.validate().map_err(D::Error::custom)?;
        Ok(p)
    }
}

pub mod solids;
