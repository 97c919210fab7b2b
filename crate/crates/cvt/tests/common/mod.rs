#![allow(dead_code)]

//! Shared test fixtures: a Monte Carlo second-moment oracle that never
//! touches the tetrahedral integration path, and random convex cell
//! generators.

use cvt3d::geom::{ConvexPolytope, HalfSpace, Vec3};
use cvt3d::rng::SplitMix64;

/// Face planes (outward normal, offset) recovered from the loops by Newell's
/// method. The inside test below depends only on these, keeping the oracle
/// independent of the moment integrator it cross-checks.
pub fn face_planes(p: &ConvexPolytope) -> Vec<(Vec3, f64)> {
    (0..p.faces.len())
        .map(|f| {
            let n = p.face_normal(f).expect("nondegenerate face");
            (n, n.dot(p.vertices[p.faces[f][0]]))
        })
        .collect()
}

pub fn bounding_box(p: &ConvexPolytope) -> (Vec3, Vec3) {
    let mut lo = p.vertices[0];
    let mut hi = p.vertices[0];
    for v in &p.vertices[1..] {
        lo = Vec3::new(lo.x.min(v.x), lo.y.min(v.y), lo.z.min(v.z));
        hi = Vec3::new(hi.x.max(v.x), hi.y.max(v.y), hi.z.max(v.z));
    }
    (lo, hi)
}

/// Rejection-sampling Monte Carlo estimate of `∫_p |x − q|² dx` with its
/// standard error: sample the bounding box, score `|x−q|²·1_inside`.
pub fn mc_second_moment(p: &ConvexPolytope, q: Vec3, samples: usize, seed: u64) -> (f64, f64) {
    let planes = face_planes(p);
    let (lo, hi) = bounding_box(p);
    let span = hi - lo;
    let box_vol = span.x * span.y * span.z;
    let mut rng = SplitMix64::new(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let x = Vec3::new(
            lo.x + span.x * rng.next_f64(),
            lo.y + span.y * rng.next_f64(),
            lo.z + span.z * rng.next_f64(),
        );
        let inside = planes.iter().all(|(n, d)| n.dot(x) <= *d + 1e-12);
        let f = if inside { x.dist2(q) } else { 0.0 };
        sum += f;
        sum_sq += f * f;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    (box_vol * mean, box_vol * (var / n).sqrt())
}

/// A random convex polytope: the unit cube clipped by a few random planes
/// through interior points, optionally rescaled and shifted. Always keeps
/// volume ≥ `min_volume` so rejection sampling stays efficient.
pub fn random_clipped_polytope(rng: &mut SplitMix64, min_volume: f64) -> ConvexPolytope {
    loop {
        let mut p = ConvexPolytope::unit_cube();
        let clips = 1 + (rng.next_u64() % 5) as usize;
        for _ in 0..clips {
            let normal = rng.unit_vector();
            let through = Vec3::new(
                rng.next_in(0.15, 0.85),
                rng.next_in(0.15, 0.85),
                rng.next_in(0.15, 0.85),
            );
            let h = HalfSpace::new(normal, normal.dot(through)).unwrap();
            let clipped = p.clip(&h).unwrap();
            if !clipped.is_empty() && clipped.volume() >= min_volume {
                p = clipped;
            }
        }
        if p.volume() >= min_volume {
            let scale = rng.next_in(0.5, 2.0);
            let shift = Vec3::new(
                rng.next_in(-1.0, 1.0),
                rng.next_in(-1.0, 1.0),
                rng.next_in(-1.0, 1.0),
            );
            return p.scaled(scale).translated(shift);
        }
    }
}

/// A deterministic interior point of the cell: its centroid nudged toward a
/// random vertex but kept strictly inside.
pub fn random_interior_point(p: &ConvexPolytope, rng: &mut SplitMix64) -> Vec3 {
    let c = p.centroid();
    loop {
        let v = p.vertices[(rng.next_u64() % p.vertices.len() as u64) as usize];
        let t = rng.next_in(0.0, 0.9);
        let cand = c + (v - c) * t;
        if p.contains_interior(cand) {
            return cand;
        }
    }
}
