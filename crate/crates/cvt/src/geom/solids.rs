//! Canonical reference solids, as half-space sets and as built polytopes.
//!
//! These serve as Voronoi-cell references (the truncated octahedron is the
//! BCC cell, the rhombic dodecahedron the FCC cell) and as multi-start seeds
//! for the constrained second-moment minimization.

use super::{ConvexPolytope, HalfSpace, Vec3};

/// A solid named by its face count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solid {
    /// Regular tetrahedron, 4 faces.
    Tetrahedron,
    /// Cube, 6 faces.
    Cube,
    /// Regular octahedron, 8 faces.
    Octahedron,
    /// Rhombic dodecahedron, 12 faces (FCC Voronoi cell).
    RhombicDodecahedron,
    /// Truncated octahedron, 14 faces (BCC Voronoi cell).
    TruncatedOctahedron,
}

impl Solid {
    pub const ALL: [Solid; 5] = [
        Solid::Tetrahedron,
        Solid::Cube,
        Solid::Octahedron,
        Solid::RhombicDodecahedron,
        Solid::TruncatedOctahedron,
    ];

    pub fn face_count(self) -> usize {
        match self {
            Solid::Tetrahedron => 4,
            Solid::Cube => 6,
            Solid::Octahedron => 8,
            Solid::RhombicDodecahedron => 12,
            Solid::TruncatedOctahedron => 14,
        }
    }

    /// Outward unit normals and offsets of a canonical, origin-centered copy.
    pub fn half_spaces(self) -> Vec<HalfSpace> {
        let mut hs = Vec::new();
        let mut push = |n: Vec3, d: f64| {
            hs.push(HalfSpace::new(n, d).expect("non-zero normal"));
        };
        match self {
            Solid::Tetrahedron => {
                for n in [
                    Vec3::new(1.0, 1.0, 1.0),
                    Vec3::new(1.0, -1.0, -1.0),
                    Vec3::new(-1.0, 1.0, -1.0),
                    Vec3::new(-1.0, -1.0, 1.0),
                ] {
                    push(n, 3.0f64.sqrt()); // unit inradius after normalization
                }
            }
            Solid::Cube => {
                for a in 0..3 {
                    push(Vec3::axis(a), 1.0);
                    push(-Vec3::axis(a), 1.0);
                }
            }
            Solid::Octahedron => {
                for sx in [-1.0, 1.0] {
                    for sy in [-1.0, 1.0] {
                        for sz in [-1.0, 1.0] {
                            push(Vec3::new(sx, sy, sz), 3.0f64.sqrt());
                        }
                    }
                }
            }
            Solid::RhombicDodecahedron => {
                for a in 0..3 {
                    let b = (a + 1) % 3;
                    for sa in [-1.0, 1.0] {
                        for sb in [-1.0, 1.0] {
                            push(Vec3::axis(a) * sa + Vec3::axis(b) * sb, 2.0f64.sqrt());
                        }
                    }
                }
            }
            Solid::TruncatedOctahedron => {
                // Vertices at the permutations of (0, ±1, ±2): squares on the
                // axis planes at offset 2, hexagons on the diagonals at √3.
                for a in 0..3 {
                    push(Vec3::axis(a), 2.0);
                    push(-Vec3::axis(a), 2.0);
                }
                for sx in [-1.0, 1.0] {
                    for sy in [-1.0, 1.0] {
                        for sz in [-1.0, 1.0] {
                            push(Vec3::new(sx, sy, sz), 3.0);
                        }
                    }
                }
            }
        }
        hs
    }

    /// The solid as a polytope, built by clipping a generously sized box.
    pub fn polytope(self) -> ConvexPolytope {
        let hs = self.half_spaces();
        let bound = hs.iter().map(|h| h.offset).fold(0.0f64, f64::max) * 4.0;
        let mut p = ConvexPolytope::cuboid(
            Vec3::new(-bound, -bound, -bound),
            Vec3::new(bound, bound, bound),
        );
        for h in &hs {
            p = p.clip(h).expect("canonical solid clip");
        }
        p
    }

    /// Copy scaled to the given volume, still centered at the origin.
    pub fn polytope_with_volume(self, volume: f64) -> ConvexPolytope {
        let p = self.polytope();
        let c = (volume / p.volume()).cbrt();
        p.scaled(c)
    }
}
