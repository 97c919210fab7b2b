//! Property tests for the polytope kernel: clip additivity, translation
//! covariance, the fifth-power scaling law, the parallel-axis inequality,
//! and structural invariants after arbitrary clip sequences.

mod common;

use proptest::prelude::*;

use cvt3d::geom::{ConvexPolytope, HalfSpace, Vec3};
use cvt3d::rng::SplitMix64;

fn vec3_in(lo: f64, hi: f64) -> impl Strategy<Value = Vec3> {
    (lo..hi, lo..hi, lo..hi).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn unit_normal() -> impl Strategy<Value = Vec3> {
    vec3_in(-1.0, 1.0)
        .prop_filter("non-tiny", |v| v.norm() > 0.1)
        .prop_map(|v| v.normalized().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn clip_additivity(normal in unit_normal(), through in vec3_in(0.1, 0.9), q in vec3_in(-0.5, 1.5)) {
        let cube = ConvexPolytope::unit_cube();
        let h = HalfSpace::new(normal, normal.dot(through)).unwrap();
        let a = cube.clip(&h).unwrap();
        let b = cube.clip(&h.flipped()).unwrap();
        let vol = a.volume() + b.volume();
        prop_assert!((vol - 1.0).abs() < 1e-12);
        let sm = a.moments(q).second_moment + b.moments(q).second_moment;
        let whole = cube.moments(q).second_moment;
        prop_assert!((sm - whole).abs() < 1e-12 * whole.max(1.0));
    }

    #[test]
    fn translation_covariance(t in vec3_in(-3.0, 3.0), q in vec3_in(0.0, 1.0), seed in 0u64..1000) {
        let mut rng = SplitMix64::new(seed);
        let p = common::random_clipped_polytope(&mut rng, 0.05);
        let moved = p.translated(t);
        let before = p.moments(q).second_moment;
        let after = moved.moments(q + t).second_moment;
        prop_assert!((before - after).abs() < 1e-12 * before.max(1.0));
        prop_assert!((moved.volume() - p.volume()).abs() < 1e-12);
    }

    #[test]
    fn scaling_law(c in 0.3f64..2.5, q in vec3_in(0.0, 1.0), seed in 0u64..1000) {
        // Volume scales as c³ and the quadratic moment as c⁵.
        let mut rng = SplitMix64::new(seed);
        let p = common::random_clipped_polytope(&mut rng, 0.05);
        let scaled = p.scaled(c);
        let m = p.moments(q);
        let ms = scaled.moments(q * c);
        prop_assert!((ms.volume - c.powi(3) * m.volume).abs() < 1e-12 * m.volume.max(1.0));
        let expect = c.powi(5) * m.second_moment;
        prop_assert!((ms.second_moment - expect).abs() < 1e-11 * expect.max(1.0));
    }

    #[test]
    fn parallel_axis_inequality(q in vec3_in(-0.5, 1.5), seed in 0u64..1000) {
        let mut rng = SplitMix64::new(seed);
        let p = common::random_clipped_polytope(&mut rng, 0.05);
        let m = p.moments(q);
        let at_centroid = p.moments(m.centroid).second_moment;
        // I(q) = I(centroid) + |V|·|q − centroid|², so the centroid minimizes.
        let shift = m.volume * q.dist2(m.centroid);
        prop_assert!(m.second_moment + 1e-12 >= at_centroid);
        prop_assert!((m.second_moment - at_centroid - shift).abs() < 1e-11 * m.second_moment.max(1.0));
    }

    #[test]
    fn clip_sequences_stay_valid(seed in 0u64..2000) {
        let mut rng = SplitMix64::new(seed);
        let p = common::random_clipped_polytope(&mut rng, 0.02);
        p.validate().unwrap();
        // Euler relation holds by validate(); face count never exceeds facet count.
        let merged = p.face_count().unwrap();
        prop_assert!(merged <= p.faces.len());
        prop_assert!(merged >= 4);
    }
}
