//! Tessellation-level property suites: the partition-of-unity volume check
//! over 200 random generator sets, cell ownership against brute-force
//! nearest-generator search over 10⁵ sample points, and the local-vs-full
//! removal-cost identity over 50 random cases.

use cvt3d::geom::Vec3;
use cvt3d::lloyd::removal_cost;
use cvt3d::rng::SplitMix64;
use cvt3d::voronoi::{build_tessellation, Domain, GeneratorSet};

#[test]
fn partition_of_unity_200_random_sets() {
    let mut rng = SplitMix64::new(6021);
    for case in 0..200u64 {
        let domain = if case % 2 == 0 {
            Domain::UnitCube
        } else {
            Domain::UnitTorus
        };
        // n spread over 1..512, denser at the small end where degeneracies live.
        let n = match case % 8 {
            0 => 1 + (rng.next_u64() % 4) as usize,
            1..=4 => 5 + (rng.next_u64() % 60) as usize,
            5 | 6 => 65 + (rng.next_u64() % 190) as usize,
            _ => 256 + (rng.next_u64() % 257) as usize,
        };
        let pts: Vec<Vec3> = (0..n).map(|_| rng.point_in_unit_cube()).collect();
        let gens = GeneratorSet::new(pts, domain).unwrap();
        let t = build_tessellation(&gens).unwrap();
        let total: f64 = t.cells.iter().map(|c| c.volume()).sum();
        assert!(
            (total - 1.0).abs() < 1e-9,
            "case {case} ({domain:?}, n={n}): volumes sum to {total}"
        );
    }
}

#[test]
fn ownership_brute_force_100k_points() {
    let mut rng = SplitMix64::new(11);
    for &domain in &[Domain::UnitCube, Domain::UnitTorus] {
        let pts: Vec<Vec3> = (0..64).map(|_| rng.point_in_unit_cube()).collect();
        let gens = GeneratorSet::new(pts, domain).unwrap();
        let t = build_tessellation(&gens).unwrap();
        for _ in 0..50_000 {
            let x = rng.point_in_unit_cube();
            let (owner, d2) = (0..64)
                .map(|k| (k, domain.dist2(x, gens.points()[k])))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            let second = (0..64)
                .filter(|&k| k != owner)
                .map(|k| domain.dist2(x, gens.points()[k]))
                .fold(f64::INFINITY, f64::min);
            if second - d2 < 1e-12 {
                continue; // boundary ties may fall either way
            }
            let img = match domain {
                Domain::UnitCube => x,
                Domain::UnitTorus => {
                    let y = gens.points()[owner];
                    let mut img = x;
                    for a in 0..3 {
                        let d = x.component(a) - y.component(a);
                        img = img + Vec3::axis(a) * (-d.round());
                    }
                    img
                }
            };
            assert!(
                t.cells[owner].contains(img),
                "{domain:?}: nearest generator does not own the sample point"
            );
        }
    }
}

#[test]
fn removal_cost_local_equals_full_rebuild_50_cases() {
    let mut rng = SplitMix64::new(271828);
    for case in 0..50u64 {
        let domain = if case % 2 == 0 {
            Domain::UnitCube
        } else {
            Domain::UnitTorus
        };
        let n = 8 + (rng.next_u64() % 24) as usize;
        let pts: Vec<Vec3> = (0..n).map(|_| rng.point_in_unit_cube()).collect();
        let gens = GeneratorSet::new(pts.clone(), domain).unwrap();
        let t = build_tessellation(&gens).unwrap();
        let index = (rng.next_u64() % n as u64) as usize;
        let local = removal_cost(&t, index).unwrap();
        let remaining: Vec<Vec3> = pts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != index)
            .map(|(_, p)| *p)
            .collect();
        let t2 = build_tessellation(&GeneratorSet::new(remaining, domain).unwrap()).unwrap();
        let full = t2.energy - t.energy;
        assert!(
            (local - full).abs() < 1e-11,
            "case {case} ({domain:?}, n={n}, index {index}): local {local} vs full {full}"
        );
        assert!(local > 0.0, "removing a generator must increase the energy");
    }
}
