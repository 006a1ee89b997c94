use convex_spectra::corpus::{generate_nested_pair, point_in_polygon, random_polygon, rng, DEFAULT_VERTEX_RANGE};
use convex_spectra::nets::{maximal_separated_net, voronoi_partition, NetDomain, PointSet};

#[test]
fn voronoi_cells_of_a_net_are_small() {
    for seed in 0..10 {
        let (_, p) = generate_nested_pair(seed).unwrap();
        for r in [0.2, 0.35, 0.7] {
            let step = r / 16.0;
            let net = maximal_separated_net(NetDomain::Polygon(&p), r, step).unwrap();
            let part = voronoi_partition(&p, &net).unwrap();
            let bound = 2.0 * (r + step * 2f64.sqrt());
            assert!(part.max_cell_diameter() <= bound, "seed {seed}, r {r}: {}", part.max_cell_diameter());
            assert!(net.min_pairwise_distance() >= r * (1.0 - 1e-12));
        }
    }
}

#[test]
fn halving_r_never_shrinks_the_net() {
    for seed in 0..10 {
        let (_, p) = generate_nested_pair(seed).unwrap();
        let mut r = 1.0;
        let mut prev = 0;
        while r > 0.05 {
            let n = maximal_separated_net(NetDomain::Polygon(&p), r, r / 16.0).unwrap().len();
            assert!(n >= prev, "seed {seed}, r {r}: {n} < {prev}");
            prev = n;
            r /= 2.0;
        }
    }
}

#[test]
fn random_partitions_tile_the_polygon() {
    let mut g = rng(5);
    for i in 0..100 {
        let p = random_polygon(&mut g, DEFAULT_VERTEX_RANGE).unwrap();
        let sites: Vec<_> = (0..1 + i % 12).map(|_| point_in_polygon(&mut g, &p)).collect();
        let part = voronoi_partition(&p, &PointSet::from_planar(&sites, 0.0)).unwrap();
        let rel = (part.total_area() - p.area()).abs() / p.area();
        assert!(rel <= 1e-9, "instance {i}: area defect {rel}");
        assert!(part.max_pairwise_overlap() <= 1e-9 * p.area());
    }
}
