use std::collections::BTreeSet;

use proptest::prelude::*;
use tensorcat::category::catalog;
use tensorcat::fusion_ring::{
    cyclic_ring, deligne_product, fp_dimensions, hypergroup_coeffs, opposite_ring, validate_fusion_ring, FusionRing, RingAxiom,
};

fn labels(r: usize) -> Vec<String> {
    (0..r).map(|i| i.to_string()).collect()
}

/// Axiom kinds violated by a dense table `n[a][b][c] = N^c_{ab}`, checked by plain loops.
fn oracle(n: &[Vec<Vec<u32>>], dual: &[usize]) -> BTreeSet<&'static str> {
    let r = n.len();
    let mut bad = BTreeSet::new();
    let delta = |x: usize, y: usize| u32::from(x == y);
    for a in 0..r {
        for c in 0..r {
            if n[0][a][c] != delta(a, c) || n[a][0][c] != delta(a, c) {
                bad.insert("unit");
            }
        }
    }
    if dual[0] != 0 || (0..r).any(|a| dual[dual[a]] != a) {
        bad.insert("duality");
    }
    for a in 0..r {
        for b in 0..r {
            if n[a][b][0] != delta(b, dual[a]) {
                bad.insert("duality");
            }
        }
    }
    // L_a L_b = Σ_e N^e_{ab} L_e with (L_a)_{d,f} = N^d_{af}.
    let left = |a: usize| -> Vec<Vec<u64>> { (0..r).map(|d| (0..r).map(|f| n[a][f][d] as u64).collect()).collect() };
    let l: Vec<_> = (0..r).map(left).collect();
    for a in 0..r {
        for b in 0..r {
            for d in 0..r {
                for c in 0..r {
                    let prod: u64 = (0..r).map(|f| l[a][d][f] * l[b][f][c]).sum();
                    let sum: u64 = (0..r).map(|e| n[a][b][e] as u64 * l[e][d][c]).sum();
                    if prod != sum {
                        bad.insert("associativity");
                    }
                }
            }
        }
    }
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let v = n[a][b][c];
                if v != n[b][dual[c]][dual[a]] || v != n[dual[c]][a][dual[b]] {
                    bad.insert("rotation");
                }
            }
        }
    }
    bad
}

fn kinds(ring: &FusionRing) -> BTreeSet<&'static str> {
    validate_fusion_ring(ring)
        .iter()
        .map(|v| match v.axiom {
            RingAxiom::Unit => "unit",
            RingAxiom::Associativity => "associativity",
            RingAxiom::Duality => "duality",
            RingAxiom::Rotation => "rotation",
        })
        .collect()
}

fn check_table(n: &[Vec<Vec<u32>>], dual: &[usize]) -> bool {
    let r = n.len();
    let dense: Vec<Vec<Vec<i64>>> = n.iter().map(|x| x.iter().map(|y| y.iter().map(|&m| m as i64).collect()).collect()).collect();
    let ring = FusionRing::from_dense(labels(r), dual.to_vec(), &dense).unwrap();
    kinds(&ring) == oracle(n, dual)
}

fn table(r: usize, mut code: u64, fixed_unit: bool) -> Vec<Vec<Vec<u32>>> {
    let mut n = vec![vec![vec![0u32; r]; r]; r];
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                if fixed_unit && (a == 0 || b == 0) {
                    n[a][b][c] = u32::from(c == a.max(b));
                } else {
                    n[a][b][c] = (code % 3) as u32;
                    code /= 3;
                }
            }
        }
    }
    n
}

fn all_maps(r: usize) -> Vec<Vec<usize>> {
    (0..r.pow(r as u32))
        .map(|mut k| {
            (0..r)
                .map(|_| {
                    let x = k % r;
                    k /= r;
                    x
                })
                .collect()
        })
        .collect()
}

#[test]
fn validator_agrees_with_brute_force_up_to_rank_2() {
    for r in 1..=2usize {
        let count = 3u64.pow((r * r * r) as u32);
        for dual in all_maps(r) {
            for code in 0..count {
                let n = table(r, code, false);
                assert!(check_table(&n, &dual), "rank {r} table {n:?} dual {dual:?}");
            }
        }
    }
}

#[test]
fn validator_agrees_with_brute_force_at_rank_3() {
    let duals: Vec<Vec<usize>> = all_maps(3).into_iter().filter(|d| d[0] == 0 && (0..3).all(|a| d[d[a]] == a)).collect();
    assert_eq!(duals.len(), 2);
    let count = 3u64.pow(12);
    for dual in &duals {
        (0..count).for_each(|code| {
            let n = table(3, code, true);
            assert!(check_table(&n, dual), "table {n:?} dual {dual:?}");
        });
    }
}

fn dense(ring: &FusionRing) -> Vec<Vec<Vec<u32>>> {
    let r = ring.rank();
    (0..r).map(|a| (0..r).map(|b| (0..r).map(|c| ring.n(a, b, c)).collect()).collect()).collect()
}

#[test]
fn oracle_accepts_known_rings() {
    for ring in base_rings() {
        assert!(oracle(&dense(&ring), ring.duals()).is_empty(), "{ring:?}");
    }
}

fn z3_tambara_yamagami() -> FusionRing {
    let mut t = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            t.push((a, b, (a + b) % 3, 1));
        }
        t.push((a, 3, 3, 1));
        t.push((3, a, 3, 1));
        t.push((3, 3, a, 1));
    }
    FusionRing::from_triples(labels(4), vec![0, 2, 1, 3], &t).unwrap()
}

fn rep_s3() -> FusionRing {
    let t = [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1), (0, 2, 2, 1), (2, 0, 2, 1), (1, 2, 2, 1), (2, 1, 2, 1), (2, 2, 0, 1), (2, 2, 1, 1), (2, 2, 2, 1)];
    FusionRing::from_triples(labels(3), vec![0, 1, 2], &t).unwrap()
}

/// The group ring of S3, which is not commutative.
fn s3_group_ring() -> FusionRing {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
    let mul = |p: [usize; 3], q: [usize; 3]| [p[q[0]], p[q[1]], p[q[2]]];
    let mut t = Vec::new();
    let mut dual = vec![0; 6];
    for (i, &p) in perms.iter().enumerate() {
        for (j, &q) in perms.iter().enumerate() {
            let k = idx(mul(p, q));
            t.push((i, j, k, 1));
            if k == 0 {
                dual[i] = j;
            }
        }
    }
    FusionRing::from_triples(labels(6), dual, &t).unwrap()
}

fn base_rings() -> Vec<FusionRing> {
    let mut v: Vec<FusionRing> = ["unit", "fibonacci", "ising", "toric_code"].iter().map(|n| catalog(n).unwrap().ring).collect();
    v.extend((2..=5).map(cyclic_ring));
    v.extend([rep_s3(), s3_group_ring(), z3_tambara_yamagami()]);
    v
}

fn ring_strategy() -> impl Strategy<Value = FusionRing> {
    let n = base_rings().len();
    (0..n, 0..n, any::<bool>(), any::<bool>()).prop_map(|(i, j, product, opposite)| {
        let rings = base_rings();
        let r = if product { deligne_product(&rings[i], &rings[j]) } else { rings[i].clone() };
        if opposite {
            opposite_ring(&r)
        } else {
            r
        }
    })
}

#[test]
fn base_rings_are_valid() {
    for r in base_rings() {
        assert!(validate_fusion_ring(&r).is_empty(), "{r:?}");
    }
    let s3 = s3_group_ring();
    assert_ne!(s3.fuse(1, 2), s3.fuse(2, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hypergroup_rows_sum_to_one(ring in ring_strategy()) {
        prop_assert!(validate_fusion_ring(&ring).is_empty());
        let dims = fp_dimensions(&ring).unwrap();
        let h = hypergroup_coeffs(&ring, &dims);
        for a in 0..ring.rank() {
            for b in 0..ring.rank() {
                let s: f64 = (0..ring.rank()).map(|c| h.coeff(a, b, c)).sum();
                prop_assert!((s - 1.0).abs() < 1e-9, "Σ_c M^c_ab = {s} at ({a},{b})");
            }
        }
    }

    #[test]
    fn product_dims_are_outer_products(i in 0..11usize, j in 0..11usize) {
        let rings = base_rings();
        let p = deligne_product(&rings[i], &rings[j]);
        prop_assert!(validate_fusion_ring(&p).is_empty());
        let (d1, d2, dp) = (fp_dimensions(&rings[i]).unwrap(), fp_dimensions(&rings[j]).unwrap(), fp_dimensions(&p).unwrap());
        let n2 = rings[j].rank();
        for a in 0..rings[i].rank() {
            for b in 0..n2 {
                prop_assert!((dp.dims[a * n2 + b] - d1.dims[a] * d2.dims[b]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn opposite_preserves_validity_and_dims(ring in ring_strategy()) {
        let op = opposite_ring(&ring);
        prop_assert!(validate_fusion_ring(&op).is_empty());
        prop_assert_eq!(fp_dimensions(&op).unwrap().dims, fp_dimensions(&ring).unwrap().dims);
        prop_assert_eq!(opposite_ring(&op), ring);
    }
}
