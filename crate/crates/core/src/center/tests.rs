use super::*;
use crate::algebra::{algebra_dim, is_commutative, is_connected, verify_qsystem};
use crate::braided::{s_matrix, twists};
use crate::category::{catalog, catalog_names, deligne_product_data, monoidal_opposite, reverse_braiding, CategoryData};
use crate::error::Error;
use crate::fusion_ring::validate_fusion_ring;
use crate::local_modules::enumerate_local_modules;
use crate::numeral::C64;

const PHI: f64 = 1.618_033_988_749_895;

fn center_of(name: &str, seed: u64) -> (CategoryData, TubeAlgebra, CenterData) {
    let cd = catalog(name).unwrap();
    let tube = build_tube_algebra(&cd).unwrap();
    let c = decompose_center(&cd, &tube, seed).unwrap();
    (cd, tube, c)
}

fn cis(turns: f64) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * turns)
}

/// Sorted `(dim, arg θ)` pairs, rounded.
fn dim_twist_multiset(pairs: impl Iterator<Item = (f64, C64)>) -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> = pairs
        .map(|(d, t)| {
            let a = t.arg();
            let a = if a < -std::f64::consts::PI + 1e-9 { -a } else { a };
            ((d * 1e6).round() as i64, (a * 1e6).round() as i64)
        })
        .collect();
    v.sort_unstable();
    v
}

#[test]
fn tube_algebra_invariants() {
    for (name, dim) in [("unit", 1), ("z2", 4), ("fibonacci", 7), ("ising", 12), ("semion", 4), ("toric_code", 16)] {
        let cd = catalog(name).unwrap();
        let t = build_tube_algebra(&cd).unwrap();
        assert_eq!(t.dim(), dim, "{name}");
        assert!(t.associativity_residual() < 1e-12, "{name}");
        assert!(t.star_residual() < 1e-12, "{name}");
        assert!(t.trace_form_min_eigenvalue(&cd) > 1e-6, "{name}");
    }
}

#[test]
fn vec_z2_tube_algebra_is_commutative() {
    let cd = catalog("z2").unwrap();
    let t = build_tube_algebra(&cd).unwrap();
    for i in 0..t.dim() {
        for j in 0..t.dim() {
            assert_eq!(t.structure.get(&(i, j)).is_some(), t.structure.get(&(j, i)).is_some());
        }
    }
    let n = t.dim();
    let e = |i: usize| nalgebra::DVector::from_fn(n, |k, _| C64::new(f64::from(u8::from(k == i)), 0.0));
    for i in 0..n {
        for j in 0..n {
            assert!((t.mul(&e(i), &e(j)) - t.mul(&e(j), &e(i))).camax() < 1e-12);
        }
    }
}

#[test]
fn center_of_vec_z2() {
    let (_, _, c) = center_of("z2", 0);
    assert_eq!(c.rank(), 4);
    assert!(c.dims().iter().all(|&d| (d - 1.0).abs() < 1e-9));
    let minus = c.twists().iter().filter(|t| (**t + C64::new(1.0, 0.0)).norm() < 1e-9).count();
    let plus = c.twists().iter().filter(|t| (**t - C64::new(1.0, 0.0)).norm() < 1e-9).count();
    assert_eq!((plus, minus), (3, 1));
}

#[test]
fn center_of_fibonacci() {
    let (_, _, c) = center_of("fibonacci", 0);
    assert_eq!(c.rank(), 4);
    let mut dims = c.dims();
    dims.sort_by(f64::total_cmp);
    for (d, e) in dims.iter().zip([1.0, PHI, PHI, PHI * PHI]) {
        assert!((d - e).abs() < 1e-6);
    }
    let expect = [(1.0, cis(0.0)), (PHI, cis(0.4)), (PHI, cis(-0.4)), (PHI * PHI, cis(0.0))];
    assert_eq!(dim_twist_multiset(c.dims().into_iter().zip(c.twists())), dim_twist_multiset(expect.into_iter()));
}

#[test]
fn center_of_ising() {
    let (cd, _, c) = center_of("ising", 0);
    assert_eq!(c.rank(), 9);
    assert!((c.global_dim() - 16.0).abs() < 1e-6);
    assert!((cd.global_dim() - 4.0).abs() < 1e-12);
}

#[test]
fn global_dimension_squares() {
    for e in catalog_names() {
        let cd = e.build();
        let t = build_tube_algebra(&cd).unwrap();
        let c = decompose_center(&cd, &t, 3).unwrap();
        assert!((c.global_dim() - cd.global_dim().powi(2)).abs() < 1e-6, "{}", e.name);
        for z in &c.simples {
            let d: f64 = z.underlying.iter().enumerate().map(|(x, &m)| m as f64 * cd.dim(x)).sum();
            assert!((d - z.dim).abs() < 1e-12);
            assert!((z.twist.norm() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn half_braidings_satisfy_the_hexagon() {
    for name in ["z2", "fibonacci", "ising", "semion", "z3q"] {
        let (cd, t, c) = center_of(name, 0);
        for z in &c.simples {
            let v = half_braiding_check(&cd, &t, z);
            assert!(v.is_empty(), "{name}: {v:?}");
        }
        let unit = &c.simples[0];
        assert_eq!(unit.underlying[0], 1);
        assert_eq!(unit.dim, 1.0);
        assert!(unit.half_braiding.values().all(|m| (m[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-9));
    }
}

#[test]
fn exchanged_half_braiding_components_fail() {
    let (cd, t, c) = center_of("fibonacci", 0);
    let mut z = c.simples.iter().find(|z| z.underlying == [1, 1]).unwrap().clone();
    let (up, down) = (TubeIndex { x: 0, a: 1, y: 1, w: 1 }, TubeIndex { x: 1, a: 1, y: 0, w: 1 });
    let (mu, md) = (z.half_braiding[&up].clone(), z.half_braiding[&down].clone());
    z.half_braiding.insert(up, md.transpose() * C64::new(0.0, 1.0));
    z.half_braiding.insert(down, mu.transpose());
    let v = half_braiding_check(&cd, &t, &z);
    assert!(!v.is_empty());
    assert!(v.iter().all(|v| v.component.starts_with("σ[") && v.component.ends_with(" in t ⊗ t")), "{v:?}");
    assert!(v.iter().all(|v| v.residual > 1e-3));
}

#[test]
fn twist_agrees_with_self_braiding() {
    for name in ["fibonacci", "ising", "z4q"] {
        let (cd, _, c) = center_of(name, 0);
        for z in &c.simples {
            assert!((self_braiding_twist(&cd, z) - z.twist).norm() < 1e-9, "{name}");
        }
    }
}

#[test]
fn modular_data_of_the_center() {
    for name in ["fibonacci", "ising", "toric_code", "z3"] {
        let (_, _, c) = center_of(name, 0);
        let s = c.normalized_s();
        let n = c.rank();
        assert!(crate::linalg::max_abs(&(&s * s.adjoint() - nalgebra::DMatrix::identity(n, n))) < 1e-9, "{name}");
        assert!(crate::linalg::max_abs(&(&s - s.transpose())) < 1e-9);
        let dims = c.dims();
        for j in 0..n {
            assert!((c.s.get(0, j) - C64::new(dims[j], 0.0)).norm() < 1e-9);
        }
        for j in 0..n {
            assert!((c.t[(j, j)] - c.simples[j].twist).norm() < 1e-15);
        }
        let ring = c.verlinde_ring().expect("integral fusion");
        assert!(validate_fusion_ring(&ring).is_empty());
        let p = c.presentation.as_ref().unwrap();
        let ps = s_matrix(&p.category).unwrap();
        let pt = twists(&p.category).unwrap().theta;
        for i in 0..n {
            assert!((pt[p.label_of[i]] - c.simples[i].twist).norm() < 1e-9);
            for j in 0..n {
                assert!((ps.get(p.label_of[i], p.label_of[j]) - c.s.get(i, j)).norm() < 1e-6);
                for k in 0..n {
                    assert_eq!(ring.n(i, j, k), p.category.ring.n(p.label_of[i], p.label_of[j], p.label_of[k]));
                }
            }
        }
    }
}

#[test]
fn center_of_modular_category_is_c_times_reverse() {
    for name in ["fibonacci", "semion"] {
        let (cd, _, c) = center_of(name, 0);
        let prod = deligne_product_data(&cd, &reverse_braiding(&cd).unwrap()).unwrap();
        let th = twists(&prod).unwrap().theta;
        let expect = dim_twist_multiset((0..prod.rank()).map(|i| (prod.dim(i), th[i])));
        assert_eq!(dim_twist_multiset(c.dims().into_iter().zip(c.twists())), expect, "{name}");
    }
}

#[test]
fn decomposition_is_seed_independent() {
    for name in ["fibonacci", "ising", "z3", "toric_code"] {
        let (_, _, a) = center_of(name, 0);
        for seed in [1, 17, 123_456] {
            let (_, _, b) = center_of(name, seed);
            assert_eq!(a.labels, b.labels, "{name}");
            for (x, y) in a.simples.iter().zip(&b.simples) {
                assert_eq!(x.underlying, y.underlying);
                assert!((x.dim - y.dim).abs() < 1e-12);
                assert!((x.twist - y.twist).norm() < 1e-9);
            }
            assert!(crate::linalg::max_abs(&(&a.s.s - &b.s.s)) < 1e-9);
        }
    }
}

#[test]
fn lagrangian_algebra_of_vec_z2() {
    let (_, _, c) = center_of("z2", 0);
    let (pres, l) = lagrangian_algebra(&c).unwrap();
    assert_eq!(l.support.len(), 2);
    for &x in &l.support {
        let i = c.presentation.as_ref().unwrap().label_of.iter().position(|&p| p == x).unwrap();
        assert_eq!(c.simples[i].underlying, vec![1, 0]);
        assert!((c.simples[i].twist - C64::new(1.0, 0.0)).norm() < 1e-9);
    }
    assert!((algebra_dim(&pres, &l) - 2.0).abs() < 1e-12);
}

#[test]
fn lagrangian_algebras_condense_to_vec() {
    for name in ["unit", "fibonacci", "ising", "semion", "toric_code", "z3", "z4q"] {
        let (cd, _, c) = center_of(name, 0);
        let (pres, l) = lagrangian_algebra(&c).unwrap();
        assert!(verify_qsystem(&pres, &l).unwrap().pass(), "{name}");
        assert!(is_commutative(&pres, &l).unwrap().0);
        assert!(is_connected(&l));
        let d = algebra_dim(&pres, &l);
        assert!((d * d - c.global_dim()).abs() < 1e-6, "{name}");
        assert!((d - cd.global_dim()).abs() < 1e-9);
        assert_eq!(enumerate_local_modules(&pres, &l).unwrap().simples.len(), 1);
    }
    let (_, _, c) = center_of("fibonacci", 0);
    let (pres, l) = lagrangian_algebra(&c).unwrap();
    let dims: Vec<f64> = l.support.iter().map(|&x| pres.dim(x)).collect();
    assert_eq!(dims.len(), 2);
    assert!((dims[1] - PHI * PHI).abs() < 1e-9);
}

#[test]
fn theorem_c_shadow_holds() {
    for name in ["z2", "fibonacci", "ising"] {
        let cd = catalog(name).unwrap();
        let rep = theorem_c_shadow(&cd, 0).unwrap();
        assert!(rep.pass, "{name}: {rep:?}");
        assert_eq!(rep.assertions.len(), 4);
        assert!((rep.global_dim_center - rep.global_dim_c.powi(2)).abs() < 1e-6);
    }
}

#[test]
fn unbraided_input_has_no_presentation() {
    let mut cd = monoidal_opposite(&catalog("fibonacci").unwrap()).unwrap();
    cd.r = None;
    let t = build_tube_algebra(&cd).unwrap();
    let c = decompose_center(&cd, &t, 0).unwrap();
    assert_eq!(c.rank(), 4);
    assert!(c.presentation.is_none());
    assert_eq!(c.labels[0], "Z0");
    assert!(matches!(lagrangian_algebra(&c), Err(Error::Precondition(_))));
    let rep = theorem_c_report(&cd, &c).unwrap();
    assert!(!rep.pass);
    assert_eq!(rep.assertions.iter().filter(|a| a.pass).count(), 3);
}

#[test]
fn partial_category_of_the_center() {
    let (_, _, c) = center_of("ising", 0);
    let file = c.to_partial_file().unwrap();
    assert!(file.partial && file.F.is_empty() && file.R.is_none());
    let back = file.into_category(false).unwrap();
    assert_eq!(back.rank(), 9);
    assert!(back.partial);
    for i in 0..9 {
        assert!((back.dim(i) - c.simples[i].dim).abs() < 1e-9);
    }
}
