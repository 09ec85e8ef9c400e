//! Pentagon, hexagon and unitarity checks over all admissible instances.

use rayon::prelude::*;
use serde::Serialize;

use super::CategoryData;
use crate::numeral::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoherenceCheck {
    Unitarity,
    Triangle,
    Pentagon,
    Hexagon,
    HexagonInverse,
    Unimodular,
    UnitBraiding,
    Commutativity,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoherenceViolation {
    pub check: CoherenceCheck,
    pub indices: Vec<usize>,
    pub residual: f64,
}

fn sorted(mut v: Vec<CoherenceViolation>) -> Vec<CoherenceViolation> {
    v.sort_by(|x, y| x.check.cmp(&y.check).then_with(|| x.indices.cmp(&y.indices)));
    v
}

/// Block unitarity and triangle normalization of F.
pub fn verify_unitarity(cd: &CategoryData) -> Vec<CoherenceViolation> {
    let tol = cd.tolerance;
    let mut out = Vec::new();
    for ((a, b, c, d), blk) in cd.f.blocks() {
        let n = blk.rows.len();
        let gram = &blk.mat * blk.mat.adjoint();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - want).norm());
            }
        }
        if worst > tol {
            out.push(CoherenceViolation {
                check: CoherenceCheck::Unitarity,
                indices: vec![a, b, c, d],
                residual: worst,
            });
        }
        if a == 0 || b == 0 || c == 0 {
            let res = (blk.mat[(0, 0)] - C64::new(1.0, 0.0)).norm();
            if res > tol {
                out.push(CoherenceViolation {
                    check: CoherenceCheck::Triangle,
                    indices: vec![a, b, c, d],
                    residual: res,
                });
            }
        }
    }
    sorted(out)
}

/// `F^{fcd}_e[g,l] F^{abl}_e[f,k] = Σ_h F^{abc}_g[f,h] F^{ahd}_e[g,k] F^{bcd}_k[h,l]`.
///
/// Indices are reported as `[a,b,c,d,e,f,g,k,l]`.
pub fn verify_pentagon(cd: &CategoryData) -> Vec<CoherenceViolation> {
    let ring = &cd.ring;
    let f = &cd.f;
    let tol = cd.tolerance;
    let r = ring.rank();
    let out: Vec<CoherenceViolation> = (0..r)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut out = Vec::new();
            for b in 0..r {
                for c in 0..r {
                    for d in 0..r {
                        for &ff in ring.fuse(a, b) {
                            for &g in ring.fuse(ff, c) {
                                for &e in ring.fuse(g, d) {
                                    for &l in ring.fuse(c, d) {
                                        if ring.n(ff, l, e) == 0 {
                                            continue;
                                        }
                                        for &k in ring.fuse(b, l) {
                                            if ring.n(a, k, e) == 0 {
                                                continue;
                                            }
                                            let lhs = get(f, ff, c, d, e, g, l) * get(f, a, b, l, e, ff, k);
                                            let mut rhs = C64::new(0.0, 0.0);
                                            for &h in ring.fuse(b, c) {
                                                if ring.n(a, h, g) == 0 || ring.n(h, d, k) == 0 {
                                                    continue;
                                                }
                                                rhs += get(f, a, b, c, g, ff, h)
                                                    * get(f, a, h, d, e, g, k)
                                                    * get(f, b, c, d, k, h, l);
                                            }
                                            let res = (lhs - rhs).norm();
                                            if res > tol {
                                                out.push(CoherenceViolation {
                                                    check: CoherenceCheck::Pentagon,
                                                    indices: vec![a, b, c, d, e, ff, g, k, l],
                                                    residual: res,
                                                });
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            out
        })
        .collect();
    sorted(out)
}

#[inline]
fn get(f: &super::FSymbolSet, a: usize, b: usize, c: usize, d: usize, e: usize, x: usize) -> C64 {
    f.get(a, b, c, d, e, x)
        .unwrap_or_else(|| panic!("F^{{{a}{b}{c}}}_{d}[{e},{x}] missing on admissible tuple"))
}

/// Both hexagon families:
/// `R^{ab}_e F^{bac}_d[e,g] R^{ac}_g = Σ_f F^{abc}_d[e,f] R^{af}_d F^{bca}_d[f,g]`,
/// and the same identity for the reverse braiding `R'^{xy}_z = 1/R^{yx}_z`.
/// Also checks unimodularity, unit braiding and that the ring is commutative.
///
/// Hexagon indices are reported as `[a,b,c,d,e,g]`.
pub fn verify_hexagon(cd: &CategoryData) -> Vec<CoherenceViolation> {
    let Some(rs) = cd.r.as_ref() else {
        return vec![CoherenceViolation {
            check: CoherenceCheck::Hexagon,
            indices: vec![],
            residual: f64::INFINITY,
        }];
    };
    let ring = &cd.ring;
    let f = &cd.f;
    let tol = cd.tolerance;
    let r = ring.rank();
    let mut out = Vec::new();
    for a in 0..r {
        for b in 0..r {
            if ring.fuse(a, b) != ring.fuse(b, a) {
                out.push(CoherenceViolation {
                    check: CoherenceCheck::Commutativity,
                    indices: vec![a, b],
                    residual: f64::INFINITY,
                });
            }
            for &c in ring.fuse(a, b) {
                let v = rs.get(a, b, c).unwrap();
                let res = (v.norm() - 1.0).abs();
                if res > tol {
                    out.push(CoherenceViolation {
                        check: CoherenceCheck::Unimodular,
                        indices: vec![a, b, c],
                        residual: res,
                    });
                }
                if a == 0 || b == 0 {
                    let res = (v - C64::new(1.0, 0.0)).norm();
                    if res > tol {
                        out.push(CoherenceViolation {
                            check: CoherenceCheck::UnitBraiding,
                            indices: vec![a, b, c],
                            residual: res,
                        });
                    }
                }
            }
        }
    }
    if !out.is_empty() {
        return sorted(out);
    }
    let fwd = |x: usize, y: usize, z: usize| rs.get(x, y, z).unwrap();
    let rev = |x: usize, y: usize, z: usize| rs.get(y, x, z).unwrap().inv();
    let hex: Vec<CoherenceViolation> = (0..r)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut out = Vec::new();
            for b in 0..r {
                for c in 0..r {
                    for &e in ring.fuse(a, b) {
                        for &d in ring.fuse(e, c) {
                            for &g in ring.fuse(a, c) {
                                if ring.n(b, g, d) == 0 {
                                    continue;
                                }
                                for (check, rr) in [
                                    (CoherenceCheck::Hexagon, &fwd as &dyn Fn(usize, usize, usize) -> C64),
                                    (CoherenceCheck::HexagonInverse, &rev),
                                ] {
                                    let lhs = rr(a, b, e) * get(f, b, a, c, d, e, g) * rr(a, c, g);
                                    let mut rhs = C64::new(0.0, 0.0);
                                    for &ff in ring.fuse(b, c) {
                                        if ring.n(a, ff, d) == 0 {
                                            continue;
                                        }
                                        rhs += get(f, a, b, c, d, e, ff) * rr(a, ff, d) * get(f, b, c, a, d, ff, g);
                                    }
                                    let res = (lhs - rhs).norm();
                                    if res > tol {
                                        out.push(CoherenceViolation {
                                            check,
                                            indices: vec![a, b, c, d, e, g],
                                            residual: res,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
            out
        })
        .collect();
    sorted(hex)
}
