use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::tube::{TubeAlgebra, TubeIndex};
use crate::category::CategoryData;
use crate::error::{Error, Result};
use crate::linalg::{clusters, hermitian_eigen, nullspace, range, real_spectrum};
use crate::numeral::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Spectral gap separating blocks.
pub const SPECTRAL_GAP: f64 = 1e-6;
const MAX_ROUNDS: usize = 3;

/// A simple object `(Z, σ)` of the center, read off an irreducible tube representation.
#[derive(Clone, Debug)]
pub struct CenterObject {
    /// Multiplicity of each simple of `C` in `Z`.
    pub underlying: Vec<usize>,
    /// Components of `σ_{a,Z} = Σ T(x,a,y,w) ⊗ σ[T(x,a,y,w)]`, each an
    /// `underlying[y] × underlying[x]` matrix. Up to the factor `√(d_x d_y)/d_w`
    /// this is the tube representation on `p_x A f`.
    pub half_braiding: BTreeMap<TubeIndex, DMatrix<C64>>,
    pub twist: C64,
    pub dim: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfBraidingViolation {
    pub component: String,
    pub residual: f64,
}

fn unit_vec(n: usize, i: usize) -> DVector<C64> {
    DVector::from_fn(n, |k, _| if k == i { ONE } else { ZERO })
}

fn orthonormal(v: &[DVector<C64>]) -> DMatrix<C64> {
    let n = v.first().map_or(0, |x| x.len());
    let m = DMatrix::from_fn(n, v.len(), |r, c| v[c][r]);
    range(&m, 1e-10)
}

fn center_basis(tube: &TubeAlgebra) -> DMatrix<C64> {
    let n = tube.dim();
    let mut rows = DMatrix::zeros(n * n, n);
    for i in 0..n {
        let e = unit_vec(n, i);
        let d = tube.right_matrix(&e) - tube.left_matrix(&e);
        rows.view_mut((i * n, 0), (n, n)).copy_from(&d);
    }
    orthonormal(&nullspace(&rows, 1e-10))
}

/// Minimal central idempotents, one per simple of the center.
pub(crate) fn central_idempotents(tube: &TubeAlgebra, rng: &mut ChaCha8Rng) -> Result<Vec<DVector<C64>>> {
    let c = center_basis(tube);
    let k = c.ncols();
    let cols: Vec<DVector<C64>> = (0..k).map(|j| c.column(j).into_owned()).collect();
    let mut worst = f64::INFINITY;
    for _ in 0..MAX_ROUNDS {
        let mut z = DVector::zeros(tube.dim());
        for col in &cols {
            let w = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let wc = col * w;
            z += &wc + tube.star_of(&wc);
        }
        let m = c.adjoint() * tube.left_matrix(&z) * &c;
        let re = real_spectrum(&m).ok_or_else(|| Error::NonConvergence("spectrum of the central element".into()))?;
        let groups = clusters(&re, SPECTRAL_GAP);
        if groups.iter().any(|g| g.len() > 1) {
            let mut sorted = re.clone();
            sorted.sort_by(f64::total_cmp);
            worst = sorted.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
            continue;
        }
        let mut out = Vec::with_capacity(k);
        for g in groups {
            let lam = C64::new(re[g[0]], 0.0);
            let shifted = &m - DMatrix::identity(k, k) * lam;
            let v = nullspace(&shifted, SPECTRAL_GAP);
            if v.len() != 1 {
                return Err(Error::NonConvergence(format!("eigenspace of dimension {} at λ = {}", v.len(), lam.re)));
            }
            let e = &c * &v[0];
            let ee = tube.mul(&e, &e);
            let p = e.icamax();
            out.push(purify(tube, &e * (e[p] / ee[p])));
        }
        return Ok(out);
    }
    Err(Error::NonConvergence(format!(
        "no simple spectrum after {MAX_ROUNDS} rounds (smallest gap {worst:.3e})"
    )))
}

/// Newton iteration `e ← 3e² − 2e³` towards the nearest idempotent.
fn purify(tube: &TubeAlgebra, mut e: DVector<C64>) -> DVector<C64> {
    for _ in 0..20 {
        let e2 = tube.mul(&e, &e);
        if (&e2 - &e).camax() < 1e-14 {
            break;
        }
        let e3 = tube.mul(&e2, &e);
        e = e2 * C64::new(3.0, 0.0) - e3 * C64::new(2.0, 0.0);
    }
    e
}

/// Lagrange interpolation `Π_{j≠k} (h - λ_j u)/(λ_k - λ_j)` inside a corner with unit `u`.
fn spectral_idempotent(tube: &TubeAlgebra, h: &DVector<C64>, u: &DVector<C64>, lams: &[f64], k: usize) -> DVector<C64> {
    let mut f = u.clone();
    for (j, &l) in lams.iter().enumerate() {
        if j != k {
            let factor = (h - u * C64::new(l, 0.0)) / C64::new(lams[k] - l, 0.0);
            f = tube.mul(&factor, &f);
        }
    }
    f
}

fn rank_of(tube: &TubeAlgebra, e: &DVector<C64>) -> f64 {
    tube.left_matrix(e).trace().re
}

/// A rank-one idempotent below `q` (an idempotent with `q A q ≅ M_m`).
fn minimal_idempotent(tube: &TubeAlgebra, q: &DVector<C64>, m: usize, rng: &mut ChaCha8Rng) -> Result<DVector<C64>> {
    if m == 1 {
        return Ok(q.clone());
    }
    let block = range(&(tube.left_matrix(q) * tube.right_matrix(q)), 1e-8);
    for _ in 0..MAX_ROUNDS {
        let t = DVector::from_fn(tube.dim(), |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let b = tube.mul(q, &tube.mul(&t, q));
        let h = &b + tube.star_of(&b);
        let lh = block.adjoint() * tube.left_matrix(&h) * &block;
        let Some(re) = real_spectrum(&lh) else { continue };
        let groups = clusters(&re, SPECTRAL_GAP);
        if groups.len() != m {
            continue;
        }
        let lams: Vec<f64> = groups.iter().map(|g| g.iter().map(|&i| re[i]).sum::<f64>() / g.len() as f64).collect();
        return Ok(purify(tube, spectral_idempotent(tube, &h, q, &lams, 0)));
    }
    Err(Error::NonConvergence("could not split a corner into rank-one idempotents".into()))
}

/// Reads the irreducible representation `A f` of one block.
fn center_object(cd: &CategoryData, tube: &TubeAlgebra, e: &DVector<C64>, rng: &mut ChaCha8Rng) -> Result<CenterObject> {
    let r = cd.rank();
    let n2 = rank_of(tube, e);
    let n = n2.sqrt().round() as usize;
    if (n2 - (n * n) as f64).abs() > 1e-6 || n == 0 {
        return Err(Error::NonConvergence(format!("block of non-square dimension {n2}")));
    }
    let mut underlying = vec![0usize; r];
    for (x, m) in underlying.iter_mut().enumerate() {
        let ex = tube.mul(e, &tube.corner_unit(x));
        let v = rank_of(tube, &ex) / n as f64;
        *m = v.round() as usize;
        if (v - *m as f64).abs() > 1e-6 {
            return Err(Error::NonConvergence(format!("non-integral multiplicity {v} of {}", cd.label(x))));
        }
    }
    let x0 = underlying.iter().position(|&m| m > 0).expect("nonzero block");
    let q = tube.mul(e, &tube.corner_unit(x0));
    let f = minimal_idempotent(tube, &q, underlying[x0], rng)?;
    let rf = tube.right_matrix(&f);
    // Basis of p_x A f, orthonormal for ⟨u, v⟩ = τ(u* v).
    let mut bases: Vec<(DMatrix<C64>, DMatrix<C64>)> = Vec::with_capacity(r);
    for (x, &mx) in underlying.iter().enumerate() {
        let ex = range(&(tube.left_matrix(&tube.corner_unit(x)) * &rf), 1e-8);
        if ex.ncols() != mx {
            return Err(Error::NonConvergence(format!(
                "corner {} has dimension {} in the representation, expected {mx}",
                cd.label(x),
                ex.ncols()
            )));
        }
        if mx == 0 {
            bases.push((ex.clone(), ex.adjoint()));
            continue;
        }
        let cols: Vec<DVector<C64>> = (0..mx).map(|j| ex.column(j).into_owned()).collect();
        let g = DMatrix::from_fn(mx, mx, |i, j| tube.trace(cd, &tube.mul(&tube.star_of(&cols[i]), &cols[j])));
        let (vals, vecs) = hermitian_eigen(&g);
        if vals[0] <= 0.0 {
            return Err(Error::NonConvergence(format!("trace form is not positive on the corner at {}", cd.label(x))));
        }
        let diag = |f: fn(f64) -> f64| DMatrix::from_diagonal(&DVector::from_iterator(mx, vals.iter().map(|&l| C64::new(f(l), 0.0))));
        let inv_sqrt = &vecs * diag(|l| 1.0 / l.sqrt()) * vecs.adjoint();
        let sqrt = &vecs * diag(f64::sqrt) * vecs.adjoint();
        // Basis B_x = E_x G^{-1/2}; coordinates of v are G^{1/2} E_x† v.
        bases.push((&ex * inv_sqrt, sqrt * ex.adjoint()));
    }
    let mut half_braiding = BTreeMap::new();
    for (i, &t) in tube.basis.iter().enumerate() {
        if underlying[t.x] == 0 || underlying[t.y] == 0 {
            continue;
        }
        let lt = tube.left_matrix(&unit_vec(tube.dim(), i));
        let scale = C64::new((cd.dim(t.x) * cd.dim(t.y)).sqrt() / cd.dim(t.w), 0.0);
        half_braiding.insert(t, &bases[t.y].1 * lt * &bases[t.x].0 * scale);
    }
    let rot = &bases[x0].1 * tube.left_matrix(&tube.rotation(cd, x0)) * &bases[x0].0;
    let z = rot.trace() / C64::new(underlying[x0] as f64, 0.0);
    let dim = underlying.iter().enumerate().map(|(x, &m)| m as f64 * cd.dim(x)).sum();
    Ok(CenterObject {
        underlying,
        half_braiding,
        twist: z / z.norm(),
        dim,
    })
}

fn angle_key(z: C64) -> i64 {
    let a = z.arg();
    let a = if a <= -std::f64::consts::PI + 1e-9 { std::f64::consts::PI } else { a };
    (a * 1e6).round() as i64
}

fn is_unit(z: &CenterObject) -> bool {
    z.underlying.iter().enumerate().all(|(x, &m)| m == usize::from(x == 0))
        && z.half_braiding.values().all(|m| (m[(0, 0)] - ONE).norm() < 1e-6)
}

/// Rounded traces of the diagonal components, which separate non-isomorphic simples.
fn character_key(z: &CenterObject) -> Vec<(i64, i64)> {
    z.half_braiding
        .iter()
        .filter(|(t, _)| t.x == t.y)
        .map(|(_, m)| {
            let c = m.trace();
            ((c.re * 1e6).round() as i64, (c.im * 1e6).round() as i64)
        })
        .collect()
}

/// The simples of the center: the unit first, then by dimension, underlying object,
/// twist angle and character.
pub fn center_simples(cd: &CategoryData, tube: &TubeAlgebra, seed: u64) -> Result<Vec<CenterObject>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids = central_idempotents(tube, &mut rng)?;
    let mut out = ids
        .iter()
        .map(|e| center_object(cd, tube, e, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_cached_key(|z| {
        (
            !is_unit(z),
            (z.dim * 1e6).round() as i64,
            std::cmp::Reverse(z.underlying.clone()),
            angle_key(z.twist),
            character_key(z),
        )
    });
    Ok(out)
}

/// Checks `σ_c = (1 ⊗ V^{ba†}_c)(σ_b ⊗ 1)(1 ⊗ σ_a)(V^{ba}_c ⊗ 1)` componentwise for all
/// `a, b` and `c ∈ b ⊗ a`, and that `σ_1` is the identity.
pub fn half_braiding_check(cd: &CategoryData, tube: &TubeAlgebra, z: &CenterObject) -> Vec<HalfBraidingViolation> {
    let tol = 1e-8f64.max(cd.tolerance);
    let mut out = Vec::new();
    let name = |t: &TubeIndex| {
        format!(
            "σ[{}; {}→{} via {}]",
            cd.label(t.a),
            cd.label(t.x),
            cd.label(t.y),
            cd.label(t.w)
        )
    };
    let get = |t: &TubeIndex| z.half_braiding.get(t);
    for x in (0..cd.rank()).filter(|&x| z.underlying[x] > 0) {
        let t = TubeIndex { x, a: 0, y: x, w: x };
        let res = match get(&t) {
            Some(m) => (m - DMatrix::identity(m.nrows(), m.ncols())).camax(),
            None => f64::INFINITY,
        };
        if res > tol {
            out.push(HalfBraidingViolation { component: name(&t), residual: res });
        }
    }
    let mut composed: BTreeMap<(usize, usize, usize), DMatrix<C64>> = BTreeMap::new();
    for (&(i, j), terms) in &tube.structure {
        let (s, t) = (tube.basis[i], tube.basis[j]);
        let (Some(ms), Some(mt)) = (get(&s), get(&t)) else { continue };
        let prod = ms * mt;
        for &(k, c) in terms {
            let e = composed.entry((s.a, t.a, k)).or_insert_with(|| DMatrix::zeros(prod.nrows(), prod.ncols()));
            *e += &prod * c;
        }
    }
    for ((b, a, k), m) in composed {
        let t = tube.basis[k];
        let res = match get(&t) {
            Some(mk) => (m - mk).camax(),
            None => m.camax(),
        };
        if res > tol {
            out.push(HalfBraidingViolation {
                component: format!("{} in {} ⊗ {}", name(&t), cd.label(b), cd.label(a)),
                residual: res,
            });
        }
    }
    out
}
