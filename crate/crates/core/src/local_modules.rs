//! Right modules over a Q-system and the category of local modules.
//!
//! A module `X = ⊕_y W_y ⊗ y` is stored as matrices `A[x,a,y] : W_x → W_y` with
//! `ρ (ι^i_x ⊗ ι_a) V^{xa}_y = Σ_j A[x,a,y]_{ji} ι^j_y`. In this normalization
//! (`μ^{0a}_a = 1`, `m m† = d_Q`) the unit acts by `A[x,0,x] = 1`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{algebra_dim, is_commutative, is_connected, verify_qsystem, AlgebraObject, AxiomResult};
use crate::braided::is_nondegenerate;
use crate::category::{CategoryData, LabelRef, ModuleFile};
use crate::diagram::{vertex, Evaluator, MorphismValue};
use crate::error::{precondition, structural, Error, Result};
use crate::fusion_ring::FusionRing;
use crate::linalg::{clusters, max_abs, nullspace, range};
use crate::numeral::{Numeral, C64};

/// Tolerance for intertwiner spaces and spectral gaps during decomposition.
pub const DEDUP_TOL: f64 = 1e-6;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleObject {
    /// Multiplicity of every simple in the underlying object.
    pub mult: Vec<usize>,
    /// `rho[(x,a,y)]` has shape `mult[y] × mult[x]`; absent entries are zero.
    pub rho: BTreeMap<(usize, usize, usize), DMatrix<C64>>,
}

impl ModuleObject {
    /// A multiplicity-free module from scalars `ρ^{xa}_y`.
    pub fn from_scalars(
        cd: &CategoryData,
        alg: &AlgebraObject,
        support: &[usize],
        rho: &BTreeMap<(usize, usize, usize), C64>,
    ) -> Result<Self> {
        let mut mult = vec![0usize; cd.rank()];
        for &x in support {
            if x >= cd.rank() {
                return Err(structural(format!("support label {x} out of range")));
            }
            if mult[x] == 1 {
                return Err(Error::Multiplicity("module support lists a label twice".into()));
            }
            mult[x] = 1;
        }
        let mut out = BTreeMap::new();
        for (&(x, a, y), &v) in rho {
            if mult[x] == 0 || mult[y] == 0 || !alg.contains(a) || cd.ring.n(x, a, y) == 0 {
                return Err(structural(format!(
                    "ρ entry on inadmissible triple ({},{},{})",
                    cd.label(x),
                    cd.label(a),
                    cd.label(y)
                )));
            }
            out.insert((x, a, y), DMatrix::from_element(1, 1, v));
        }
        Ok(ModuleObject { mult, rho: out })
    }

    /// `A` as a right module over itself.
    pub fn regular(cd: &CategoryData, alg: &AlgebraObject) -> Self {
        let rho = alg.mu.clone();
        Self::from_scalars(cd, alg, &alg.support, &rho).expect("algebra triples are admissible")
    }

    /// The free module `x ⊗ A`, with `W_y` spanned by the `a ∈ A` with `y ∈ x⊗a`.
    pub fn free(cd: &CategoryData, alg: &AlgebraObject, x: usize) -> Result<Self> {
        cd.require_f()?;
        let r = cd.rank();
        let basis: Vec<Vec<usize>> = (0..r)
            .map(|y| alg.support.iter().copied().filter(|&a| cd.ring.n(x, a, y) > 0).collect())
            .collect();
        let mult: Vec<usize> = basis.iter().map(Vec::len).collect();
        let mut rho = BTreeMap::new();
        for y in (0..r).filter(|&y| mult[y] > 0) {
            for &b in &alg.support {
                for &yp in cd.fuse(y, b).iter().filter(|&&yp| mult[yp] > 0) {
                    let mut m = DMatrix::zeros(mult[yp], mult[y]);
                    for (col, &a) in basis[y].iter().enumerate() {
                        for (row, &f) in basis[yp].iter().enumerate() {
                            if cd.ring.n(a, b, f) == 0 {
                                continue;
                            }
                            let fs = cd.f.get(x, a, b, yp, y, f).unwrap_or(ZERO);
                            m[(row, col)] = fs * alg.mu(a, b, f);
                        }
                    }
                    rho.insert((y, b, yp), m);
                }
            }
        }
        Ok(ModuleObject { mult, rho })
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.mult.len()).filter(|&x| self.mult[x] > 0).collect()
    }

    pub fn block(&self, x: usize, a: usize, y: usize) -> DMatrix<C64> {
        self.rho
            .get(&(x, a, y))
            .cloned()
            .unwrap_or_else(|| DMatrix::zeros(self.mult[y], self.mult[x]))
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.mult.iter().all(|&m| m <= 1)
    }

    /// `Σ_y mult_y d_y`.
    pub fn dim(&self, cd: &CategoryData) -> f64 {
        self.mult.iter().enumerate().map(|(y, &m)| m as f64 * cd.dim(y)).sum()
    }

    pub fn from_file(cd: &CategoryData, alg: &AlgebraObject, file: &ModuleFile) -> Result<Self> {
        let labels = cd.ring.labels();
        let support = file.support.iter().map(|l| l.resolve(labels)).collect::<Result<Vec<_>>>()?;
        let mut rho = BTreeMap::new();
        for (x, a, y, v) in &file.rho {
            let key = (x.resolve(labels)?, a.resolve(labels)?, y.resolve(labels)?);
            if rho.insert(key, v.value()).is_some() {
                return Err(structural(format!("duplicate ρ entry {key:?}")));
            }
        }
        Self::from_scalars(cd, alg, &support, &rho)
    }

    pub fn to_file(&self) -> Result<ModuleFile> {
        if !self.is_multiplicity_free() {
            return Err(Error::Multiplicity("module file format is multiplicity-free".into()));
        }
        Ok(ModuleFile {
            format: 1,
            support: self.support().into_iter().map(LabelRef::Index).collect(),
            rho: self
                .rho
                .iter()
                .map(|(&(x, a, y), m)| (LabelRef::Index(x), LabelRef::Index(a), LabelRef::Index(y), Numeral::from_complex(m[(0, 0)])))
                .collect(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModuleReport {
    pub associativity: AxiomResult,
    pub unit: AxiomResult,
}

impl ModuleReport {
    pub fn pass(&self) -> bool {
        self.associativity.pass && self.unit.pass
    }
}

fn vdag(cd: &CategoryData, a: usize, b: usize, c: usize) -> MorphismValue {
    vertex(&cd.ring, a, b, c).expect("admissible").dagger()
}

fn check_shape(cd: &CategoryData, x: &ModuleObject) -> Result<()> {
    if x.mult.len() != cd.rank() {
        return Err(structural("module multiplicity vector does not match the rank"));
    }
    for (&(a, b, c), m) in &x.rho {
        if m.shape() != (x.mult[c], x.mult[a]) || cd.ring.n(a, b, c) == 0 {
            return Err(structural(format!("ρ block ({a},{b},{c}) is inadmissible or misshapen")));
        }
    }
    Ok(())
}

/// Sums `Σ_k d_k · w_k` over weighted component diagrams; `None` when there are no terms.
fn weighted(terms: &[(MorphismValue, C64)]) -> Option<MorphismValue> {
    let mut it = terms.iter();
    let (d, w) = it.next()?;
    let mut acc = d.scale(*w);
    for (d, w) in it {
        acc = acc.add(&d.scale(*w)).expect("same type");
    }
    Some(acc)
}

/// Checks `ρ(ρ⊗1) = ρ(1⊗m)` and `ρ(1⊗i) = 1` componentwise by evaluating the
/// vertex diagrams of each channel.
pub fn verify_module(cd: &CategoryData, alg: &AlgebraObject, x: &ModuleObject) -> Result<ModuleReport> {
    cd.require_f()?;
    check_shape(cd, x)?;
    for &(_, a, _) in x.rho.keys() {
        if !alg.contains(a) {
            return Err(structural(format!("ρ acts by {} outside the algebra", cd.label(a))));
        }
    }
    let ev = Evaluator::new(cd);
    let supp = x.support();
    let inside = |y: usize| x.mult[y] > 0;
    let mut assoc = 0.0f64;
    for &s in &supp {
        for &a in &alg.support {
            for &b in &alg.support {
                for &z in &supp {
                    let lhs: Vec<(MorphismValue, DMatrix<C64>)> = cd
                        .fuse(s, a)
                        .iter()
                        .filter(|&&e| inside(e) && cd.ring.n(e, b, z) > 0)
                        .map(|&e| {
                            let d = vdag(cd, e, b, z).compose(&ev.tensor(&vdag(cd, s, a, e), &ev.identity(&[b])).unwrap()).unwrap();
                            (d, x.block(e, b, z) * x.block(s, a, e))
                        })
                        .collect();
                    let rhs: Vec<(MorphismValue, DMatrix<C64>)> = cd
                        .fuse(a, b)
                        .iter()
                        .filter(|&&f| alg.contains(f) && cd.ring.n(s, f, z) > 0)
                        .map(|&f| {
                            let d = vdag(cd, s, f, z).compose(&ev.tensor(&ev.identity(&[s]), &vdag(cd, a, b, f)).unwrap()).unwrap();
                            (d.scale(alg.mu(a, b, f)), x.block(s, f, z))
                        })
                        .collect();
                    if lhs.is_empty() && rhs.is_empty() {
                        continue;
                    }
                    for k in 0..x.mult[z] {
                        for i in 0..x.mult[s] {
                            let l: Vec<_> = lhs.iter().map(|(d, m)| (d.clone(), m[(k, i)])).collect();
                            let r: Vec<_> = rhs.iter().map(|(d, m)| (d.clone(), m[(k, i)])).collect();
                            let zero = || MorphismValue::zero(&cd.ring, vec![s, a, b], vec![z]);
                            let (l, r) = (weighted(&l).unwrap_or_else(zero), weighted(&r).unwrap_or_else(zero));
                            assoc = assoc.max(l.max_abs_diff(&r)?);
                        }
                    }
                }
            }
        }
    }
    let unit = MorphismValue::from_block(&cd.ring, vec![], vec![0], 0, DMatrix::from_element(1, 1, ONE))?;
    let mut unital = 0.0f64;
    for &s in &supp {
        let d = vdag(cd, s, 0, s).compose(&ev.tensor(&ev.identity(&[s]), &unit)?)?;
        let a = x.block(s, 0, s);
        for k in 0..x.mult[s] {
            for i in 0..x.mult[s] {
                let want = if k == i { ev.identity(&[s]) } else { MorphismValue::zero(&cd.ring, vec![s], vec![s]) };
                unital = unital.max(d.scale(a[(k, i)]).max_abs_diff(&want)?);
            }
        }
    }
    Ok(ModuleReport {
        associativity: AxiomResult::new(assoc, cd.tolerance),
        unit: AxiomResult::new(unital, cd.tolerance),
    })
}

/// Whether `ρ ∘ (c_{A,X} c_{X,A}) = ρ`, with the largest residual over channels.
pub fn is_local(cd: &CategoryData, alg: &AlgebraObject, x: &ModuleObject) -> Result<(bool, f64)> {
    cd.braiding()?;
    check_shape(cd, x)?;
    let ev = Evaluator::new(cd);
    let mut worst = 0.0f64;
    for (&(s, a, y), m) in &x.rho {
        if !alg.contains(a) {
            return Err(structural(format!("ρ acts by {} outside the algebra", cd.label(a))));
        }
        let plain = vdag(cd, s, a, y);
        let twisted = plain.compose(&ev.braid(a, s, false)?)?.compose(&ev.braid(s, a, false)?)?;
        worst = worst.max(max_abs(m) * twisted.max_abs_diff(&plain)?);
    }
    Ok((worst <= cd.tolerance, worst))
}

/// A basis of `Hom_A(X, Y)`; each element lists `T_y : W^X_y → W^Y_y` for every label.
pub fn intertwiners(cd: &CategoryData, alg: &AlgebraObject, x: &ModuleObject, y: &ModuleObject, tol: f64) -> Vec<Vec<DMatrix<C64>>> {
    let r = cd.rank();
    let mut offset = vec![0usize; r + 1];
    for c in 0..r {
        offset[c + 1] = offset[c] + x.mult[c] * y.mult[c];
    }
    let n = offset[r];
    if n == 0 {
        return Vec::new();
    }
    let var = |c: usize, p: usize, q: usize| offset[c] + p * x.mult[c] + q;
    let mut rows: Vec<Vec<(usize, C64)>> = Vec::new();
    for s in 0..r {
        for &b in &alg.support {
            for &t in cd.fuse(s, b) {
                if x.mult[s] + y.mult[s] == 0 || x.mult[t] + y.mult[t] == 0 {
                    continue;
                }
                let (ax, ay) = (x.block(s, b, t), y.block(s, b, t));
                // (T_t A_X - A_Y T_s)[p, q] for p < mult_Y[t], q < mult_X[s].
                for p in 0..y.mult[t] {
                    for q in 0..x.mult[s] {
                        let mut row = Vec::new();
                        for k in 0..x.mult[t] {
                            row.push((var(t, p, k), ax[(k, q)]));
                        }
                        for k in 0..y.mult[s] {
                            row.push((var(s, k, q), -ay[(p, k)]));
                        }
                        rows.push(row);
                    }
                }
            }
        }
    }
    let mut m = DMatrix::zeros(rows.len(), n);
    for (i, row) in rows.iter().enumerate() {
        for &(j, v) in row {
            m[(i, j)] += v;
        }
    }
    nullspace(&m, tol)
        .into_iter()
        .map(|v| (0..r).map(|c| DMatrix::from_fn(y.mult[c], x.mult[c], |p, q| v[var(c, p, q)])).collect())
        .collect()
}

pub fn isomorphic(cd: &CategoryData, alg: &AlgebraObject, x: &ModuleObject, y: &ModuleObject, tol: f64) -> bool {
    x.mult == y.mult && !intertwiners(cd, alg, x, y, tol).is_empty()
}

/// Restricts `x` to the submodule spanned by the orthonormal columns `u[c]`.
fn restrict(x: &ModuleObject, u: &[DMatrix<C64>]) -> ModuleObject {
    let mult: Vec<usize> = u.iter().map(|m| m.ncols()).collect();
    let rho = x
        .rho
        .iter()
        .filter(|(&(s, _, t), _)| mult[s] > 0 && mult[t] > 0)
        .map(|(&k, m)| (k, u[k.2].adjoint() * m * &u[k.0]))
        .collect();
    ModuleObject { mult, rho }
}

/// Splits `x` into simple summands using spectral projections of seeded random
/// Hermitian elements of `End_A(X)`.
pub fn decompose_module(cd: &CategoryData, alg: &AlgebraObject, x: &ModuleObject, rng: &mut ChaCha8Rng, tol: f64) -> Result<Vec<ModuleObject>> {
    if x.mult.iter().all(|&m| m == 0) {
        return Ok(Vec::new());
    }
    let end = intertwiners(cd, alg, x, x, tol);
    if end.len() <= 1 {
        return Ok(vec![x.clone()]);
    }
    for _ in 0..8 {
        let coeffs: Vec<f64> = end.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
        let h: Vec<DMatrix<C64>> = (0..cd.rank())
            .map(|c| {
                let mut s = DMatrix::zeros(x.mult[c], x.mult[c]);
                for (t, &w) in end.iter().zip(&coeffs) {
                    s += (&t[c] + t[c].adjoint()) * C64::new(w, 0.0);
                }
                s
            })
            .collect();
        let mut values = Vec::new();
        let mut owners = Vec::new();
        let mut eigs = Vec::new();
        for (c, hc) in h.iter().enumerate() {
            if hc.nrows() == 0 {
                eigs.push(None);
                continue;
            }
            let (vals, vecs) = crate::linalg::hermitian_eigen(hc);
            for (k, &v) in vals.iter().enumerate() {
                values.push(v);
                owners.push((c, k));
            }
            eigs.push(Some(vecs));
        }
        let groups = clusters(&values, tol);
        if groups.len() <= 1 {
            continue;
        }
        let mut pieces = Vec::new();
        for g in groups {
            let mut cols: Vec<Vec<usize>> = vec![Vec::new(); cd.rank()];
            for &i in &g {
                let (c, k) = owners[i];
                cols[c].push(k);
            }
            let u: Vec<DMatrix<C64>> = (0..cd.rank())
                .map(|c| match &eigs[c] {
                    Some(v) => DMatrix::from_fn(v.nrows(), cols[c].len(), |r, j| v[(r, cols[c][j])]),
                    None => DMatrix::zeros(0, 0),
                })
                .collect();
            let sub = restrict(x, &u);
            pieces.extend(decompose_module(cd, alg, &sub, rng, tol)?);
        }
        return Ok(pieces);
    }
    Err(Error::NonConvergence(format!(
        "End_A(X) has dimension {} but no spectral split was found",
        end.len()
    )))
}

/// Every simple right `A`-module up to isomorphism, each found inside a free module `x ⊗ A`.
pub fn simple_modules(cd: &CategoryData, alg: &AlgebraObject, seed: u64, tol: f64) -> Result<Vec<ModuleObject>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<ModuleObject> = Vec::new();
    for x in 0..cd.rank() {
        let free = ModuleObject::free(cd, alg, x)?;
        for piece in decompose_module(cd, alg, &free, &mut rng, tol)? {
            if !found.iter().any(|m| isomorphic(cd, alg, m, &piece, tol)) {
                found.push(piece);
            }
        }
    }
    Ok(found)
}

#[derive(Clone, Debug)]
pub struct CondensedData {
    /// Simple local modules; index 0 is `A` itself.
    pub simples: Vec<ModuleObject>,
    pub ring: Option<FusionRing>,
    pub dims_over_q: Vec<f64>,
}

fn require_condensable(cd: &CategoryData, alg: &AlgebraObject) -> Result<()> {
    if !is_connected(alg) {
        return Err(precondition("algebra is not connected"));
    }
    let rep = verify_qsystem(cd, alg)?;
    if !rep.pass() {
        return Err(precondition(format!("algebra fails the Q-system axioms: {rep:?}")));
    }
    let (comm, res) = is_commutative(cd, alg)?;
    if !comm {
        return Err(precondition(format!("algebra is not commutative (residual {res:.3e})")));
    }
    Ok(())
}

pub fn enumerate_local_modules(cd: &CategoryData, alg: &AlgebraObject) -> Result<CondensedData> {
    enumerate_local_modules_with(cd, alg, 0, DEDUP_TOL)
}

/// Simple local modules, sorted with `A` first and then by the lowest labels
/// of their underlying objects, together with the fusion ring of `C_A^loc`.
pub fn enumerate_local_modules_with(cd: &CategoryData, alg: &AlgebraObject, seed: u64, tol: f64) -> Result<CondensedData> {
    require_condensable(cd, alg)?;
    let mut simples = Vec::new();
    for m in simple_modules(cd, alg, seed, tol)? {
        if is_local(cd, alg, &m)?.0 {
            simples.push(m);
        }
    }
    let regular = ModuleObject::regular(cd, alg);
    simples.sort_by_cached_key(|m| (!isomorphic(cd, alg, m, &regular, tol), std::cmp::Reverse(m.mult.clone())));
    let dq = algebra_dim(cd, alg);
    let dims_over_q = simples.iter().map(|m| m.dim(cd) / dq).collect();
    let mut out = CondensedData {
        simples,
        ring: None,
        dims_over_q,
    };
    out.ring = condensed_ring(cd, alg, &out.simples, seed, tol).ok();
    Ok(out)
}

fn condensed_ring(cd: &CategoryData, alg: &AlgebraObject, simples: &[ModuleObject], seed: u64, tol: f64) -> Result<FusionRing> {
    let n = simples.len();
    let mut dense = vec![vec![vec![0i64; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let counts = local_fusion_seeded(cd, alg, simples, &simples[i], &simples[j], seed, tol)?;
            for (k, &c) in counts.iter().enumerate() {
                dense[i][j][k] = c as i64;
            }
        }
    }
    let dual = (0..n)
        .map(|i| (0..n).find(|&j| dense[i][j][0] == 1).ok_or_else(|| Error::Validation(format!("local module {i} has no dual"))))
        .collect::<Result<Vec<_>>>()?;
    let labels = (0..n).map(|i| format!("X{i}")).collect();
    FusionRing::from_dense(labels, dual, &dense)
}

/// `X ⊗ Y` as a right module through `1_X ⊗ ρ_Y`, with the basis of `W_z` listed in `basis[z]`.
fn tensor_module(cd: &CategoryData, alg: &AlgebraObject, x: &ModuleObject, y: &ModuleObject) -> (ModuleObject, Vec<Vec<(usize, usize, usize, usize)>>) {
    let r = cd.rank();
    let mut basis: Vec<Vec<(usize, usize, usize, usize)>> = vec![Vec::new(); r];
    for s in x.support() {
        for t in y.support() {
            for &z in cd.fuse(s, t) {
                for i in 0..x.mult[s] {
                    for j in 0..y.mult[t] {
                        basis[z].push((s, i, t, j));
                    }
                }
            }
        }
    }
    let index: Vec<BTreeMap<(usize, usize, usize, usize), usize>> =
        basis.iter().map(|b| b.iter().enumerate().map(|(k, &v)| (v, k)).collect()).collect();
    let mult: Vec<usize> = basis.iter().map(Vec::len).collect();
    let mut rho = BTreeMap::new();
    for z in (0..r).filter(|&z| mult[z] > 0) {
        for &a in &alg.support {
            for &zp in cd.fuse(z, a).iter().filter(|&&zp| mult[zp] > 0) {
                let mut m = DMatrix::zeros(mult[zp], mult[z]);
                for (col, &(s, i, t, j)) in basis[z].iter().enumerate() {
                    for &f in cd.fuse(t, a).iter().filter(|&&f| y.mult[f] > 0 && cd.ring.n(s, f, zp) > 0) {
                        let fs = cd.f.get(s, t, a, zp, z, f).unwrap_or(ZERO);
                        let ay = y.block(t, a, f);
                        for jp in 0..y.mult[f] {
                            let row = index[zp][&(s, i, f, jp)];
                            m[(row, col)] += fs * ay[(jp, j)];
                        }
                    }
                }
                rho.insert((z, a, zp), m);
            }
        }
    }
    (ModuleObject { mult, rho }, basis)
}

/// The summand `X ⊗_A Y` of `X ⊗ Y`, cut out by the projector
/// `p = d_A^{-1} (ρ_X ⊗ ρ_Y c_{A,Y})(1 ⊗ m†i ⊗ 1)`.
pub fn relative_tensor(cd: &CategoryData, alg: &AlgebraObject, x: &ModuleObject, y: &ModuleObject) -> Result<ModuleObject> {
    cd.require_f()?;
    cd.braiding()?;
    let ev = Evaluator::new(cd);
    let (xy, basis) = tensor_module(cd, alg, x, y);
    let r = cd.rank();
    let dq = algebra_dim(cd, alg);
    let mut p: Vec<DMatrix<C64>> = (0..r).map(|z| DMatrix::zeros(xy.mult[z], xy.mult[z])).collect();
    let mut cache: BTreeMap<(usize, usize, usize, usize, usize), MorphismValue> = BTreeMap::new();
    for z in 0..r {
        for (col, &(s, i, t, j)) in basis[z].iter().enumerate() {
            for (row, &(sp, ip, tp, jp)) in basis[z].iter().enumerate() {
                let mut acc = ZERO;
                for &a in &alg.support {
                    let ad = cd.ring.dual(a);
                    if cd.ring.n(s, a, sp) == 0 || cd.ring.n(t, ad, tp) == 0 {
                        continue;
                    }
                    let w = alg.mu(a, ad, 0).conj() * x.block(s, a, sp)[(ip, i)] * y.block(t, ad, tp)[(jp, j)];
                    if w == ZERO {
                        continue;
                    }
                    let key = (s, a, t, sp, tp);
                    if !cache.contains_key(&key) {
                        let cup = ev.cup(a).scale(C64::new(1.0 / cd.dim(a).sqrt(), 0.0));
                        let inner = ev.tensor(&ev.tensor(&ev.identity(&[s]), &cup)?, &ev.identity(&[t]))?;
                        let left_act = vdag(cd, t, ad, tp).compose(&ev.braid(ad, t, false)?)?;
                        let outer = ev.tensor(&vdag(cd, s, a, sp), &left_act)?;
                        cache.insert(key, outer.compose(&inner)?);
                    }
                    acc += w * cache[&key].blocks[z][(0, 0)];
                }
                p[z][(row, col)] = acc / dq;
            }
        }
    }
    let mut u = Vec::with_capacity(r);
    for pz in &p {
        let sq = pz * pz - pz;
        if max_abs(&sq) > 1e-6 {
            return Err(Error::NonConvergence(format!("relative tensor projector is not idempotent (residual {:.3e})", max_abs(&sq))));
        }
        u.push(range(pz, 0.5));
    }
    Ok(restrict(&xy, &u))
}

pub fn local_fusion(cd: &CategoryData, alg: &AlgebraObject, simples: &[ModuleObject], x: &ModuleObject, y: &ModuleObject) -> Result<Vec<usize>> {
    local_fusion_seeded(cd, alg, simples, x, y, 0, DEDUP_TOL)
}

/// Multiplicities of each of `simples` in `X ⊗_A Y`.
pub fn local_fusion_seeded(
    cd: &CategoryData,
    alg: &AlgebraObject,
    simples: &[ModuleObject],
    x: &ModuleObject,
    y: &ModuleObject,
    seed: u64,
    tol: f64,
) -> Result<Vec<usize>> {
    let prod = relative_tensor(cd, alg, x, y)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0usize; simples.len()];
    for piece in decompose_module(cd, alg, &prod, &mut rng, tol)? {
        match simples.iter().position(|s| isomorphic(cd, alg, s, &piece, tol)) {
            Some(k) => counts[k] += 1,
            None => {
                return Err(Error::Validation(format!(
                    "summand with underlying multiplicities {:?} matches no listed simple",
                    piece.mult
                )))
            }
        }
    }
    Ok(counts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CondensationReport {
    /// `Σ_X FPdim(X)²` over simple local modules.
    pub lhs: f64,
    /// `global_dim(C)`.
    pub rhs: f64,
    pub identity_holds: bool,
    pub lagrangian: bool,
    pub simple_count: usize,
    pub pass: bool,
}

pub fn condensation_identity_check(cd: &CategoryData, alg: &AlgebraObject) -> Result<CondensationReport> {
    if !is_nondegenerate(cd)? {
        return Err(precondition("condensation identity needs a nondegenerate braiding"));
    }
    let data = enumerate_local_modules(cd, alg)?;
    Ok(condensation_report(cd, alg, &data))
}

pub fn condensation_report(cd: &CategoryData, alg: &AlgebraObject, data: &CondensedData) -> CondensationReport {
    let lhs: f64 = data.simples.iter().map(|m| m.dim(cd).powi(2)).sum();
    let rhs = cd.global_dim();
    let identity_holds = (lhs - rhs).abs() <= 1e-6 * rhs.max(1.0);
    let dq = algebra_dim(cd, alg);
    let lagrangian = (dq * dq - rhs).abs() <= 1e-6 * rhs.max(1.0);
    let simple_count = data.simples.len();
    CondensationReport {
        lhs,
        rhs,
        identity_holds,
        lagrangian,
        simple_count,
        pass: identity_holds && (!lagrangian || simple_count == 1),
    }
}
