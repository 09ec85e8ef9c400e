use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::category::CategoryData;
use crate::diagram::{Evaluator, MorphismValue};
use crate::error::Result;
use crate::numeral::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// The tube element `V^{ya}_w (V^{ax}_w)† : a ⊗ x → y ⊗ a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TubeIndex {
    pub x: usize,
    pub a: usize,
    pub y: usize,
    pub w: usize,
}

pub type Sparse = Vec<(usize, C64)>;

/// The tube algebra `⊕_{a,x,y} Hom(a⊗x, y⊗a)` with product
/// `S·T = Σ_c (1 ⊗ V^{ba†}_c)(S ⊗ 1)(1 ⊗ T)(V^{ba}_c ⊗ 1)` for `T` of loop `a` and `S` of loop `b`.
#[derive(Clone, Debug)]
pub struct TubeAlgebra {
    pub basis: Vec<TubeIndex>,
    index: HashMap<TubeIndex, usize>,
    /// `structure[(i, j)]` expands `T_i · T_j` (nonzero only when `T_i` starts where `T_j` ends).
    pub structure: BTreeMap<(usize, usize), Sparse>,
    /// Expansion of `T_i^*`.
    pub star: Vec<Sparse>,
}

fn tube_morphism(cd: &CategoryData, t: TubeIndex) -> MorphismValue {
    MorphismValue::from_block(&cd.ring, vec![t.a, t.x], vec![t.y, t.a], t.w, DMatrix::from_element(1, 1, ONE)).expect("1×1 block")
}

fn vertex(cd: &CategoryData, a: usize, b: usize, c: usize) -> MorphismValue {
    crate::diagram::vertex(&cd.ring, a, b, c).expect("admissible")
}

impl TubeAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, t: TubeIndex) -> Option<usize> {
        self.index.get(&t).copied()
    }

    /// The unit `p_x` of the corner at `x`.
    pub fn corner_unit(&self, x: usize) -> DVector<C64> {
        let mut v = DVector::zeros(self.dim());
        v[self.index[&TubeIndex { x, a: 0, y: x, w: x }]] = ONE;
        v
    }

    pub fn one(&self, rank: usize) -> DVector<C64> {
        (0..rank).map(|x| self.corner_unit(x)).fold(DVector::zeros(self.dim()), |a, b| a + b)
    }

    /// `Σ_w T(x, x, x, w)`: the identity of `x ⊗ x` read as a tube around `x`.
    pub fn rotation(&self, cd: &CategoryData, x: usize) -> DVector<C64> {
        let mut v = DVector::zeros(self.dim());
        for &w in cd.fuse(x, x) {
            v[self.index[&TubeIndex { x, a: x, y: x, w }]] = ONE;
        }
        v
    }

    pub fn mul(&self, u: &DVector<C64>, v: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(self.dim());
        for (&(i, j), terms) in &self.structure {
            let c = u[i] * v[j];
            if c == ZERO {
                continue;
            }
            for &(k, z) in terms {
                out[k] += c * z;
            }
        }
        out
    }

    pub fn star_of(&self, u: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(self.dim());
        for (i, terms) in self.star.iter().enumerate() {
            if u[i] == ZERO {
                continue;
            }
            for &(k, z) in terms {
                out[k] += u[i].conj() * z;
            }
        }
        out
    }

    /// Matrix of `v ↦ u·v`.
    pub fn left_matrix(&self, u: &DVector<C64>) -> DMatrix<C64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (&(i, j), terms) in &self.structure {
            if u[i] == ZERO {
                continue;
            }
            for &(k, z) in terms {
                m[(k, j)] += u[i] * z;
            }
        }
        m
    }

    /// Matrix of `v ↦ v·u`.
    pub fn right_matrix(&self, u: &DVector<C64>) -> DMatrix<C64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (&(i, j), terms) in &self.structure {
            if u[j] == ZERO {
                continue;
            }
            for &(k, z) in terms {
                m[(k, i)] += u[j] * z;
            }
        }
        m
    }

    /// Largest defect of `(T_i T_j) T_k = T_i (T_j T_k)` over all basis triples.
    pub fn associativity_residual(&self) -> f64 {
        let n = self.dim();
        let e = |i: usize| DVector::from_fn(n, |k, _| if k == i { ONE } else { ZERO });
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul(&e(i), &e(j));
                for k in 0..n {
                    let l = self.mul(&ij, &e(k));
                    let r = self.mul(&e(i), &self.mul(&e(j), &e(k)));
                    worst = worst.max((l - r).camax());
                }
            }
        }
        worst
    }

    /// Largest defect of `(T_i T_j)^* = T_j^* T_i^*` and `T_i^{**} = T_i`.
    pub fn star_residual(&self) -> f64 {
        let n = self.dim();
        let e = |i: usize| DVector::from_fn(n, |k, _| if k == i { ONE } else { ZERO });
        let mut worst = 0.0f64;
        for i in 0..n {
            worst = worst.max((self.star_of(&self.star_of(&e(i))) - e(i)).camax());
            for j in 0..n {
                let l = self.star_of(&self.mul(&e(i), &e(j)));
                let r = self.mul(&self.star_of(&e(j)), &self.star_of(&e(i)));
                worst = worst.max((l - r).camax());
            }
        }
        worst
    }

    /// The trace `τ(T) = Σ_x d_x · [coefficient of p_x]`.
    pub fn trace(&self, cd: &CategoryData, u: &DVector<C64>) -> C64 {
        (0..cd.rank())
            .map(|x| u[self.index[&TubeIndex { x, a: 0, y: x, w: x }]] * cd.dim(x))
            .sum()
    }

    /// Smallest eigenvalue of the Gram matrix `τ(T_i^* T_j)`.
    pub fn trace_form_min_eigenvalue(&self, cd: &CategoryData) -> f64 {
        let n = self.dim();
        let e = |i: usize| DVector::from_fn(n, |k, _| if k == i { ONE } else { ZERO });
        let stars: Vec<_> = (0..n).map(|i| self.star_of(&e(i))).collect();
        let g = DMatrix::from_fn(n, n, |i, j| self.trace(cd, &self.mul(&stars[i], &e(j))));
        crate::linalg::hermitian_eigen(&g).0.iter().fold(f64::INFINITY, |a, &b| a.min(b))
    }
}

/// Assembles the tube algebra from F-moves through diagram evaluation.
pub fn build_tube_algebra(cd: &CategoryData) -> Result<TubeAlgebra> {
    cd.require_f()?;
    let r = cd.rank();
    let mut basis = Vec::new();
    for x in 0..r {
        for a in 0..r {
            for y in 0..r {
                for &w in cd.fuse(a, x) {
                    if cd.ring.n(y, a, w) > 0 {
                        basis.push(TubeIndex { x, a, y, w });
                    }
                }
            }
        }
    }
    let index: HashMap<TubeIndex, usize> = basis.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|i| (0..basis.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| basis[i].x == basis[j].y)
        .collect();
    let structure: Vec<((usize, usize), Sparse)> = pairs
        .par_iter()
        .map_init(
            || Evaluator::new(cd),
            |ev, &(i, j)| {
                let (s, t) = (basis[i], basis[j]);
                let (a, b, x, v) = (t.a, s.a, t.x, s.y);
                let st = ev.tensor(&tube_morphism(cd, s), &ev.identity(&[a])).unwrap();
                let tt = ev.tensor(&ev.identity(&[b]), &tube_morphism(cd, t)).unwrap();
                let mid = st.compose(&tt).unwrap();
                let mut terms = Vec::new();
                for &c in cd.fuse(b, a) {
                    let open = ev.tensor(&vertex(cd, b, a, c), &ev.identity(&[x])).unwrap();
                    let close = ev.tensor(&ev.identity(&[v]), &vertex(cd, b, a, c).dagger()).unwrap();
                    let p = close.compose(&mid).unwrap().compose(&open).unwrap();
                    for &w in cd.fuse(c, x) {
                        if cd.ring.n(v, c, w) == 0 {
                            continue;
                        }
                        let z = p.blocks[w][(0, 0)];
                        if z.norm() > 1e-14 {
                            terms.push((index[&TubeIndex { x, a: c, y: v, w }], z));
                        }
                    }
                }
                ((i, j), terms)
            },
        )
        .filter(|(_, t)| !t.is_empty())
        .collect();
    let ev = Evaluator::new(cd);
    let mut star = Vec::with_capacity(basis.len());
    for &t in &basis {
        let ad = cd.ring.dual(t.a);
        let td = tube_morphism(cd, t).dagger();
        let open = ev.tensor(&ev.identity(&[ad, t.y]), &ev.cup(t.a))?;
        let mid = ev.tensor(&ev.tensor(&ev.identity(&[ad]), &td)?, &ev.identity(&[ad]))?;
        let zigzag = ev
            .tensor(&ev.identity(&[t.a]), &ev.cap(ad))?
            .compose(&ev.tensor(&ev.cup(t.a), &ev.identity(&[t.a]))?)?
            .blocks[t.a][(0, 0)];
        let close = ev.tensor(&ev.cap(ad).scale(zigzag.inv()), &ev.identity(&[t.x, ad]))?;
        let p = close.compose(&mid)?.compose(&open)?;
        let mut terms = Vec::new();
        for &w in cd.fuse(ad, t.y) {
            if cd.ring.n(t.x, ad, w) == 0 {
                continue;
            }
            let z = p.blocks[w][(0, 0)];
            if z.norm() > 1e-14 {
                terms.push((index[&TubeIndex { x: t.y, a: ad, y: t.x, w }], z));
            }
        }
        star.push(terms);
    }
    Ok(TubeAlgebra {
        basis,
        index,
        structure: structure.into_iter().collect(),
        star,
    })
}
