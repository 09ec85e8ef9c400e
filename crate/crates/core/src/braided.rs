//! Twists, the unnormalized S-matrix, fusion characters and Müger centralizers.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::category::CategoryData;
use crate::error::{precondition, Result};
use crate::fusion_ring::{hypergroup_coeffs, FusionRing};
use crate::numeral::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct TwistData {
    pub theta: Vec<C64>,
}

/// `θ_a = Σ_c (d_c/d_a) R^{aa}_c`.
pub fn twists(cd: &CategoryData) -> Result<TwistData> {
    let rs = cd.braiding()?;
    let theta = (0..cd.rank())
        .map(|a| {
            cd.fuse(a, a)
                .iter()
                .map(|&c| rs.get(a, a, c).expect("channel") * (cd.dim(c) / cd.dim(a)))
                .sum()
        })
        .collect();
    Ok(TwistData { theta })
}

/// `s̃_{ab} = Σ_c N^c_{ab} (θ_c / θ_a θ_b) d_c`.
#[derive(Clone, Debug, PartialEq)]
pub struct SMatrix {
    pub s: DMatrix<C64>,
}

impl SMatrix {
    pub fn get(&self, a: usize, b: usize) -> C64 {
        self.s[(a, b)]
    }

    /// `S = s̃ / √D`.
    pub fn normalized(&self, global_dim: f64) -> DMatrix<C64> {
        &self.s / C64::new(global_dim.sqrt(), 0.0)
    }

    pub fn minor(&self, labels: &[usize]) -> DMatrix<C64> {
        DMatrix::from_fn(labels.len(), labels.len(), |i, j| self.s[(labels[i], labels[j])])
    }
}

pub fn s_matrix(cd: &CategoryData) -> Result<SMatrix> {
    let th = twists(cd)?.theta;
    let r = cd.rank();
    let s = DMatrix::from_fn(r, r, |a, b| {
        cd.fuse(a, b)
            .iter()
            .map(|&c| th[c] / (th[a] * th[b]) * cd.dim(c))
            .sum()
    });
    Ok(SMatrix { s })
}

/// `T = diag(θ_a)`.
pub fn t_matrix(cd: &CategoryData) -> Result<DMatrix<C64>> {
    Ok(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(twists(cd)?.theta)))
}

/// `Γ[a][b] = γ_a(b) = s̃_{ab} / d_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterTable {
    pub gamma: DMatrix<C64>,
}

impl CharacterTable {
    pub fn get(&self, a: usize, b: usize) -> C64 {
        self.gamma[(a, b)]
    }

    /// Largest residual of `γ_a(b)γ_a(c) = Σ_d N^d_{bc} γ_a(d)`.
    pub fn character_law_residual(&self, ring: &FusionRing) -> f64 {
        let r = ring.rank();
        let mut worst = 0.0f64;
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    let rhs: C64 = ring.fuse(b, c).iter().map(|&d| self.get(a, d)).sum();
                    worst = worst.max((self.get(a, b) * self.get(a, c) - rhs).norm());
                }
            }
        }
        worst
    }

    /// Largest residual of `γ_a(c)γ_b(c)/d_c = Σ_e (d_e/(d_a d_b)) N^e_{ab} γ_e(c)`.
    pub fn product_expansion_residual(&self, cd: &CategoryData) -> f64 {
        let r = cd.rank();
        let mut worst = 0.0f64;
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    let lhs = self.get(a, c) * self.get(b, c) / cd.dim(c);
                    let rhs: C64 = cd
                        .fuse(a, b)
                        .iter()
                        .map(|&e| self.get(e, c) * (cd.dim(e) / (cd.dim(a) * cd.dim(b))))
                        .sum();
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }
}

pub fn gamma_characters(cd: &CategoryData) -> Result<CharacterTable> {
    let s = s_matrix(cd)?;
    let r = cd.rank();
    Ok(CharacterTable {
        gamma: DMatrix::from_fn(r, r, |a, b| s.get(a, b) / cd.dim(a)),
    })
}

fn smallest_singular_value(m: DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return f64::INFINITY;
    }
    crate::linalg::singular_values(&m).iter().copied().fold(f64::INFINITY, f64::min)
}

/// True iff `s̃` is invertible (smallest singular value above `rank · tolerance`).
pub fn is_nondegenerate(cd: &CategoryData) -> Result<bool> {
    let s = s_matrix(cd)?;
    Ok(smallest_singular_value(s.s) > cd.rank() as f64 * cd.tolerance)
}

/// Whether the restriction of `s̃` to `sub` is invertible.
pub fn is_nondegenerate_on(cd: &CategoryData, sub: &[usize]) -> Result<bool> {
    let s = s_matrix(cd)?;
    Ok(smallest_singular_value(s.minor(sub)) > sub.len() as f64 * cd.tolerance)
}

/// `{ a : s̃_{ax} = d_a d_x for all x ∈ sub }`.
pub fn muger_centralizer(cd: &CategoryData, sub: &[usize]) -> Result<Vec<usize>> {
    let s = s_matrix(cd)?;
    check_labels(cd, sub)?;
    Ok((0..cd.rank())
        .filter(|&a| {
            sub.iter()
                .all(|&x| (s.get(a, x) - C64::new(cd.dim(a) * cd.dim(x), 0.0)).norm() < cd.tolerance)
        })
        .collect())
}

fn check_labels(cd: &CategoryData, sub: &[usize]) -> Result<()> {
    if let Some(&a) = sub.iter().find(|&&a| a >= cd.rank()) {
        return Err(precondition(format!("label {a} out of range")));
    }
    Ok(())
}

/// Checks that `sub` contains the unit and is closed under fusion and duals.
pub fn check_subcategory(ring: &FusionRing, sub: &[usize]) -> Result<()> {
    let inside = |x: usize| sub.contains(&x);
    if let Some(&a) = sub.iter().find(|&&a| a >= ring.rank()) {
        return Err(precondition(format!("label {a} out of range")));
    }
    if !inside(0) {
        return Err(precondition("subcategory must contain the unit"));
    }
    for &a in sub {
        if !inside(ring.dual(a)) {
            return Err(precondition(format!("not closed under duals: {}", ring.label(a))));
        }
        for &b in sub {
            if let Some(&c) = ring.fuse(a, b).iter().find(|&&c| !inside(c)) {
                return Err(precondition(format!(
                    "not fusion-closed: {} ⊗ {} contains {}",
                    ring.label(a),
                    ring.label(b),
                    ring.label(c)
                )));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubcategoryRestriction {
    pub sub: Vec<usize>,
    /// `f[b]` for every label `b` of the ambient category.
    pub f: Vec<usize>,
}

/// The map `f : Irr(C) → sub` with `γ_b|_sub = γ_{f(b)}|_sub`.
pub fn restriction_hom(cd: &CategoryData, sub: &[usize]) -> Result<SubcategoryRestriction> {
    check_subcategory(&cd.ring, sub)?;
    let mut sub = sub.to_vec();
    sub.sort_unstable();
    sub.dedup();
    if !is_nondegenerate_on(cd, &sub)? {
        return Err(precondition("the braiding restricted to the subcategory is degenerate"));
    }
    let g = gamma_characters(cd)?;
    let tol = cd.tolerance;
    let mut f = Vec::with_capacity(cd.rank());
    for b in 0..cd.rank() {
        let matches: Vec<usize> = sub
            .iter()
            .copied()
            .filter(|&y| sub.iter().all(|&x| (g.get(b, x) - g.get(y, x)).norm() < tol))
            .collect();
        match matches.as_slice() {
            [y] => f.push(*y),
            [] => {
                return Err(precondition(format!(
                    "no label of the subcategory matches the character of {}",
                    cd.label(b)
                )))
            }
            _ => {
                return Err(precondition(format!(
                    "character of {} matches several subcategory labels",
                    cd.label(b)
                )))
            }
        }
    }
    Ok(SubcategoryRestriction { sub, f })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomViolation {
    pub a: usize,
    pub b: usize,
    pub y: usize,
    pub residual: f64,
}

/// Checks `Σ_{c ∈ f⁻¹(y)} M^c_{ab} = M^y_{f(a) f(b)}` for all `a, b` and `y ∈ sub`.
pub fn verify_hypergroup_hom(cd: &CategoryData, sr: &SubcategoryRestriction) -> Vec<HomViolation> {
    let m = hypergroup_coeffs(&cd.ring, &cd.dims);
    let r = cd.rank();
    let mut out = Vec::new();
    for a in 0..r {
        for b in 0..r {
            for &y in &sr.sub {
                let lhs: f64 = (0..r).filter(|&c| sr.f[c] == y).map(|c| m.coeff(a, b, c)).sum();
                let rhs = m.coeff(sr.f[a], sr.f[b], y);
                let residual = (lhs - rhs).abs();
                if residual > cd.tolerance {
                    out.push(HomViolation { a, b, y, residual });
                }
            }
        }
    }
    out
}

/// The least label outside `sub` that centralizes it, if any.
pub fn find_centralizing_object(cd: &CategoryData, sub: &[usize]) -> Result<Option<usize>> {
    check_subcategory(&cd.ring, sub)?;
    if sub.len() >= cd.rank() {
        return Err(precondition("subcategory must be proper"));
    }
    if !is_nondegenerate_on(cd, sub)? {
        return Err(precondition("the braiding restricted to the subcategory is degenerate"));
    }
    Ok(muger_centralizer(cd, sub)?.into_iter().find(|a| !sub.contains(a)))
}
