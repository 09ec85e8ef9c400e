use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use super::decompose::{center_simples, CenterObject};
use super::tube::{TubeAlgebra, TubeIndex};
use crate::algebra::{is_commutative, pointed_subgroup_algebra, symmetric_enveloping, verify_qsystem, AlgebraObject};
use crate::braided::{is_nondegenerate, s_matrix, twists, SMatrix};
use crate::category::{
    deligne_product_data, pointed_from_quadratic_form, reverse_braiding, CategoryData, CategoryFile, LabelRef, QuadraticForm,
};
use crate::error::{precondition, Error, Result};
use crate::fusion_ring::FusionRing;
use crate::local_modules::enumerate_local_modules;
use crate::numeral::C64;

const MATCH_TOL: f64 = 1e-6;

/// A braided category data set equivalent to `Z(C)`, with the center simples matched to its labels.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub category: CategoryData,
    /// `label_of[i]` is the label of the `i`-th center simple.
    pub label_of: Vec<usize>,
    /// The canonical Lagrangian algebra `I(1)` inside `category`.
    pub lagrangian: Option<AlgebraObject>,
    pub description: String,
}

/// Simples of `Z(C)` with their modular data.
#[derive(Clone, Debug)]
pub struct CenterData {
    pub simples: Vec<CenterObject>,
    pub labels: Vec<String>,
    /// `s̃_{ZW} = Tr(c_{W,Z} c_{Z,W})`.
    pub s: SMatrix,
    pub t: DMatrix<C64>,
    pub presentation: Option<Presentation>,
}

impl CenterData {
    pub fn rank(&self) -> usize {
        self.simples.len()
    }

    pub fn dims(&self) -> Vec<f64> {
        self.simples.iter().map(|z| z.dim).collect()
    }

    pub fn twists(&self) -> Vec<C64> {
        self.simples.iter().map(|z| z.twist).collect()
    }

    pub fn global_dim(&self) -> f64 {
        self.simples.iter().map(|z| z.dim * z.dim).sum()
    }

    /// `S = s̃ / √D`.
    pub fn normalized_s(&self) -> DMatrix<C64> {
        self.s.normalized(self.global_dim())
    }

    /// Fusion coefficients from the Verlinde formula, rounded; `None` if they are not integral.
    pub fn verlinde_ring(&self) -> Option<FusionRing> {
        let s = self.normalized_s();
        let r = self.rank();
        let mut triples = Vec::new();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let v: C64 = (0..r).map(|l| s[(i, l)] * s[(j, l)] * s[(k, l)].conj() / s[(0, l)]).sum();
                    let n = v.re.round();
                    if (v - C64::new(n, 0.0)).norm() > MATCH_TOL || n < 0.0 {
                        return None;
                    }
                    if n > 0.0 {
                        triples.push((i, j, k, n as i64));
                    }
                }
            }
        }
        let dual: Vec<usize> = (0..r).map(|i| triples.iter().find(|t| t.0 == i && t.2 == 0).map_or(i, |t| t.1)).collect();
        FusionRing::from_triples(self.labels.clone(), dual, &triples).ok()
    }

    /// A partial category file: the fusion ring of `Z(C)` and its dimensions, with no F or R.
    pub fn to_partial_file(&self) -> Result<CategoryFile> {
        let ring = self
            .verlinde_ring()
            .ok_or_else(|| Error::NonConvergence("Verlinde coefficients of the center are not integral".into()))?;
        let idx = LabelRef::Index;
        Ok(CategoryFile {
            format: crate::category::FORMAT_VERSION,
            rank: ring.rank(),
            labels: ring.labels().to_vec(),
            unit: 0,
            dual: ring.duals().iter().map(|&d| idx(d)).collect(),
            N: ring
                .triples()
                .into_iter()
                .map(|(a, b, c, n)| (idx(a), idx(b), idx(c), n as i64))
                .collect(),
            dims_hint: Some(self.dims()),
            F: Vec::new(),
            R: None,
            tolerance: crate::category::DEFAULT_TOLERANCE,
            partial: true,
        })
    }
}

fn character(z: &CenterObject, t: TubeIndex) -> C64 {
    z.half_braiding.get(&t).map_or(C64::new(0.0, 0.0), |m| m.trace())
}

/// `θ_Z = d_Z^{-1} Σ_{x,w} d_w χ_Z(T(x,x,x,w))`, the normalized trace of `c_{Z,Z}`.
pub fn self_braiding_twist(cd: &CategoryData, z: &CenterObject) -> C64 {
    let mut sum = C64::new(0.0, 0.0);
    for x in (0..cd.rank()).filter(|&x| z.underlying[x] > 0) {
        for &w in cd.fuse(x, x) {
            sum += character(z, TubeIndex { x, a: x, y: x, w }) * cd.dim(w);
        }
    }
    sum / z.dim
}

/// `s̃_{ZW} = Σ_{x,y,w} d_w χ_Z(T(x,y,x,w)) χ_W(T(y,x,y,w))`, with `χ` the trace of a half-braiding component.
pub fn center_s_matrix(cd: &CategoryData, simples: &[CenterObject]) -> SMatrix {
    let n = simples.len();
    let r = cd.rank();
    let s = DMatrix::from_fn(n, n, |i, j| {
        let (z, u) = (&simples[i], &simples[j]);
        let mut sum = C64::new(0.0, 0.0);
        for x in (0..r).filter(|&x| z.underlying[x] > 0) {
            for y in (0..r).filter(|&y| u.underlying[y] > 0) {
                for &w in cd.fuse(x, y) {
                    sum += character(z, TubeIndex { x, a: y, y: x, w }) * character(u, TubeIndex { x: y, a: x, y, w }) * cd.dim(w);
                }
            }
        }
        sum
    });
    SMatrix { s }
}

/// The center of `cd` from its tube algebra.
pub fn decompose_center(cd: &CategoryData, tube: &TubeAlgebra, seed: u64) -> Result<CenterData> {
    let simples = center_simples(cd, tube, seed)?;
    let s = center_s_matrix(cd, &simples);
    let t = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(simples.len(), simples.iter().map(|z| z.twist)));
    let presentation = find_presentation(cd, &simples, &s)?;
    let labels = match &presentation {
        Some(p) => p.label_of.iter().map(|&l| p.category.label(l).to_string()).collect(),
        None => (0..simples.len()).map(|i| format!("Z{i}")).collect(),
    };
    Ok(CenterData {
        simples,
        labels,
        s,
        t,
        presentation,
    })
}

struct Candidate {
    category: CategoryData,
    underlying: Vec<Vec<usize>>,
    description: String,
    lagrangian: Box<dyn Fn(&CategoryData) -> Option<AlgebraObject>>,
}

/// Assigns presentation labels to center simples so that underlying objects, twists and `s̃` agree.
fn match_labels(simples: &[CenterObject], s: &SMatrix, cand: &Candidate) -> Result<Option<Vec<usize>>> {
    let n = simples.len();
    if cand.category.rank() != n {
        return Ok(None);
    }
    let th = twists(&cand.category)?.theta;
    let ps = s_matrix(&cand.category)?;
    let scale = cand.category.global_dim();
    let options: Vec<Vec<usize>> = simples
        .iter()
        .map(|z| {
            (0..n)
                .filter(|&p| cand.underlying[p] == z.underlying && (th[p] - z.twist).norm() < MATCH_TOL)
                .collect()
        })
        .collect();
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(i: usize, opts: &[Vec<usize>], s: &SMatrix, ps: &SMatrix, tol: f64, assign: &mut [usize], used: &mut [bool]) -> bool {
        if i == opts.len() {
            return true;
        }
        for &p in &opts[i] {
            let clash = (0..i).any(|j| (s.get(i, j) - ps.get(p, assign[j])).norm() > tol);
            if used[p] || clash || (s.get(i, i) - ps.get(p, p)).norm() > tol {
                continue;
            }
            assign[i] = p;
            used[p] = true;
            if go(i + 1, opts, s, ps, tol, assign, used) {
                return true;
            }
            used[p] = false;
        }
        false
    }
    Ok(go(0, &options, s, &ps, MATCH_TOL * scale, &mut assign, &mut used).then_some(assign))
}

fn product_underlying(ring: &FusionRing) -> Vec<Vec<usize>> {
    let r = ring.rank();
    (0..r * r)
        .map(|p| (0..r).map(|x| ring.n(p / r, p % r, x) as usize).collect())
        .collect()
}

/// `C^rev ⊠ C` and `C ⊠ C^rev` for braided nondegenerate `C`, with `L = ⊕ ā ⊠ a`.
fn braided_candidates(cd: &CategoryData) -> Result<Vec<Candidate>> {
    let rev = reverse_braiding(cd)?;
    let (_, env_alg) = symmetric_enveloping(cd)?;
    let rs = cd.braiding()?.clone();
    let r = cd.rank();
    let mut out = Vec::new();
    for (first, second, what) in [(&rev, cd, "C^rev ⊠ C"), (cd, &rev, "C ⊠ C^rev")] {
        let category = deligne_product_data(first, second)?;
        let env = env_alg.clone();
        let rs = rs.clone();
        out.push(Candidate {
            underlying: product_underlying(&cd.ring),
            description: what.to_string(),
            category,
            lagrangian: Box::new(move |pres: &CategoryData| {
                let factors: [Box<dyn Fn(usize, usize, usize) -> C64>; 4] = [
                    Box::new(|a, b, c| rs.get(a, b, c).unwrap()),
                    Box::new(|a, b, c| rs.get(a, b, c).unwrap().inv()),
                    Box::new(|a, b, c| rs.get(b, a, c).unwrap()),
                    Box::new(|a, b, c| rs.get(b, a, c).unwrap().inv()),
                ];
                factors.iter().find_map(|phi| {
                    let mu: BTreeMap<_, _> = env
                        .mu
                        .iter()
                        .map(|(&(p, q, o), &v)| ((p, q, o), v * phi(p / r, q / r, o / r)))
                        .collect();
                    let alg = AlgebraObject::new(pres, env.support.clone(), mu).ok()?;
                    let ok = verify_qsystem(pres, &alg).ok()?.pass() && is_commutative(pres, &alg).ok()?.0;
                    ok.then_some(alg)
                })
            }),
        });
    }
    Ok(out)
}

/// Powers of a generator when `cd` is `Vec_{Z/n}` with trivial associator.
fn cyclic_generator_powers(cd: &CategoryData) -> Option<Vec<usize>> {
    if !cd.is_pointed() || cd.f.blocks().any(|(_, b)| b.mat.iter().any(|v| (v - C64::new(1.0, 0.0)).norm() > cd.tolerance)) {
        return None;
    }
    let n = cd.rank();
    (0..n).find_map(|g| {
        let mut powers = vec![0usize];
        for _ in 1..n {
            powers.push(cd.fuse(*powers.last().unwrap(), g)[0]);
        }
        let mut sorted = powers.clone();
        sorted.sort_unstable();
        sorted.dedup();
        (sorted.len() == n).then_some(powers)
    })
}

/// `D(Z/n)` as `Vec_{Z/n ⊕ Z/n}` with `q(k, h) = exp(2πi kh/n)`; `(k, h)` has flux `g^h`, and `L` is the charges.
fn double_candidates(powers: &[usize]) -> Result<Vec<Candidate>> {
    let n = powers.len();
    let qf = QuadraticForm {
        group: vec![n as u64, n as u64],
        t: vec![0, 0],
        cross: vec![vec![0, 1], vec![0, 0]],
    };
    let base = pointed_from_quadratic_form(&qf)?;
    let underlying: Vec<Vec<usize>> = (0..n * n)
        .map(|p| {
            let h = qf.coords(p)[1] as usize;
            (0..n).map(|x| usize::from(x == powers[h])).collect()
        })
        .collect();
    let charges: Vec<usize> = (0..n as u64).map(|k| qf.index(&[k, 0])).collect();
    let mut out = Vec::new();
    for (category, what) in [(base.clone(), "D(Z/n)"), (reverse_braiding(&base)?, "D(Z/n)^rev")] {
        let charges = charges.clone();
        out.push(Candidate {
            category,
            underlying: underlying.clone(),
            description: what.replace('n', &n.to_string()),
            lagrangian: Box::new(move |pres: &CategoryData| pointed_subgroup_algebra(pres, &charges).ok()),
        });
    }
    Ok(out)
}

fn find_presentation(cd: &CategoryData, simples: &[CenterObject], s: &SMatrix) -> Result<Option<Presentation>> {
    let mut candidates = Vec::new();
    if cd.is_braided() && is_nondegenerate(cd)? {
        candidates.extend(braided_candidates(cd)?);
    }
    if let Some(powers) = cyclic_generator_powers(cd) {
        candidates.extend(double_candidates(&powers)?);
    }
    for cand in candidates {
        if let Some(label_of) = match_labels(simples, s, &cand)? {
            let lagrangian = (cand.lagrangian)(&cand.category);
            return Ok(Some(Presentation {
                category: cand.category,
                label_of,
                lagrangian,
                description: cand.description,
            }));
        }
    }
    Ok(None)
}

/// The canonical Lagrangian algebra `I(1) = ⊕_z [1 : z] z` on the presentation of `Z(C)`.
pub fn lagrangian_algebra(center: &CenterData) -> Result<(CategoryData, AlgebraObject)> {
    if let Some(z) = center.simples.iter().find(|z| z.underlying[0] > 1) {
        return Err(Error::Multiplicity(format!("a center simple of dimension {} contains the unit {} times", z.dim, z.underlying[0])));
    }
    let pres = center
        .presentation
        .as_ref()
        .ok_or_else(|| precondition("no braided presentation of the center is available for this category"))?;
    let alg = pres
        .lagrangian
        .clone()
        .ok_or_else(|| Error::NonConvergence(format!("no commutative Q-system on ⊕ ā⊠a found in {}", pres.description)))?;
    let mut expect: Vec<usize> = (0..center.rank())
        .filter(|&i| center.simples[i].underlying[0] == 1)
        .map(|i| pres.label_of[i])
        .collect();
    expect.sort_unstable();
    if expect != alg.support {
        return Err(Error::Validation("support of the Lagrangian algebra disagrees with the unit multiplicities".into()));
    }
    Ok((pres.category.clone(), alg))
}

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremCReport {
    pub rank: usize,
    pub global_dim_c: f64,
    pub global_dim_center: f64,
    pub assertions: Vec<Assertion>,
    pub pass: bool,
}

/// Computes `Z(C)` and checks `Σ dim² = D²`, invertibility of `s̃`, triviality of the
/// Müger center, and that condensing the Lagrangian algebra leaves one simple.
pub fn theorem_c_shadow(cd: &CategoryData, seed: u64) -> Result<TheoremCReport> {
    let tube = super::build_tube_algebra(cd)?;
    let center = decompose_center(cd, &tube, seed)?;
    theorem_c_report(cd, &center)
}

pub fn theorem_c_report(cd: &CategoryData, center: &CenterData) -> Result<TheoremCReport> {
    let d = cd.global_dim();
    let dz = center.global_dim();
    let mut assertions = Vec::new();
    let res = (dz - d * d).abs();
    assertions.push(Assertion {
        name: "sum_dim_squared",
        pass: res < 1e-6,
        detail: format!("Σ dim² = {dz:.9}, D² = {:.9}", d * d),
    });
    let smin = crate::linalg::singular_values(&center.normalized_s()).last().copied().unwrap_or(0.0);
    assertions.push(Assertion {
        name: "s_invertible",
        pass: smin > 1e-6,
        detail: format!("smallest singular value of S = {smin:.3e}"),
    });
    let dims = center.dims();
    let central: Vec<usize> = (0..center.rank())
        .filter(|&a| (0..center.rank()).all(|x| (center.s.get(a, x) - C64::new(dims[a] * dims[x], 0.0)).norm() < 1e-6 * dz))
        .collect();
    assertions.push(Assertion {
        name: "muger_center_trivial",
        pass: central == [0],
        detail: format!("Müger center {:?}", central.iter().map(|&i| center.labels[i].as_str()).collect::<Vec<_>>()),
    });
    let condensed = lagrangian_algebra(center).and_then(|(pres, alg)| Ok(enumerate_local_modules(&pres, &alg)?.simples.len()));
    assertions.push(match condensed {
        Ok(k) => Assertion {
            name: "lagrangian_condenses_to_one",
            pass: k == 1,
            detail: format!("{k} simple local modules"),
        },
        Err(e) => Assertion {
            name: "lagrangian_condenses_to_one",
            pass: false,
            detail: e.to_string(),
        },
    });
    Ok(TheoremCReport {
        rank: center.rank(),
        global_dim_c: d,
        global_dim_center: dz,
        pass: assertions.iter().all(|a| a.pass),
        assertions,
    })
}
