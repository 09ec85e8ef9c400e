//! Q-systems supported on multiplicity-free sums of simples.
//!
//! An algebra `Q = ⊕_{a ∈ support} a` is given by numbers `μ^{ab}_c` with
//! `m (ι_a ⊗ ι_b) V^{ab}_c = μ^{ab}_c ι_c` and unit `i = ι_0`. With this unit
//! normalization a Q-system satisfies `m m† = d_Q · id_Q`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::category::{monoidal_opposite, AlgebraFile, CategoryData, deligne_product_data};
use crate::diagram::{Evaluator, MorphismValue};
use crate::error::{precondition, structural, Error, Result};
use crate::fusion_ring::product_label;
use crate::numeral::{Numeral, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraObject {
    pub support: Vec<usize>,
    pub mu: BTreeMap<(usize, usize, usize), C64>,
}

impl AlgebraObject {
    /// Checks that `mu` is given exactly on admissible support triples.
    pub fn new(cd: &CategoryData, support: Vec<usize>, mu: BTreeMap<(usize, usize, usize), C64>) -> Result<Self> {
        let mut sorted = support.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Multiplicity("algebra support lists a label twice".into()));
        }
        if let Some(&a) = sorted.iter().find(|&&a| a >= cd.rank()) {
            return Err(structural(format!("support label {a} out of range")));
        }
        if sorted.first() != Some(&0) {
            return Err(structural("algebra support must contain the unit"));
        }
        let inside = |x: usize| sorted.binary_search(&x).is_ok();
        for &(a, b, c) in mu.keys() {
            if !(inside(a) && inside(b) && inside(c)) || cd.ring.n(a, b, c) == 0 {
                return Err(structural(format!(
                    "μ entry on inadmissible triple ({},{},{})",
                    cd.label(a),
                    cd.label(b),
                    cd.label(c)
                )));
            }
        }
        for &a in &sorted {
            for &b in &sorted {
                for &c in cd.fuse(a, b) {
                    if inside(c) && !mu.contains_key(&(a, b, c)) {
                        return Err(structural(format!(
                            "missing μ entry for ({},{},{})",
                            cd.label(a),
                            cd.label(b),
                            cd.label(c)
                        )));
                    }
                }
            }
        }
        Ok(AlgebraObject { support: sorted, mu })
    }

    /// The trivial algebra `1`.
    pub fn trivial() -> Self {
        let mut mu = BTreeMap::new();
        mu.insert((0, 0, 0), C64::new(1.0, 0.0));
        AlgebraObject { support: vec![0], mu }
    }

    pub fn mu(&self, a: usize, b: usize, c: usize) -> C64 {
        self.mu.get(&(a, b, c)).copied().unwrap_or_default()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.support.binary_search(&a).is_ok()
    }

    pub fn from_file(cd: &CategoryData, file: &AlgebraFile) -> Result<Self> {
        let labels = cd.ring.labels();
        let support = file.support.iter().map(|l| l.resolve(labels)).collect::<Result<Vec<_>>>()?;
        let mut mu = BTreeMap::new();
        for (a, b, c, v) in &file.mu {
            let key = (a.resolve(labels)?, b.resolve(labels)?, c.resolve(labels)?);
            if mu.insert(key, v.value()).is_some() {
                return Err(structural(format!("duplicate μ entry {key:?}")));
            }
        }
        Self::new(cd, support, mu)
    }

    pub fn to_file(&self) -> AlgebraFile {
        use crate::category::LabelRef::Index;
        AlgebraFile {
            format: 1,
            support: self.support.iter().map(|&a| Index(a)).collect(),
            mu: self
                .mu
                .iter()
                .map(|(&(a, b, c), &v)| (Index(a), Index(b), Index(c), Numeral::from_complex(v)))
                .collect(),
        }
    }

    pub fn conj(&self) -> Self {
        AlgebraObject {
            support: self.support.clone(),
            mu: self.mu.iter().map(|(&k, v)| (k, v.conj())).collect(),
        }
    }
}

/// `Σ_{c ∈ support} d_c`.
pub fn algebra_dim(cd: &CategoryData, a: &AlgebraObject) -> f64 {
    a.support.iter().map(|&c| cd.dim(c)).sum()
}

/// Connected iff the unit occurs once; multiplicity-free supports always are.
pub fn is_connected(a: &AlgebraObject) -> bool {
    a.support.iter().filter(|&&x| x == 0).count() == 1
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AxiomResult {
    pub pass: bool,
    pub residual: f64,
}

impl AxiomResult {
    pub(crate) fn new(residual: f64, tol: f64) -> Self {
        AxiomResult {
            pass: residual <= tol,
            residual,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QSystemReport {
    pub associativity: AxiomResult,
    pub unitality: AxiomResult,
    pub frobenius: AxiomResult,
    pub separability: AxiomResult,
    pub connectedness: AxiomResult,
}

impl QSystemReport {
    pub fn pass(&self) -> bool {
        self.associativity.pass && self.unitality.pass && self.frobenius.pass && self.separability.pass && self.connectedness.pass
    }
}

/// Component morphisms `m[a,b,c] = μ^{ab}_c (V^{ab}_c)† : [a,b] → [c]`.
struct Components<'e, 'c> {
    ev: &'e Evaluator<'c>,
    alg: &'e AlgebraObject,
}

impl Components<'_, '_> {
    fn m(&self, a: usize, b: usize, c: usize) -> MorphismValue {
        let ring = &self.ev.category().ring;
        let z = self.alg.mu(a, b, c);
        MorphismValue::from_block(ring, vec![a, b], vec![c], c, DMatrix::from_element(1, 1, z)).expect("1×1 block")
    }

    fn id(&self, a: usize) -> MorphismValue {
        self.ev.identity(&[a])
    }

    fn t(&self, f: &MorphismValue, g: &MorphismValue) -> MorphismValue {
        self.ev.tensor(f, g).expect("short words")
    }
}

fn accumulate(acc: &mut Option<MorphismValue>, term: MorphismValue) {
    *acc = Some(match acc.take() {
        None => term,
        Some(s) => s.add(&term).expect("same type"),
    });
}

fn diff(cd: &CategoryData, x: Option<MorphismValue>, y: Option<MorphismValue>, src: Vec<usize>, tgt: Vec<usize>) -> f64 {
    let zero = || MorphismValue::zero(&cd.ring, src.clone(), tgt.clone());
    let (x, y) = (x.unwrap_or_else(zero), y.unwrap_or_else(zero));
    x.max_abs_diff(&y).expect("same type")
}

/// Checks the Q-system axioms by evaluating the component diagrams of
/// `m(m⊗1) = m(1⊗m)`, `m(i⊗1) = 1 = m(1⊗i)`, the two Frobenius relations, and `m m† = d_Q · 1`.
pub fn verify_qsystem(cd: &CategoryData, alg: &AlgebraObject) -> Result<QSystemReport> {
    cd.require_f()?;
    let ev = Evaluator::new(cd);
    let k = Components { ev: &ev, alg };
    let supp = &alg.support;
    let inside = |x: usize| alg.contains(x);
    let tol = cd.tolerance;

    let mut assoc = 0.0f64;
    for &a in supp {
        for &b in supp {
            for &c in supp {
                let mut ds: Vec<usize> = supp
                    .iter()
                    .flat_map(|&e| cd.fuse(e, c).iter().copied())
                    .filter(|&d| inside(d))
                    .collect();
                ds.sort_unstable();
                ds.dedup();
                for d in ds {
                    let mut lhs = None;
                    for &e in cd.fuse(a, b).iter().filter(|&&e| inside(e) && cd.ring.n(e, c, d) > 0) {
                        let term = k.m(e, c, d).compose(&k.t(&k.m(a, b, e), &k.id(c)))?;
                        accumulate(&mut lhs, term);
                    }
                    let mut rhs = None;
                    for &f in cd.fuse(b, c).iter().filter(|&&f| inside(f) && cd.ring.n(a, f, d) > 0) {
                        let term = k.m(a, f, d).compose(&k.t(&k.id(a), &k.m(b, c, f)))?;
                        accumulate(&mut rhs, term);
                    }
                    assoc = assoc.max(diff(cd, lhs, rhs, vec![a, b, c], vec![d]));
                }
            }
        }
    }

    let unit = MorphismValue::from_block(&cd.ring, vec![], vec![0], 0, DMatrix::from_element(1, 1, C64::new(1.0, 0.0)))?;
    let mut unital = 0.0f64;
    for &a in supp {
        let id = k.id(a);
        let left = k.m(0, a, a).compose(&k.t(&unit, &id))?;
        let right = k.m(a, 0, a).compose(&k.t(&id, &unit))?;
        unital = unital.max(left.max_abs_diff(&id)?).max(right.max_abs_diff(&id)?);
    }

    let mut frob = 0.0f64;
    for &a in supp {
        for &b in supp {
            for &c in supp {
                for &d in supp {
                    let mut x = None;
                    for &e in supp.iter().filter(|&&e| cd.ring.n(c, e, a) > 0 && cd.ring.n(e, b, d) > 0) {
                        let term = k.t(&k.id(c), &k.m(e, b, d)).compose(&k.t(&k.m(c, e, a).dagger(), &k.id(b)))?;
                        accumulate(&mut x, term);
                    }
                    let mut y = None;
                    for &f in supp.iter().filter(|&&f| cd.ring.n(a, b, f) > 0 && cd.ring.n(c, d, f) > 0) {
                        accumulate(&mut y, k.m(c, d, f).dagger().compose(&k.m(a, b, f))?);
                    }
                    let mut z = None;
                    for &g in supp.iter().filter(|&&g| cd.ring.n(a, g, c) > 0 && cd.ring.n(g, d, b) > 0) {
                        let term = k.t(&k.m(a, g, c), &k.id(d)).compose(&k.t(&k.id(a), &k.m(g, d, b).dagger()))?;
                        accumulate(&mut z, term);
                    }
                    if x.is_none() && y.is_none() && z.is_none() {
                        continue;
                    }
                    let (s, t) = (vec![a, b], vec![c, d]);
                    frob = frob
                        .max(diff(cd, x.clone(), y.clone(), s.clone(), t.clone()))
                        .max(diff(cd, z, y, s, t));
                }
            }
        }
    }

    let dq = algebra_dim(cd, alg);
    let mut sep = 0.0f64;
    for &c in supp {
        let mut s = None;
        for &a in supp {
            for &b in supp.iter().filter(|&&b| cd.ring.n(a, b, c) > 0) {
                let m = k.m(a, b, c);
                accumulate(&mut s, m.compose(&m.dagger())?);
            }
        }
        let want = k.id(c).scale(C64::new(dq, 0.0));
        sep = sep.max(diff(cd, s, Some(want), vec![c], vec![c]));
    }

    let connected = if is_connected(alg) { 0.0 } else { 1.0 };
    Ok(QSystemReport {
        associativity: AxiomResult::new(assoc, tol),
        unitality: AxiomResult::new(unital, tol),
        frobenius: AxiomResult::new(frob, tol),
        separability: AxiomResult::new(sep, tol),
        connectedness: AxiomResult::new(connected, 0.0),
    })
}

/// Whether `m ∘ c_{Q,Q} = m`, with the largest residual over the components `m[b,a,c] ∘ braid[a,b]`.
pub fn is_commutative(cd: &CategoryData, alg: &AlgebraObject) -> Result<(bool, f64)> {
    let ev = Evaluator::new(cd);
    cd.braiding()?;
    let k = Components { ev: &ev, alg };
    let mut worst = 0.0f64;
    for &a in &alg.support {
        for &b in &alg.support {
            for &c in cd.fuse(a, b).iter().filter(|&&c| alg.contains(c)) {
                let lhs = k.m(b, a, c).compose(&ev.braid(a, b, false)?)?;
                worst = worst.max(lhs.max_abs_diff(&k.m(a, b, c))?);
            }
        }
    }
    Ok((worst <= cd.tolerance, worst))
}

fn unit_normalized(cd: &CategoryData, support: Vec<usize>, mut mu: BTreeMap<(usize, usize, usize), C64>) -> Result<AlgebraObject> {
    let u = mu[&(0, 0, 0)];
    if u.norm() < cd.tolerance {
        return Err(Error::NonConvergence("unit coefficient vanishes".into()));
    }
    for v in mu.values_mut() {
        *v /= u;
    }
    AlgebraObject::new(cd, support, mu)
}

/// The algebra `⊕_{h ∈ H} h` with `μ ≡ 1` in a pointed category, for a subgroup `H`
/// on which the associator is identically 1.
pub fn pointed_subgroup_algebra(cd: &CategoryData, subgroup: &[usize]) -> Result<AlgebraObject> {
    if !cd.is_pointed() {
        return Err(precondition("category is not pointed"));
    }
    crate::braided::check_subcategory(&cd.ring, subgroup)?;
    let mut mu = BTreeMap::new();
    for &a in subgroup {
        for &b in subgroup {
            for &c in subgroup {
                let d = cd.fuse(cd.fuse(a, b)[0], c)[0];
                let f = cd.f.get(a, b, c, d, cd.fuse(a, b)[0], cd.fuse(b, c)[0]).unwrap_or_default();
                if (f - C64::new(1.0, 0.0)).norm() > cd.tolerance {
                    return Err(precondition(format!(
                        "associator on ({},{},{}) is not 1 in this gauge",
                        cd.label(a),
                        cd.label(b),
                        cd.label(c)
                    )));
                }
            }
            mu.insert((a, b, cd.fuse(a, b)[0]), C64::new(1.0, 0.0));
        }
    }
    AlgebraObject::new(cd, subgroup.to_vec(), mu)
}

/// The Q-system `x ⊗ x̄` with multiplication `1_x ⊗ ev ⊗ 1_x̄`.
pub fn canonical_algebra(cd: &CategoryData, x: usize) -> Result<AlgebraObject> {
    cd.require_f()?;
    if x >= cd.rank() {
        return Err(precondition(format!("label {x} out of range")));
    }
    let xd = cd.ring.dual(x);
    let support: Vec<usize> = cd.fuse(x, xd).to_vec();
    let ev = Evaluator::new(cd);
    let m = ev.tensor(&ev.tensor(&ev.identity(&[x]), &ev.cap(xd))?, &ev.identity(&[xd]))?;
    let iota = |a: usize| crate::diagram::vertex(&cd.ring, x, xd, a).expect("support channel");
    let mut mu = BTreeMap::new();
    for &a in &support {
        for &b in &support {
            let ab = ev.tensor(&iota(a), &iota(b))?;
            for &c in cd.fuse(a, b).iter().filter(|c| support.contains(c)) {
                let v = m.compose(&ab)?.compose(&crate::diagram::vertex(&cd.ring, a, b, c)?)?;
                mu.insert((a, b, c), v.blocks[c][(0, 0)]);
            }
        }
    }
    unit_normalized(cd, support, mu)
}

/// The product category `C^mp ⊠ C` on which [`symmetric_enveloping`] lives.
pub fn enveloping_category(cd: &CategoryData) -> Result<CategoryData> {
    deligne_product_data(&monoidal_opposite(cd)?, cd)
}

/// `S = ⊕_c c̄ ⊠ c` in `C^mp ⊠ C`, with multiplication read off from the action on `C`,
/// `(x ⊠ y) · m = y ⊗ m ⊗ x`, and the evaluations `ev_b`, `ev_a`. The component of `c̄ ⊠ c`
/// is rescaled by `√d_c` so that `m m† = d_S · 1`.
pub fn symmetric_enveloping(cd: &CategoryData) -> Result<(CategoryData, AlgebraObject)> {
    let env = enveloping_category(cd)?;
    let ev = Evaluator::new(cd);
    let ring = &cd.ring;
    let r = cd.rank();
    let pair = |c: usize| ring.dual(c) * r + c;
    let support: Vec<usize> = (0..r).map(pair).collect();
    let mut mu = BTreeMap::new();
    for a in 0..r {
        for b in 0..r {
            let (ad, bd) = (ring.dual(a), ring.dual(b));
            let contract = ev
                .cap(a)
                .compose(&ev.tensor(&ev.tensor(&ev.identity(&[a]), &ev.cap(b))?, &ev.identity(&[ad]))?)?;
            for &c in ring.fuse(a, b) {
                let cd_ = ring.dual(c);
                let v = ev.tensor(&crate::diagram::vertex(ring, a, b, c)?, &crate::diagram::vertex(ring, bd, ad, cd_)?)?;
                let z = contract.compose(&v)?.blocks[0][(0, 0)] * ((cd.dim(a) * cd.dim(b)).sqrt() / cd.dim(c));
                mu.insert((pair(a), pair(b), pair(c)), z);
            }
        }
    }
    debug_assert!(support.iter().all(|&s| env.ring.label(s) == product_label(ring.label(ring.dual(s % r)), ring.label(s % r))));
    let alg = unit_normalized(&env, support, mu)?;
    Ok((env, alg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{catalog, catalog_names, reverse_braiding};

    const PHI: f64 = 1.618_033_988_749_895;

    #[test]
    fn trivial_algebra_passes() {
        let cd = catalog("fibonacci").unwrap();
        let r = verify_qsystem(&cd, &AlgebraObject::trivial()).unwrap();
        assert!(r.pass(), "{r:?}");
        assert!(is_commutative(&cd, &AlgebraObject::trivial()).unwrap().0);
        assert_eq!(algebra_dim(&cd, &AlgebraObject::trivial()), 1.0);
        assert_eq!(canonical_algebra(&cd, 0).unwrap(), AlgebraObject::trivial());
    }

    #[test]
    fn fibonacci_canonical() {
        let cd = catalog("fibonacci").unwrap();
        let a = canonical_algebra(&cd, 1).unwrap();
        assert_eq!(a.support, vec![0, 1]);
        let r = verify_qsystem(&cd, &a).unwrap();
        assert!(r.pass(), "{r:?}");
        assert!((algebra_dim(&cd, &a) - PHI * PHI).abs() < 1e-12);
        assert!((a.mu(1, 1, 1).norm_sqr() - 1.0 / PHI).abs() < 1e-12);
        assert!((a.mu(1, 1, 0).norm_sqr() - PHI).abs() < 1e-12);
        let (comm, res) = is_commutative(&cd, &a).unwrap();
        assert!(!comm && res > 0.1);
        assert!(is_connected(&a));

        let mut bad = a.clone();
        bad.mu.insert((1, 1, 1), C64::new(1.0, 0.0));
        let r = verify_qsystem(&cd, &bad).unwrap();
        assert!(!r.separability.pass && r.separability.residual > 0.1);
    }

    #[test]
    fn ising_sigma_gives_group_algebra() {
        let cd = catalog("ising").unwrap();
        let a = canonical_algebra(&cd, 1).unwrap();
        assert_eq!(a.support, vec![0, 2]);
        assert!(verify_qsystem(&cd, &a).unwrap().pass());
        assert!((a.mu(2, 2, 0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_algebras_across_catalog() {
        for e in catalog_names() {
            let cd = e.build();
            let nondeg = crate::braided::is_nondegenerate(&cd).unwrap();
            let th = crate::braided::twists(&cd).unwrap().theta;
            for x in 0..cd.rank() {
                let a = canonical_algebra(&cd, x).unwrap();
                let r = verify_qsystem(&cd, &a).unwrap();
                assert!(r.pass(), "{} {x}: {r:?}", e.name);
                assert!((algebra_dim(&cd, &a) - cd.dim(x).powi(2)).abs() < 1e-9);
                // invertible x give x ⊗ x̄ = 1, which is trivially commutative
                if nondeg && cd.dim(x) > 1.0 + 1e-9 && (th[x] - C64::new(1.0, 0.0)).norm() > 1e-9 {
                    assert!(!is_commutative(&cd, &a).unwrap().0, "{} {x}", e.name);
                }
            }
        }
    }

    #[test]
    fn toric_boson_algebra_is_commutative() {
        let cd = catalog("toric_code").unwrap();
        let mut mu = BTreeMap::new();
        for (a, b, c) in [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)] {
            mu.insert((a, b, c), C64::new(1.0, 0.0));
        }
        let a = AlgebraObject::new(&cd, vec![0, 1], mu).unwrap();
        assert!(verify_qsystem(&cd, &a).unwrap().pass());
        assert!(is_commutative(&cd, &a).unwrap().0);
    }

    #[test]
    fn symmetric_enveloping_algebras() {
        for name in ["fibonacci", "z2", "ising", "z3q", "semion", "toric_code"] {
            let cd = catalog(name).unwrap();
            let (env, s) = symmetric_enveloping(&cd).unwrap();
            let r = verify_qsystem(&env, &s).unwrap();
            assert!(r.pass(), "{name}: {r:?}");
            assert!((algebra_dim(&env, &s) - cd.global_dim()).abs() < 1e-9);
        }
        let cd = catalog("fibonacci").unwrap();
        let (env, s) = symmetric_enveloping(&cd).unwrap();
        let labels: Vec<&str> = s.support.iter().map(|&x| env.label(x)).collect();
        assert_eq!(labels, vec!["1_1", "t_t"]);
    }

    #[test]
    fn separability_is_conjugation_invariant() {
        let cd = catalog("fibonacci").unwrap();
        let a = canonical_algebra(&cd, 1).unwrap();
        let mut bad = a.clone();
        bad.mu.insert((1, 1, 1), C64::new(0.3, 0.4));
        let rev = reverse_braiding(&cd).unwrap();
        let r1 = verify_qsystem(&cd, &bad).unwrap().separability.residual;
        let r2 = verify_qsystem(&rev, &bad.conj()).unwrap().separability.residual;
        assert!((r1 - r2).abs() < 1e-12);
    }

    #[test]
    fn admissibility_errors() {
        let cd = catalog("fibonacci").unwrap();
        let mut mu = BTreeMap::new();
        mu.insert((0, 0, 0), C64::new(1.0, 0.0));
        mu.insert((0, 0, 1), C64::new(1.0, 0.0));
        assert!(matches!(AlgebraObject::new(&cd, vec![0, 1], mu), Err(Error::Structural(_))));
        assert!(AlgebraObject::new(&cd, vec![1], BTreeMap::new()).is_err());
        assert!(matches!(AlgebraObject::new(&cd, vec![0, 0], BTreeMap::new()), Err(Error::Multiplicity(_))));
    }
}
