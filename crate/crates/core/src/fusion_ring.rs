//! Fusion rings: nonnegative integer structure constants with a unit and a
//! duality involution, plus Frobenius–Perron dimensions and the renormalized
//! hypergroup basis `λ_a = [a]/d_a`.

use serde::Serialize;

use crate::error::{structural, Error, Result};

/// Dense fusion ring. The unit is always label 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRing {
    labels: Vec<String>,
    dual: Vec<usize>,
    /// `n[(a * rank + b) * rank + c] = N^c_{ab}`.
    n: Vec<u32>,
    /// Nonzero channels of `a ⊗ b`, ascending.
    channels: Vec<Vec<usize>>,
}

impl FusionRing {
    /// Builds a ring from sparse triples `(a, b, c, N^c_{ab})`; unspecified entries are zero.
    pub fn from_triples(labels: Vec<String>, dual: Vec<usize>, triples: &[(usize, usize, usize, i64)]) -> Result<Self> {
        let rank = labels.len();
        let mut n = vec![0u32; rank * rank * rank];
        for &(a, b, c, m) in triples {
            if a >= rank || b >= rank || c >= rank {
                return Err(structural(format!("fusion triple ({a},{b},{c}) out of range for rank {rank}")));
            }
            if m < 0 {
                return Err(structural(format!("negative multiplicity {m} at ({a},{b},{c})")));
            }
            n[(a * rank + b) * rank + c] = m as u32;
        }
        Self::from_flat(labels, dual, n)
    }

    /// Builds a ring from a dense `rank × rank × rank` array indexed `[a][b][c]`.
    pub fn from_dense(labels: Vec<String>, dual: Vec<usize>, dense: &[Vec<Vec<i64>>]) -> Result<Self> {
        let rank = labels.len();
        if dense.len() != rank || dense.iter().any(|r| r.len() != rank || r.iter().any(|s| s.len() != rank)) {
            return Err(structural(format!("fusion array shape does not match rank {rank}")));
        }
        let mut triples = Vec::new();
        for (a, row) in dense.iter().enumerate() {
            for (b, col) in row.iter().enumerate() {
                for (c, &m) in col.iter().enumerate() {
                    if m != 0 {
                        triples.push((a, b, c, m));
                    }
                }
            }
        }
        Self::from_triples(labels, dual, &triples)
    }

    fn from_flat(labels: Vec<String>, dual: Vec<usize>, n: Vec<u32>) -> Result<Self> {
        let rank = labels.len();
        if rank == 0 {
            return Err(structural("rank must be positive"));
        }
        if dual.len() != rank {
            return Err(structural(format!("dual has length {} but rank is {rank}", dual.len())));
        }
        if let Some(&bad) = dual.iter().find(|&&d| d >= rank) {
            return Err(structural(format!("dual entry {bad} out of range")));
        }
        let mut channels = vec![Vec::new(); rank * rank];
        for a in 0..rank {
            for b in 0..rank {
                for c in 0..rank {
                    if n[(a * rank + b) * rank + c] > 0 {
                        channels[a * rank + b].push(c);
                    }
                }
            }
        }
        Ok(FusionRing {
            labels,
            dual,
            n,
            channels,
        })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    /// Resolves a label by display name, falling back to a numeric index.
    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels
            .iter()
            .position(|l| l == name)
            .or_else(|| name.parse::<usize>().ok().filter(|&i| i < self.rank()))
    }

    pub fn dual(&self, a: usize) -> usize {
        self.dual[a]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    #[inline]
    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        let r = self.rank();
        self.n[(a * r + b) * r + c]
    }

    /// Labels `c` with `N^c_{ab} > 0`, ascending.
    #[inline]
    pub fn fuse(&self, a: usize, b: usize) -> &[usize] {
        &self.channels[a * self.rank() + b]
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.n.iter().all(|&m| m <= 1)
    }

    /// Sparse triples with nonzero multiplicity, in index order.
    pub fn triples(&self) -> Vec<(usize, usize, usize, u32)> {
        let r = self.rank();
        let mut out = Vec::new();
        for a in 0..r {
            for b in 0..r {
                for &c in self.fuse(a, b) {
                    out.push((a, b, c, self.n(a, b, c)));
                }
            }
        }
        out
    }

    /// Relabels without changing structure.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank() {
            return Err(structural("label count does not match rank"));
        }
        self.labels = labels;
        Ok(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RingAxiom {
    Unit,
    Associativity,
    Duality,
    Rotation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingViolation {
    pub axiom: RingAxiom,
    pub indices: Vec<usize>,
    pub detail: String,
}

/// Every violated fusion-ring axiom, with indices. Empty iff the ring is valid.
pub fn validate_fusion_ring(ring: &FusionRing) -> Vec<RingViolation> {
    let r = ring.rank();
    let mut out = Vec::new();
    let mut push = |axiom, indices: Vec<usize>, detail: String| out.push(RingViolation { axiom, indices, detail });

    for a in 0..r {
        for c in 0..r {
            let want = u32::from(a == c);
            if ring.n(0, a, c) != want {
                push(RingAxiom::Unit, vec![0, a, c], format!("N^{c}_(0,{a}) = {}", ring.n(0, a, c)));
            }
            if ring.n(a, 0, c) != want {
                push(RingAxiom::Unit, vec![a, 0, c], format!("N^{c}_({a},0) = {}", ring.n(a, 0, c)));
            }
        }
    }

    if ring.dual(0) != 0 {
        push(RingAxiom::Duality, vec![0], "dual(0) != 0".into());
    }
    for a in 0..r {
        if ring.dual(ring.dual(a)) != a {
            push(RingAxiom::Duality, vec![a], format!("dual(dual({a})) = {}", ring.dual(ring.dual(a))));
        }
        for b in 0..r {
            let want = u32::from(b == ring.dual(a));
            if ring.n(a, b, 0) != want {
                push(RingAxiom::Duality, vec![a, b], format!("N^0_({a},{b}) = {}", ring.n(a, b, 0)));
            }
        }
    }

    let mut lhs = vec![0u64; r];
    let mut rhs = vec![0u64; r];
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                lhs.fill(0);
                rhs.fill(0);
                for &e in ring.fuse(a, b) {
                    for &d in ring.fuse(e, c) {
                        lhs[d] += ring.n(a, b, e) as u64 * ring.n(e, c, d) as u64;
                    }
                }
                for &f in ring.fuse(b, c) {
                    for &d in ring.fuse(a, f) {
                        rhs[d] += ring.n(b, c, f) as u64 * ring.n(a, f, d) as u64;
                    }
                }
                for d in 0..r {
                    if lhs[d] != rhs[d] {
                        push(RingAxiom::Associativity, vec![a, b, c, d], format!("{} != {}", lhs[d], rhs[d]));
                    }
                }
            }
        }
    }

    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let (da, db, dc) = (ring.dual(a), ring.dual(b), ring.dual(c));
                let v = ring.n(a, b, c);
                if v != ring.n(b, dc, da) || v != ring.n(dc, a, db) {
                    push(RingAxiom::Rotation, vec![a, b, c], format!("N^{c}_({a},{b}) = {v} not rotation invariant"));
                }
            }
        }
    }
    out
}

/// Frobenius–Perron dimensions `d_a` and global dimension `D = Σ d_a²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FPDimData {
    pub dims: Vec<f64>,
    pub global_dim: f64,
}

impl FPDimData {
    pub fn from_dims(dims: Vec<f64>) -> Self {
        let global_dim = dims.iter().map(|d| d * d).sum();
        FPDimData { dims, global_dim }
    }
}

pub const FP_ITERATION_CAP: usize = 100_000;

/// Power iteration on `Σ_a L_a` where `(L_a)_{bc} = N^c_{ab}`; the Perron vector,
/// normalized to `d_0 = 1`, is the dimension function.
pub fn fp_dimensions(ring: &FusionRing) -> Result<FPDimData> {
    let r = ring.rank();
    let mut m = vec![0.0f64; r * r];
    for a in 0..r {
        for b in 0..r {
            for &c in ring.fuse(a, b) {
                m[b * r + c] += ring.n(a, b, c) as f64;
            }
        }
    }
    let mut v = vec![1.0f64; r];
    let mut converged = false;
    for _ in 0..FP_ITERATION_CAP {
        let mut w: Vec<f64> = (0..r).map(|b| (0..r).map(|c| m[b * r + c] * v[c]).sum()).collect();
        let norm = w[0];
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NonConvergence("fusion matrix has no positive Perron vector".into()));
        }
        w.iter_mut().for_each(|x| *x /= norm);
        let delta = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = w;
        if delta < 1e-15 {
            converged = true;
            break;
        }
    }
    let residual = dim_residual(ring, &v);
    if !converged && residual > 1e-9 {
        return Err(Error::NonConvergence(format!(
            "power iteration hit cap {FP_ITERATION_CAP} (residual {residual:e})"
        )));
    }
    if residual > 1e-9 || v.iter().any(|d| *d < 1.0 - 1e-9) {
        return Err(Error::NonConvergence(format!(
            "Perron vector is not a dimension function (residual {residual:e}); ring data invalid"
        )));
    }
    Ok(FPDimData::from_dims(v))
}

fn dim_residual(ring: &FusionRing, d: &[f64]) -> f64 {
    let r = ring.rank();
    let mut worst = 0.0f64;
    for a in 0..r {
        for b in 0..r {
            let rhs: f64 = ring.fuse(a, b).iter().map(|&c| ring.n(a, b, c) as f64 * d[c]).sum();
            worst = worst.max((d[a] * d[b] - rhs).abs() / (d[a] * d[b]).max(1.0));
        }
    }
    worst
}

/// Structure constants of the renormalized basis `λ_a = [a]/d_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypergroupView {
    rank: usize,
    m: Vec<f64>,
}

impl HypergroupView {
    #[inline]
    pub fn coeff(&self, a: usize, b: usize, c: usize) -> f64 {
        self.m[(a * self.rank + b) * self.rank + c]
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// `M^c_{ab} = d_c/(d_a d_b) · N^c_{ab}`.
pub fn hypergroup_coeffs(ring: &FusionRing, dims: &FPDimData) -> HypergroupView {
    let r = ring.rank();
    let d = &dims.dims;
    let mut m = vec![0.0; r * r * r];
    for a in 0..r {
        for b in 0..r {
            for &c in ring.fuse(a, b) {
                m[(a * r + b) * r + c] = d[c] / (d[a] * d[b]) * ring.n(a, b, c) as f64;
            }
        }
    }
    HypergroupView { rank: r, m }
}

pub(crate) fn product_label(a: &str, b: &str) -> String {
    format!("{a}_{b}")
}

/// Deligne product; label `(a, a')` has index `a * rank2 + a'`.
pub fn deligne_product(r1: &FusionRing, r2: &FusionRing) -> FusionRing {
    let (n1, n2) = (r1.rank(), r2.rank());
    let idx = |a: usize, b: usize| a * n2 + b;
    let mut labels = Vec::with_capacity(n1 * n2);
    let mut dual = Vec::with_capacity(n1 * n2);
    for a in 0..n1 {
        for b in 0..n2 {
            labels.push(product_label(r1.label(a), r2.label(b)));
            dual.push(idx(r1.dual(a), r2.dual(b)));
        }
    }
    let mut triples = Vec::new();
    for (a, b, c, m) in r1.triples() {
        for (a2, b2, c2, m2) in r2.triples() {
            triples.push((idx(a, a2), idx(b, b2), idx(c, c2), (m * m2) as i64));
        }
    }
    FusionRing::from_triples(labels, dual, &triples).expect("product of well-formed rings is well-formed")
}

/// `N^c_{ab} ↦ N^{c̄}_{ā b̄}`.
pub fn opposite_ring(ring: &FusionRing) -> FusionRing {
    let r = ring.rank();
    let mut triples = Vec::new();
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let m = ring.n(ring.dual(a), ring.dual(b), ring.dual(c));
                if m > 0 {
                    triples.push((a, b, c, m as i64));
                }
            }
        }
    }
    FusionRing::from_triples(ring.labels.clone(), ring.dual.clone(), &triples).expect("same shape")
}

/// Cyclic group ring `Z/n` with labels `0..n-1`.
pub fn cyclic_ring(n: usize) -> FusionRing {
    let labels = (0..n).map(|i| i.to_string()).collect();
    let dual = (0..n).map(|a| (n - a) % n).collect();
    let triples: Vec<_> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b, (a + b) % n, 1))).collect();
    FusionRing::from_triples(labels, dual, &triples).unwrap()
}
