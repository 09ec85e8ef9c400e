//! String diagrams: a small expression language over simple objects, evaluated
//! blockwise in left-associated fusion-tree bases.
//!
//! A morphism `f : u → v` is stored as one matrix per simple `c`, acting on
//! `Hom(c, u) → Hom(c, v)`. The basis of `Hom(c, w_1…w_n)` is the set of chains
//! `x_1 = w_1, x_k ∈ x_{k-1}⊗w_k, x_n = c`, ordered lexicographically.

mod eval;
mod parse;

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::category::CategoryData;
use crate::error::{Error, Result};
use crate::fusion_ring::FusionRing;
use crate::numeral::C64;

pub use eval::{evaluate, evaluate_str, Evaluator, DEFAULT_MAX_WORD};
pub use parse::{parse_diagram, DiagramExpr};

pub type ObjectWord = Vec<usize>;

/// Named generators available to [`evaluate`]. Indexed families use keys like `m[a,b,c]`
/// with label names.
pub type Env = BTreeMap<String, MorphismValue>;

pub fn env_key(ring: &FusionRing, name: &str, labels: &[usize]) -> String {
    let ls: Vec<&str> = labels.iter().map(|&a| ring.label(a)).collect();
    format!("{name}[{}]", ls.join(","))
}

/// `dim Hom(c, w)` for every simple `c`.
pub fn hom_dims(ring: &FusionRing, word: &[usize]) -> Vec<usize> {
    let r = ring.rank();
    let mut v = vec![0usize; r];
    v[0] = 1;
    for &w in word {
        let mut next = vec![0usize; r];
        for x in 0..r {
            if v[x] == 0 {
                continue;
            }
            for &y in ring.fuse(x, w) {
                next[y] += v[x];
            }
        }
        v = next;
    }
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorphismValue {
    pub source: ObjectWord,
    pub target: ObjectWord,
    /// `blocks[c]` has shape `dim Hom(c, target) × dim Hom(c, source)`.
    pub blocks: Vec<DMatrix<C64>>,
}

impl MorphismValue {
    pub fn zero(ring: &FusionRing, source: ObjectWord, target: ObjectWord) -> Self {
        let (ds, dt) = (hom_dims(ring, &source), hom_dims(ring, &target));
        let blocks = ds.iter().zip(&dt).map(|(&s, &t)| DMatrix::zeros(t, s)).collect();
        MorphismValue { source, target, blocks }
    }

    pub fn identity(ring: &FusionRing, word: ObjectWord) -> Self {
        let d = hom_dims(ring, &word);
        let blocks = d.iter().map(|&n| DMatrix::identity(n, n)).collect();
        MorphismValue {
            source: word.clone(),
            target: word,
            blocks,
        }
    }

    /// A morphism supported on a single block.
    pub fn from_block(ring: &FusionRing, source: ObjectWord, target: ObjectWord, c: usize, block: DMatrix<C64>) -> Result<Self> {
        let mut m = Self::zero(ring, source, target);
        if m.blocks[c].shape() != block.shape() {
            return Err(Error::Type {
                expr: format!("block {c}"),
                message: format!("expected shape {:?}, got {:?}", m.blocks[c].shape(), block.shape()),
            });
        }
        m.blocks[c] = block;
        Ok(m)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MorphismValue) -> Result<Self> {
        if self.source != other.target {
            return Err(Error::Type {
                expr: "compose".into(),
                message: format!("inner words differ: {:?} vs {:?}", self.source, other.target),
            });
        }
        Ok(MorphismValue {
            source: other.source.clone(),
            target: self.target.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        })
    }

    pub fn dagger(&self) -> Self {
        MorphismValue {
            source: self.target.clone(),
            target: self.source.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn scale(&self, z: C64) -> Self {
        MorphismValue {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks: self.blocks.iter().map(|b| b * z).collect(),
        }
    }

    fn check_same_type(&self, other: &MorphismValue) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Type {
                expr: "sum".into(),
                message: format!(
                    "{:?}→{:?} vs {:?}→{:?}",
                    self.source, self.target, other.source, other.target
                ),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MorphismValue) -> Result<Self> {
        self.check_same_type(other)?;
        Ok(MorphismValue {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &MorphismValue) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Largest entry modulus over all blocks.
    pub fn max_abs(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .fold(0.0f64, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &MorphismValue) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// The number represented by an endomorphism of the empty word.
    pub fn scalar(&self) -> Option<C64> {
        (self.source.is_empty() && self.target.is_empty()).then(|| self.blocks[0][(0, 0)])
    }
}

/// The spherical trace `Σ_c d_c tr(block_c)` of an endomorphism.
pub fn categorical_trace(mv: &MorphismValue, cd: &CategoryData) -> Result<C64> {
    if mv.source != mv.target {
        return Err(Error::Type {
            expr: "trace".into(),
            message: format!("not an endomorphism: {:?} → {:?}", mv.source, mv.target),
        });
    }
    Ok(mv
        .blocks
        .iter()
        .enumerate()
        .map(|(c, b)| b.trace() * cd.dim(c))
        .sum())
}

/// The splitting vertex `V^{ab}_c : [c] → [a,b]`.
pub fn vertex(ring: &FusionRing, a: usize, b: usize, c: usize) -> Result<MorphismValue> {
    if ring.n(a, b, c) == 0 {
        return Err(crate::error::precondition(format!("N^{c}_({a},{b}) = 0")));
    }
    MorphismValue::from_block(ring, vec![c], vec![a, b], c, DMatrix::from_element(1, 1, C64::new(1.0, 0.0)))
}

/// Environment with `v[a,b,c]` bound to every splitting vertex.
pub fn vertex_env(ring: &FusionRing) -> Env {
    let mut env = Env::new();
    for (a, b, c, _) in ring.triples() {
        env.insert(env_key(ring, "v", &[a, b, c]), vertex(ring, a, b, c).unwrap());
    }
    env
}

fn resolve(ring: &FusionRing, l: &str, expr: &DiagramExpr) -> Result<usize> {
    ring.label_index(l).ok_or_else(|| Error::Type {
        expr: expr.to_string(),
        message: format!("unknown label `{l}`"),
    })
}

fn gen_key(ring: &FusionRing, name: &str, ls: &Option<Vec<String>>, expr: &DiagramExpr) -> Result<String> {
    match ls {
        None => Ok(name.to_string()),
        Some(ls) => {
            let idx = ls.iter().map(|l| resolve(ring, l, expr)).collect::<Result<Vec<_>>>()?;
            Ok(env_key(ring, name, &idx))
        }
    }
}

/// Source and target words of `expr`.
pub fn typecheck(expr: &DiagramExpr, ring: &FusionRing, env: &Env) -> Result<(ObjectWord, ObjectWord)> {
    let lab = |l: &String| resolve(ring, l, expr);
    Ok(match expr {
        DiagramExpr::Id(w) => {
            let w = w.iter().map(lab).collect::<Result<Vec<_>>>()?;
            (w.clone(), w)
        }
        DiagramExpr::Braid(a, b) => {
            let (a, b) = (lab(a)?, lab(b)?);
            (vec![a, b], vec![b, a])
        }
        DiagramExpr::BraidInv(a, b) => {
            let (a, b) = (lab(a)?, lab(b)?);
            (vec![b, a], vec![a, b])
        }
        DiagramExpr::Cup(a) => {
            let a = lab(a)?;
            (vec![], vec![a, ring.dual(a)])
        }
        DiagramExpr::Cap(a) => {
            let a = lab(a)?;
            (vec![a, ring.dual(a)], vec![])
        }
        DiagramExpr::Gen(name, ls) => {
            let key = gen_key(ring, name, ls, expr)?;
            let mv = env.get(&key).ok_or_else(|| Error::Type {
                expr: expr.to_string(),
                message: format!("unbound generator `{key}`"),
            })?;
            (mv.source.clone(), mv.target.clone())
        }
        DiagramExpr::Compose(f, g) => {
            let (fs, ft) = typecheck(f, ring, env)?;
            let (gs, gt) = typecheck(g, ring, env)?;
            if fs != gt {
                return Err(Error::Type {
                    expr: expr.to_string(),
                    message: format!(
                        "cannot compose: `{f}` expects {} but `{g}` produces {}",
                        word_str(ring, &fs),
                        word_str(ring, &gt)
                    ),
                });
            }
            (gs, ft)
        }
        DiagramExpr::Tensor(f, g) => {
            let (mut fs, mut ft) = typecheck(f, ring, env)?;
            let (gs, gt) = typecheck(g, ring, env)?;
            fs.extend(gs);
            ft.extend(gt);
            (fs, ft)
        }
        DiagramExpr::Dagger(f) => {
            let (s, t) = typecheck(f, ring, env)?;
            (t, s)
        }
    })
}

pub fn word_str(ring: &FusionRing, w: &[usize]) -> String {
    let ls: Vec<&str> = w.iter().map(|&a| ring.label(a)).collect();
    format!("[{}]", ls.join(","))
}

#[cfg(test)]
mod tests;
