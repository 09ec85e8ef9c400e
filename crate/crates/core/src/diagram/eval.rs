use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use nalgebra::DMatrix;

use super::{gen_key, parse_diagram, typecheck, DiagramExpr, Env, MorphismValue, ObjectWord};
use crate::category::CategoryData;
use crate::error::{Error, Result};
use crate::numeral::C64;

/// Longest object word any subexpression may carry.
pub const DEFAULT_MAX_WORD: usize = 8;

/// Fusion-tree bases of one word: `paths[c]` lists chains ending at `c`.
struct Basis {
    paths: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

/// Basis change between the split basis `(T_u(α;e) ⊗ T_v(β;e')) V^{ee'}_c`,
/// ordered by `(e, e', α, β)`, and the left-associated basis of `u v`.
struct Change {
    p: DMatrix<C64>,
    p_inv: DMatrix<C64>,
}

type ChangeKey = (ObjectWord, ObjectWord);

pub struct Evaluator<'a> {
    cd: &'a CategoryData,
    max_word: usize,
    bases: RefCell<HashMap<ObjectWord, Rc<Basis>>>,
    changes: RefCell<HashMap<ChangeKey, Rc<Vec<Change>>>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(cd: &'a CategoryData) -> Self {
        Evaluator {
            cd,
            max_word: DEFAULT_MAX_WORD,
            bases: RefCell::default(),
            changes: RefCell::default(),
        }
    }

    pub fn with_max_word(mut self, n: usize) -> Self {
        self.max_word = n;
        self
    }

    pub fn category(&self) -> &CategoryData {
        self.cd
    }

    fn basis(&self, word: &[usize]) -> Rc<Basis> {
        if let Some(b) = self.bases.borrow().get(word) {
            return b.clone();
        }
        let ring = &self.cd.ring;
        let r = ring.rank();
        let mut paths: Vec<Vec<Vec<usize>>> = vec![Vec::new(); r];
        if word.is_empty() {
            paths[0].push(Vec::new());
        } else {
            let mut stack = vec![vec![word[0]]];
            // Depth-first in ascending label order keeps each list lexicographic.
            while let Some(p) = stack.pop() {
                if p.len() == word.len() {
                    paths[*p.last().unwrap()].push(p);
                    continue;
                }
                let x = *p.last().unwrap();
                for &y in ring.fuse(x, word[p.len()]).iter().rev() {
                    let mut q = p.clone();
                    q.push(y);
                    stack.push(q);
                }
            }
        }
        let index = paths
            .iter()
            .map(|ps| ps.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect())
            .collect();
        let b = Rc::new(Basis { paths, index });
        self.bases.borrow_mut().insert(word.to_vec(), b.clone());
        b
    }

    /// The left-associated fusion-tree basis of `Hom(c, word)`.
    pub fn tree_basis(&self, word: &[usize], c: usize) -> Vec<Vec<usize>> {
        self.basis(word).paths[c].clone()
    }

    /// Expands one split-basis vector in the left-associated basis of `u ++ v` as sparse
    /// `(path, coefficient)` pairs.
    fn split_vector(&self, u: &[usize], v: &[usize], alpha: &[usize], beta: &[usize], c: usize) -> Vec<(Vec<usize>, C64)> {
        let one = C64::new(1.0, 0.0);
        match v.len() {
            0 => vec![(alpha.to_vec(), one)],
            1 => {
                let mut p = alpha.to_vec();
                p.push(c);
                vec![(p, one)]
            }
            m => {
                let e = alpha.last().copied().unwrap_or(0);
                let fp = beta[m - 2];
                let ep = beta[m - 1];
                let y = v[m - 1];
                let blk = self.cd.f.block(e, fp, y, c).expect("admissible rebracketing");
                let mut out = Vec::new();
                for &g in &blk.rows {
                    let coeff = blk.get_inv(ep, g).expect("labels in block");
                    if coeff == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for (mut p, z) in self.split_vector(u, &v[..m - 1], alpha, &beta[..m - 1], g) {
                        p.push(c);
                        out.push((p, z * coeff));
                    }
                }
                out
            }
        }
    }

    /// Split-basis labels `(e, e', α, β)` for every `c`, in canonical order.
    fn split_basis(&self, u: &[usize], v: &[usize]) -> Vec<Vec<(usize, usize, usize, usize)>> {
        let ring = &self.cd.ring;
        let r = ring.rank();
        let (bu, bv) = (self.basis(u), self.basis(v));
        let mut out = vec![Vec::new(); r];
        for e in 0..r {
            for ep in 0..r {
                if bu.paths[e].is_empty() || bv.paths[ep].is_empty() {
                    continue;
                }
                for &c in ring.fuse(e, ep) {
                    for i in 0..bu.paths[e].len() {
                        for j in 0..bv.paths[ep].len() {
                            out[c].push((e, ep, i, j));
                        }
                    }
                }
            }
        }
        out
    }

    fn change(&self, u: &[usize], v: &[usize]) -> Rc<Vec<Change>> {
        let key = (u.to_vec(), v.to_vec());
        if let Some(ch) = self.changes.borrow().get(&key) {
            return ch.clone();
        }
        let mut uv = u.to_vec();
        uv.extend_from_slice(v);
        let (bu, bv, buv) = (self.basis(u), self.basis(v), self.basis(&uv));
        let split = self.split_basis(u, v);
        let mut out = Vec::with_capacity(split.len());
        for (c, labels) in split.iter().enumerate() {
            let n = buv.paths[c].len();
            debug_assert_eq!(n, labels.len());
            let mut p = DMatrix::zeros(n, labels.len());
            for (col, &(e, ep, i, j)) in labels.iter().enumerate() {
                for (path, z) in self.split_vector(u, v, &bu.paths[e][i], &bv.paths[ep][j], c) {
                    let row = buv.index[c][&path];
                    p[(row, col)] += z;
                }
            }
            let p_inv = p.clone().try_inverse().unwrap_or_else(|| p.adjoint());
            out.push(Change { p, p_inv });
        }
        let ch = Rc::new(out);
        self.changes.borrow_mut().insert(key, ch.clone());
        ch
    }

    fn check_len(&self, w: &[usize]) -> Result<()> {
        if w.len() > self.max_word {
            return Err(Error::Overflow(format!(
                "word of length {} exceeds the cap of {}",
                w.len(),
                self.max_word
            )));
        }
        Ok(())
    }

    /// `f ⊗ g`.
    pub fn tensor(&self, f: &MorphismValue, g: &MorphismValue) -> Result<MorphismValue> {
        let mut source = f.source.clone();
        source.extend_from_slice(&g.source);
        let mut target = f.target.clone();
        target.extend_from_slice(&g.target);
        self.check_len(&source)?;
        self.check_len(&target)?;
        let cs = self.change(&f.source, &g.source);
        let ct = self.change(&f.target, &g.target);
        let ss = self.split_basis(&f.source, &g.source);
        let st = self.split_basis(&f.target, &g.target);
        let mut blocks = Vec::with_capacity(ss.len());
        for c in 0..ss.len() {
            let mut d = DMatrix::zeros(st[c].len(), ss[c].len());
            for (row, &(e, ep, i, j)) in st[c].iter().enumerate() {
                for (col, &(e2, ep2, i2, j2)) in ss[c].iter().enumerate() {
                    if e == e2 && ep == ep2 {
                        d[(row, col)] = f.blocks[e][(i, i2)] * g.blocks[ep][(j, j2)];
                    }
                }
            }
            blocks.push(&ct[c].p * d * &cs[c].p_inv);
        }
        Ok(MorphismValue { source, target, blocks })
    }

    pub fn identity(&self, word: &[usize]) -> MorphismValue {
        MorphismValue::identity(&self.cd.ring, word.to_vec())
    }

    /// `c_{a,b} : [a,b] → [b,a]`, or its inverse `[b,a] → [a,b]` when `inverse`.
    pub fn braid(&self, a: usize, b: usize, inverse: bool) -> Result<MorphismValue> {
        let rs = self.cd.braiding()?;
        let ring = &self.cd.ring;
        let (src, tgt) = if inverse { (vec![b, a], vec![a, b]) } else { (vec![a, b], vec![b, a]) };
        let mut m = MorphismValue::zero(ring, src, tgt);
        for &c in ring.fuse(a, b) {
            let r = rs.get(a, b, c).expect("channel");
            m.blocks[c][(0, 0)] = if inverse { r.inv() } else { r };
        }
        Ok(m)
    }

    /// `√d_a V^{aā}_0 : [] → [a,ā]`.
    pub fn cup(&self, a: usize) -> MorphismValue {
        let ring = &self.cd.ring;
        let ad = ring.dual(a);
        let mut m = MorphismValue::zero(ring, vec![], vec![a, ad]);
        m.blocks[0][(0, 0)] = C64::new(self.cd.dim(a).sqrt(), 0.0);
        m
    }

    pub fn cap(&self, a: usize) -> MorphismValue {
        self.cup(a).dagger()
    }

    /// Typechecks then evaluates `expr`.
    pub fn eval(&self, expr: &DiagramExpr, env: &Env) -> Result<MorphismValue> {
        typecheck(expr, &self.cd.ring, env)?;
        self.eval_checked(expr, env)
    }

    fn eval_checked(&self, expr: &DiagramExpr, env: &Env) -> Result<MorphismValue> {
        let ring = &self.cd.ring;
        let lab = |l: &String| ring.label_index(l).expect("typechecked");
        Ok(match expr {
            DiagramExpr::Id(w) => {
                let w: Vec<usize> = w.iter().map(lab).collect();
                self.check_len(&w)?;
                self.identity(&w)
            }
            DiagramExpr::Braid(a, b) => self.braid(lab(a), lab(b), false)?,
            DiagramExpr::BraidInv(a, b) => self.braid(lab(a), lab(b), true)?,
            DiagramExpr::Cup(a) => self.cup(lab(a)),
            DiagramExpr::Cap(a) => self.cap(lab(a)),
            DiagramExpr::Gen(name, ls) => env[&gen_key(ring, name, ls, expr)?].clone(),
            DiagramExpr::Compose(f, g) => self.eval_checked(f, env)?.compose(&self.eval_checked(g, env)?)?,
            DiagramExpr::Tensor(f, g) => self.tensor(&self.eval_checked(f, env)?, &self.eval_checked(g, env)?)?,
            DiagramExpr::Dagger(f) => self.eval_checked(f, env)?.dagger(),
        })
    }

    pub fn eval_str(&self, text: &str, env: &Env) -> Result<MorphismValue> {
        self.eval(&parse_diagram(text)?, env)
    }
}

pub fn evaluate(expr: &DiagramExpr, cd: &CategoryData, env: &Env) -> Result<MorphismValue> {
    Evaluator::new(cd).eval(expr, env)
}

pub fn evaluate_str(text: &str, cd: &CategoryData, env: &Env) -> Result<MorphismValue> {
    Evaluator::new(cd).eval_str(text, env)
}
