//! Full categorical data: a multiplicity-free fusion ring with F-symbols and
//! optional R-symbols, in the triangle-normalized unitary gauge.
//!
//! Conventions. A splitting vertex `V^{ab}_c : c → a⊗b` is an isometry. For
//! three legs the left tree is `L(e) = (V^{ab}_e ⊗ 1) V^{ec}_d`, the right tree is
//! `R(f) = (1 ⊗ V^{bc}_f) V^{af}_d`, and `L(e) = Σ_f F^{abc}_d[e,f] R(f)`.
//! The braiding acts on vertices by `c_{a,b} V^{ab}_c = R^{ab}_c V^{ba}_c`.

mod catalog;
mod coherence;
mod io;
mod pointed;
mod transforms;

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{structural, Error, Result};
use crate::fusion_ring::{fp_dimensions, validate_fusion_ring, FPDimData, FusionRing};
use crate::numeral::{Numeral, C64};

pub use catalog::{catalog, catalog_names, toric_code_form, CatalogEntry};
pub use coherence::{verify_hexagon, verify_pentagon, verify_unitarity, CoherenceCheck, CoherenceViolation};
pub use io::{
    load_algebra_file, load_category, load_category_str, load_module_file, save_category, save_category_string, AlgebraFile,
    CategoryFile, LabelRef, ModuleFile, FORMAT_VERSION,
};
pub use pointed::{kappa_of, pointed_from_quadratic_form, QuadraticForm};
pub use transforms::{deligne_product_data, monoidal_opposite, reverse_braiding};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// One `F^{abc}_d` matrix with its row labels `e` and column labels `f`.
#[derive(Clone, Debug)]
pub struct FBlock {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub entries: Vec<Numeral>,
    pub mat: DMatrix<C64>,
    pub inv: DMatrix<C64>,
}

impl FBlock {
    pub fn row_pos(&self, e: usize) -> Option<usize> {
        self.rows.iter().position(|&x| x == e)
    }

    pub fn col_pos(&self, f: usize) -> Option<usize> {
        self.cols.iter().position(|&x| x == f)
    }

    pub fn get(&self, e: usize, f: usize) -> Option<C64> {
        Some(self.mat[(self.row_pos(e)?, self.col_pos(f)?)])
    }

    pub fn get_inv(&self, f: usize, e: usize) -> Option<C64> {
        Some(self.inv[(self.col_pos(f)?, self.row_pos(e)?)])
    }
}

#[derive(Clone, Debug)]
enum BlockIndex {
    Dense(Vec<u32>),
    Sparse(HashMap<(u32, u32, u32, u32), u32>),
}

const DENSE_INDEX_MAX_RANK: usize = 40;
const NO_BLOCK: u32 = u32::MAX;

/// F-symbols keyed by `(a,b,c,d)`, one matrix per admissible quadruple.
#[derive(Clone, Debug)]
pub struct FSymbolSet {
    rank: usize,
    index: BlockIndex,
    keys: Vec<(usize, usize, usize, usize)>,
    blocks: Vec<FBlock>,
}

/// Row labels `e` (with `a⊗b→e`, `e⊗c→d`) and column labels `f` (with `b⊗c→f`, `a⊗f→d`).
pub fn f_block_labels(ring: &FusionRing, a: usize, b: usize, c: usize, d: usize) -> (Vec<usize>, Vec<usize>) {
    let rows = ring.fuse(a, b).iter().copied().filter(|&e| ring.n(e, c, d) > 0).collect();
    let cols = ring.fuse(b, c).iter().copied().filter(|&f| ring.n(a, f, d) > 0).collect();
    (rows, cols)
}

pub(crate) fn admissible_quadruples(ring: &FusionRing) -> Vec<(usize, usize, usize, usize)> {
    let r = ring.rank();
    let mut out = Vec::new();
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let mut ds: Vec<usize> = ring
                    .fuse(a, b)
                    .iter()
                    .flat_map(|&e| ring.fuse(e, c).iter().copied())
                    .collect();
                ds.sort_unstable();
                ds.dedup();
                out.extend(ds.into_iter().map(|d| (a, b, c, d)));
            }
        }
    }
    out
}

impl FSymbolSet {
    /// An empty set, used for partial (ring-only) presentations.
    pub fn empty(rank: usize) -> Self {
        FSymbolSet {
            rank,
            index: BlockIndex::Sparse(HashMap::new()),
            keys: Vec::new(),
            blocks: Vec::new(),
        }
    }

    /// Builds the set by evaluating `value(a,b,c,d,e,f)` on every admissible tuple.
    pub fn from_fn(ring: &FusionRing, mut value: impl FnMut(usize, usize, usize, usize, usize, usize) -> Numeral) -> Result<Self> {
        require_multiplicity_free(ring)?;
        let mut keys = Vec::new();
        let mut blocks = Vec::new();
        for (a, b, c, d) in admissible_quadruples(ring) {
            let (rows, cols) = f_block_labels(ring, a, b, c, d);
            let mut entries = Vec::with_capacity(rows.len() * cols.len());
            for &e in &rows {
                for &f in &cols {
                    entries.push(value(a, b, c, d, e, f));
                }
            }
            keys.push((a, b, c, d));
            blocks.push(make_block(rows, cols, entries, (a, b, c, d))?);
        }
        Ok(Self::assemble(ring.rank(), keys, blocks))
    }

    /// Builds the set from explicit entries; every admissible tuple must be present exactly once.
    pub fn from_entries(ring: &FusionRing, entries: &[((usize, usize, usize, usize, usize, usize), Numeral)]) -> Result<Self> {
        require_multiplicity_free(ring)?;
        let r = ring.rank();
        let mut map: HashMap<(usize, usize, usize, usize, usize, usize), Numeral> = HashMap::with_capacity(entries.len());
        for &(t, v) in entries {
            let (a, b, c, d, e, f) = t;
            if [a, b, c, d, e, f].iter().any(|&x| x >= r) {
                return Err(structural(format!("F entry {t:?} has a label out of range")));
            }
            let ok = ring.n(a, b, e) > 0 && ring.n(e, c, d) > 0 && ring.n(b, c, f) > 0 && ring.n(a, f, d) > 0;
            if !ok {
                return Err(structural(format!("F entry on inadmissible tuple {t:?}")));
            }
            if map.insert(t, v).is_some() {
                return Err(structural(format!("duplicate F entry {t:?}")));
            }
        }
        let mut missing = None;
        let set = Self::from_fn(ring, |a, b, c, d, e, f| match map.get(&(a, b, c, d, e, f)) {
            Some(v) => *v,
            None => {
                missing.get_or_insert((a, b, c, d, e, f));
                Numeral::real(0.0)
            }
        });
        if let Some(t) = missing {
            return Err(structural(format!("missing F entry for admissible tuple {t:?}")));
        }
        set
    }

    fn assemble(rank: usize, keys: Vec<(usize, usize, usize, usize)>, blocks: Vec<FBlock>) -> Self {
        let index = if rank <= DENSE_INDEX_MAX_RANK {
            let mut v = vec![NO_BLOCK; rank.pow(4)];
            for (i, &(a, b, c, d)) in keys.iter().enumerate() {
                v[((a * rank + b) * rank + c) * rank + d] = i as u32;
            }
            BlockIndex::Dense(v)
        } else {
            BlockIndex::Sparse(
                keys.iter()
                    .enumerate()
                    .map(|(i, &(a, b, c, d))| ((a as u32, b as u32, c as u32, d as u32), i as u32))
                    .collect(),
            )
        };
        FSymbolSet {
            rank,
            index,
            keys,
            blocks,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    #[inline]
    pub fn block(&self, a: usize, b: usize, c: usize, d: usize) -> Option<&FBlock> {
        let i = match &self.index {
            BlockIndex::Dense(v) => {
                let r = self.rank;
                let i = v[((a * r + b) * r + c) * r + d];
                (i != NO_BLOCK).then_some(i)
            }
            BlockIndex::Sparse(m) => m.get(&(a as u32, b as u32, c as u32, d as u32)).copied(),
        }?;
        Some(&self.blocks[i as usize])
    }

    /// `F^{abc}_d[e,f]`, or `None` when the tuple is inadmissible.
    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Option<C64> {
        self.block(a, b, c, d)?.get(e, f)
    }

    pub fn blocks(&self) -> impl Iterator<Item = ((usize, usize, usize, usize), &FBlock)> {
        self.keys.iter().copied().zip(self.blocks.iter())
    }

    /// All entries in `(a,b,c,d,e,f)` order.
    pub fn entries(&self) -> Vec<((usize, usize, usize, usize, usize, usize), Numeral)> {
        let mut out = Vec::new();
        for ((a, b, c, d), blk) in self.blocks() {
            for (i, &e) in blk.rows.iter().enumerate() {
                for (j, &f) in blk.cols.iter().enumerate() {
                    out.push(((a, b, c, d, e, f), blk.entries[i * blk.cols.len() + j]));
                }
            }
        }
        out
    }
}

fn make_block(rows: Vec<usize>, cols: Vec<usize>, entries: Vec<Numeral>, key: (usize, usize, usize, usize)) -> Result<FBlock> {
    if rows.len() != cols.len() {
        return Err(structural(format!(
            "F block {key:?} is not square ({}×{}); fusion ring is not associative",
            rows.len(),
            cols.len()
        )));
    }
    let n = rows.len();
    let mat = DMatrix::from_fn(n, n, |i, j| entries[i * n + j].value());
    let inv = mat
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Validation(format!("F block {key:?} is singular")))?;
    Ok(FBlock {
        rows,
        cols,
        entries,
        mat,
        inv,
    })
}

pub(crate) fn require_multiplicity_free(ring: &FusionRing) -> Result<()> {
    if let Some((a, b, c, m)) = ring.triples().into_iter().find(|t| t.3 > 1) {
        return Err(Error::Multiplicity(format!("N^{c}_({a},{b}) = {m}")));
    }
    Ok(())
}

/// R-symbols `R^{ab}_c`, defined exactly on channels with `N^c_{ab} = 1`.
#[derive(Clone, Debug)]
pub struct RSymbolSet {
    rank: usize,
    values: Vec<Option<(Numeral, C64)>>,
}

impl RSymbolSet {
    pub fn from_fn(ring: &FusionRing, mut value: impl FnMut(usize, usize, usize) -> Numeral) -> Result<Self> {
        require_multiplicity_free(ring)?;
        let r = ring.rank();
        let mut values = vec![None; r * r * r];
        for a in 0..r {
            for b in 0..r {
                for &c in ring.fuse(a, b) {
                    let v = value(a, b, c);
                    values[(a * r + b) * r + c] = Some((v, v.value()));
                }
            }
        }
        Ok(RSymbolSet { rank: r, values })
    }

    pub fn from_entries(ring: &FusionRing, entries: &[((usize, usize, usize), Numeral)]) -> Result<Self> {
        let r = ring.rank();
        let mut map = HashMap::new();
        for &((a, b, c), v) in entries {
            if a >= r || b >= r || c >= r {
                return Err(structural(format!("R entry ({a},{b},{c}) has a label out of range")));
            }
            if ring.n(a, b, c) == 0 {
                return Err(structural(format!("R entry on inadmissible tuple ({a},{b},{c})")));
            }
            if map.insert((a, b, c), v).is_some() {
                return Err(structural(format!("duplicate R entry ({a},{b},{c})")));
            }
        }
        let mut missing = None;
        let set = Self::from_fn(ring, |a, b, c| match map.get(&(a, b, c)) {
            Some(v) => *v,
            None => {
                missing.get_or_insert((a, b, c));
                Numeral::ONE
            }
        })?;
        if let Some(t) = missing {
            return Err(structural(format!("missing R entry on admissible channel {t:?}")));
        }
        Ok(set)
    }

    /// `R^{ab}_c`, or `None` when `N^c_{ab} = 0`.
    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> Option<C64> {
        let r = self.rank;
        self.values[(a * r + b) * r + c].map(|v| v.1)
    }

    pub fn numeral(&self, a: usize, b: usize, c: usize) -> Option<Numeral> {
        let r = self.rank;
        self.values[(a * r + b) * r + c].map(|v| v.0)
    }

    pub fn entries(&self) -> Vec<((usize, usize, usize), Numeral)> {
        let r = self.rank;
        let mut out = Vec::new();
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    if let Some((v, _)) = self.values[(a * r + b) * r + c] {
                        out.push(((a, b, c), v));
                    }
                }
            }
        }
        out
    }
}

/// A fusion category presented by skeletal data.
#[derive(Clone, Debug)]
pub struct CategoryData {
    pub ring: FusionRing,
    pub dims: FPDimData,
    pub f: FSymbolSet,
    pub r: Option<RSymbolSet>,
    pub tolerance: f64,
    /// Set when loaded with validation suppressed.
    pub deferred_validation: bool,
    /// Ring-only presentation: F and R are intentionally absent.
    pub partial: bool,
}

impl CategoryData {
    /// Assembles data without running the coherence validators.
    pub fn new(ring: FusionRing, f: FSymbolSet, r: Option<RSymbolSet>) -> Result<Self> {
        let violations = validate_fusion_ring(&ring);
        if let Some(v) = violations.first() {
            return Err(Error::Validation(format!(
                "fusion ring invalid: {:?} at {:?} ({})",
                v.axiom, v.indices, v.detail
            )));
        }
        require_multiplicity_free(&ring)?;
        let dims = fp_dimensions(&ring)?;
        Ok(CategoryData {
            ring,
            dims,
            f,
            r,
            tolerance: DEFAULT_TOLERANCE,
            deferred_validation: false,
            partial: false,
        })
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn rank(&self) -> usize {
        self.ring.rank()
    }

    pub fn dim(&self, a: usize) -> f64 {
        self.dims.dims[a]
    }

    pub fn global_dim(&self) -> f64 {
        self.dims.global_dim
    }

    pub fn is_braided(&self) -> bool {
        self.r.is_some()
    }

    pub fn braiding(&self) -> Result<&RSymbolSet> {
        self.r.as_ref().ok_or(Error::MissingBraiding)
    }

    pub fn require_f(&self) -> Result<()> {
        if self.partial || (self.f.is_empty() && self.rank() > 0) {
            return Err(Error::Precondition("category has no F-symbol data".into()));
        }
        Ok(())
    }

    pub fn is_pointed(&self) -> bool {
        self.dims.dims.iter().all(|d| (d - 1.0).abs() < self.tolerance)
    }

    /// Labels `c` with `N^c_{ab} = 1`.
    pub fn fuse(&self, a: usize, b: usize) -> &[usize] {
        self.ring.fuse(a, b)
    }

    /// Runs every coherence validator; empty iff the data is a valid (braided) unitary fusion category.
    pub fn validate(&self) -> Vec<CoherenceViolation> {
        let mut out = verify_unitarity(self);
        out.extend(verify_pentagon(self));
        if self.r.is_some() {
            out.extend(verify_hexagon(self));
        }
        out
    }

    pub fn validated(self) -> Result<Self> {
        let v = self.validate();
        match v.first() {
            None => Ok(self),
            Some(first) => Err(Error::Validation(format!(
                "{} coherence violation(s); first: {:?} at {:?} (residual {:e})",
                v.len(),
                first.check,
                first.indices,
                first.residual
            ))),
        }
    }

    /// Restricts labels and returns the underlying ring's label names.
    pub fn label(&self, a: usize) -> &str {
        self.ring.label(a)
    }

    pub fn parse_labels(&self, spec: &str) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for tok in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            out.push(
                self.ring
                    .label_index(tok)
                    .ok_or_else(|| structural(format!("unknown label `{tok}`")))?,
            );
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}
