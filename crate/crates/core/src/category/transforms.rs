//! Reverse braiding, monoidal opposite and Deligne products of category data.

use super::{CategoryData, FSymbolSet, RSymbolSet};
use crate::error::Result;
use crate::fusion_ring::{deligne_product, FusionRing};
use crate::numeral::Numeral;

/// `R'^{ab}_c = conj(R^{ba}_c)`.
pub fn reverse_braiding(cd: &CategoryData) -> Result<CategoryData> {
    let rs = cd.braiding()?;
    let r = RSymbolSet::from_fn(&cd.ring, |a, b, c| rs.numeral(b, a, c).expect("commutative channels").conj())?;
    let mut out = cd.clone();
    out.r = Some(r);
    Ok(out)
}

/// The monoidal opposite `a ⊗' b = b ⊗ a`.
///
/// Left trees of the opposite are right trees of the original with reversed legs, so
/// `F'^{abc}_d[e,f] = (F^{cba}_d)^{-1}[e,f]`. The braiding is transported: `R'^{ab}_c = R^{ba}_c`.
/// On rings this is exactly [`crate::fusion_ring::opposite_ring`], since `N^{c̄}_{āb̄} = N^c_{ba}`.
pub fn monoidal_opposite(cd: &CategoryData) -> Result<CategoryData> {
    cd.require_f()?;
    let ring = &cd.ring;
    let rank = ring.rank();
    let mut triples = Vec::new();
    for a in 0..rank {
        for b in 0..rank {
            for &c in ring.fuse(b, a) {
                triples.push((a, b, c, 1));
            }
        }
    }
    let op = FusionRing::from_triples(ring.labels().to_vec(), ring.duals().to_vec(), &triples)?;
    let f = FSymbolSet::from_fn(&op, |a, b, c, d, e, f| {
        let blk = cd.f.block(c, b, a, d).expect("reversed quadruple admissible");
        if blk.rows.len() == 1 {
            blk.entries[0].inv()
        } else {
            Numeral::from_complex(blk.get_inv(e, f).expect("labels admissible"))
        }
    })?;
    let r = match &cd.r {
        Some(rs) => Some(RSymbolSet::from_fn(&op, |a, b, c| rs.numeral(b, a, c).expect("channel"))?),
        None => None,
    };
    let mut out = CategoryData::new(op, f, r)?;
    out.tolerance = cd.tolerance;
    Ok(out)
}

/// Componentwise product data on the Deligne product of rings.
pub fn deligne_product_data(c1: &CategoryData, c2: &CategoryData) -> Result<CategoryData> {
    c1.require_f()?;
    c2.require_f()?;
    let ring = deligne_product(&c1.ring, &c2.ring);
    let n2 = c2.rank();
    let split = |x: usize| (x / n2, x % n2);
    let f = FSymbolSet::from_fn(&ring, |a, b, c, d, e, f| {
        let (a1, a2) = split(a);
        let (b1, b2) = split(b);
        let (x1, x2) = split(c);
        let (d1, d2) = split(d);
        let (e1, e2) = split(e);
        let (f1, f2) = split(f);
        let v1 = entry(&c1.f, a1, b1, x1, d1, e1, f1);
        let v2 = entry(&c2.f, a2, b2, x2, d2, e2, f2);
        v1.mul(&v2)
    })?;
    let r = match (&c1.r, &c2.r) {
        (Some(r1), Some(r2)) => Some(RSymbolSet::from_fn(&ring, |a, b, c| {
            let (a1, a2) = split(a);
            let (b1, b2) = split(b);
            let (x1, x2) = split(c);
            r1.numeral(a1, b1, x1).unwrap().mul(&r2.numeral(a2, b2, x2).unwrap())
        })?),
        _ => None,
    };
    let mut out = CategoryData::new(ring, f, r)?;
    out.tolerance = c1.tolerance.max(c2.tolerance);
    Ok(out)
}

fn entry(fs: &FSymbolSet, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Numeral {
    let blk = fs.block(a, b, c, d).expect("factor quadruple admissible");
    let (i, j) = (blk.row_pos(e).unwrap(), blk.col_pos(f).unwrap());
    blk.entries[i * blk.cols.len() + j]
}
