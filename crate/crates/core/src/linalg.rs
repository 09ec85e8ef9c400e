//! Small dense helpers over `C64`.

use nalgebra::{DMatrix, DVector};

use crate::numeral::C64;

/// The real matrix `[[Re m, -Im m], [Im m, Re m]]`.
fn embed(m: &DMatrix<C64>) -> DMatrix<f64> {
    let (r, c) = m.shape();
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = m[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Orthonormalizes complex vectors `p + iq` read off real columns `(p; q)`,
/// dropping those already in the span.
fn complexify(real: &[DVector<f64>], n: usize, want: usize) -> DMatrix<C64> {
    let mut out: Vec<DVector<C64>> = Vec::with_capacity(want);
    for v in real {
        if out.len() == want {
            break;
        }
        let mut z = DVector::from_fn(n, |i, _| C64::new(v[i], v[i + n]));
        for _ in 0..2 {
            for u in &out {
                let c = u.dotc(&z);
                z -= u * c;
            }
        }
        let norm = z.norm();
        if norm > 0.5 {
            out.push(z / C64::new(norm, 0.0));
        }
    }
    DMatrix::from_fn(n, out.len(), |r, c| out[c][r])
}

/// Singular values of `m`, in decreasing order.
pub(crate) fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    let mut s: Vec<f64> = embed(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s.iter().step_by(2).copied().collect()
}

/// The `k` eigenvectors of the real symmetric `g` with the smallest (or largest) eigenvalues.
fn extreme_eigvecs(g: DMatrix<f64>, k: usize, largest: bool) -> Vec<DVector<f64>> {
    let se = g.symmetric_eigen();
    let mut idx: Vec<usize> = (0..se.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    if largest {
        idx.reverse();
    }
    idx.iter().take(k).map(|&i| se.eigenvectors.column(i).into_owned()).collect()
}

/// Orthonormal basis of the kernel of `m`, as columns. Singular values below
/// `tol · max(1, σ_max)` count as zero.
pub(crate) fn nullspace(m: &DMatrix<C64>, tol: f64) -> Vec<DVector<C64>> {
    let n = m.ncols();
    if n == 0 {
        return Vec::new();
    }
    if m.nrows() == 0 {
        return (0..n).map(|i| DVector::from_fn(n, |j, _| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0))).collect();
    }
    let s = singular_values(m);
    let cut = tol * s[0].max(1.0);
    let rank = s.iter().filter(|&&v| v > cut).count();
    let e = embed(m);
    let real = extreme_eigvecs(e.transpose() * &e, 2 * (n - rank), false);
    let k = complexify(&real, n, n - rank);
    (0..k.ncols()).map(|j| k.column(j).into_owned()).collect()
}

/// Orthonormal basis of the column space of `m`, for singular values above `cut`.
pub(crate) fn range(m: &DMatrix<C64>, cut: f64) -> DMatrix<C64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let rank = singular_values(m).iter().filter(|&&v| v > cut).count();
    let e = embed(m);
    let real = extreme_eigvecs(&e * e.transpose(), 2 * rank, true);
    complexify(&real, m.nrows(), rank)
}

/// Eigenvalues (increasing) and orthonormal eigenvectors of a Hermitian matrix.
pub(crate) fn hermitian_eigen(h: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = h.nrows();
    let h = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let se = embed(&h).symmetric_eigen();
    let mut idx: Vec<usize> = (0..2 * n).collect();
    idx.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let mut values = Vec::with_capacity(n);
    let mut vecs = DMatrix::zeros(n, n);
    let scale = se.eigenvalues.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && se.eigenvalues[idx[end]] - se.eigenvalues[idx[end - 1]] < 1e-9 * scale {
            end += 1;
        }
        let real: Vec<DVector<f64>> = idx[start..end].iter().map(|&i| se.eigenvectors.column(i).into_owned()).collect();
        let k = complexify(&real, n, (end - start) / 2);
        for j in 0..k.ncols() {
            vecs.set_column(values.len(), &k.column(j));
            values.push(se.eigenvalues[idx[start + 2 * j]]);
        }
        start = end;
    }
    (values, vecs)
}

/// Eigenvalues of `m` when they are all real, in increasing order.
pub(crate) fn real_spectrum(m: &DMatrix<C64>) -> Option<Vec<f64>> {
    let ev = nalgebra::Schur::try_new(embed(m), 1e-15, 10_000)?.complex_eigenvalues();
    let scale = ev.iter().fold(1.0f64, |a, z| a.max(z.norm()));
    if ev.iter().any(|z| z.im.abs() > 1e-8 * scale) {
        return None;
    }
    let mut re: Vec<f64> = ev.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    Some(re.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0f64, |a, z| a.max(z.norm()))
}

/// Groups sorted reals into clusters separated by gaps larger than `gap`.
pub(crate) fn clusters(values: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for i in idx {
        if values[i] - last > gap || out.is_empty() {
            out.push(Vec::new());
        }
        last = values[i];
        out.last_mut().unwrap().push(i);
    }
    out
}
