//! Dense linear algebra over `F_q` on row-major `Vec<FqElem>` matrices.

use crate::fields::{FieldCtx, FqElem};

/// Row-reduces `m` (`rows × cols`) in place to reduced row echelon form and
/// returns the pivot columns.
pub fn rref_in_place(f: &FieldCtx, m: &mut [FqElem], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i * cols + c].is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                m.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(m[r * cols + c]).expect("pivot is nonzero");
        for j in 0..cols {
            m[r * cols + j] = f.mul(m[r * cols + j], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m[i * cols + c];
            if factor.is_zero() {
                continue;
            }
            for j in 0..cols {
                let t = f.mul(factor, m[r * cols + j]);
                m[i * cols + j] = f.sub(m[i * cols + j], t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &FieldCtx, m: &[FqElem], rows: usize, cols: usize) -> usize {
    let mut w = m.to_vec();
    rref_in_place(f, &mut w, rows, cols).len()
}

/// Basis of the right kernel `{x : m·x = 0}`.
pub fn kernel(f: &FieldCtx, m: &[FqElem], rows: usize, cols: usize) -> Vec<Vec<FqElem>> {
    let mut w = m.to_vec();
    let pivots = rref_in_place(f, &mut w, rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![f.zero(); cols];
            x[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = f.neg(w[r * cols + fc]);
            }
            x
        })
        .collect()
}

pub fn det(f: &FieldCtx, m: &[FqElem], n: usize) -> FqElem {
    let mut w = m.to_vec();
    let mut d = f.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !w[i * n + c].is_zero()) else {
            return f.zero();
        };
        if pr != c {
            for j in 0..n {
                w.swap(pr * n + j, c * n + j);
            }
            d = f.neg(d);
        }
        let piv = w[c * n + c];
        d = f.mul(d, piv);
        let inv = f.inv(piv).expect("pivot is nonzero");
        for i in c + 1..n {
            let factor = f.mul(w[i * n + c], inv);
            if factor.is_zero() {
                continue;
            }
            for j in c..n {
                let t = f.mul(factor, w[c * n + j]);
                w[i * n + j] = f.sub(w[i * n + j], t);
            }
        }
    }
    d
}

/// `a (r × k) · b (k × c)`.
pub fn mat_mul(f: &FieldCtx, a: &[FqElem], b: &[FqElem], r: usize, k: usize, c: usize) -> Vec<FqElem> {
    let mut out = vec![f.zero(); r * c];
    for i in 0..r {
        for l in 0..k {
            let x = a[i * k + l];
            if x.is_zero() {
                continue;
            }
            for j in 0..c {
                out[i * c + j] = f.add(out[i * c + j], f.mul(x, b[l * c + j]));
            }
        }
    }
    out
}

pub fn transpose(a: &[FqElem], r: usize, c: usize) -> Vec<FqElem> {
    let mut out = Vec::with_capacity(r * c);
    for j in 0..c {
        for i in 0..r {
            out.push(a[i * c + j]);
        }
    }
    out
}

pub fn identity(f: &FieldCtx, n: usize) -> Vec<FqElem> {
    let mut m = vec![f.zero(); n * n];
    for i in 0..n {
        m[i * n + i] = f.one();
    }
    m
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(f: &FieldCtx, m: &[FqElem], n: usize) -> Option<Vec<FqElem>> {
    let mut aug = vec![f.zero(); n * 2 * n];
    for i in 0..n {
        aug[i * 2 * n..i * 2 * n + n].copy_from_slice(&m[i * n..(i + 1) * n]);
        aug[i * 2 * n + n + i] = f.one();
    }
    let pivots = rref_in_place(f, &mut aug, n, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let mut out = vec![f.zero(); n * n];
    for i in 0..n {
        out[i * n..(i + 1) * n].copy_from_slice(&aug[i * 2 * n + n..(i + 1) * 2 * n]);
    }
    Some(out)
}

/// Integer encoding of a vector: `Σ x_i q^i`.
pub fn encode(f: &FieldCtx, v: &[FqElem]) -> u64 {
    let q = f.q() as u64;
    v.iter().rev().fold(0u64, |acc, x| acc * q + x.index() as u64)
}

/// Inverse of [`encode`] for a vector of length `len`.
pub fn decode(f: &FieldCtx, mut idx: u64, len: usize) -> Vec<FqElem> {
    let q = f.q() as u64;
    (0..len)
        .map(|_| {
            let d = (idx % q) as u32;
            idx /= q;
            FqElem(d)
        })
        .collect()
}
