//! Normalized bar complex: an independent check on resolution output.
//!
//! `C^k` has basis the k-tuples of non-identity elements, so its dimension is
//! `(|G| - 1)^k`. Nothing here touches the group algebra or the resolution code.

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::linalg::{FpMatrix, Prime};

pub const ORACLE_MAX_ORDER: usize = 8;
pub const ORACLE_MAX_DEGREE: usize = 4;

fn check_caps(g: &PermGroup, n: usize) -> Result<()> {
    if g.order() > ORACLE_MAX_ORDER {
        return Err(Error::OrderCapExceeded { cap: ORACLE_MAX_ORDER });
    }
    if n > ORACLE_MAX_DEGREE {
        return Err(Error::DegreeOutOfRange { degree: n, max: ORACLE_MAX_DEGREE });
    }
    Ok(())
}

/// Tuple `(a_1..a_k)` of non-identity elements (element index minus one),
/// encoded big-endian in base `m`.
fn tuple_index(tuple: &[usize], m: usize) -> usize {
    tuple.iter().fold(0, |acc, &a| acc * m + a)
}

fn decode(mut idx: usize, k: usize, m: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = idx % m;
        idx /= m;
    }
    out
}

/// The coboundary `δ^k : C^k -> C^{k+1}` as a `m^{k+1} × m^k` matrix.
pub fn coboundary_matrix(g: &PermGroup, p: Prime, k: usize) -> FpMatrix {
    let m = g.order() - 1;
    let rows = m.pow(k as u32 + 1);
    let cols = m.pow(k as u32);
    let mut data = vec![0u8; rows * cols];
    let mut add = |r: usize, c: usize, sign: bool| {
        let e = &mut data[r * cols + c];
        *e = if sign { p.sub(*e, 1) } else { p.add(*e, 1) };
    };
    for r in 0..rows {
        let t = decode(r, k + 1, m);
        add(r, tuple_index(&t[1..], m), false);
        for i in 0..k {
            let prod = g.mul(t[i] + 1, t[i + 1] + 1);
            if prod != PermGroup::IDENTITY {
                let mut face = t[..i].to_vec();
                face.push(prod - 1);
                face.extend_from_slice(&t[i + 2..]);
                add(r, tuple_index(&face, m), (i + 1) % 2 == 1);
            }
        }
        add(r, tuple_index(&t[..k], m), (k + 1) % 2 == 1);
    }
    FpMatrix::from_data(p, rows, cols, data).expect("dimensions agree")
}

/// `dim H^n(G; F_p)` from the bar complex.
pub fn bar_betti_oracle(g: &PermGroup, p: Prime, n: usize) -> Result<usize> {
    check_caps(g, n)?;
    let m = g.order() - 1;
    let dim_cn = m.pow(n as u32);
    let rank_out = coboundary_matrix(g, p, n).rank();
    let rank_in = if n == 0 { 0 } else { coboundary_matrix(g, p, n - 1).rank() };
    Ok(dim_cn - rank_out - rank_in)
}

/// `dim H^k` for `0 <= k <= n`, computing each coboundary rank once.
pub fn bar_betti_series(g: &PermGroup, p: Prime, n: usize) -> Result<Vec<usize>> {
    check_caps(g, n)?;
    let m = g.order() - 1;
    let ranks: Vec<usize> = (0..=n).map(|k| coboundary_matrix(g, p, k).rank()).collect();
    Ok((0..=n).map(|k| m.pow(k as u32) - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] }).collect())
}

/// For homomorphisms `f, h : G -> F_p` (values indexed by element), whether
/// the 2-cocycle `(g_1, g_2) ↦ f(g_1) h(g_2)` is a coboundary.
pub fn degree_one_product_is_coboundary(g: &PermGroup, p: Prime, f: &[u8], h: &[u8]) -> Result<bool> {
    check_caps(g, 2)?;
    let n = g.order();
    if f.len() != n || h.len() != n {
        return Err(Error::DimensionMismatch("homomorphism values must be indexed by group elements".into()));
    }
    for a in 0..n {
        for b in 0..n {
            let ab = g.mul(a, b);
            if p.add(f[a], f[b]) != f[ab] % p.get() || p.add(h[a], h[b]) != h[ab] % p.get() {
                return Err(Error::InvalidHomomorphism("values are not additive".into()));
            }
        }
    }
    let m = n - 1;
    let cocycle: Vec<u8> = (0..m * m)
        .map(|r| {
            let t = decode(r, 2, m);
            p.mul(f[t[0] + 1], h[t[1] + 1])
        })
        .collect();
    let delta = coboundary_matrix(g, p, 1);
    let rhs = FpMatrix::from_rows(p, 1, &cocycle.iter().map(|&v| [v]).collect::<Vec<_>>())?;
    Ok(crate::linalg::solve(&delta, &rhs)?.is_some())
}
