//! Lookup tables for vector addition and the half form on `𝐕`.
//!
//! An encoded vector is read as its base-`p` digits (the `F_p` coordinates of
//! all entries). Both `u + v` and `Tr(a·½𝐒(u,v))` are `F_p`-(bi)linear in
//! those digits, so splitting the digits into a low and a high half reduces
//! either operation to a few lookups in tables of side `p^{digits/2}`.

use super::{StarContext, TABLE_LIMIT};
use crate::fields::FqElem;

pub(crate) struct Tables {
    pub(crate) p: u32,
    pub(crate) p_lo: u64,
    pub(crate) p_hi: u64,
    pub(crate) add_lo: Vec<u32>,
    pub(crate) add_hi: Vec<u32>,
    pub(crate) ll: Vec<u16>,
    pub(crate) lh: Vec<u16>,
    pub(crate) hl: Vec<u16>,
    pub(crate) hh: Vec<u16>,
}

fn digits_of(mut x: u64, p: u64, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (x % p) as u32;
            x /= p;
            d
        })
        .collect()
}

impl Tables {
    pub(crate) fn build(ctx: &StarContext) -> Result<Tables, String> {
        let f = ctx.field();
        let p = f.p() as u64;
        let ell = f.ell() as usize;
        let total = ctx.dim() * ell;
        let lo = total.div_ceil(2);
        let hi = total - lo;
        let p_lo = p.pow(lo as u32);
        let p_hi = p.pow(hi as u32);
        if p_lo.saturating_mul(p_lo) > TABLE_LIMIT {
            return Err(format!("half-digit tables of side {p_lo} for |V| = {}", ctx.size()));
        }
        // Gram matrix over F_p of (u, v) ↦ Tr(a·½𝐒(u, v)) on digit basis vectors.
        let dim = ctx.dim();
        let basis = |t: usize| {
            let mut v = vec![f.zero(); dim];
            v[t / ell] = FqElem((p as u32).pow((t % ell) as u32));
            v
        };
        let half_a = f.half(ctx.char_param());
        let mut m = vec![0u32; total * total];
        for s in 0..total {
            let es = basis(s);
            for t in 0..total {
                let et = basis(t);
                m[s * total + t] = f.trace_to_prime(f.mul(half_a, ctx.form_value(&es, &et)));
            }
        }
        let bil = |xoff: usize, xlen: usize, yoff: usize, ylen: usize| -> Vec<u16> {
            let (px, py) = (p.pow(xlen as u32), p.pow(ylen as u32));
            let mut out = Vec::with_capacity((px * py) as usize);
            for x in 0..px {
                let xd = digits_of(x, p, xlen);
                let row: Vec<u64> = (0..ylen)
                    .map(|j| {
                        (0..xlen).map(|i| xd[i] as u64 * m[(xoff + i) * total + yoff + j] as u64).sum::<u64>() % p
                    })
                    .collect();
                for y in 0..py {
                    let mut acc = 0u64;
                    let mut yy = y;
                    for r in &row {
                        acc += r * (yy % p);
                        yy /= p;
                    }
                    out.push((acc % p) as u16);
                }
            }
            out
        };
        let add = |len: usize| -> Vec<u32> {
            let side = p.pow(len as u32);
            let mut out = Vec::with_capacity((side * side) as usize);
            for x in 0..side {
                let xd = digits_of(x, p, len);
                for y in 0..side {
                    let yd = digits_of(y, p, len);
                    let s = (0..len).rev().fold(0u64, |acc, i| acc * p + (xd[i] + yd[i]) as u64 % p);
                    out.push(s as u32);
                }
            }
            out
        };
        Ok(Tables {
            p: p as u32,
            p_lo,
            p_hi,
            add_lo: add(lo),
            add_hi: add(hi),
            ll: bil(0, lo, 0, lo),
            lh: bil(0, lo, lo, hi),
            hl: bil(lo, hi, 0, lo),
            hh: bil(lo, hi, lo, hi),
        })
    }

    #[inline]
    pub(crate) fn split(&self, u: u64) -> (usize, usize) {
        ((u % self.p_lo) as usize, (u / self.p_lo) as usize)
    }

    #[inline]
    pub(crate) fn add(&self, u: u64, v: u64) -> u64 {
        let (ul, uh) = self.split(u);
        let (vl, vh) = self.split(v);
        let pl = self.p_lo as usize;
        let ph = self.p_hi as usize;
        self.add_lo[ul * pl + vl] as u64 + self.p_lo * self.add_hi[uh * ph + vh] as u64
    }

    /// Exponent `Tr(a·½𝐒(u, v))` in `[0, p)`.
    #[inline]
    pub(crate) fn beta(&self, u: u64, v: u64) -> u32 {
        let (ul, uh) = self.split(u);
        let (vl, vh) = self.split(v);
        let pl = self.p_lo as usize;
        let ph = self.p_hi as usize;
        let s = self.ll[ul * pl + vl] as u32
            + self.lh[ul * ph + vh] as u32
            + self.hl[uh * pl + vl] as u32
            + self.hh[uh * ph + vh] as u32;
        s % self.p
    }

    /// Additive inverse of an encoded vector.
    pub(crate) fn neg(&self, u: u64) -> u64 {
        let p = self.p as u64;
        let mut out = 0u64;
        let mut scale = 1u64;
        let mut x = u;
        let total = self.p_lo * self.p_hi;
        while scale < total {
            let d = x % p;
            x /= p;
            out += ((p - d) % p) * scale;
            scale *= p;
        }
        out
    }
}
