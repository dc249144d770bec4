//! Packing of `F_q` vectors into integers, first coordinate most
//! significant, so integer order is lexicographic order.

use super::field::FqValue;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VectorPacker {
    q: u64,
    dim: usize,
    size: u64,
}

impl VectorPacker {
    /// Fails with `TOO_LARGE` when `q^dim` exceeds `bound`.
    pub fn new(q: u32, dim: usize, bound: u64) -> Result<Self> {
        let size = (q as u64).checked_pow(dim as u32).filter(|&s| s <= bound);
        match size {
            Some(size) => Ok(VectorPacker { q: q as u64, dim, size }),
            None => Err(Error::TooLarge {
                what: "vector space",
                size: (q as u64).saturating_pow(dim as u32),
                bound,
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vectors, `q^dim`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn pack(&self, v: &[FqValue]) -> u64 {
        debug_assert_eq!(v.len(), self.dim);
        v.iter().fold(0, |acc, x| acc * self.q + x.0 as u64)
    }

    pub fn unpack(&self, code: u64) -> Vec<FqValue> {
        let mut v = vec![FqValue::ZERO; self.dim];
        self.unpack_into(code, &mut v);
        v
    }

    pub fn unpack_into(&self, mut code: u64, out: &mut [FqValue]) {
        for slot in out.iter_mut().rev() {
            *slot = FqValue((code % self.q) as u32);
            code /= self.q;
        }
    }
}
