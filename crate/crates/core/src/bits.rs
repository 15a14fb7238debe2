//! Dense square boolean matrices backed by `u64` blocks.
//!
//! Boolean matrix multiplication is the workhorse behind relational powers,
//! transitive closures, and the uniform walk constant.

use std::fmt;

const BLOCK: usize = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    size: usize,
    width: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(size: usize) -> Self {
        let width = size.div_ceil(BLOCK);
        BitMatrix {
            size,
            width,
            bits: vec![0; width * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.set(i, i);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.size && v < self.size);
        (self.bits[u * self.width + v / BLOCK] >> (v % BLOCK)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, u: usize, v: usize) {
        debug_assert!(u < self.size && v < self.size);
        self.bits[u * self.width + v / BLOCK] |= 1 << (v % BLOCK);
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.width..(u + 1) * self.width]
    }

    fn or_into_row(&mut self, u: usize, other: &[u64]) {
        let row = &mut self.bits[u * self.width..(u + 1) * self.width];
        for (dst, src) in row.iter_mut().zip(other) {
            *dst |= src;
        }
    }

    /// Boolean matrix product: `out[u][v] = exists w: self[u][w] && rhs[w][v]`.
    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.size, rhs.size);
        let mut out = BitMatrix::zeros(self.size);
        for u in 0..self.size {
            for w in self.ones_in_row(u) {
                out.or_into_row(u, rhs.row(w));
            }
        }
        out
    }

    pub fn union(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.size, rhs.size);
        let mut out = self.clone();
        for u in 0..self.size {
            out.or_into_row(u, rhs.row(u));
        }
        out
    }

    pub fn is_all_ones(&self) -> bool {
        if self.size == 0 {
            return false;
        }
        let tail_bits = self.size % BLOCK;
        let tail_mask = if tail_bits == 0 {
            u64::MAX
        } else {
            (1u64 << tail_bits) - 1
        };
        for u in 0..self.size {
            let row = self.row(u);
            for (j, &word) in row.iter().enumerate() {
                let expected = if j + 1 == self.width { tail_mask } else { u64::MAX };
                if word != expected {
                    return false;
                }
            }
        }
        true
    }

    /// Ones of a row in ascending order.
    pub fn ones_in_row(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.row(u);
        row.iter().enumerate().flat_map(|(j, &word)| {
            let base = j * BLOCK;
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(base + bit)
                }
            })
        })
    }

    pub fn first_diagonal_one(&self) -> Option<usize> {
        (0..self.size).find(|&v| self.get(v, v))
    }

    pub fn has_diagonal_one(&self) -> bool {
        self.first_diagonal_one().is_some()
    }

    pub fn is_symmetric(&self) -> bool {
        for u in 0..self.size {
            for v in self.ones_in_row(u) {
                if !self.get(v, u) {
                    return false;
                }
            }
        }
        true
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({})", self.size)?;
        for u in 0..self.size {
            for v in 0..self.size {
                write!(f, "{}", if self.get(u, v) { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
