//! Dense linear algebra over the prime fields F_q, q <= 13.
//!
//! Two elimination paths: a generic byte-matrix path for every q, and a
//! GF(2) fast path with rows packed into machine words and word-parallel
//! reduction. [`GfMatrix::rank`] dispatches automatically; the generic path
//! stays reachable so the two can be cross-checked.

use super::OracleError;

pub const SUPPORTED_PRIMES: [u8; 6] = [2, 3, 5, 7, 11, 13];

pub fn check_prime(q: u8) -> Result<(), OracleError> {
    if SUPPORTED_PRIMES.contains(&q) {
        Ok(())
    } else {
        Err(OracleError::BadPrime(q))
    }
}

/// Multiplicative inverse in F_q (q prime, a != 0), by Fermat.
pub fn inv_mod(a: u8, q: u8) -> u8 {
    debug_assert!(a % q != 0);
    let mut result = 1u32;
    let mut base = u32::from(a % q);
    let mut exp = u32::from(q) - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % u32::from(q);
        }
        base = base * base % u32::from(q);
        exp >>= 1;
    }
    result as u8
}

pub fn primitive_root(q: u8) -> u8 {
    if q == 2 {
        return 1;
    }
    'outer: for g in 2..q {
        let mut x = 1u32;
        for _ in 0..q - 2 {
            x = x * u32::from(g) % u32::from(q);
            if x == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("prime fields have primitive roots")
}

/// Row-major byte matrix over F_q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfMatrix {
    pub q: u8,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u8>,
}

impl GfMatrix {
    pub fn zero(q: u8, rows: usize, cols: usize) -> Self {
        Self {
            q,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v % self.q;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: i32) {
        let q = i32::from(self.q);
        let cur = i32::from(self.data[i * self.cols + j]);
        self.data[i * self.cols + j] = ((cur + v).rem_euclid(q)) as u8;
    }

    /// Matrix rank; uses the packed GF(2) path when it applies.
    pub fn rank(&self) -> usize {
        if self.q == 2 && self.cols <= 64 {
            let packed: Vec<u64> = (0..self.rows)
                .map(|i| {
                    (0..self.cols)
                        .filter(|&j| self.at(i, j) == 1)
                        .fold(0u64, |acc, j| acc | (1u64 << j))
                })
                .collect();
            return rank_gf2(&packed);
        }
        self.rank_generic()
    }

    /// Generic forward elimination, any supported q.
    pub fn rank_generic(&self) -> usize {
        let mut m = self.data.clone();
        let (rows, cols, q) = (self.rows, self.cols, u16::from(self.q));
        let mut rank = 0usize;
        for col in 0..cols {
            let mut pivot = None;
            for r in rank..rows {
                if m[r * cols + col] != 0 {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            m.swap_chunks(rank, p, cols);
            let inv = u16::from(inv_mod(m[rank * cols + col], self.q));
            for j in col..cols {
                m[rank * cols + j] = (u16::from(m[rank * cols + j]) * inv % q) as u8;
            }
            for r in 0..rows {
                if r != rank && m[r * cols + col] != 0 {
                    let f = u16::from(m[r * cols + col]);
                    for j in col..cols {
                        let v = u16::from(m[r * cols + j]) + (q - f) * u16::from(m[rank * cols + j]) % q;
                        m[r * cols + j] = (v % q) as u8;
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// Basis of the right kernel, each vector of length `cols`.
    pub fn kernel_basis(&self) -> Vec<Vec<u8>> {
        let mut m = self.data.clone();
        let (rows, cols, q) = (self.rows, self.cols, u16::from(self.q));
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
        let mut rank = 0usize;
        for col in 0..cols {
            let mut pivot = None;
            for r in rank..rows {
                if m[r * cols + col] != 0 {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            m.swap_chunks(rank, p, cols);
            let inv = u16::from(inv_mod(m[rank * cols + col], self.q));
            for j in 0..cols {
                m[rank * cols + j] = (u16::from(m[rank * cols + j]) * inv % q) as u8;
            }
            for r in 0..rows {
                if r != rank && m[r * cols + col] != 0 {
                    let f = u16::from(m[r * cols + col]);
                    for j in 0..cols {
                        let v = u16::from(m[r * cols + j]) + (q - f) * u16::from(m[rank * cols + j]) % q;
                        m[r * cols + j] = (v % q) as u8;
                    }
                }
            }
            pivot_of_col[col] = Some(rank);
            rank += 1;
            if rank == rows {
                break;
            }
        }
        let mut basis = Vec::with_capacity(cols - rank);
        for free in 0..cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![0u8; cols];
            v[free] = 1;
            for col in 0..cols {
                if let Some(r) = pivot_of_col[col] {
                    let coeff = m[r * cols + free];
                    if coeff != 0 {
                        v[col] = (q - u16::from(coeff)) as u8 % self.q;
                    }
                }
            }
            basis.push(v);
        }
        basis
    }
}

trait SwapChunks {
    fn swap_chunks(&mut self, a: usize, b: usize, len: usize);
}

impl SwapChunks for Vec<u8> {
    fn swap_chunks(&mut self, a: usize, b: usize, len: usize) {
        if a == b {
            return;
        }
        for j in 0..len {
            self.swap(a * len + j, b * len + j);
        }
    }
}

/// Rank of an F_2 matrix with rows packed into u64 words: each row is
/// reduced against a leading-bit-indexed XOR basis.
pub fn rank_gf2(rows: &[u64]) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0usize;
    for &row in rows {
        let mut v = row;
        while v != 0 {
            let bit = 63 - v.leading_zeros() as usize;
            if basis[bit] == 0 {
                basis[bit] = v;
                rank += 1;
                break;
            }
            v ^= basis[bit];
        }
    }
    rank
}

/// Square matrices over F_q stored as flat row-major byte vectors.
pub mod mat {
    use super::inv_mod;

    pub type Mat = Vec<u8>;

    pub fn identity(n: usize) -> Mat {
        let mut m = vec![0u8; n * n];
        for i in 0..n {
            m[i * n + i] = 1;
        }
        m
    }

    pub fn mul(a: &[u8], b: &[u8], n: usize, q: u8) -> Mat {
        let q32 = u32::from(q);
        let mut out = vec![0u8; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = u32::from(a[i * n + k]);
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = (u32::from(out[i * n + j]) + aik * u32::from(b[k * n + j])) % q32;
                    out[i * n + j] = v as u8;
                }
            }
        }
        out
    }

    pub fn commutator(a: &[u8], b: &[u8], n: usize, q: u8) -> Mat {
        let ab = mul(a, b, n, q);
        let ba = mul(b, a, n, q);
        let q16 = u16::from(q);
        ab.iter()
            .zip(&ba)
            .map(|(&x, &y)| ((u16::from(x) + q16 - u16::from(y)) % q16) as u8)
            .collect()
    }

    pub fn is_zero(m: &[u8]) -> bool {
        m.iter().all(|&v| v == 0)
    }

    /// Inverse by Gauss-Jordan; panics on singular input.
    pub fn inverse(a: &[u8], n: usize, q: u8) -> Mat {
        let q16 = u16::from(q);
        let mut left = a.to_vec();
        let mut right = identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| left[r * n + col] != 0)
                .expect("singular matrix");
            for j in 0..n {
                left.swap(col * n + j, pivot * n + j);
                right.swap(col * n + j, pivot * n + j);
            }
            let inv = u16::from(inv_mod(left[col * n + col], q));
            for j in 0..n {
                left[col * n + j] = (u16::from(left[col * n + j]) * inv % q16) as u8;
                right[col * n + j] = (u16::from(right[col * n + j]) * inv % q16) as u8;
            }
            for r in 0..n {
                if r != col && left[r * n + col] != 0 {
                    let f = u16::from(left[r * n + col]);
                    for j in 0..n {
                        let lv = u16::from(left[r * n + j])
                            + (q16 - f) * u16::from(left[col * n + j]) % q16;
                        left[r * n + j] = (lv % q16) as u8;
                        let rv = u16::from(right[r * n + j])
                            + (q16 - f) * u16::from(right[col * n + j]) % q16;
                        right[r * n + j] = (rv % q16) as u8;
                    }
                }
            }
        }
        right
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        for q in SUPPORTED_PRIMES {
            for a in 1..q {
                assert_eq!(u16::from(a) * u16::from(inv_mod(a, q)) % u16::from(q), 1);
            }
        }
    }

    #[test]
    fn primitive_roots_generate() {
        for q in SUPPORTED_PRIMES {
            if q == 2 {
                continue;
            }
            let g = primitive_root(q);
            let mut seen = std::collections::HashSet::new();
            let mut x = 1u32;
            for _ in 0..q - 1 {
                x = x * u32::from(g) % u32::from(q);
                seen.insert(x);
            }
            assert_eq!(seen.len(), usize::from(q) - 1, "q = {q}");
        }
    }

    #[test]
    fn rank_small_cases() {
        let mut m = GfMatrix::zero(5, 3, 3);
        m.set(0, 0, 1);
        m.set(1, 1, 2);
        m.set(2, 0, 3); // row 2 = 3 * row 0
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rank_generic(), 2);

        let z = GfMatrix::zero(7, 4, 6);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel_basis().len(), 6);
    }

    #[test]
    fn packed_gf2_rank_matches_generic_on_random_matrices() {
        // simple deterministic LCG so the test needs no rng dependency here
        let mut state = 0x12345678u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state >> 33
        };
        for _ in 0..200 {
            let rows = (next() % 10 + 1) as usize;
            let cols = (next() % 12 + 1) as usize;
            let mut m = GfMatrix::zero(2, rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(i, j, (next() % 2) as u8);
                }
            }
            assert_eq!(m.rank(), m.rank_generic());
        }
    }

    #[test]
    fn kernel_vectors_are_killed_by_the_matrix() {
        let mut state = 0xdeadbeefu64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state >> 33
        };
        for q in [2u8, 3, 5, 13] {
            for _ in 0..50 {
                let rows = (next() % 8 + 1) as usize;
                let cols = (next() % 8 + 1) as usize;
                let mut m = GfMatrix::zero(q, rows, cols);
                for i in 0..rows {
                    for j in 0..cols {
                        m.set(i, j, (next() % u64::from(q)) as u8);
                    }
                }
                let basis = m.kernel_basis();
                assert_eq!(basis.len(), cols - m.rank_generic(), "q={q}");
                for v in basis {
                    for i in 0..rows {
                        let dot: u32 = (0..cols)
                            .map(|j| u32::from(m.at(i, j)) * u32::from(v[j]))
                            .sum();
                        assert_eq!(dot % u32::from(q), 0, "q={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn matrix_helpers() {
        use mat::*;
        let n = 3;
        let q = 5;
        let a = vec![1, 2, 0, 0, 1, 3, 0, 0, 1];
        let inv = inverse(&a, n, q);
        assert_eq!(mul(&a, &inv, n, q), identity(n));
        let b = vec![0, 1, 0, 0, 0, 1, 0, 0, 0];
        assert!(is_zero(&commutator(&a, &a, n, q)));
        assert!(!is_zero(&commutator(&a, &b, n, q)));
    }
}
