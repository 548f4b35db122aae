//! Small matrices over `F_q` as byte strings of residues, row-major. The byte
//! string is the canonical key for set membership.

use u2split_core::{FieldCtx, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub Box<[u8]>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RawCtx {
    pub n: usize,
    pub q: u8,
}

impl RawCtx {
    pub fn new(n: usize, q: u64) -> Self {
        assert!(q < 16, "raw arithmetic is meant for tiny fields");
        RawCtx { n, q: q as u8 }
    }

    pub fn identity(&self) -> Elem {
        let n = self.n;
        Elem((0..n * n).map(|k| u8::from(k / n == k % n)).collect())
    }

    pub fn zero(&self) -> Elem {
        Elem(vec![0; self.n * self.n].into_boxed_slice())
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let n = self.n;
        let q = u32::from(self.q);
        let mut out = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                let s: u32 = (0..n)
                    .map(|k| u32::from(a.0[i * n + k]) * u32::from(b.0[k * n + j]))
                    .sum();
                out[i * n + j] = (s % q) as u8;
            }
        }
        Elem(out.into_boxed_slice())
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let q = self.q;
        Elem(
            a.0.iter()
                .zip(b.0.iter())
                .map(|(x, y)| (x + y) % q)
                .collect(),
        )
    }

    pub fn transpose(&self, a: &Elem) -> Elem {
        let n = self.n;
        Elem((0..n * n).map(|k| a.0[(k % n) * n + k / n]).collect())
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self, a: &Elem) -> usize {
        let n = self.n;
        let q = u32::from(self.q);
        let mut m: Vec<u32> = a.0.iter().map(|&x| u32::from(x)).collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..n).find(|&r| m[r * n + col] != 0) else {
                continue;
            };
            for c in 0..n {
                m.swap(rank * n + c, p * n + c);
            }
            let inv = pow_mod(m[rank * n + col], q - 2, q);
            for r in 0..n {
                if r != rank && m[r * n + col] != 0 {
                    let f = m[r * n + col] * inv % q;
                    for c in 0..n {
                        m[r * n + c] = (m[r * n + c] + q * q - f * m[rank * n + c] % q) % q;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn from_matrix(&self, m: &Matrix) -> Elem {
        Elem(
            m.entries()
                .iter()
                .map(|x| x.residue().expect("prime field") as u8)
                .collect(),
        )
    }

    pub fn to_matrix(&self, ctx: FieldCtx, a: &Elem) -> Matrix {
        let n = self.n;
        Matrix::from_fn(ctx, n, n, |i, j| ctx.from_u64(u64::from(a.0[i * n + j])))
    }

    /// The element whose entries are the base-`q` digits of `code`.
    pub fn from_code(&self, mut code: u64) -> Elem {
        let q = u64::from(self.q);
        Elem(
            (0..self.n * self.n)
                .map(|_| {
                    let d = (code % q) as u8;
                    code /= q;
                    d
                })
                .collect(),
        )
    }
}

fn pow_mod(mut b: u32, mut e: u32, q: u32) -> u32 {
    let mut acc = 1;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    acc
}
