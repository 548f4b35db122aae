use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tower::{LElem, Tower};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Hermitian,
    SkewHermitian,
}

/// A sesquilinear form over `L`, conjugate-linear in the first argument:
/// `H(x, y) = sum_ij bar(x_i) h_ij y_j`.
#[derive(Clone, Debug)]
pub struct HermForm {
    tower: Tower,
    gram: Vec<Vec<LElem>>,
    flavor: Flavor,
}

impl HermForm {
    pub fn new(tower: Tower, gram: Vec<Vec<LElem>>, flavor: Flavor) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::NonSquare);
        }
        let gram: Vec<Vec<LElem>> = gram
            .iter()
            .map(|r| r.iter().map(|x| tower.reduce(x)).collect())
            .collect();
        for i in 0..n {
            for j in 0..n {
                let b = tower.bar(&gram[i][j]);
                let expect = match flavor {
                    Flavor::Hermitian => b,
                    Flavor::SkewHermitian => -&b,
                };
                if gram[j][i] != expect {
                    return Err(Error::KindMismatch(format!("gram is not {:?}", flavor)));
                }
            }
        }
        Ok(HermForm {
            tower,
            gram,
            flavor,
        })
    }

    pub fn zero(tower: Tower, flavor: Flavor) -> Self {
        HermForm {
            tower,
            gram: vec![],
            flavor,
        }
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn gram(&self) -> &[Vec<LElem>] {
        &self.gram
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn value(&self, x: &[LElem], y: &[LElem]) -> LElem {
        let tw = &self.tower;
        let mut acc = tw.zero();
        for (i, xi) in x.iter().enumerate() {
            let xb = tw.bar(xi);
            for (j, yj) in y.iter().enumerate() {
                acc = tw.add(&acc, &tw.mul(&xb, &tw.mul(&self.gram[i][j], yj)));
            }
        }
        tw.reduce(&acc)
    }

    /// Multiplies a skew-hermitian form by `eta = t - 1/t` to make it hermitian.
    pub fn to_hermitian(&self) -> HermForm {
        match self.flavor {
            Flavor::Hermitian => self.clone(),
            Flavor::SkewHermitian => {
                let eta = self.tower.eta().clone();
                let gram = self
                    .gram
                    .iter()
                    .map(|r| r.iter().map(|x| self.tower.mul(&eta, x)).collect())
                    .collect();
                HermForm {
                    tower: self.tower.clone(),
                    gram,
                    flavor: Flavor::Hermitian,
                }
            }
        }
    }

    /// Rank over `L` by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let tw = &self.tower;
        let mut m = self.gram.clone();
        let n = m.len();
        let mut rank = 0;
        for c in 0..n {
            let Some(piv) = (rank..n).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(rank, piv);
            let inv = tw.inv(&m[rank][c]).expect("nonzero in a field");
            for r in 0..n {
                if r != rank && !m[r][c].is_zero() {
                    let f = tw.mul(&m[r][c], &inv);
                    for k in 0..n {
                        let s = tw.mul(&f, &m[rank][k]);
                        m[r][k] = tw.reduce(&(&m[r][k] - &s));
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_regular(&self) -> bool {
        self.rank() == self.dim()
    }
}

/// Over a finite field a regular hermitian form is hyperbolic exactly when
/// its rank is even; skew forms are first multiplied by `eta`.
pub fn herm_is_hyperbolic(h: &HermForm) -> Result<bool> {
    h.tower.ctx().modulus()?;
    let h = h.to_hermitian();
    if !h.is_regular() {
        return Err(Error::DegenerateForm);
    }
    Ok(h.dim() % 2 == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::FieldCtx;
    use crate::poly::Poly;

    fn tower() -> Tower {
        let k = FieldCtx::prime(3).unwrap();
        Tower::new(&Poly::from_i64s(k, &[1, 0, 1])).unwrap()
    }

    #[test]
    fn identity_rank_two_is_hyperbolic() {
        let tw = tower();
        let id = vec![vec![tw.one(), tw.zero()], vec![tw.zero(), tw.one()]];
        let h = HermForm::new(tw.clone(), id, Flavor::Hermitian).unwrap();
        assert!(herm_is_hyperbolic(&h).unwrap());
        // an explicit isotropic vector: bar(a) a + bar(b) b = 0 for a = 1, b = 1 + t
        let b = Poly::from_i64s(tw.ctx(), &[1, 1]);
        assert!(h.value(&[tw.one(), b.clone()], &[tw.one(), b]).is_zero());
    }

    #[test]
    fn small_ranks() {
        let tw = tower();
        let h1 = HermForm::new(tw.clone(), vec![vec![tw.one()]], Flavor::Hermitian).unwrap();
        assert!(!herm_is_hyperbolic(&h1).unwrap());
        assert!(herm_is_hyperbolic(&HermForm::zero(tw.clone(), Flavor::Hermitian)).unwrap());
        let skew = HermForm::new(
            tw.clone(),
            vec![vec![tw.eta().clone()]],
            Flavor::SkewHermitian,
        )
        .unwrap();
        assert_eq!(skew.to_hermitian().flavor(), Flavor::Hermitian);
        assert!(HermForm::new(tw.clone(), vec![vec![tw.t()]], Flavor::Hermitian).is_err());
    }
}
