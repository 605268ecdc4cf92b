use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::normal_form::{complete_to_basis, extends_to_basis, hnf};
use super::{IntMatrix, LatticeError, TorusPoint};

/// A subgroup of `Z^n`, stored by its Hermite normal form basis (see [`hnf`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sublattice {
    ambient: usize,
    basis: IntMatrix,
}

impl Sublattice {
    pub fn span(ambient: usize, generators: &[Vec<BigInt>]) -> Result<Self, LatticeError> {
        let m = IntMatrix::from_rows(ambient, generators)?;
        Ok(Sublattice {
            ambient,
            basis: hnf(&m),
        })
    }

    pub fn zero(ambient: usize) -> Self {
        Sublattice {
            ambient,
            basis: IntMatrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Sublattice {
            ambient,
            basis: IntMatrix::identity(ambient),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// A direct summand of `Z^n`: equal to its real span intersected with `Z^n`.
    pub fn is_saturated(&self) -> bool {
        extends_to_basis(&self.basis.to_rows(), self.ambient).expect("basis rank <= ambient")
    }

    /// Whether `v` is an integer combination of the basis rows.
    pub fn contains(&self, v: &[BigInt]) -> Result<bool, LatticeError> {
        if v.len() != self.ambient {
            return Err(LatticeError::DimensionMismatch {
                expected: self.ambient,
                found: v.len(),
            });
        }
        let mut rest = v.to_vec();
        // Row i vanishes right of its pivot, and pivots increase, so peel rows from the bottom.
        for i in (0..self.rank()).rev() {
            let row = self.basis.row(i);
            let p = row
                .iter()
                .rposition(|x| !x.is_zero())
                .expect("HNF rows are non-zero");
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return Ok(false);
            }
            for (x, b) in rest.iter_mut().zip(row) {
                *x -= &q * b;
            }
        }
        Ok(rest.iter().all(Zero::is_zero))
    }

    pub fn contains_lattice(&self, other: &Sublattice) -> Result<bool, LatticeError> {
        for row in other.basis.to_rows() {
            if !self.contains(&row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership of `t` in the subtorus `(L ⊗ R) / L` of `R^n / Z^n`.
    ///
    /// Requires a saturated lattice. The basis is completed to a unimodular
    /// `C = [A | B]` (basis as columns); `t` lies in the subtorus iff the
    /// trailing coordinates of `C^{-1} t` are integers.
    pub fn subtorus_contains(&self, t: &TorusPoint) -> Result<bool, LatticeError> {
        if t.dim() != self.ambient {
            return Err(LatticeError::DimensionMismatch {
                expected: self.ambient,
                found: t.dim(),
            });
        }
        let completed = match complete_to_basis(&self.basis.to_rows(), self.ambient) {
            Ok(u) => u,
            Err(LatticeError::NotCompletable) => return Err(LatticeError::NotSaturated),
            Err(e) => return Err(e),
        };
        // C = U^T, so C^{-1} = (U^{-1})^T.
        let inv_t = completed.inverse().into_matrix().transpose();
        for i in self.rank()..self.ambient {
            let coord = inv_t
                .row(i)
                .iter()
                .zip(t.coords())
                .fold(BigRational::zero(), |acc, (a, x)| {
                    acc + x * BigRational::from_integer(a.clone())
                });
            if !coord.is_integer() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for i in 0..self.rank() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("(")?;
            for (j, x) in self.basis.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        write!(f, "}}")
    }
}
