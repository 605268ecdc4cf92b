use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{LatticeError, UnimodularMatrix};

/// Point of the torus `R^n / Z^n` with rational coordinates reduced into `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    coords: Vec<BigRational>,
}

fn reduce(q: BigRational) -> BigRational {
    let f = q.floor();
    q - f
}

impl TorusPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        TorusPoint {
            coords: coords.into_iter().map(reduce).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        TorusPoint {
            coords: vec![BigRational::zero(); n],
        }
    }

    /// The image of a real vector `c * v` for integer `v`.
    pub fn from_scaled(v: &[BigInt], c: &BigRational) -> Self {
        Self::new(
            v.iter()
                .map(|x| c * BigRational::from_integer(x.clone()))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Canonical lift into `[0, 1)^n`.
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check_dim(&self, other: &TorusPoint) -> Result<(), LatticeError> {
        if self.dim() != other.dim() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &TorusPoint) -> Result<TorusPoint, LatticeError> {
        self.check_dim(other)?;
        Ok(Self::new(
            self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &TorusPoint) -> Result<TorusPoint, LatticeError> {
        self.check_dim(other)?;
        Ok(Self::new(
            self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn neg(&self) -> TorusPoint {
        Self::new(self.coords.iter().map(|a| -a).collect())
    }

    /// `s` times the canonical lift, reduced mod 1.
    pub fn scale_lift(&self, s: &BigRational) -> TorusPoint {
        Self::new(self.coords.iter().map(|a| a * s).collect())
    }

    /// Image under the torus automorphism induced by `sigma`.
    pub fn transform(&self, sigma: &UnimodularMatrix) -> Result<TorusPoint, LatticeError> {
        if sigma.dim() != self.dim() {
            return Err(LatticeError::DimensionMismatch {
                expected: sigma.dim(),
                found: self.dim(),
            });
        }
        let m = sigma.matrix();
        Ok(Self::new(
            (0..m.rows())
                .map(|i| {
                    m.row(i)
                        .iter()
                        .zip(&self.coords)
                        .fold(BigRational::zero(), |acc, (a, x)| {
                            acc + x * BigRational::from_integer(a.clone())
                        })
                })
                .collect(),
        ))
    }
}

impl fmt::Display for TorusPoint {
    /// Comma separated `p/q` coordinates.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for TorusPoint {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(TorusPoint::identity(0));
        }
        let coords = s
            .split(',')
            .map(|c| parse_rational(c.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TorusPoint::new(coords))
    }
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<BigRational, LatticeError> {
    let bad = || LatticeError::BadRational(s.to_string());
    let q = match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            BigRational::new(p, q)
        }
        None => BigRational::from_integer(s.parse().map_err(|_| bad())?),
    };
    Ok(q)
}
