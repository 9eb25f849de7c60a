//! Finite-dimensional Banach lattices: `R^n` with coordinatewise order and a
//! selectable lattice norm, plus the duality pairing.
//!
//! Dual vectors are plain [`LatticeVector`]s; the dual-norm interpretation is
//! carried by the operation ([`LatticeVector::dual_norm`]), not by a parallel
//! type hierarchy.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The supported lattice norms on `R^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    L1,
    L2,
    Linf,
    /// Weighted `l1`: `sum_i w_i |v_i|`, strictly positive weights.
    Wl1,
    /// Weighted `l-infinity`: `max_i w_i |v_i|`, strictly positive weights.
    Wlinf,
}

impl NormKind {
    pub fn is_weighted(self) -> bool {
        matches!(self, NormKind::Wl1 | NormKind::Wlinf)
    }
}

/// `R^n` with coordinatewise order and a chosen lattice norm.
///
/// The positive cone is the set of coordinatewise nonnegative vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ContextSpec", into = "ContextSpec")]
pub struct LatticeContext {
    dim: usize,
    kind: NormKind,
    weights: Option<Vec<f64>>,
}

/// Wire form of a context: `{"dim": n, "norm": {"kind": "...", "weights": [..]?}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct ContextSpec {
    dim: usize,
    norm: NormSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct NormSpec {
    kind: NormKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
}

impl TryFrom<ContextSpec> for LatticeContext {
    type Error = Error;
    fn try_from(spec: ContextSpec) -> Result<Self> {
        LatticeContext::new(spec.dim, spec.norm.kind, spec.norm.weights)
    }
}

impl From<LatticeContext> for ContextSpec {
    fn from(ctx: LatticeContext) -> Self {
        ContextSpec {
            dim: ctx.dim,
            norm: NormSpec {
                kind: ctx.kind,
                weights: ctx.weights,
            },
        }
    }
}

impl LatticeContext {
    /// A context with the given dimension and norm. Weights are required for
    /// the weighted kinds (strictly positive, length `dim`) and rejected
    /// otherwise.
    pub fn new(dim: usize, kind: NormKind, weights: Option<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidContext("dim must be >= 1".into()));
        }
        match (kind.is_weighted(), &weights) {
            (true, Some(w)) => {
                if w.len() != dim {
                    return Err(Error::InvalidContext(format!(
                        "weights length {} != dim {}",
                        w.len(),
                        dim
                    )));
                }
                if w.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
                    return Err(Error::InvalidContext(
                        "weights must be strictly positive and finite".into(),
                    ));
                }
            }
            (true, None) => {
                return Err(Error::InvalidContext(
                    "weighted norm requires weights".into(),
                ))
            }
            (false, Some(_)) => {
                return Err(Error::InvalidContext(
                    "weights are only valid for weighted norms".into(),
                ))
            }
            (false, None) => {}
        }
        Ok(LatticeContext { dim, kind, weights })
    }

    /// Unweighted context shorthand.
    pub fn unweighted(dim: usize, kind: NormKind) -> Result<Self> {
        Self::new(dim, kind, None)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// The dual context: `l1 <-> l-infinity`, `l2` self-dual, weighted kinds
    /// swap with reciprocal weights.
    pub fn dual(&self) -> LatticeContext {
        let recip = |w: &Vec<f64>| w.iter().map(|x| 1.0 / x).collect::<Vec<_>>();
        match self.kind {
            NormKind::L1 => LatticeContext {
                dim: self.dim,
                kind: NormKind::Linf,
                weights: None,
            },
            NormKind::Linf => LatticeContext {
                dim: self.dim,
                kind: NormKind::L1,
                weights: None,
            },
            NormKind::L2 => self.clone(),
            NormKind::Wl1 => LatticeContext {
                dim: self.dim,
                kind: NormKind::Wlinf,
                weights: self.weights.as_ref().map(recip),
            },
            NormKind::Wlinf => LatticeContext {
                dim: self.dim,
                kind: NormKind::Wl1,
                weights: self.weights.as_ref().map(recip),
            },
        }
    }

    /// The lattice norm of a coordinate slice (length must match `dim`).
    pub fn norm_of(&self, coords: &[f64]) -> f64 {
        debug_assert_eq!(coords.len(), self.dim);
        match self.kind {
            NormKind::L1 => coords.iter().map(|v| v.abs()).sum(),
            NormKind::L2 => coords.iter().map(|v| v * v).sum::<f64>().sqrt(),
            NormKind::Linf => coords.iter().fold(0.0, |m, v| m.max(v.abs())),
            NormKind::Wl1 => {
                let w = self.weights.as_ref().expect("weighted context");
                coords.iter().zip(w).map(|(v, w)| v.abs() * w).sum()
            }
            NormKind::Wlinf => {
                let w = self.weights.as_ref().expect("weighted context");
                coords
                    .iter()
                    .zip(w)
                    .fold(0.0, |m, (v, w)| m.max(v.abs() * w))
            }
        }
    }
}

/// A vector `x` of the lattice, tied to its context.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeVector {
    coords: Vec<f64>,
    ctx: LatticeContext,
}

impl LatticeVector {
    pub fn new(coords: Vec<f64>, ctx: &LatticeContext) -> Result<Self> {
        if coords.len() != ctx.dim() {
            return Err(Error::DimMismatch {
                left: coords.len(),
                right: ctx.dim(),
            });
        }
        Ok(LatticeVector {
            coords,
            ctx: ctx.clone(),
        })
    }

    pub fn zero(ctx: &LatticeContext) -> Self {
        LatticeVector {
            coords: vec![0.0; ctx.dim()],
            ctx: ctx.clone(),
        }
    }

    /// Standard basis vector `e_j`.
    pub fn basis(ctx: &LatticeContext, j: usize) -> Self {
        let mut coords = vec![0.0; ctx.dim()];
        coords[j] = 1.0;
        LatticeVector {
            coords,
            ctx: ctx.clone(),
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn context(&self) -> &LatticeContext {
        &self.ctx
    }

    fn check_same_context(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    /// Coordinatewise modulus `|x|`; lands in the positive cone.
    pub fn abs(&self) -> LatticeVector {
        LatticeVector {
            coords: self.coords.iter().map(|v| v.abs()).collect(),
            ctx: self.ctx.clone(),
        }
    }

    /// Coordinatewise maximum (the lattice supremum `x v y`).
    pub fn sup(&self, other: &Self) -> Result<LatticeVector> {
        self.check_same_context(other)?;
        Ok(LatticeVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.max(*b))
                .collect(),
            ctx: self.ctx.clone(),
        })
    }

    /// Coordinatewise minimum (the lattice infimum `x ^ y`).
    pub fn inf(&self, other: &Self) -> Result<LatticeVector> {
        self.check_same_context(other)?;
        Ok(LatticeVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.min(*b))
                .collect(),
            ctx: self.ctx.clone(),
        })
    }

    /// Decomposition `x = p - n` with `p = x v 0`, `n = (-x) v 0`,
    /// `p ^ n = 0`.
    pub fn pos_neg_parts(&self) -> (LatticeVector, LatticeVector) {
        let pos = LatticeVector {
            coords: self.coords.iter().map(|v| v.max(0.0)).collect(),
            ctx: self.ctx.clone(),
        };
        let neg = LatticeVector {
            coords: self.coords.iter().map(|v| (-v).max(0.0)).collect(),
            ctx: self.ctx.clone(),
        };
        (pos, neg)
    }

    /// The context's lattice norm of this vector.
    pub fn norm(&self) -> f64 {
        self.ctx.norm_of(&self.coords)
    }

    /// The norm of this vector read as a functional, i.e. under the dual
    /// context's norm.
    pub fn dual_norm(&self) -> f64 {
        self.ctx.dual().norm_of(&self.coords)
    }

    /// The duality pairing `<x, x*> = sum_i x_i x*_i`. Only the dimensions
    /// must agree; the functional side is interpreted under the dual norm.
    pub fn pair(&self, functional: &Self) -> Result<f64> {
        if self.coords.len() != functional.coords.len() {
            return Err(Error::DimMismatch {
                left: self.coords.len(),
                right: functional.coords.len(),
            });
        }
        Ok(self
            .coords
            .iter()
            .zip(&functional.coords)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn add(&self, other: &Self) -> Result<LatticeVector> {
        self.check_same_context(other)?;
        Ok(LatticeVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
            ctx: self.ctx.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<LatticeVector> {
        self.check_same_context(other)?;
        Ok(LatticeVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
            ctx: self.ctx.clone(),
        })
    }

    pub fn scale(&self, t: f64) -> LatticeVector {
        LatticeVector {
            coords: self.coords.iter().map(|v| t * v).collect(),
            ctx: self.ctx.clone(),
        }
    }

    /// Coordinatewise `x <= y` up to `tol`.
    pub fn leq(&self, other: &Self, tol: f64) -> bool {
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| *a <= *b + tol)
    }

    /// Membership in the positive cone up to `tol`.
    pub fn is_positive(&self, tol: f64) -> bool {
        self.coords.iter().all(|v| *v >= -tol)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.coords.len() == other.coords.len()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;

    fn ctx(kind: NormKind, dim: usize) -> LatticeContext {
        LatticeContext::unweighted(dim, kind).unwrap()
    }

    #[test]
    fn abs_is_coordinatewise() {
        let c = ctx(NormKind::Linf, 3);
        let v = LatticeVector::new(vec![1.0, -2.0, 0.0], &c).unwrap();
        assert_eq!(v.abs().coords(), &[1.0, 2.0, 0.0]);
        let z = LatticeVector::zero(&ctx(NormKind::Linf, 2));
        assert_eq!(z.abs().coords(), &[0.0, 0.0]);
        assert!(v.abs().is_positive(0.0));
    }

    #[test]
    fn sup_inf_examples() {
        let c = ctx(NormKind::L1, 2);
        let v = LatticeVector::new(vec![1.0, 0.0], &c).unwrap();
        let w = LatticeVector::new(vec![0.0, 1.0], &c).unwrap();
        assert_eq!(v.sup(&w).unwrap().coords(), &[1.0, 1.0]);
        assert_eq!(v.inf(&v).unwrap().coords(), v.coords());
    }

    #[test]
    fn sup_plus_inf_is_sum() {
        let c = ctx(NormKind::L2, 4);
        let v = LatticeVector::new(vec![0.5, -1.25, 3.0, 0.0], &c).unwrap();
        let w = LatticeVector::new(vec![-0.5, 2.0, 1.0, -7.0], &c).unwrap();
        let lhs = v.sup(&w).unwrap().add(&v.inf(&w).unwrap()).unwrap();
        let rhs = v.add(&w).unwrap();
        assert!(lhs.approx_eq(&rhs, DEFAULT_TOL));
    }

    #[test]
    fn pos_neg_parts_reconstruct() {
        let c = ctx(NormKind::Linf, 2);
        let v = LatticeVector::new(vec![1.0, -2.0], &c).unwrap();
        let (p, n) = v.pos_neg_parts();
        assert_eq!(p.coords(), &[1.0, 0.0]);
        assert_eq!(n.coords(), &[0.0, 2.0]);
        assert!(p.sub(&n).unwrap().approx_eq(&v, 0.0));
        assert_eq!(p.inf(&n).unwrap().coords(), &[0.0, 0.0]);

        let pos = LatticeVector::new(vec![0.5, 2.0], &c).unwrap();
        let (p, n) = pos.pos_neg_parts();
        assert!(p.approx_eq(&pos, 0.0));
        assert_eq!(n.coords(), &[0.0, 0.0]);
    }

    #[test]
    fn norm_formulas() {
        let v = LatticeVector::new(vec![1.0, -3.0], &ctx(NormKind::Linf, 2)).unwrap();
        assert_eq!(v.norm(), 3.0);
        let w = LatticeContext::new(2, NormKind::Wl1, Some(vec![2.0, 1.0])).unwrap();
        let u = LatticeVector::new(vec![1.0, 1.0], &w).unwrap();
        assert_eq!(u.norm(), 3.0);
        let e = LatticeVector::new(vec![3.0, 4.0], &ctx(NormKind::L2, 2)).unwrap();
        assert!((e.norm() - 5.0).abs() < DEFAULT_TOL);
    }

    #[test]
    fn pairing_examples() {
        let c = ctx(NormKind::L2, 2);
        let x = LatticeVector::new(vec![1.0, 2.0], &c).unwrap();
        let y = LatticeVector::new(vec![3.0, 4.0], &c).unwrap();
        assert_eq!(x.pair(&y).unwrap(), 11.0);
        assert_eq!(x.pair(&LatticeVector::zero(&c)).unwrap(), 0.0);
    }

    #[test]
    fn dual_context_round_trips() {
        let w = LatticeContext::new(3, NormKind::Wl1, Some(vec![2.0, 4.0, 0.5])).unwrap();
        let d = w.dual();
        assert_eq!(d.kind(), NormKind::Wlinf);
        assert_eq!(d.weights().unwrap(), &[0.5, 0.25, 2.0]);
        let dd = d.dual();
        assert_eq!(dd, w);
        assert_eq!(ctx(NormKind::L1, 2).dual().kind(), NormKind::Linf);
        assert_eq!(ctx(NormKind::L2, 2).dual().kind(), NormKind::L2);
    }

    #[test]
    fn context_validation() {
        assert!(LatticeContext::unweighted(0, NormKind::L1).is_err());
        assert!(LatticeContext::new(2, NormKind::Wl1, None).is_err());
        assert!(LatticeContext::new(2, NormKind::Wl1, Some(vec![1.0, -1.0])).is_err());
        assert!(LatticeContext::new(2, NormKind::L1, Some(vec![1.0, 1.0])).is_err());
        assert!(LatticeContext::new(2, NormKind::Wl1, Some(vec![1.0])).is_err());
    }

    #[test]
    fn context_json_round_trip() {
        let w = LatticeContext::new(2, NormKind::Wlinf, Some(vec![2.0, 1.0])).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        assert!(s.contains("\"wlinf\""));
        let back: LatticeContext = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        let plain: LatticeContext =
            serde_json::from_str(r#"{"dim":3,"norm":{"kind":"linf"}}"#).unwrap();
        assert_eq!(plain.kind(), NormKind::Linf);
        assert!(
            serde_json::from_str::<LatticeContext>(r#"{"dim":0,"norm":{"kind":"l1"}}"#).is_err()
        );
    }
}
