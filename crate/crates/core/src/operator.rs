//! Regular operators on a finite-dimensional lattice: n×n real matrices.
//!
//! In finite dimension every operator is regular, and for the atomic
//! coordinatewise order the Riesz–Kantorovich formulas evaluated on the atom
//! basis reduce to entrywise operations: the only positive decompositions of
//! an atom `e_j` are the scalar splittings `t e_j + (1-t) e_j`. Modulus,
//! suprema and infima below are therefore entrywise; the reduction itself is
//! oracle-tested rather than assumed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lattice::{LatticeContext, LatticeVector, NormKind};
use crate::linalg;
use crate::{Error, Result};

const POWER_ITERATION_MAX: usize = 10_000;
const POWER_ITERATION_TOL: f64 = 1e-10;

/// An element of `L^r(E)`: a square matrix over a lattice context.
/// Positivity `T >= 0` is entrywise nonnegativity.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularOperator {
    entries: Vec<f64>, // row-major, n*n
    ctx: LatticeContext,
}

impl RegularOperator {
    pub fn from_rows(rows: Vec<Vec<f64>>, ctx: &LatticeContext) -> Result<Self> {
        let n = ctx.dim();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimMismatch {
                left: rows.len(),
                right: n,
            });
        }
        Ok(RegularOperator {
            entries: rows.into_iter().flatten().collect(),
            ctx: ctx.clone(),
        })
    }

    pub fn from_fn(ctx: &LatticeContext, f: impl Fn(usize, usize) -> f64) -> Self {
        let n = ctx.dim();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        RegularOperator {
            entries,
            ctx: ctx.clone(),
        }
    }

    pub fn zero(ctx: &LatticeContext) -> Self {
        RegularOperator {
            entries: vec![0.0; ctx.dim() * ctx.dim()],
            ctx: ctx.clone(),
        }
    }

    pub fn identity(ctx: &LatticeContext) -> Self {
        Self::from_fn(ctx, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diagonal(ctx: &LatticeContext, diag: &[f64]) -> Result<Self> {
        if diag.len() != ctx.dim() {
            return Err(Error::DimMismatch {
                left: diag.len(),
                right: ctx.dim(),
            });
        }
        Ok(Self::from_fn(
            ctx,
            |i, j| if i == j { diag[i] } else { 0.0 },
        ))
    }

    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }

    pub fn context(&self) -> &LatticeContext {
        &self.ctx
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.ctx.dim() + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        let n = self.ctx.dim();
        (0..n)
            .map(|i| self.entries[i * n..(i + 1) * n].to_vec())
            .collect()
    }

    /// Row-major flattening, the coordinate form used by the span and
    /// commutant computations.
    pub fn vectorize(&self) -> Vec<f64> {
        self.entries.clone()
    }

    fn check_same_context(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    /// The operator modulus `|T|`: entrywise absolute value (atomic order).
    pub fn modulus(&self) -> RegularOperator {
        RegularOperator {
            entries: self.entries.iter().map(|v| v.abs()).collect(),
            ctx: self.ctx.clone(),
        }
    }

    /// Cone membership: all entries `>= -tol`.
    pub fn is_positive(&self, tol: f64) -> bool {
        self.entries.iter().all(|v| *v >= -tol)
    }

    /// Entrywise `S <= T` up to `tol`.
    pub fn leq_entrywise(&self, other: &Self, tol: f64) -> bool {
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| *a <= *b + tol)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| (a - b).abs() <= tol)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn add(&self, other: &Self) -> Result<RegularOperator> {
        self.check_same_context(other)?;
        Ok(RegularOperator {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
            ctx: self.ctx.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<RegularOperator> {
        self.check_same_context(other)?;
        Ok(RegularOperator {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
            ctx: self.ctx.clone(),
        })
    }

    pub fn scale(&self, t: f64) -> RegularOperator {
        RegularOperator {
            entries: self.entries.iter().map(|v| t * v).collect(),
            ctx: self.ctx.clone(),
        }
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<RegularOperator> {
        self.check_same_context(other)?;
        let n = self.ctx.dim();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let s = self.entries[i * n + k];
                if s != 0.0 {
                    for j in 0..n {
                        entries[i * n + j] += s * other.entries[k * n + j];
                    }
                }
            }
        }
        Ok(RegularOperator {
            entries,
            ctx: self.ctx.clone(),
        })
    }

    /// Matrix-vector product `T x`.
    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        if v.context() != &self.ctx {
            return Err(Error::ContextMismatch);
        }
        let n = self.ctx.dim();
        let coords: Vec<f64> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.entries[i * n + j] * v.coords()[j])
                    .sum()
            })
            .collect();
        LatticeVector::new(coords, &self.ctx)
    }

    pub fn transpose(&self) -> RegularOperator {
        let n = self.ctx.dim();
        Self::from_fn(&self.ctx, |i, j| self.entries[j * n + i])
    }

    /// The induced operator norm for the context's lattice norm.
    ///
    /// `l-infinity`: max absolute row sum; `l1`: max absolute column sum;
    /// weighted kinds by diagonal conjugation; `l2`: largest singular value
    /// by power iteration on `T^t T` (all-ones start plus one seeded random
    /// restart). Failure to converge within 10000 steps is an error
    /// signaling ill-conditioning.
    pub fn operator_norm(&self) -> Result<f64> {
        let n = self.ctx.dim();
        let row_sum_max = |entry: &dyn Fn(usize, usize) -> f64| -> f64 {
            (0..n)
                .map(|i| (0..n).map(|j| entry(i, j).abs()).sum::<f64>())
                .fold(0.0, f64::max)
        };
        let col_sum_max = |entry: &dyn Fn(usize, usize) -> f64| -> f64 {
            (0..n)
                .map(|j| (0..n).map(|i| entry(i, j).abs()).sum::<f64>())
                .fold(0.0, f64::max)
        };
        let plain = |i: usize, j: usize| self.entry(i, j);
        match self.ctx.kind() {
            NormKind::Linf => Ok(row_sum_max(&plain)),
            NormKind::L1 => Ok(col_sum_max(&plain)),
            NormKind::Wlinf => {
                let w = self.ctx.weights().expect("weighted context");
                let conj = |i: usize, j: usize| w[i] * self.entry(i, j) / w[j];
                Ok(row_sum_max(&conj))
            }
            NormKind::Wl1 => {
                let w = self.ctx.weights().expect("weighted context");
                let conj = |i: usize, j: usize| w[i] * self.entry(i, j) / w[j];
                Ok(col_sum_max(&conj))
            }
            NormKind::L2 => self.spectral_norm(),
        }
    }

    /// The regular norm `||T||_r = || |T| ||`.
    pub fn regular_norm(&self) -> Result<f64> {
        self.modulus().operator_norm()
    }

    fn spectral_norm(&self) -> Result<f64> {
        if self.max_abs_entry() == 0.0 {
            return Ok(0.0);
        }
        let n = self.ctx.dim();
        // gram = T^t T, symmetric positive semidefinite
        let t = self.transpose();
        let gram = t.compose(self).expect("same context");
        let ones = vec![1.0; n];
        let mut best: Option<f64> = None;
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
        let random: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        for start in [ones, random] {
            if let Some(lambda) = power_iteration(&gram, start)? {
                best = Some(best.map_or(lambda, |b: f64| b.max(lambda)));
            }
        }
        match best {
            Some(lambda) => Ok(lambda.max(0.0).sqrt()),
            // both starts degenerate; treat as failure to converge
            None => Err(Error::PowerIterationDiverged(POWER_ITERATION_MAX)),
        }
    }

    /// Entrywise maximum of a nonempty family: the order supremum in
    /// `L^r(E)` for the atomic coordinatewise order.
    pub fn sup_family(family: &[RegularOperator]) -> Result<RegularOperator> {
        combine_family(family, f64::max)
    }

    /// Entrywise minimum of a nonempty family: the order infimum.
    pub fn inf_family(family: &[RegularOperator]) -> Result<RegularOperator> {
        combine_family(family, f64::min)
    }

    /// A basis (as matrices) of `{S : ST = TS for all T in family}`,
    /// computed as the nullspace of the stacked linear system
    /// `vec(ST - TS) = 0` by Gaussian elimination with partial pivoting.
    pub fn commutant_basis(family: &[RegularOperator], tol: f64) -> Result<Vec<RegularOperator>> {
        let ctx = match family.first() {
            Some(op) => op.context().clone(),
            None => return Err(Error::EmptyFamily),
        };
        for op in family {
            if op.context() != &ctx {
                return Err(Error::ContextMismatch);
            }
        }
        let n = ctx.dim();
        let unknowns = n * n;
        let mut system: Vec<Vec<f64>> = Vec::with_capacity(family.len() * unknowns);
        for t in family {
            for i in 0..n {
                for j in 0..n {
                    // (ST - TS)_{ij} = sum_k S_{ik} T_{kj} - T_{ik} S_{kj}
                    let mut row = vec![0.0; unknowns];
                    for k in 0..n {
                        row[i * n + k] += t.entry(k, j);
                        row[k * n + j] -= t.entry(i, k);
                    }
                    system.push(row);
                }
            }
        }
        let basis = linalg::nullspace_basis(&system, unknowns, tol);
        Ok(basis
            .into_iter()
            .map(|v| RegularOperator {
                entries: v,
                ctx: ctx.clone(),
            })
            .collect())
    }
}

fn combine_family(
    family: &[RegularOperator],
    combine: impl Fn(f64, f64) -> f64,
) -> Result<RegularOperator> {
    let first = family.first().ok_or(Error::EmptyFamily)?;
    let mut entries = first.entries.clone();
    for op in &family[1..] {
        first.check_same_context(op)?;
        for (e, v) in entries.iter_mut().zip(&op.entries) {
            *e = combine(*e, *v);
        }
    }
    Ok(RegularOperator {
        entries,
        ctx: first.ctx.clone(),
    })
}

/// Power iteration for the largest eigenvalue of a symmetric PSD matrix.
/// Returns `Ok(None)` when the start vector degenerates (lands in the
/// kernel), so the caller can fall back to another start.
fn power_iteration(gram: &RegularOperator, start: Vec<f64>) -> Result<Option<f64>> {
    let n = gram.dim();
    let mut v = start;
    let norm2 = |x: &[f64]| x.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = norm2(&v);
    if nv == 0.0 {
        return Ok(None);
    }
    v.iter_mut().for_each(|a| *a /= nv);
    let mut lambda_prev = f64::INFINITY;
    for _ in 0..POWER_ITERATION_MAX {
        let mut w = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                w[i] += gram.entry(i, j) * v[j];
            }
        }
        // Rayleigh quotient with unit-norm v
        let lambda: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let nw = norm2(&w);
        if nw <= f64::MIN_POSITIVE {
            return Ok(None);
        }
        if (lambda - lambda_prev).abs() <= POWER_ITERATION_TOL * lambda.abs().max(1.0) {
            return Ok(Some(lambda));
        }
        lambda_prev = lambda;
        v = w.into_iter().map(|a| a / nw).collect();
    }
    Err(Error::PowerIterationDiverged(POWER_ITERATION_MAX))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;

    fn ctx(kind: NormKind, dim: usize) -> LatticeContext {
        LatticeContext::unweighted(dim, kind).unwrap()
    }

    fn op(rows: &[&[f64]], c: &LatticeContext) -> RegularOperator {
        RegularOperator::from_rows(rows.iter().map(|r| r.to_vec()).collect(), c).unwrap()
    }

    #[test]
    fn modulus_is_entrywise() {
        let c = ctx(NormKind::Linf, 2);
        let t = op(&[&[1.0, -2.0], &[-3.0, 4.0]], &c);
        assert_eq!(t.modulus().rows(), vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let p = op(&[&[1.0, 0.5], &[0.0, 2.0]], &c);
        assert!(p.modulus().approx_eq(&p, 0.0));
    }

    #[test]
    fn positivity_predicate() {
        let c = ctx(NormKind::Linf, 2);
        assert!(RegularOperator::identity(&c).is_positive(0.0));
        assert!(op(&[&[1.0, 1.0], &[0.0, 0.0]], &c).is_positive(0.0));
        assert!(!op(&[&[0.0, 0.0], &[1.0, -0.1]], &c).is_positive(DEFAULT_TOL));
    }

    #[test]
    fn induced_norm_formulas() {
        let t = op(&[&[1.0, 0.0], &[3.0, 0.0]], &ctx(NormKind::Linf, 2));
        assert_eq!(t.operator_norm().unwrap(), 3.0);
        let t1 = op(&[&[1.0, 0.0], &[3.0, 0.0]], &ctx(NormKind::L1, 2));
        assert_eq!(t1.operator_norm().unwrap(), 4.0);
        for kind in [NormKind::L1, NormKind::L2, NormKind::Linf] {
            let id = RegularOperator::identity(&ctx(kind, 3));
            assert!((id.operator_norm().unwrap() - 1.0).abs() < 1e-9);
        }
        let w = LatticeContext::new(2, NormKind::Wlinf, Some(vec![2.0, 1.0])).unwrap();
        let id = RegularOperator::identity(&w);
        assert!((id.operator_norm().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_norm_by_conjugation() {
        // wl1 with weights (2,1): ||T||= max_j sum_i w_i |T_ij| / w_j
        let w = LatticeContext::new(2, NormKind::Wl1, Some(vec![2.0, 1.0])).unwrap();
        let t = op(&[&[0.0, 1.0], &[1.0, 0.0]], &w);
        // column 0: |t_00|*2/2 + |t_10|*1/2 = 0.5; column 1: 2/1 + 0 = 2
        assert!((t.operator_norm().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_norm_matches_closed_form() {
        let c = ctx(NormKind::L2, 2);
        let t = op(&[&[1.0, -1.0], &[1.0, 1.0]], &c);
        assert!((t.operator_norm().unwrap() - 2.0_f64.sqrt()).abs() < 1e-8);
        assert!((t.regular_norm().unwrap() - 2.0).abs() < 1e-8);
        // all-ones start lies in ker(T^t T); the random restart must save it
        let k = op(&[&[1.0, -1.0], &[0.0, 0.0]], &c);
        assert!((k.operator_norm().unwrap() - 2.0_f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn regular_norm_dominates_operator_norm() {
        let c = ctx(NormKind::L2, 2);
        let t = op(&[&[1.0, -1.0], &[1.0, 1.0]], &c);
        assert!(t.regular_norm().unwrap() >= t.operator_norm().unwrap() - 1e-12);
        let p = op(&[&[1.0, 2.0], &[0.5, 0.0]], &c);
        assert!(
            (p.regular_norm().unwrap() - p.operator_norm().unwrap()).abs() < 1e-12,
            "positive operators: |T| = T"
        );
    }

    #[test]
    fn sup_inf_examples() {
        let c = ctx(NormKind::Linf, 2);
        let a = RegularOperator::diagonal(&c, &[1.0, 0.0]).unwrap();
        let b = RegularOperator::diagonal(&c, &[0.0, 1.0]).unwrap();
        let s = RegularOperator::sup_family(&[a.clone(), b]).unwrap();
        assert!(s.approx_eq(&RegularOperator::identity(&c), 0.0));
        let u = op(&[&[1.0, 0.0], &[0.0, 0.0]], &c);
        let v = op(&[&[0.0, 1.0], &[0.0, 0.0]], &c);
        let s2 = RegularOperator::sup_family(&[u, v]).unwrap();
        assert_eq!(s2.rows(), vec![vec![1.0, 1.0], vec![0.0, 0.0]]);
        let inf = RegularOperator::inf_family(&[a.clone(), a.clone()]).unwrap();
        assert!(inf.approx_eq(&a, 0.0));
        assert!(RegularOperator::sup_family(&[]).is_err());
    }

    #[test]
    fn compose_apply_identity() {
        let c = ctx(NormKind::Linf, 2);
        let v = LatticeVector::new(vec![2.0, -1.0], &c).unwrap();
        let id = RegularOperator::identity(&c);
        assert!(id.apply(&v).unwrap().approx_eq(&v, 0.0));
        let p = op(&[&[1.0, 1.0], &[0.0, 0.0]], &c);
        assert!(p.compose(&p).unwrap().approx_eq(&p, 1e-12));
        let s = op(&[&[0.0, 1.0], &[0.0, 0.0]], &c);
        let t = op(&[&[0.0, 0.0], &[1.0, 0.0]], &c);
        assert!(!s
            .compose(&t)
            .unwrap()
            .approx_eq(&t.compose(&s).unwrap(), 1e-12));
    }

    #[test]
    fn commutant_of_identity_is_everything() {
        let c = ctx(NormKind::Linf, 3);
        let basis =
            RegularOperator::commutant_basis(&[RegularOperator::identity(&c)], 1e-9).unwrap();
        assert_eq!(basis.len(), 9);
    }

    #[test]
    fn commutant_of_two_diagonal_projections() {
        let c = ctx(NormKind::Linf, 3);
        let p1 = RegularOperator::diagonal(&c, &[1.0, 0.0, 0.0]).unwrap();
        let p2 = RegularOperator::diagonal(&c, &[0.0, 1.0, 0.0]).unwrap();
        let basis = RegularOperator::commutant_basis(&[p1, p2], 1e-9).unwrap();
        assert_eq!(basis.len(), 3, "commutant is the diagonal matrices");
        for s in &basis {
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        assert!(s.entry(i, j).abs() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn commutant_of_matrix_units_is_scalars() {
        let c = ctx(NormKind::Linf, 3);
        let mut units = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                units.push(RegularOperator::from_fn(&c, |a, b| {
                    if (a, b) == (i, j) {
                        1.0
                    } else {
                        0.0
                    }
                }));
            }
        }
        let basis = RegularOperator::commutant_basis(&units, 1e-9).unwrap();
        assert_eq!(basis.len(), 1);
        let s = &basis[0];
        assert!((s.entry(0, 0) - s.entry(1, 1)).abs() < 1e-9);
        assert!((s.entry(0, 0) - s.entry(2, 2)).abs() < 1e-9);
        assert!(s.entry(0, 1).abs() < 1e-9);
    }
}
