use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

use super::echelon::row_reduce_vectors;
use super::matrix::{Matrix, Vector};

/// A linear subspace of `field^ambient_dim`, stored by its reduced echelon
/// basis so that equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient_dim: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient_dim: usize) -> Self {
        Subspace { field, ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                let mut v = vec![field.zero(); ambient_dim];
                v[i] = field.one();
                v
            })
            .collect();
        Subspace { field, ambient_dim, basis, pivots: (0..ambient_dim).collect() }
    }

    pub fn span(field: Field, ambient_dim: usize, vectors: Vec<Vector>) -> Self {
        if vectors.is_empty() || ambient_dim == 0 {
            return Subspace::zero(field, ambient_dim);
        }
        let ech = row_reduce_vectors(field, ambient_dim, vectors);
        Subspace { field, ambient_dim, basis: ech.rows, pivots: ech.pivots }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.ambient_dim, &self.basis)
    }

    /// Remainder of `v` after clearing every pivot coordinate.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        let mut out = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            if out[pc].is_zero() {
                continue;
            }
            let c = out[pc].clone();
            for (x, y) in out.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = x.sub(&c.mul(y));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Coefficients of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        // The basis is reduced, so the coefficient of row k is v[pivot_k].
        Some(self.pivots.iter().map(|&pc| v[pc].clone()).collect())
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.field, self.ambient_dim, vs)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.ambient_dim == self.ambient_dim && other.basis.iter().all(|v| self.contains(v))
    }

    /// Image of the subspace under `m`.
    pub fn map(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient_dim);
        let vs = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(self.field, m.rows(), vs)
    }

    /// Intersection, via the kernel of `[B_self | -B_other]`.
    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.field, self.ambient_dim);
        }
        let a = self.basis_matrix();
        let b = other.basis_matrix().neg();
        let stacked = Matrix::hstack(self.field, self.ambient_dim, &[a.clone(), b]);
        let k = super::echelon::kernel(&stacked);
        let n = self.dim();
        let vs = k.basis().iter().map(|x| a.mul_vec(&x[..n])).collect();
        Subspace::span(self.field, self.ambient_dim, vs)
    }

    /// Preimage `{v : m v ∈ self}` as a subspace of the source of `m`.
    pub fn preimage(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.rows(), self.ambient_dim);
        let n = m.cols();
        let stacked = Matrix::hstack(self.field, m.rows(), &[m.clone(), self.basis_matrix().neg()]);
        let k = super::echelon::kernel(&stacked);
        let vs = k.basis().iter().map(|x| x[..n].to_vec()).collect();
        Subspace::span(self.field, n, vs)
    }
}

/// `ambient / divisor` with canonical representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientPresentation {
    ambient: Subspace,
    divisor: Subspace,
    representatives: Vec<Vector>,
    rep_pivots: Vec<usize>,
}

pub fn quotient(cycles: &Subspace, boundaries: &Subspace) -> Result<QuotientPresentation> {
    if cycles.ambient_dim != boundaries.ambient_dim {
        return Err(Error::Dimension { expected: cycles.ambient_dim, found: boundaries.ambient_dim });
    }
    if !cycles.contains_subspace(boundaries) {
        return Err(Error::NotContained);
    }
    let reduced: Vec<Vector> = cycles.basis.iter().map(|v| boundaries.reduce(v)).collect();
    let reps = Subspace::span(cycles.field, cycles.ambient_dim, reduced);
    Ok(QuotientPresentation {
        ambient: cycles.clone(),
        divisor: boundaries.clone(),
        representatives: reps.basis,
        rep_pivots: reps.pivots,
    })
}

impl QuotientPresentation {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn ambient(&self) -> &Subspace {
        &self.ambient
    }

    pub fn divisor(&self) -> &Subspace {
        &self.divisor
    }

    pub fn representatives(&self) -> &[Vector] {
        &self.representatives
    }

    /// Class of `v` in the representative basis; `v` must lie in the ambient.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Vector> {
        if !self.ambient.contains(v) {
            return Err(Error::NotContained);
        }
        let r = self.divisor.reduce(v);
        // Representatives are divisor-reduced and in echelon form among
        // themselves, so the class coordinates are read off at their pivots
        // after peeling them off in order.
        let mut rest = r;
        let mut coords = Vec::with_capacity(self.dim());
        for (rep, &pc) in self.representatives.iter().zip(&self.rep_pivots) {
            let c = rest[pc].clone();
            if !c.is_zero() {
                for (x, y) in rest.iter_mut().zip(rep) {
                    if !y.is_zero() {
                        *x = x.sub(&c.mul(y));
                    }
                }
            }
            coords.push(c);
        }
        debug_assert!(self.divisor.contains(&rest));
        Ok(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5(v: &[i64]) -> Vector {
        v.iter().map(|&x| Field::Prime(5).from_i64(x)).collect()
    }

    #[test]
    fn quotient_examples() {
        let f = Field::Prime(5);
        let full = Subspace::full(f, 2);
        assert_eq!(quotient(&full, &full).unwrap().dim(), 0);
        let z = quotient(&full, &Subspace::zero(f, 2)).unwrap();
        assert_eq!(z.dim(), 2);
        assert_eq!(z.representatives(), full.basis());

        let line = Subspace::span(f, 2, vec![f5(&[1, 2])]);
        let qp = quotient(&full, &line).unwrap();
        // Brute-force coset count: classes of F_5^2 modulo the line.
        let mut classes: Vec<Vector> = Vec::new();
        for a in 0..5 {
            for b in 0..5 {
                let r = line.reduce(&f5(&[a, b]));
                if !classes.contains(&r) {
                    classes.push(r);
                }
            }
        }
        assert_eq!(classes.len(), 5);
        assert_eq!(5usize.pow(qp.dim() as u32), classes.len());
        assert!(quotient(&line, &full).is_err());
    }

    #[test]
    fn canonical_under_permutation() {
        let f = Field::Rational;
        let v = |xs: &[i64]| xs.iter().map(|&x| f.from_i64(x)).collect::<Vector>();
        let a = Subspace::span(f, 3, vec![v(&[1, 2, 3]), v(&[0, 1, 1])]);
        let b = Subspace::span(f, 3, vec![v(&[0, 2, 2]), v(&[1, 3, 4])]);
        assert_eq!(a, b);
        assert_eq!(a.coordinates(&v(&[2, 5, 7])).unwrap().len(), 2);
        assert!(a.coordinates(&v(&[0, 0, 1])).is_none());
    }

    #[test]
    fn intersection_and_preimage() {
        let f = Field::Rational;
        let v = |xs: &[i64]| xs.iter().map(|&x| f.from_i64(x)).collect::<Vector>();
        let xy = Subspace::span(f, 3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let yz = Subspace::span(f, 3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(xy.intersection(&yz), Subspace::span(f, 3, vec![v(&[0, 1, 0])]));
        let proj = Matrix::from_ints(f, &[&[1, 0, 0]]);
        assert_eq!(Subspace::zero(f, 1).preimage(&proj), yz);
    }

    #[test]
    fn quotient_coordinates_respect_divisor() {
        let f = Field::Rational;
        let v = |xs: &[i64]| xs.iter().map(|&x| f.from_i64(x)).collect::<Vector>();
        let amb = Subspace::full(f, 3);
        let div = Subspace::span(f, 3, vec![v(&[1, 1, 0])]);
        let qp = quotient(&amb, &div).unwrap();
        assert_eq!(qp.coordinates(&v(&[1, 1, 0])).unwrap(), v(&[0, 0]));
        let c1 = qp.coordinates(&v(&[3, 1, 5])).unwrap();
        let c2 = qp.coordinates(&v(&[2, 0, 5])).unwrap();
        assert_eq!(c1, c2);
    }
}
