use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A subspace of `Q^n` stored by a canonical basis.
///
/// The basis vectors are the nonzero rows of the reduced row echelon form of any
/// spanning set (equivalently, the columns of the reduced column echelon form of
/// [`Subspace::basis`]), so two equal subspaces always compare equal field by field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    echelon: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            echelon: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::spanned_by(ambient, (0..ambient).map(|i| unit_vector(ambient, i)))
    }

    pub fn spanned_by<I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let rows: Vec<Vec<Scalar>> = vectors.into_iter().collect();
        assert!(rows.iter().all(|v| v.len() == ambient), "vector length");
        if rows.is_empty() || ambient == 0 {
            return Subspace::zero(ambient);
        }
        let (r, pivots) = Matrix::from_rows(rows).expect("rectangular").rref();
        Subspace {
            ambient,
            echelon: (0..pivots.len()).map(|i| r.row(i).to_vec()).collect(),
        }
    }

    /// Column span of `m`.
    pub fn column_span(m: &Matrix) -> Self {
        Subspace::spanned_by(m.rows(), (0..m.cols()).map(|c| m.column(c)))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.echelon.len()
    }

    pub fn is_zero(&self) -> bool {
        self.echelon.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis_vectors(&self) -> &[Vec<Scalar>] {
        &self.echelon
    }

    /// Basis as an `ambient x dim` matrix with one basis vector per column.
    pub fn basis(&self) -> Matrix {
        Matrix::from_columns(self.ambient, &self.echelon)
    }

    fn pivot(row: &[Scalar]) -> usize {
        row.iter()
            .position(|x| !x.is_zero())
            .expect("nonzero echelon row")
    }

    /// Remainder of `v` after elimination against the echelon basis.
    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for row in &self.echelon {
            let p = Subspace::pivot(row);
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &(&c * r);
                }
            }
        }
        v
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length");
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        other.ambient == self.ambient && other.echelon.iter().all(|v| self.contains_vector(v))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::Dimension(format!(
                "subspaces of Q^{} and Q^{}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::spanned_by(
            self.ambient,
            self.echelon.iter().chain(&other.echelon).cloned(),
        ))
    }

    /// Sum of a finite family; the empty family gives the zero subspace.
    pub fn sum_of<'a, I>(ambient: usize, parts: I) -> Result<Subspace>
    where
        I: IntoIterator<Item = &'a Subspace>,
    {
        let mut vectors = Vec::new();
        for p in parts {
            if p.ambient != ambient {
                return Err(Error::Dimension(format!(
                    "subspace of Q^{} in a sum over Q^{ambient}",
                    p.ambient
                )));
            }
            vectors.extend(p.echelon.iter().cloned());
        }
        Ok(Subspace::spanned_by(ambient, vectors))
    }

    /// Intersection through the kernel of `[A | -B]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        let (a, b) = (self.dim(), other.dim());
        let mut stacked = Matrix::zeros(self.ambient, a + b);
        for (j, v) in self.echelon.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                stacked[(i, j)] = x.clone();
            }
        }
        for (j, v) in other.echelon.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                stacked[(i, a + j)] = -x;
            }
        }
        let kernel = stacked.kernel();
        let vectors = kernel.basis_vectors().iter().map(|coeffs| {
            let mut w = vec![Scalar::zero(); self.ambient];
            for (c, v) in coeffs[..a].iter().zip(&self.echelon) {
                if c.is_zero() {
                    continue;
                }
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi += &(c * vi);
                }
            }
            w
        });
        Ok(Subspace::spanned_by(self.ambient, vectors))
    }

    /// `m(self)`, the canonical span of the images of the basis vectors.
    pub fn image(&self, m: &Matrix) -> Result<Subspace> {
        if m.cols() != self.ambient {
            return Err(Error::Dimension(format!(
                "{}x{} matrix applied to a subspace of Q^{}",
                m.rows(),
                m.cols(),
                self.ambient
            )));
        }
        Ok(Subspace::spanned_by(
            m.rows(),
            self.echelon.iter().map(|v| m.apply(v)),
        ))
    }

    /// The eigenspace `ker(m - theta I)`.
    pub fn eigenspace(m: &Matrix, theta: &Scalar) -> Result<Subspace> {
        if !m.is_square() {
            return Err(Error::Dimension("eigenspace of a non-square matrix".into()));
        }
        Ok(m.shift(theta).kernel())
    }

    /// True iff the parts are independent and together span the ambient space.
    pub fn is_direct_decomposition(ambient: usize, parts: &[Subspace]) -> bool {
        if parts.iter().any(|p| p.ambient != ambient) {
            return false;
        }
        let total: usize = parts.iter().map(Subspace::dim).sum();
        total == ambient && Subspace::sum_of(ambient, parts).is_ok_and(|s| s.dim() == ambient)
    }

    /// True iff the sum of the parts is direct (they need not span).
    pub fn is_independent(ambient: usize, parts: &[Subspace]) -> bool {
        let total: usize = parts.iter().map(Subspace::dim).sum();
        Subspace::sum_of(ambient, parts).is_ok_and(|s| s.dim() == total)
    }
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Subspace", 2)?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("basis", &self.basis())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::s;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    fn span(n: usize, vs: &[&[i64]]) -> Subspace {
        Subspace::spanned_by(n, vs.iter().map(|x| v(x)))
    }

    #[test]
    fn eigenspace_examples() {
        let id = Matrix::identity(3);
        assert!(Subspace::eigenspace(&id, &Scalar::one()).unwrap().is_full());
        let d = Matrix::from_diagonal(&[s(1, 2), s(2, 1)]);
        assert_eq!(
            Subspace::eigenspace(&d, &s(2, 1)).unwrap(),
            span(2, &[&[0, 1]])
        );
        // y_2 on the two-dimensional evaluation module at q = 2
        let y = Matrix::from_rows(vec![vec![s(1, 2), s(0, 1)], vec![s(3, 2), s(2, 1)]]).unwrap();
        // oracle: (y - 1/2) (x0, x1) = (0, 3/2 x0 + 3/2 x1) vanishes iff x1 = -x0
        assert_eq!(
            Subspace::eigenspace(&y, &s(1, 2)).unwrap(),
            span(2, &[&[1, -1]])
        );
        assert!(Subspace::eigenspace(&Matrix::zeros(2, 3), &s(1, 1)).is_err());
    }

    #[test]
    fn sum_examples() {
        let z = Subspace::zero(3);
        assert!(Subspace::sum_of(3, [&z]).unwrap().is_zero());
        let x = span(2, &[&[1, 0]]);
        let y = span(2, &[&[0, 1]]);
        assert!(x.sum(&y).unwrap().is_full());
        let a = span(3, &[&[1, 0, 0]]);
        let b = span(3, &[&[1, 1, 0]]);
        let ab = a.sum(&b).unwrap();
        assert_eq!(ab.dim(), 2);
        assert_eq!(ab, span(3, &[&[1, 0, 0], &[0, 1, 0]]));
        assert!(a.sum(&x).is_err());
    }

    #[test]
    fn intersect_examples() {
        let b = span(3, &[&[1, 2, 3]]);
        assert_eq!(Subspace::full(3).intersect(&b).unwrap(), b);
        let l1 = span(2, &[&[1, 0]]);
        let l2 = span(2, &[&[1, 1]]);
        assert!(l1.intersect(&l2).unwrap().is_zero());
        let xy = span(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let other = span(3, &[&[1, 1, 1], &[0, 0, 1]]);
        assert_eq!(xy.intersect(&other).unwrap(), span(3, &[&[1, 1, 0]]));
        assert!(xy.intersect(&l1).is_err());
    }

    #[test]
    fn direct_decomposition_examples() {
        let x = span(2, &[&[1, 0]]);
        let y = span(2, &[&[0, 1]]);
        assert!(Subspace::is_direct_decomposition(2, &[x, y]));
        let xy = span(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let xa = span(3, &[&[1, 0, 0]]);
        assert!(!Subspace::is_direct_decomposition(3, &[xy, xa]));
    }

    #[test]
    fn image_examples() {
        let s0 = span(2, &[&[1, 0]]);
        assert!(s0.image(&Matrix::zeros(2, 2)).unwrap().is_zero());
        assert_eq!(s0.image(&Matrix::identity(2)).unwrap(), s0);
        // raising operator of the two-dimensional string: v0 -> v1
        let e = Matrix::from_int_rows(&[&[0, 0], &[1, 0]]);
        assert_eq!(s0.image(&e).unwrap(), span(2, &[&[0, 1]]));
        assert!(s0.image(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn canonical_basis_is_spanning_set_independent() {
        let a = span(3, &[&[1, 2, 3], &[0, 1, 1]]);
        let b = span(3, &[&[1, 3, 4], &[2, 5, 7], &[1, 1, 2]]);
        assert_eq!(a, b);
        assert_eq!(a.basis(), b.basis());
    }
}
