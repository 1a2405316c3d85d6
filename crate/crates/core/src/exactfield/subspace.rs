use super::{FieldSpec, LinalgError, Matrix};

/// A subspace of GF(p)^n in canonical form.
///
/// The basis is stored as the rows of a reduced row echelon matrix, i.e. the
/// transpose of a reduced column echelon basis. This form is unique per
/// subspace, so the derived `PartialEq` is set equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Subspace {
            field,
            ambient,
            rows,
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of arbitrary vectors of length `ambient`.
    pub fn span<I>(field: FieldSpec, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut data = Vec::new();
        let mut count = 0;
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length mismatch");
            data.extend(v.into_iter().map(|x| x % field.p()));
            count += 1;
        }
        let m = Matrix::from_fn(field, count, ambient, |i, j| data[i * ambient + j]);
        Self::from_row_generators(&m)
    }

    /// Span of the rows of `m`.
    pub fn from_row_generators(m: &Matrix) -> Self {
        let (r, pivots) = m.rref();
        Subspace {
            field: m.field(),
            ambient: m.cols(),
            rows: (0..pivots.len()).map(|i| r.row(i).to_vec()).collect(),
            pivots,
        }
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Canonical basis vectors.
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The canonical basis as columns of an `ambient × dim` matrix (reduced
    /// column echelon form).
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.ambient, &self.rows)
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let f = self.field;
        let coords: Vec<u32> = self.pivots.iter().map(|&c| v[c]).collect();
        for (j, &vj) in v.iter().enumerate() {
            let mut acc = 0;
            for (row, &c) in self.rows.iter().zip(&coords) {
                acc = f.add(acc, f.mul(c, row[j]));
            }
            if acc != vj {
                return None;
            }
        }
        Some(coords)
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        self.coordinates(v).is_some()
    }

    fn check(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(self.field.p(), other.field.p()));
        }
        if self.ambient != other.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        if other.is_zero() || self.is_full() {
            return Ok(self.clone());
        }
        if self.is_zero() || other.is_full() {
            return Ok(other.clone());
        }
        Ok(Subspace::span(
            self.field,
            self.ambient,
            self.rows.iter().chain(&other.rows).cloned(),
        ))
    }

    /// Zassenhaus intersection.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        let n = self.ambient;
        let total = self.dim() + other.dim();
        let m = Matrix::from_fn(self.field, total, 2 * n, |i, j| {
            if i < self.dim() {
                self.rows[i][j % n]
            } else if j < n {
                other.rows[i - self.dim()][j]
            } else {
                0
            }
        });
        let (r, pivots) = m.rref();
        let gens = pivots
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c >= n)
            .map(|(i, _)| r.row(i)[n..].to_vec());
        Ok(Subspace::span(self.field, n, gens))
    }

    /// `true` iff `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check(other)?;
        Ok(other.dim() <= self.dim() && other.rows.iter().all(|v| self.contains_vector(v)))
    }

    /// Direct sum embedding into `self.ambient + other.ambient` coordinates.
    pub fn direct_sum(&self, other: &Subspace) -> Subspace {
        let n = self.ambient + other.ambient;
        let left = self.rows.iter().map(|v| {
            let mut w = v.clone();
            w.resize(n, 0);
            w
        });
        let right = other.rows.iter().map(|v| {
            let mut w = vec![0; self.ambient];
            w.extend_from_slice(v);
            w
        });
        Subspace::span(self.field, n, left.chain(right))
    }
}

/// `{v : m·v ∈ s}`.
pub fn preimage(m: &Matrix, s: &Subspace) -> Result<Subspace, LinalgError> {
    if m.field() != s.field {
        return Err(LinalgError::FieldMismatch(m.field().p(), s.field.p()));
    }
    if m.rows() != s.ambient {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            found: s.ambient,
        });
    }
    if s.is_full() {
        return Ok(Subspace::full(m.field(), m.cols()));
    }
    // rows of `ann` span the annihilator of s
    let gens = Matrix::from_fn(m.field(), s.dim(), s.ambient, |i, j| s.rows[i][j]);
    let ann = gens.kernel();
    let f = Matrix::from_fn(m.field(), ann.dim(), s.ambient, |i, j| ann.rows[i][j]);
    Ok((&f * m).kernel())
}

/// `m(s)`.
pub fn pushforward(m: &Matrix, s: &Subspace) -> Result<Subspace, LinalgError> {
    if m.field() != s.field {
        return Err(LinalgError::FieldMismatch(m.field().p(), s.field.p()));
    }
    if m.cols() != s.ambient {
        return Err(LinalgError::DimensionMismatch {
            expected: m.cols(),
            found: s.ambient,
        });
    }
    Ok(Subspace::span(
        m.field(),
        m.rows(),
        s.rows.iter().map(|v| m.apply(v)),
    ))
}

/// A complement of `inner` in `outer` chosen inside `outer ∩ constraint`.
///
/// The inner basis is extended greedily by the canonical generators of
/// `outer ∩ constraint`, in pivot order.
pub fn complement_within(
    inner: &Subspace,
    outer: &Subspace,
    constraint: &Subspace,
) -> Result<Subspace, LinalgError> {
    if !outer.contains(inner)? {
        return Err(LinalgError::ComplementPrecondition("inner is not contained in outer"));
    }
    let candidates = outer.intersection(constraint)?;
    if inner.sum(&candidates)?.dim() != outer.dim() {
        return Err(LinalgError::ComplementPrecondition(
            "inner + (outer ∩ constraint) does not fill outer",
        ));
    }
    let mut reached = inner.clone();
    let mut chosen = Vec::new();
    for v in candidates.basis() {
        if reached.dim() == outer.dim() {
            break;
        }
        if !reached.contains_vector(v) {
            reached = reached.sum(&Subspace::span(inner.field, inner.ambient, [v.clone()]))?;
            chosen.push(v.clone());
        }
    }
    Ok(Subspace::span(inner.field, inner.ambient, chosen))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn line(f: FieldSpec, v: &[u32]) -> Subspace {
        Subspace::span(f, v.len(), [v.to_vec()])
    }

    #[test]
    fn rank_examples() {
        let f = gf(2);
        assert_eq!(Matrix::identity(f, 2).rank(), 2);
        assert_eq!(Matrix::zeros(f, 3, 4).rank(), 0);
        assert_eq!(Matrix::from_ints(f, 2, 2, &[1, 0, 1, 0]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let f5 = gf(5);
        let k = Matrix::from_ints(f5, 1, 2, &[1, 0]).kernel();
        assert_eq!(k, line(f5, &[0, 1]));
        assert!(Matrix::identity(f5, 3).kernel().is_zero());
        let f2 = gf(2);
        assert_eq!(Matrix::from_ints(f2, 1, 2, &[1, 1]).kernel(), line(f2, &[1, 1]));
    }

    #[test]
    fn image_examples() {
        let f = gf(3);
        assert_eq!(Matrix::from_ints(f, 2, 1, &[1, 1]).image(), line(f, &[1, 1]));
        assert!(Matrix::zeros(f, 2, 3).image().is_zero());
        assert_eq!(Matrix::from_ints(f, 2, 1, &[1, 0]).image(), line(f, &[1, 0]));
    }

    #[test]
    fn sum_examples() {
        let f = gf(2);
        let full = Subspace::full(f, 2);
        assert_eq!(line(f, &[1, 0]).sum(&line(f, &[0, 1])).unwrap(), full);
        let v = line(f, &[1, 1]);
        assert_eq!(v.sum(&Subspace::zero(f, 2)).unwrap(), v);
        assert_eq!(v.sum(&line(f, &[1, 0])).unwrap(), full);
        assert!(v.sum(&Subspace::zero(f, 3)).is_err());
    }

    #[test]
    fn intersection_examples() {
        let f = gf(2);
        assert!(line(f, &[1, 1]).intersection(&line(f, &[1, 0])).unwrap().is_zero());
        let v = line(f, &[1, 1]);
        assert_eq!(v.intersection(&v).unwrap(), v);
        let plane = Subspace::span(f, 3, [vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(Subspace::full(f, 3).intersection(&plane).unwrap(), plane);
    }

    #[test]
    fn contains_examples() {
        let f = gf(5);
        let full = Subspace::full(f, 2);
        let l = line(f, &[1, 1]);
        assert!(full.contains(&l).unwrap());
        assert!(!l.contains(&full).unwrap());
        assert!(l.contains(&line(f, &[2, 2])).unwrap());
    }

    #[test]
    fn preimage_examples() {
        let f = gf(3);
        let m = Matrix::from_ints(f, 2, 3, &[1, 2, 0, 0, 1, 1]);
        assert_eq!(preimage(&m, &Subspace::zero(f, 2)).unwrap(), m.kernel());
        assert!(preimage(&m, &Subspace::full(f, 2)).unwrap().is_full());
        let id = Matrix::identity(f, 2);
        assert_eq!(preimage(&id, &line(f, &[1, 0])).unwrap(), line(f, &[1, 0]));
    }

    #[test]
    fn pushforward_examples() {
        let f = gf(2);
        let m = Matrix::from_ints(f, 1, 2, &[1, 0]);
        assert_eq!(pushforward(&m, &Subspace::full(f, 2)).unwrap(), m.image());
        assert!(pushforward(&m, &Subspace::zero(f, 2)).unwrap().is_zero());
        assert!(pushforward(&m, &line(f, &[1, 1])).unwrap().is_full());
    }

    #[test]
    fn complement_examples() {
        let f = gf(2);
        let full = Subspace::full(f, 2);
        let zero = Subspace::zero(f, 2);
        assert_eq!(complement_within(&zero, &full, &full).unwrap(), full);
        assert!(complement_within(&full, &full, &zero).unwrap().is_zero());
        let w = complement_within(&line(f, &[1, 0]), &full, &line(f, &[0, 1])).unwrap();
        assert_eq!(w, line(f, &[0, 1]));
        assert!(complement_within(&line(f, &[1, 0]), &full, &line(f, &[1, 0])).is_err());
        assert!(complement_within(&full, &line(f, &[1, 0]), &full).is_err());
    }

    #[test]
    fn coordinates_roundtrip() {
        let f = gf(5);
        let s = Subspace::span(f, 4, [vec![1, 2, 3, 4], vec![0, 1, 1, 0]]);
        let w: Vec<u32> = (0..4)
            .map(|j| f.add(f.mul(2, [1, 2, 3, 4][j]), [0, 1, 1, 0][j]))
            .collect();
        let c = s.coordinates(&w).unwrap();
        let back = s.basis().iter().zip(&c).fold(vec![0; 4], |acc, (b, &k)| {
            acc.iter().zip(b).map(|(&a, &x)| f.add(a, f.mul(k, x))).collect()
        });
        assert_eq!(back, w);
        assert!(!s.contains_vector(&[1, 0, 0, 0]));
    }
}
