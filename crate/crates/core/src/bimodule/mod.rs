//! Persistence bimodules over finite grids.
//!
//! A [`GridModule`] stores one vector space dimension per node and one matrix
//! per unit edge. Indices are 1-based: columns `1..=nx`, rows `1..=ny`.
//! Matrices map source coordinates to target coordinates, so an edge from a
//! node of dimension `a` to one of dimension `b` carries a `b × a` matrix.

mod io;
mod random;

pub use io::{load, save, ModuleDocument};
pub use random::{random_invertible, random_module, random_rectangle_decomposable};

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfield::{FieldSpec, LinalgError, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BimoduleError {
    #[error("grid shape {nx}x{ny} is empty")]
    EmptyShape { nx: usize, ny: usize },
    #[error("point {0} is outside the grid")]
    OutOfRange(GridPoint),
    #[error("{s} is not below {t}")]
    NotComparable { s: GridPoint, t: GridPoint },
    #[error("expected {expected} node dimensions, found {found}")]
    DimsLength { expected: usize, found: usize },
    #[error("{kind} map at {at} should be {rows}x{cols}, found {found_rows}x{found_cols}")]
    MapShape {
        kind: EdgeKind,
        at: GridPoint,
        rows: usize,
        cols: usize,
        found_rows: usize,
        found_cols: usize,
    },
    #[error("unit square at {0} does not commute")]
    NotCommuting(GridPoint),
    #[error("modules live on different grids or fields")]
    Incompatible,
    #[error("index subset is empty or not strictly increasing within range")]
    BadSubset,
    #[error("basis change at {0} is not invertible")]
    SingularBasis(GridPoint),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Horizontal,
    Vertical,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeKind::Horizontal => "horizontal",
            EdgeKind::Vertical => "vertical",
        })
    }
}

/// The product poset `{1..nx} × {1..ny}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridShape {
    pub nx: usize,
    pub ny: usize,
}

impl GridShape {
    pub fn new(nx: usize, ny: usize) -> Result<Self, BimoduleError> {
        if nx == 0 || ny == 0 {
            return Err(BimoduleError::EmptyShape { nx, ny });
        }
        Ok(GridShape { nx, ny })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, p: GridPoint) -> bool {
        (1..=self.nx).contains(&p.x) && (1..=self.ny).contains(&p.y)
    }

    #[inline]
    pub fn index(&self, p: GridPoint) -> usize {
        debug_assert!(self.contains(p));
        (p.y - 1) * self.nx + (p.x - 1)
    }

    #[inline]
    pub fn point(&self, i: usize) -> GridPoint {
        GridPoint::new(i % self.nx + 1, i / self.nx + 1)
    }

    /// All points, row by row from the bottom.
    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// All comparable pairs `s ≤ t`.
    pub fn pairs(&self) -> impl Iterator<Item = (GridPoint, GridPoint)> + '_ {
        self.points()
            .flat_map(move |s| self.points().filter(move |t| s.leq(*t)).map(move |t| (s, t)))
    }

    /// All non-degenerate squares.
    pub fn squares(&self) -> impl Iterator<Item = Square> + '_ {
        self.pairs()
            .filter(|(s, t)| s.x < t.x && s.y < t.y)
            .map(|(s, t)| Square { s, t })
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.nx, self.ny)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct GridPoint {
    pub x: usize,
    pub y: usize,
}

impl GridPoint {
    pub const fn new(x: usize, y: usize) -> Self {
        GridPoint { x, y }
    }

    /// Componentwise order.
    #[inline]
    pub fn leq(self, other: GridPoint) -> bool {
        self.x <= other.x && self.y <= other.y
    }
}

impl From<[usize; 2]> for GridPoint {
    fn from([x, y]: [usize; 2]) -> Self {
        GridPoint { x, y }
    }
}

impl From<GridPoint> for [usize; 2] {
    fn from(p: GridPoint) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// The square spanned by `s ≤ t`, with corners `s`, `b = (s.x, t.y)`,
/// `c = (t.x, s.y)` and `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Square {
    pub s: GridPoint,
    pub t: GridPoint,
}

impl Square {
    pub fn new(s: GridPoint, t: GridPoint) -> Result<Self, BimoduleError> {
        if !s.leq(t) {
            return Err(BimoduleError::NotComparable { s, t });
        }
        Ok(Square { s, t })
    }

    /// Upper-left corner.
    pub fn b(&self) -> GridPoint {
        GridPoint::new(self.s.x, self.t.y)
    }

    /// Lower-right corner.
    pub fn c(&self) -> GridPoint {
        GridPoint::new(self.t.x, self.s.y)
    }

    pub fn is_degenerate(&self) -> bool {
        self.s.x == self.t.x || self.s.y == self.t.y
    }

    pub fn cols(&self) -> Vec<usize> {
        dedup_pair(self.s.x, self.t.x)
    }

    pub fn rows(&self) -> Vec<usize> {
        dedup_pair(self.s.y, self.t.y)
    }
}

fn dedup_pair(a: usize, b: usize) -> Vec<usize> {
    if a == b {
        vec![a]
    } else {
        vec![a, b]
    }
}

#[derive(Clone, Default)]
struct RhoCache(OnceLock<Vec<Option<Matrix>>>);

impl fmt::Debug for RhoCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("..")
    }
}

impl PartialEq for RhoCache {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for RhoCache {}

/// A pointwise finite-dimensional module over a finite grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridModule {
    shape: GridShape,
    field: FieldSpec,
    dims: Vec<usize>,
    hmaps: Vec<Matrix>,
    vmaps: Vec<Matrix>,
    rho: RhoCache,
}

/// Assembles a module edge by edge; unset edges are zero maps.
#[derive(Clone, Debug)]
pub struct GridModuleBuilder {
    shape: GridShape,
    field: FieldSpec,
    dims: Vec<usize>,
    hmaps: Vec<Option<Matrix>>,
    vmaps: Vec<Option<Matrix>>,
}

impl GridModuleBuilder {
    pub fn new(shape: GridShape, field: FieldSpec) -> Self {
        GridModuleBuilder {
            shape,
            field,
            dims: vec![0; shape.len()],
            hmaps: vec![None; shape.len()],
            vmaps: vec![None; shape.len()],
        }
    }

    pub fn dims(mut self, dims: Vec<usize>) -> Self {
        self.dims = dims;
        self
    }

    pub fn set_dim(&mut self, p: GridPoint, d: usize) -> &mut Self {
        let i = self.shape.index(p);
        self.dims[i] = d;
        self
    }

    /// Map from `p` to its right neighbour.
    pub fn set_hmap(&mut self, p: GridPoint, m: Matrix) -> &mut Self {
        let i = self.shape.index(p);
        self.hmaps[i] = Some(m);
        self
    }

    /// Map from `p` to its upper neighbour.
    pub fn set_vmap(&mut self, p: GridPoint, m: Matrix) -> &mut Self {
        let i = self.shape.index(p);
        self.vmaps[i] = Some(m);
        self
    }

    pub fn build(self) -> Result<GridModule, BimoduleError> {
        let GridModuleBuilder {
            shape,
            field,
            dims,
            hmaps,
            vmaps,
        } = self;
        if dims.len() != shape.len() {
            return Err(BimoduleError::DimsLength {
                expected: shape.len(),
                found: dims.len(),
            });
        }
        let fill = |maps: Vec<Option<Matrix>>, dx: usize, dy: usize| -> Vec<Matrix> {
            maps.into_iter()
                .enumerate()
                .map(|(i, m)| {
                    let p = shape.point(i);
                    let q = GridPoint::new(p.x + dx, p.y + dy);
                    if !shape.contains(q) {
                        return Matrix::zeros(field, 0, 0);
                    }
                    m.unwrap_or_else(|| Matrix::zeros(field, dims[shape.index(q)], dims[i]))
                })
                .collect()
        };
        let hmaps = fill(hmaps, 1, 0);
        let vmaps = fill(vmaps, 0, 1);
        let m = GridModule {
            shape,
            field,
            dims,
            hmaps,
            vmaps,
            rho: RhoCache::default(),
        };
        m.validate()?;
        Ok(m)
    }
}

impl GridModule {
    pub fn builder(shape: GridShape, field: FieldSpec) -> GridModuleBuilder {
        GridModuleBuilder::new(shape, field)
    }

    pub fn zero(shape: GridShape, field: FieldSpec) -> Self {
        GridModuleBuilder::new(shape, field)
            .build()
            .expect("zero module is valid")
    }

    #[inline]
    pub fn shape(&self) -> GridShape {
        self.shape
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[inline]
    pub fn dim(&self, p: GridPoint) -> usize {
        self.dims[self.shape.index(p)]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Map from `p` to `(p.x + 1, p.y)`; `None` on the right boundary.
    pub fn hmap(&self, p: GridPoint) -> Option<&Matrix> {
        (p.x < self.shape.nx).then(|| &self.hmaps[self.shape.index(p)])
    }

    /// Map from `p` to `(p.x, p.y + 1)`; `None` on the top boundary.
    pub fn vmap(&self, p: GridPoint) -> Option<&Matrix> {
        (p.y < self.shape.ny).then(|| &self.vmaps[self.shape.index(p)])
    }

    /// Checks edge matrix shapes and commutativity of every unit square.
    pub fn validate(&self) -> Result<(), BimoduleError> {
        let shape = self.shape;
        if self.dims.len() != shape.len() {
            return Err(BimoduleError::DimsLength {
                expected: shape.len(),
                found: self.dims.len(),
            });
        }
        for p in shape.points() {
            for (kind, m, q) in [
                (EdgeKind::Horizontal, self.hmap(p), GridPoint::new(p.x + 1, p.y)),
                (EdgeKind::Vertical, self.vmap(p), GridPoint::new(p.x, p.y + 1)),
            ] {
                let Some(m) = m else { continue };
                if m.field() != self.field {
                    return Err(BimoduleError::Incompatible);
                }
                let (rows, cols) = (self.dim(q), self.dim(p));
                if (m.rows(), m.cols()) != (rows, cols) {
                    return Err(BimoduleError::MapShape {
                        kind,
                        at: p,
                        rows,
                        cols,
                        found_rows: m.rows(),
                        found_cols: m.cols(),
                    });
                }
            }
        }
        for p in shape.points() {
            if p.x < shape.nx && p.y < shape.ny {
                let right = GridPoint::new(p.x + 1, p.y);
                let up = GridPoint::new(p.x, p.y + 1);
                let a = self.vmap(right).unwrap() * self.hmap(p).unwrap();
                let b = self.hmap(up).unwrap() * self.vmap(p).unwrap();
                if a != b {
                    return Err(BimoduleError::NotCommuting(p));
                }
            }
        }
        Ok(())
    }

    fn rho_table(&self) -> &[Option<Matrix>] {
        self.rho.0.get_or_init(|| {
            let n = self.shape.len();
            let mut table: Vec<Option<Matrix>> = vec![None; n * n];
            for si in 0..n {
                let s = self.shape.point(si);
                // targets in row-major order: predecessors come first
                for ti in si..n {
                    let t = self.shape.point(ti);
                    if !s.leq(t) {
                        continue;
                    }
                    let m = if s == t {
                        Matrix::identity(self.field, self.dim(s))
                    } else if t.x > s.x {
                        let prev = GridPoint::new(t.x - 1, t.y);
                        let inner = table[si * n + self.shape.index(prev)].as_ref().unwrap();
                        self.hmap(prev).unwrap() * inner
                    } else {
                        let prev = GridPoint::new(t.x, t.y - 1);
                        let inner = table[si * n + self.shape.index(prev)].as_ref().unwrap();
                        self.vmap(prev).unwrap() * inner
                    };
                    table[si * n + ti] = Some(m);
                }
            }
            table
        })
    }

    /// The transition map from `s` to `t`.
    pub fn rho(&self, s: GridPoint, t: GridPoint) -> Result<&Matrix, BimoduleError> {
        for p in [s, t] {
            if !self.shape.contains(p) {
                return Err(BimoduleError::OutOfRange(p));
            }
        }
        if !s.leq(t) {
            return Err(BimoduleError::NotComparable { s, t });
        }
        let n = self.shape.len();
        Ok(self.rho_table()[self.shape.index(s) * n + self.shape.index(t)]
            .as_ref()
            .expect("comparable pair is cached"))
    }

    /// Like [`GridModule::rho`] but panics on incomparable or out-of-range points.
    pub fn transition(&self, s: GridPoint, t: GridPoint) -> &Matrix {
        self.rho(s, t).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Restriction to the product of the given strictly increasing index sets.
    pub fn restrict(&self, cols: &[usize], rows: &[usize]) -> Result<GridModule, BimoduleError> {
        check_subset(cols, self.shape.nx)?;
        check_subset(rows, self.shape.ny)?;
        let shape = GridShape::new(cols.len(), rows.len())?;
        let lift = |p: GridPoint| GridPoint::new(cols[p.x - 1], rows[p.y - 1]);
        let mut b = GridModuleBuilder::new(shape, self.field);
        for p in shape.points() {
            b.set_dim(p, self.dim(lift(p)));
            if p.x < shape.nx {
                let q = GridPoint::new(p.x + 1, p.y);
                b.set_hmap(p, self.transition(lift(p), lift(q)).clone());
            }
            if p.y < shape.ny {
                let q = GridPoint::new(p.x, p.y + 1);
                b.set_vmap(p, self.transition(lift(p), lift(q)).clone());
            }
        }
        b.build()
    }

    pub fn direct_sum(&self, other: &GridModule) -> Result<GridModule, BimoduleError> {
        if self.shape != other.shape || self.field != other.field {
            return Err(BimoduleError::Incompatible);
        }
        let f = self.field;
        let join = |a: &[Matrix], b: &[Matrix]| -> Vec<Matrix> {
            a.iter().zip(b).map(|(x, y)| Matrix::block_diag(f, &[x, y])).collect()
        };
        let m = GridModule {
            shape: self.shape,
            field: f,
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            hmaps: join(&self.hmaps, &other.hmaps),
            vmaps: join(&self.vmaps, &other.vmaps),
            rho: RhoCache::default(),
        };
        debug_assert!(m.validate().is_ok());
        Ok(m)
    }

    /// Direct sum of a list of modules on the given grid.
    pub fn direct_sum_all<'a>(
        shape: GridShape,
        field: FieldSpec,
        parts: impl IntoIterator<Item = &'a GridModule>,
    ) -> Result<GridModule, BimoduleError> {
        parts
            .into_iter()
            .try_fold(GridModule::zero(shape, field), |acc, m| acc.direct_sum(m))
    }

    /// The isomorphic module with maps `B_t · ρ · B_s⁻¹`, one basis change per node.
    pub fn conjugate(&self, bases: &[Matrix]) -> Result<GridModule, BimoduleError> {
        if bases.len() != self.shape.len() {
            return Err(BimoduleError::DimsLength {
                expected: self.shape.len(),
                found: bases.len(),
            });
        }
        let mut inverses = Vec::with_capacity(bases.len());
        for (i, b) in bases.iter().enumerate() {
            let p = self.shape.point(i);
            if b.rows() != self.dims[i] || b.cols() != self.dims[i] {
                return Err(BimoduleError::SingularBasis(p));
            }
            inverses.push(b.inverse().map_err(|_| BimoduleError::SingularBasis(p))?);
        }
        let mut b = GridModuleBuilder::new(self.shape, self.field).dims(self.dims.clone());
        for p in self.shape.points() {
            let i = self.shape.index(p);
            if let Some(h) = self.hmap(p) {
                let j = self.shape.index(GridPoint::new(p.x + 1, p.y));
                b.set_hmap(p, &(&bases[j] * h) * &inverses[i]);
            }
            if let Some(v) = self.vmap(p) {
                let j = self.shape.index(GridPoint::new(p.x, p.y + 1));
                b.set_vmap(p, &(&bases[j] * v) * &inverses[i]);
            }
        }
        b.build()
    }

    /// The dual module: vector spaces are dualised (maps transposed) and the
    /// grid is reflected through its centre, `(x, y) ↦ (nx + 1 - x, ny + 1 - y)`.
    pub fn dual(&self) -> GridModule {
        let shape = self.shape;
        let back = |p: GridPoint| GridPoint::new(shape.nx + 1 - p.x, shape.ny + 1 - p.y);
        let mut b = GridModuleBuilder::new(shape, self.field);
        for p in shape.points() {
            b.set_dim(p, self.dim(back(p)));
            if p.x < shape.nx {
                let q = GridPoint::new(p.x + 1, p.y);
                b.set_hmap(p, self.transition(back(q), back(p)).transpose());
            }
            if p.y < shape.ny {
                let q = GridPoint::new(p.x, p.y + 1);
                b.set_vmap(p, self.transition(back(q), back(p)).transpose());
            }
        }
        b.build().expect("dual of a valid module is valid")
    }
}

fn check_subset(idx: &[usize], n: usize) -> Result<(), BimoduleError> {
    if idx.is_empty()
        || idx[0] == 0
        || *idx.last().unwrap() > n
        || idx.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(BimoduleError::BadSubset);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    /// 2×2 full indicator, optionally breaking commutativity at (1,1).
    fn square(field: FieldSpec, broken: bool) -> Result<GridModule, BimoduleError> {
        let shape = GridShape::new(2, 2).unwrap();
        let one = Matrix::identity(field, 1);
        let mut b = GridModule::builder(shape, field).dims(vec![1; 4]);
        for p in shape.points() {
            if p.x < 2 {
                b.set_hmap(p, one.clone());
            }
            if p.y < 2 {
                let m = if broken && p == GridPoint::new(1, 1) {
                    Matrix::zeros(field, 1, 1)
                } else {
                    one.clone()
                };
                b.set_vmap(p, m);
            }
        }
        b.build()
    }

    #[test]
    fn validate_examples() {
        assert!(square(gf(2), false).is_ok());
        assert_eq!(
            square(gf(2), true).unwrap_err(),
            BimoduleError::NotCommuting(GridPoint::new(1, 1))
        );
    }

    #[test]
    fn map_shape_is_checked() {
        let shape = GridShape::new(2, 1).unwrap();
        let mut b = GridModule::builder(shape, gf(2)).dims(vec![1, 2]);
        b.set_hmap(GridPoint::new(1, 1), Matrix::identity(gf(2), 1));
        assert!(matches!(b.build(), Err(BimoduleError::MapShape { .. })));
    }

    #[test]
    fn rho_identity_and_order() {
        let m = square(gf(3), false).unwrap();
        let t = GridPoint::new(2, 2);
        assert!(m.rho(t, t).unwrap().is_identity());
        assert!(m.rho(GridPoint::new(1, 1), t).unwrap().is_identity());
        assert!(matches!(
            m.rho(GridPoint::new(2, 1), GridPoint::new(1, 2)),
            Err(BimoduleError::NotComparable { .. })
        ));
    }

    #[test]
    fn restrict_to_everything_is_identity() {
        let m = square(gf(2), false).unwrap();
        assert_eq!(m.restrict(&[1, 2], &[1, 2]).unwrap(), m);
        assert_eq!(m.restrict(&[2], &[1, 2]).unwrap().shape(), GridShape::new(1, 2).unwrap());
        assert_eq!(m.restrict(&[], &[1]), Err(BimoduleError::BadSubset));
        assert_eq!(m.restrict(&[2, 1], &[1]), Err(BimoduleError::BadSubset));
    }

    #[test]
    fn direct_sum_dims_add() {
        let m = square(gf(2), false).unwrap();
        let z = GridModule::zero(m.shape(), m.field());
        assert_eq!(m.direct_sum(&z).unwrap(), m);
        let mm = m.direct_sum(&m).unwrap();
        assert!(mm.dims().iter().all(|&d| d == 2));
        assert!(mm.hmap(GridPoint::new(1, 1)).unwrap().is_identity());
    }

    #[test]
    fn conjugate_identity_bases() {
        let m = square(gf(5), false).unwrap();
        let id: Vec<Matrix> = m.dims().iter().map(|&d| Matrix::identity(gf(5), d)).collect();
        assert_eq!(m.conjugate(&id).unwrap(), m);
        let mut bad = id.clone();
        bad[0] = Matrix::zeros(gf(5), 1, 1);
        assert_eq!(
            m.conjugate(&bad).unwrap_err(),
            BimoduleError::SingularBasis(GridPoint::new(1, 1))
        );
    }

    #[test]
    fn dual_is_involutive() {
        let m = square(gf(2), false).unwrap();
        assert_eq!(m.dual().dual(), m);
    }

    #[test]
    fn squares_enumeration() {
        let shape = GridShape::new(3, 2).unwrap();
        // 3 column pairs × 1 row pair
        assert_eq!(shape.squares().count(), 3);
        let q = Square::new(GridPoint::new(1, 1), GridPoint::new(3, 2)).unwrap();
        assert_eq!(q.b(), GridPoint::new(1, 2));
        assert_eq!(q.c(), GridPoint::new(3, 1));
        assert!(!q.is_degenerate());
    }
}
