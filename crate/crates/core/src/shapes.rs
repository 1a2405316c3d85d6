//! Supports of indicator modules: cuts, rectangles, intervals, blocks, hooks
//! and the σ relation on rectangles.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bimodule::{BimoduleError, GridModule, GridModuleBuilder, GridPoint, GridShape, Square};
use crate::exactfield::{FieldSpec, Matrix};

/// Largest grid (in cells) accepted by [`enumerate_intervals`].
pub const INTERVAL_GRID_LIMIT: usize = 36;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("cut {k} is out of range for an axis of size {n}")]
    InvalidCut { n: usize, k: usize },
    #[error("rectangle is empty")]
    EmptyRectangle,
    #[error("shapes live on different grids")]
    ShapeMismatch,
    #[error("interval is empty")]
    EmptyInterval,
    #[error("cell {0} is outside the grid")]
    OutOfRange(GridPoint),
    #[error("not convex: {lo} and {hi} are members but {between} is not")]
    NotConvex {
        lo: GridPoint,
        hi: GridPoint,
        between: GridPoint,
    },
    #[error("not connected")]
    NotConnected,
    #[error("grid has {cells} cells, interval enumeration is limited to {limit}")]
    TooLarge { cells: usize, limit: usize },
    #[error("square {s}..{t} is degenerate")]
    DegenerateSquare { s: GridPoint, t: GridPoint },
    #[error("cannot parse shape literal {0:?}")]
    Parse(String),
    #[error(transparent)]
    Module(#[from] BimoduleError),
}

/// A cut of the axis `{1..n}`: lower part `{1..k}`, upper part `{k+1..n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cut {
    pub n: usize,
    pub k: usize,
}

impl Cut {
    pub fn new(n: usize, k: usize) -> Result<Self, ShapeError> {
        if k > n {
            return Err(ShapeError::InvalidCut { n, k });
        }
        Ok(Cut { n, k })
    }

    pub fn in_lower(&self, i: usize) -> bool {
        i <= self.k
    }

    pub fn in_upper(&self, i: usize) -> bool {
        i > self.k && i <= self.n
    }

    pub fn lower_is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn upper_is_empty(&self) -> bool {
        self.k == self.n
    }

    /// `self⁻ ⊆ other⁻`.
    pub fn lower_subset(&self, other: &Cut) -> bool {
        self.k <= other.k
    }

    /// `self⁺ ⊆ other⁺`.
    pub fn upper_subset(&self, other: &Cut) -> bool {
        self.k >= other.k
    }

    /// All cuts of `{1..n}`, by increasing lower part.
    pub fn all(n: usize) -> Vec<Cut> {
        (0..=n).map(|k| Cut { n, k }).collect()
    }
}

/// `(l⁺ ∩ r⁻) × (b⁺ ∩ t⁻)`, i.e. `[lcut.k + 1, rcut.k] × [bcut.k + 1, tcut.k]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RectangleShape {
    pub lcut: Cut,
    pub rcut: Cut,
    pub bcut: Cut,
    pub tcut: Cut,
}

impl RectangleShape {
    pub fn new(lcut: Cut, rcut: Cut, bcut: Cut, tcut: Cut) -> Result<Self, ShapeError> {
        if lcut.n != rcut.n || bcut.n != tcut.n {
            return Err(ShapeError::ShapeMismatch);
        }
        if lcut.k >= rcut.k || bcut.k >= tcut.k {
            return Err(ShapeError::EmptyRectangle);
        }
        Ok(RectangleShape {
            lcut,
            rcut,
            bcut,
            tcut,
        })
    }

    /// `[x1, x2] × [y1, y2]` on `shape`.
    pub fn from_bounds(
        shape: GridShape,
        x1: usize,
        x2: usize,
        y1: usize,
        y2: usize,
    ) -> Result<Self, ShapeError> {
        if x1 == 0 || y1 == 0 {
            return Err(ShapeError::OutOfRange(GridPoint::new(x1, y1)));
        }
        if x2 > shape.nx || y2 > shape.ny {
            return Err(ShapeError::OutOfRange(GridPoint::new(x2, y2)));
        }
        RectangleShape::new(
            Cut::new(shape.nx, x1 - 1)?,
            Cut::new(shape.nx, x2)?,
            Cut::new(shape.ny, y1 - 1)?,
            Cut::new(shape.ny, y2)?,
        )
    }

    pub fn grid(&self) -> GridShape {
        GridShape {
            nx: self.lcut.n,
            ny: self.bcut.n,
        }
    }

    pub fn x1(&self) -> usize {
        self.lcut.k + 1
    }

    pub fn x2(&self) -> usize {
        self.rcut.k
    }

    pub fn y1(&self) -> usize {
        self.bcut.k + 1
    }

    pub fn y2(&self) -> usize {
        self.tcut.k
    }

    /// Bottom-left corner, the minimum of the rectangle.
    pub fn min_corner(&self) -> GridPoint {
        GridPoint::new(self.x1(), self.y1())
    }

    pub fn max_corner(&self) -> GridPoint {
        GridPoint::new(self.x2(), self.y2())
    }

    pub fn contains(&self, p: GridPoint) -> bool {
        (self.x1()..=self.x2()).contains(&p.x) && (self.y1()..=self.y2()).contains(&p.y)
    }

    /// `R⁺ = {t : s ≤ t for some s ∈ R}`.
    pub fn upset_contains(&self, p: GridPoint) -> bool {
        p.x >= self.x1() && p.y >= self.y1()
    }

    pub fn cells(&self) -> Vec<GridPoint> {
        (self.y1()..=self.y2())
            .flat_map(|y| (self.x1()..=self.x2()).map(move |x| GridPoint::new(x, y)))
            .collect()
    }

    pub fn area(&self) -> usize {
        (self.x2() + 1 - self.x1()) * (self.y2() + 1 - self.y1())
    }

    pub fn to_interval(&self) -> IntervalShape {
        IntervalShape {
            shape: self.grid(),
            cells: self.cells().into_iter().collect(),
        }
    }

    pub fn indicator(&self, field: FieldSpec) -> GridModule {
        indicator_of_cells(self.grid(), &self.cells(), field).expect("rectangles are convex")
    }

    /// Parses `"x1..x2,y1..y2"`.
    pub fn parse(shape: GridShape, text: &str) -> Result<Self, ShapeError> {
        let err = || ShapeError::Parse(text.to_string());
        let (xs, ys) = text.split_once(',').ok_or_else(err)?;
        let (x1, x2) = parse_range(xs).ok_or_else(err)?;
        let (y1, y2) = parse_range(ys).ok_or_else(err)?;
        RectangleShape::from_bounds(shape, x1, x2, y1, y2)
    }
}

impl fmt::Display for RectangleShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{},{}..{}", self.x1(), self.x2(), self.y1(), self.y2())
    }
}

fn parse_range(s: &str) -> Option<(usize, usize)> {
    let (a, b) = s.trim().split_once("..")?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// A convex, connected set of grid cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalShape {
    shape: GridShape,
    cells: BTreeSet<GridPoint>,
}

impl IntervalShape {
    pub fn new(shape: GridShape, cells: impl IntoIterator<Item = GridPoint>) -> Result<Self, ShapeError> {
        let cells: BTreeSet<GridPoint> = cells.into_iter().collect();
        if cells.is_empty() {
            return Err(ShapeError::EmptyInterval);
        }
        if let Some(&p) = cells.iter().find(|p| !shape.contains(**p)) {
            return Err(ShapeError::OutOfRange(p));
        }
        check_convex(shape, &cells)?;
        if components(&cells).len() != 1 {
            return Err(ShapeError::NotConnected);
        }
        Ok(IntervalShape { shape, cells })
    }

    pub fn grid(&self) -> GridShape {
        self.shape
    }

    pub fn cells(&self) -> &BTreeSet<GridPoint> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, p: GridPoint) -> bool {
        self.cells.contains(&p)
    }

    /// Per-column row ranges `(x, lo, hi)`, by increasing `x`.
    pub fn columns(&self) -> Vec<(usize, usize, usize)> {
        let mut out: Vec<(usize, usize, usize)> = Vec::new();
        for p in &self.cells {
            match out.last_mut() {
                Some((x, _, hi)) if *x == p.x => *hi = p.y,
                _ => out.push((p.x, p.y, p.y)),
            }
        }
        out
    }

    pub fn as_rectangle(&self) -> Option<RectangleShape> {
        let cols = self.columns();
        let (x1, lo, hi) = cols[0];
        let x2 = cols.last().unwrap().0;
        if cols.iter().all(|&(_, l, h)| (l, h) == (lo, hi)) {
            RectangleShape::from_bounds(self.shape, x1, x2, lo, hi).ok()
        } else {
            None
        }
    }

    pub fn is_rectangle(&self) -> bool {
        self.as_rectangle().is_some()
    }

    /// On a 2×2 grid: the three cells other than the minimum.
    pub fn is_top_hook(&self) -> bool {
        self.shape == TWO_BY_TWO && *self == top_hook()
    }

    /// On a 2×2 grid: the three cells other than the maximum.
    pub fn is_bottom_hook(&self) -> bool {
        self.shape == TWO_BY_TWO && *self == bottom_hook()
    }

    pub fn indicator(&self, field: FieldSpec) -> GridModule {
        let cells: Vec<GridPoint> = self.cells.iter().copied().collect();
        indicator_of_cells(self.shape, &cells, field).expect("intervals are convex")
    }

    /// Parses `"x:lo..hi;x:lo..hi;..."`.
    pub fn parse(shape: GridShape, text: &str) -> Result<Self, ShapeError> {
        let err = || ShapeError::Parse(text.to_string());
        let mut cells = Vec::new();
        for part in text.split(';').filter(|s| !s.trim().is_empty()) {
            let (x, range) = part.split_once(':').ok_or_else(err)?;
            let x: usize = x.trim().parse().map_err(|_| err())?;
            let (lo, hi) = parse_range(range).ok_or_else(err)?;
            if lo > hi {
                return Err(err());
            }
            cells.extend((lo..=hi).map(|y| GridPoint::new(x, y)));
        }
        IntervalShape::new(shape, cells)
    }
}

impl fmt::Display for IntervalShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .columns()
            .into_iter()
            .map(|(x, lo, hi)| format!("{x}:{lo}..{hi}"))
            .collect();
        f.write_str(&parts.join(";"))
    }
}

impl From<RectangleShape> for IntervalShape {
    fn from(r: RectangleShape) -> Self {
        r.to_interval()
    }
}

fn check_convex(shape: GridShape, cells: &BTreeSet<GridPoint>) -> Result<(), ShapeError> {
    for &lo in cells {
        for &hi in cells.iter().filter(|q| lo.leq(**q)) {
            for x in lo.x..=hi.x {
                for y in lo.y..=hi.y {
                    let between = GridPoint::new(x, y);
                    debug_assert!(shape.contains(between));
                    if !cells.contains(&between) {
                        return Err(ShapeError::NotConvex { lo, hi, between });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Connected components under the comparability relation.
fn components(cells: &BTreeSet<GridPoint>) -> Vec<BTreeSet<GridPoint>> {
    let mut left: BTreeSet<GridPoint> = cells.clone();
    let mut out = Vec::new();
    while let Some(&start) = left.iter().next() {
        left.remove(&start);
        let mut comp = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            let next: Vec<GridPoint> = left
                .iter()
                .copied()
                .filter(|q| p.leq(*q) || q.leq(p))
                .collect();
            for q in next {
                left.remove(&q);
                comp.insert(q);
                queue.push_back(q);
            }
        }
        out.push(comp);
    }
    out
}

/// Indicator module of a convex cell set, connected or not.
pub fn indicator_of_cells(
    shape: GridShape,
    cells: &[GridPoint],
    field: FieldSpec,
) -> Result<GridModule, ShapeError> {
    let set: BTreeSet<GridPoint> = cells.iter().copied().collect();
    if let Some(&p) = set.iter().find(|p| !shape.contains(**p)) {
        return Err(ShapeError::OutOfRange(p));
    }
    check_convex(shape, &set)?;
    let mut b = GridModuleBuilder::new(shape, field);
    for &p in &set {
        b.set_dim(p, 1);
    }
    let one = Matrix::identity(field, 1);
    for &p in &set {
        if set.contains(&GridPoint::new(p.x + 1, p.y)) {
            b.set_hmap(p, one.clone());
        }
        if set.contains(&GridPoint::new(p.x, p.y + 1)) {
            b.set_vmap(p, one.clone());
        }
    }
    Ok(b.build()?)
}

/// Indicator module of an interval.
pub fn indicator(shape: GridShape, s: &IntervalShape, field: FieldSpec) -> Result<GridModule, ShapeError> {
    if s.grid() != shape {
        return Err(ShapeError::ShapeMismatch);
    }
    Ok(s.indicator(field))
}

/// All rectangles, ordered by `x1, x2, y1, y2`.
pub fn enumerate_rectangles(shape: GridShape) -> Vec<RectangleShape> {
    let mut out = Vec::with_capacity(shape.nx * (shape.nx + 1) * shape.ny * (shape.ny + 1) / 4);
    for x1 in 1..=shape.nx {
        for x2 in x1..=shape.nx {
            for y1 in 1..=shape.ny {
                for y2 in y1..=shape.ny {
                    out.push(RectangleShape::from_bounds(shape, x1, x2, y1, y2).unwrap());
                }
            }
        }
    }
    out
}

/// All intervals, as staircase profiles: consecutive columns carrying row
/// ranges whose bottoms and tops are non-increasing, with consecutive ranges
/// overlapping in the order sense.
pub fn enumerate_intervals(shape: GridShape) -> Result<Vec<IntervalShape>, ShapeError> {
    if shape.len() > INTERVAL_GRID_LIMIT {
        return Err(ShapeError::TooLarge {
            cells: shape.len(),
            limit: INTERVAL_GRID_LIMIT,
        });
    }
    let mut out = Vec::new();
    let mut profile = Vec::new();
    for x in 1..=shape.nx {
        for lo in 1..=shape.ny {
            for hi in lo..=shape.ny {
                profile.push((x, lo, hi));
                extend_profile(shape, &mut profile, &mut out);
                profile.pop();
            }
        }
    }
    Ok(out)
}

fn extend_profile(
    shape: GridShape,
    profile: &mut Vec<(usize, usize, usize)>,
    out: &mut Vec<IntervalShape>,
) {
    let cells = profile
        .iter()
        .flat_map(|&(x, lo, hi)| (lo..=hi).map(move |y| GridPoint::new(x, y)))
        .collect();
    out.push(IntervalShape { shape, cells });
    let (x, lo, hi) = *profile.last().unwrap();
    if x == shape.nx {
        return;
    }
    for nlo in 1..=lo {
        for nhi in nlo.max(lo)..=hi {
            profile.push((x + 1, nlo, nhi));
            extend_profile(shape, profile, out);
            profile.pop();
        }
    }
}

const TWO_BY_TWO: GridShape = GridShape { nx: 2, ny: 2 };

fn bottom_hook() -> IntervalShape {
    IntervalShape {
        shape: TWO_BY_TWO,
        cells: [(1, 1), (1, 2), (2, 1)].map(|(x, y)| GridPoint::new(x, y)).into(),
    }
}

fn top_hook() -> IntervalShape {
    IntervalShape {
        shape: TWO_BY_TWO,
        cells: [(1, 2), (2, 1), (2, 2)].map(|(x, y)| GridPoint::new(x, y)).into(),
    }
}

/// The bottom hook `{s, b, c}` and the top hook `{b, c, t}` of a square, as
/// intervals of the square itself (a 2×2 grid).
pub fn hooks(q: &Square) -> Result<(IntervalShape, IntervalShape), ShapeError> {
    if q.is_degenerate() {
        return Err(ShapeError::DegenerateSquare { s: q.s, t: q.t });
    }
    Ok((bottom_hook(), top_hook()))
}

/// Evaluates `r_prime σ r`; the second flag is the strict relation.
pub fn sigma(r_prime: &RectangleShape, r: &RectangleShape) -> Result<(bool, bool), ShapeError> {
    if r_prime.grid() != r.grid() {
        return Err(ShapeError::ShapeMismatch);
    }
    let left = r_prime.lcut.lower_subset(&r.lcut);
    let bottom = r_prime.bcut.lower_subset(&r.bcut);
    let right_strict = r_prime.rcut.k < r.rcut.k;
    let top_strict = r_prime.tcut.k < r.tcut.k;
    let corner = r_prime.rcut.lower_subset(&r.rcut) && r_prime.tcut.lower_subset(&r.tcut);
    let holds = left && bottom && (right_strict || top_strict || corner);
    Ok((holds, holds && r_prime != r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockTag {
    BirthQuadrant,
    DeathQuadrant,
    Hband,
    Vband,
    NotBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockClass {
    pub birth_quadrant: bool,
    pub death_quadrant: bool,
    pub hband: bool,
    pub vband: bool,
    pub tag: BlockTag,
}

/// Block conditions relative to `shape`: an axis interval is coinitial when it
/// reaches index 1 and cofinal when it reaches the last index.
pub fn classify_block(r: &RectangleShape, shape: GridShape) -> BlockClass {
    let x_init = r.x1() == 1;
    let x_final = r.x2() == shape.nx;
    let y_init = r.y1() == 1;
    let y_final = r.y2() == shape.ny;
    let birth_quadrant = x_init && y_init;
    let death_quadrant = x_final && y_final;
    let hband = x_init && x_final;
    let vband = y_init && y_final;
    let tag = [
        (birth_quadrant, BlockTag::BirthQuadrant),
        (death_quadrant, BlockTag::DeathQuadrant),
        (hband, BlockTag::Hband),
        (vband, BlockTag::Vband),
    ]
    .into_iter()
    .find(|(ok, _)| *ok)
    .map_or(BlockTag::NotBlock, |(_, t)| t);
    BlockClass {
        birth_quadrant,
        death_quadrant,
        hband,
        vband,
        tag,
    }
}

/// `S ∩ (cols × rows)` in subgrid coordinates, split into connected components.
pub fn restrict_interval(s: &IntervalShape, cols: &[usize], rows: &[usize]) -> Vec<IntervalShape> {
    let Ok(shape) = GridShape::new(cols.len(), rows.len()) else {
        return Vec::new();
    };
    let local: BTreeSet<GridPoint> = s
        .cells
        .iter()
        .filter_map(|p| {
            let x = cols.iter().position(|&c| c == p.x)?;
            let y = rows.iter().position(|&r| r == p.y)?;
            Some(GridPoint::new(x + 1, y + 1))
        })
        .collect();
    components(&local)
        .into_iter()
        .map(|cells| IntervalShape { shape, cells })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(nx: usize, ny: usize) -> GridShape {
        GridShape::new(nx, ny).unwrap()
    }

    fn rect(shape: GridShape, x1: usize, x2: usize, y1: usize, y2: usize) -> RectangleShape {
        RectangleShape::from_bounds(shape, x1, x2, y1, y2).unwrap()
    }

    #[test]
    fn rectangle_counts() {
        assert_eq!(enumerate_rectangles(g(1, 1)).len(), 1);
        assert_eq!(enumerate_rectangles(g(2, 2)).len(), 9);
        assert_eq!(enumerate_rectangles(g(3, 2)).len(), 18);
    }

    #[test]
    fn interval_counts() {
        assert_eq!(enumerate_intervals(g(2, 2)).unwrap().len(), 11);
        for n in 1..=6 {
            assert_eq!(enumerate_intervals(g(1, n)).unwrap().len(), n * (n + 1) / 2);
            assert_eq!(enumerate_intervals(g(n, 1)).unwrap().len(), n * (n + 1) / 2);
        }
        assert!(matches!(enumerate_intervals(g(7, 6)), Err(ShapeError::TooLarge { .. })));
    }

    #[test]
    fn rectangles_are_intervals() {
        let shape = g(3, 3);
        let intervals: BTreeSet<String> =
            enumerate_intervals(shape).unwrap().iter().map(|i| i.to_string()).collect();
        for r in enumerate_rectangles(shape) {
            assert!(intervals.contains(&r.to_interval().to_string()));
        }
    }

    #[test]
    fn hooks_of_a_square() {
        let q = Square::new(GridPoint::new(1, 1), GridPoint::new(2, 2)).unwrap();
        let (h1, h2) = hooks(&q).unwrap();
        assert!(!h2.contains(GridPoint::new(1, 1)));
        assert_eq!(h2.len(), 3);
        let union: BTreeSet<_> = h1.cells().union(h2.cells()).copied().collect();
        let inter: BTreeSet<_> = h1.cells().intersection(h2.cells()).copied().collect();
        assert_eq!(union.len(), 4);
        assert_eq!(inter, BTreeSet::from([GridPoint::new(1, 2), GridPoint::new(2, 1)]));
        assert!(!h1.is_rectangle() && !h2.is_rectangle());
        let flat = Square::new(GridPoint::new(1, 1), GridPoint::new(1, 2)).unwrap();
        assert!(hooks(&flat).is_err());
    }

    #[test]
    fn sigma_examples() {
        let shape = g(3, 3);
        let r = rect(shape, 2, 3, 2, 3);
        assert_eq!(sigma(&r, &r).unwrap(), (true, false));
        assert_eq!(sigma(&rect(shape, 1, 3, 2, 3), &r).unwrap(), (true, true));
        assert_eq!(sigma(&rect(shape, 3, 3, 2, 3), &r).unwrap(), (false, false));
        assert_eq!(sigma(&r, &rect(g(2, 2), 1, 1, 1, 1)), Err(ShapeError::ShapeMismatch));
    }

    #[test]
    fn sigma_is_reflexive_but_not_transitive() {
        for shape in [g(2, 2), g(3, 2), g(3, 3)] {
            for a in enumerate_rectangles(shape) {
                assert_eq!(sigma(&a, &a).unwrap(), (true, false));
            }
        }
        // the strict kernel clause lets the right and top cuts trade off
        let shape = g(3, 2);
        let a = rect(shape, 1, 2, 1, 2);
        let b = rect(shape, 1, 3, 1, 1);
        let c = rect(shape, 1, 1, 1, 2);
        assert!(sigma(&a, &b).unwrap().0);
        assert!(sigma(&b, &c).unwrap().0);
        assert!(!sigma(&a, &c).unwrap().0);
    }

    #[test]
    fn strict_sigma_excludes_equality_only() {
        let shape = g(3, 3);
        let rs = enumerate_rectangles(shape);
        for a in &rs {
            for b in &rs {
                let (holds, strict) = sigma(a, b).unwrap();
                assert_eq!(strict, holds && a != b);
            }
        }
    }

    #[test]
    fn block_examples() {
        let shape = g(3, 3);
        let full = classify_block(&rect(shape, 1, 3, 1, 3), shape);
        assert!(full.birth_quadrant && full.death_quadrant && full.hband && full.vband);
        assert_eq!(classify_block(&rect(shape, 1, 2, 1, 2), shape).tag, BlockTag::BirthQuadrant);
        assert_eq!(classify_block(&rect(shape, 2, 2, 1, 3), shape).tag, BlockTag::Vband);
        assert_eq!(classify_block(&rect(shape, 2, 2, 2, 2), shape).tag, BlockTag::NotBlock);
    }

    #[test]
    fn literals_roundtrip() {
        let shape = g(3, 3);
        let r = rect(shape, 1, 2, 2, 3);
        assert_eq!(r.to_string(), "1..2,2..3");
        assert_eq!(RectangleShape::parse(shape, "1..2,2..3").unwrap(), r);
        let i = IntervalShape::parse(shape, "1:2..3;2:1..3").unwrap();
        assert_eq!(i.to_string(), "1:2..3;2:1..3");
        assert!(IntervalShape::parse(shape, "1:1..1;2:2..2").is_err());
        assert!(RectangleShape::parse(shape, "2..1,1..1").is_err());
    }

    #[test]
    fn interval_validation() {
        let shape = g(2, 2);
        let p = |x, y| GridPoint::new(x, y);
        assert!(matches!(
            IntervalShape::new(shape, [p(1, 1), p(2, 2)]),
            Err(ShapeError::NotConvex { .. })
        ));
        assert_eq!(
            IntervalShape::new(shape, [p(1, 2), p(2, 1)]),
            Err(ShapeError::NotConnected)
        );
        assert_eq!(IntervalShape::new(shape, []), Err(ShapeError::EmptyInterval));
    }

    #[test]
    fn indicator_examples() {
        let shape = g(3, 2);
        let full = rect(shape, 1, 3, 1, 2).indicator(FieldSpec::GF2);
        assert!(full.dims().iter().all(|&d| d == 1));
        assert!(full.hmap(GridPoint::new(1, 1)).unwrap().is_identity());
        // antichain: convex, two components; indicator is a valid module
        let pts = [GridPoint::new(1, 2), GridPoint::new(2, 1)];
        let m = indicator_of_cells(g(2, 2), &pts, FieldSpec::GF2).unwrap();
        assert_eq!(m.total_dim(), 2);
        let bad = [GridPoint::new(1, 1), GridPoint::new(2, 2)];
        assert!(indicator_of_cells(g(2, 2), &bad, FieldSpec::GF2).is_err());
    }

    #[test]
    fn restriction_of_intervals() {
        let shape = g(3, 3);
        let r = rect(shape, 1, 2, 1, 2).to_interval();
        let all = [1, 2, 3];
        assert_eq!(restrict_interval(&r, &all, &all), vec![r.clone()]);
        assert!(restrict_interval(&r, &[3], &[3]).is_empty());
        // staircase meeting a 2×2 subgrid in two incomparable cells
        let stair = IntervalShape::parse(shape, "1:3..3;2:2..3;3:1..2").unwrap();
        let parts = restrict_interval(&stair, &[1, 3], &[1, 3]);
        assert_eq!(parts.len(), 2);
    }

    #[test]
    fn cuts_are_totally_ordered() {
        let cuts = Cut::all(4);
        for a in &cuts {
            for b in &cuts {
                assert!(a.lower_subset(b) || b.lower_subset(a));
                assert_eq!(a.lower_subset(b), b.upper_subset(a));
            }
        }
        assert!(Cut::new(3, 4).is_err());
    }
}
