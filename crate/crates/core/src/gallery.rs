//! Named counterexample modules and the checks that certify their
//! properties: the indecomposable grid modules `Ψ_m` and the hook module.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::bimodule::{BimoduleError, GridModule, GridModuleBuilder, GridPoint, GridShape, Square};
use crate::decomposer::{
    decompose_rectangles, end_dim, interval_decompose, square_decompositions, DecomposeError,
    Decomposition, LocalClass,
};
use crate::exactfield::{FieldSpec, Matrix};
use crate::report::Report;
use crate::shapes::{IntervalShape, ShapeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GalleryError {
    #[error("invalid parameters: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Module(#[from] BimoduleError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

fn bad(msg: impl Into<String>) -> GalleryError {
    GalleryError::BadParameter(msg.into())
}

/// Unit column vector `e_i` (1-based) in `k^m`.
fn axis(field: FieldSpec, m: usize, i: usize) -> Matrix {
    Matrix::from_fn(field, m, 1, |r, _| u32::from(r + 1 == i))
}

/// The indecomposable module `Ψ_m` on the `(m+1) × (m+1)` grid: `k` on the
/// antidiagonal, `k^m` above it, zero below, with coordinate injections out
/// of the antidiagonal and the diagonal injection out of the bottom-right
/// corner.
pub fn psi(m: usize, field: FieldSpec) -> Result<GridModule, GalleryError> {
    if m < 2 {
        return Err(bad(format!("psi needs m >= 2, got {m}")));
    }
    let n = m + 1;
    let shape = GridShape::new(n, n)?;
    let dim = |p: GridPoint| match (p.x + p.y).cmp(&(m + 2)) {
        std::cmp::Ordering::Less => 0,
        std::cmp::Ordering::Equal => 1,
        std::cmp::Ordering::Greater => m,
    };
    let mut b = GridModuleBuilder::new(shape, field);
    for p in shape.points() {
        b.set_dim(p, dim(p));
    }
    let diagonal = Matrix::from_fn(field, m, 1, |_, _| 1);
    for p in shape.points() {
        let edge = |kind_up: bool| -> Matrix {
            match dim(p) {
                1 if kind_up && p.x == n => diagonal.clone(),
                1 => axis(field, m, p.x),
                _ => Matrix::identity(field, m),
            }
        };
        if dim(p) == 0 {
            continue;
        }
        if p.x < n {
            b.set_hmap(p, edge(false));
        }
        if p.y < n {
            b.set_vmap(p, edge(true));
        }
    }
    Ok(b.build()?)
}

/// Placement of `Ψ_m` inside a larger grid through two increasing index
/// maps `{1..m+1} → columns` and `{1..m+1} → rows`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiSpec {
    pub m: usize,
    pub shape: GridShape,
    pub cols: Vec<usize>,
    pub rows: Vec<usize>,
}

impl PsiSpec {
    pub fn identity(m: usize) -> Result<Self, GalleryError> {
        let n = m + 1;
        Ok(PsiSpec {
            m,
            shape: GridShape::new(n, n)?,
            cols: (1..=n).collect(),
            rows: (1..=n).collect(),
        })
    }

    fn validate(&self) -> Result<(), GalleryError> {
        let n = self.m + 1;
        let ok = |idx: &[usize], len: usize| {
            idx.len() == n
                && idx[0] >= 1
                && idx[n - 1] <= len
                && idx.windows(2).all(|w| w[0] < w[1])
        };
        if self.m < 2 || !ok(&self.cols, self.shape.nx) || !ok(&self.rows, self.shape.ny) {
            return Err(bad(format!(
                "embedding of psi({}) needs {n} increasing in-range indices per axis",
                self.m
            )));
        }
        Ok(())
    }

    /// The node of `Ψ_m` whose value `t` receives: the largest embedded node
    /// below `t`, if any.
    fn floor(&self, t: GridPoint) -> Option<GridPoint> {
        let i = self.cols.iter().filter(|&&x| x <= t.x).count();
        let j = self.rows.iter().filter(|&&y| y <= t.y).count();
        (i > 0 && j > 0).then(|| GridPoint::new(i, j))
    }
}

/// `Ψ_m` extended to the target grid: each node carries the value at the
/// largest embedded node below it, or zero when there is none.
pub fn psi_embedded(spec: &PsiSpec, field: FieldSpec) -> Result<GridModule, GalleryError> {
    spec.validate()?;
    let base = psi(spec.m, field)?;
    let shape = spec.shape;
    let mut b = GridModuleBuilder::new(shape, field);
    for p in shape.points() {
        b.set_dim(p, spec.floor(p).map_or(0, |u| base.dim(u)));
    }
    for p in shape.points() {
        let Some(u) = spec.floor(p) else { continue };
        for (q, horizontal) in [
            (GridPoint::new(p.x + 1, p.y), true),
            (GridPoint::new(p.x, p.y + 1), false),
        ] {
            if !shape.contains(q) {
                continue;
            }
            let v = spec.floor(q).expect("floor is monotone");
            let map = base.transition(u, v).clone();
            if horizontal {
                b.set_hmap(p, map);
            } else {
                b.set_vmap(p, map);
            }
        }
    }
    Ok(b.build()?)
}

/// The grid `{x1 < x2 < x3} × {y1 < y2}` carrying the hook module, and the
/// corner of the interval `S = {x ≥ cx or y ≥ cy}` (inside the hull) whose
/// trace on the outer square is its top hook.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HookSpec {
    pub shape: GridShape,
    pub xs: [usize; 3],
    pub ys: [usize; 2],
    /// Defaults to `(x2, y2)`.
    pub corner: Option<GridPoint>,
    /// Build the dual module instead, whose square restrictions use bottom
    /// hooks.
    pub dual: bool,
}

/// Dimensions of the hook module on the regions `P0..P4`.
const REGION_DIMS: [usize; 5] = [0, 1, 1, 2, 1];

/// Order on the five regions: `P0 ≤ P1, P2 ≤ P3 ≤ P4`, closed transitively.
fn region_leq(i: usize, j: usize) -> bool {
    const ABOVE: [&[usize]; 5] = [&[0, 1, 2, 3, 4], &[1, 3, 4], &[2, 3, 4], &[3, 4], &[4]];
    ABOVE[i].contains(&j)
}

impl HookSpec {
    pub fn minimal() -> Self {
        HookSpec {
            shape: GridShape::new(3, 2).expect("nonempty"),
            xs: [1, 2, 3],
            ys: [1, 2],
            corner: None,
            dual: false,
        }
    }

    /// A larger instance on which every region pair that can form a
    /// non-degenerate square actually does.
    pub fn rich() -> Self {
        HookSpec {
            shape: GridShape::new(6, 5).expect("nonempty"),
            xs: [1, 4, 6],
            ys: [1, 5],
            corner: Some(GridPoint::new(4, 4)),
            dual: false,
        }
    }

    pub fn corner(&self) -> GridPoint {
        self.corner
            .unwrap_or(GridPoint::new(self.xs[1], self.ys[1]))
    }

    pub fn validate(&self) -> Result<(), GalleryError> {
        let [x1, x2, x3] = self.xs;
        let [y1, y2] = self.ys;
        if !(1 <= x1 && x1 < x2 && x2 < x3 && x3 <= self.shape.nx) {
            return Err(bad("columns must satisfy 1 <= x1 < x2 < x3 <= nx"));
        }
        if !(1 <= y1 && y1 < y2 && y2 <= self.shape.ny) {
            return Err(bad("rows must satisfy 1 <= y1 < y2 <= ny"));
        }
        let c = self.corner();
        if !(x1 < c.x && c.x <= x3 && y1 < c.y && c.y <= y2) {
            return Err(bad("corner of S must lie in (x1, x3] x (y1, y2]"));
        }
        Ok(())
    }

    pub fn in_hull(&self, t: GridPoint) -> bool {
        self.xs[0] <= t.x && t.x <= self.xs[2] && self.ys[0] <= t.y && t.y <= self.ys[1]
    }

    pub fn in_s(&self, t: GridPoint) -> bool {
        let c = self.corner();
        self.in_hull(t) && (t.x >= c.x || t.y >= c.y)
    }

    /// The region index `0..=4` of a hull point.
    pub fn region(&self, t: GridPoint) -> Option<usize> {
        if !self.in_hull(t) {
            return None;
        }
        let [x1, _, x3] = self.xs;
        Some(if t.x == x1 {
            usize::from(self.in_s(t))
        } else if t.x == x3 {
            4
        } else if t.y > self.ys[0] && self.in_s(t) {
            3
        } else {
            2
        })
    }

    pub fn s_interval(&self) -> Result<IntervalShape, GalleryError> {
        Ok(IntervalShape::new(
            self.shape,
            self.shape.points().filter(|&t| self.in_s(t)),
        )?)
    }

    /// The outer square of the grid.
    pub fn outer_square(&self) -> Square {
        Square {
            s: GridPoint::new(self.xs[0], self.ys[0]),
            t: GridPoint::new(self.xs[2], self.ys[1]),
        }
    }
}

/// The map of the five-node module between regions `i ≤ j`.
fn region_map(field: FieldSpec, i: usize, j: usize) -> Matrix {
    let (r, c) = (REGION_DIMS[j], REGION_DIMS[i]);
    if i == j {
        return Matrix::identity(field, r);
    }
    let entries: &[i64] = match (i, j) {
        (1, 3) => &[1, 1],
        (2, 3) => &[1, 0],
        (3, 4) => &[1, 0],
        (1, 4) | (2, 4) => &[1],
        _ => return Matrix::zeros(field, r, c),
    };
    Matrix::from_ints(field, r, c, entries)
}

/// The hook module: the five-node module pulled back along the region map,
/// extended by zero outside the hull.
pub fn hook_counterexample(spec: &HookSpec, field: FieldSpec) -> Result<GridModule, GalleryError> {
    spec.validate()?;
    let shape = spec.shape;
    let mut b = GridModuleBuilder::new(shape, field);
    for p in shape.points() {
        b.set_dim(p, spec.region(p).map_or(0, |i| REGION_DIMS[i]));
    }
    for p in shape.points() {
        let Some(i) = spec.region(p) else { continue };
        for (q, horizontal) in [
            (GridPoint::new(p.x + 1, p.y), true),
            (GridPoint::new(p.x, p.y + 1), false),
        ] {
            let Some(j) = spec.region(q) else { continue };
            if !region_leq(i, j) {
                return Err(bad(format!("region map is not monotone on {p} -> {q}")));
            }
            let map = region_map(field, i, j);
            if horizontal {
                b.set_hmap(p, map);
            } else {
                b.set_vmap(p, map);
            }
        }
    }
    let m = b.build()?;
    Ok(if spec.dual { m.dual() } else { m })
}

fn strict_subsets(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << n))
        .map(|mask| (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect::<Vec<_>>())
        .filter(|s| s.len() <= max_len)
        .collect()
}

/// Checks the indecomposability and local interval-decomposability of
/// `Ψ_m`. With `include_full`, the full grid is also tested as a subgrid,
/// which must fail.
pub fn verify_psi(m: usize, field: FieldSpec, include_full: bool) -> Result<Report, GalleryError> {
    if m > 3 {
        return Err(bad("verify_psi is limited to m <= 3"));
    }
    let module = psi(m, field)?;
    let mut report = Report::new(format!("psi({m}) over GF({})", field.p()));
    let e = end_dim(&module);
    report.check("end_dim = 1", e == 1, format!("end_dim = {e}"));
    let whole = interval_decompose(&module)?;
    report.check(
        "not interval-decomposable",
        whole.is_none(),
        format!("interval_decompose returned {}", describe(&whole)),
    );
    let n = m + 1;
    let mut subsets: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for cols in strict_subsets(n, m) {
        for rows in strict_subsets(n, m) {
            subsets.push((cols.clone(), rows));
        }
    }
    if include_full {
        subsets.push(((1..=n).collect(), (1..=n).collect()));
    }
    let failures = subgrid_failures(&module, &subsets)?;
    report.check(
        format!("all {} product subgrids of size <= {m}x{m} interval-decompose", subsets.len()),
        failures.is_empty(),
        failure_list(&failures),
    );
    Ok(report)
}

/// The same checks for `Ψ_2` embedded in a larger grid, testing every
/// `2 × 2` product subset.
pub fn verify_psi_embedded(spec: &PsiSpec, field: FieldSpec) -> Result<Report, GalleryError> {
    let module = psi_embedded(spec, field)?;
    let mut report = Report::new(format!(
        "psi({}) embedded in {} at cols {:?} rows {:?}",
        spec.m, spec.shape, spec.cols, spec.rows
    ));
    let e = end_dim(&module);
    report.check("end_dim = 1", e == 1, format!("end_dim = {e}"));
    let whole = interval_decompose(&module)?;
    report.check(
        "not interval-decomposable",
        whole.is_none(),
        format!("interval_decompose returned {}", describe(&whole)),
    );
    let pairs = |n: usize| strict_subsets(n, 2).into_iter().filter(|s| s.len() == 2).collect::<Vec<_>>();
    let mut subsets = Vec::new();
    for cols in pairs(spec.shape.nx) {
        for rows in pairs(spec.shape.ny) {
            subsets.push((cols.clone(), rows));
        }
    }
    let failures = subgrid_failures(&module, &subsets)?;
    report.check(
        format!("all {} 2x2 product subsets interval-decompose", subsets.len()),
        failures.is_empty(),
        failure_list(&failures),
    );
    Ok(report)
}

fn subgrid_failures(
    m: &GridModule,
    subsets: &[(Vec<usize>, Vec<usize>)],
) -> Result<Vec<String>, GalleryError> {
    let mut failures = Vec::new();
    for (cols, rows) in subsets {
        if interval_decompose(&m.restrict(cols, rows)?)?.is_none() {
            failures.push(format!("cols {cols:?} rows {rows:?}"));
        }
    }
    Ok(failures)
}

fn failure_list(failures: &[String]) -> String {
    if failures.is_empty() {
        "no failures".into()
    } else {
        format!("failing subgrids: {}", failures.join("; "))
    }
}

fn describe(d: &Option<Decomposition>) -> String {
    match d {
        None => "none".into(),
        Some(d) => format!("{} summands", d.total()),
    }
}

/// One displayed square diagram of the case analysis: the regions of the
/// corners `s`, `b = (s_x, t_y)`, `c = (t_x, s_y)`, `t` (`None` matches any
/// region) and whether a top hook summand appears.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquareCase {
    pub s: usize,
    pub b: usize,
    pub c: Option<usize>,
    pub t: Option<usize>,
    pub top_hook: bool,
}

const fn case(s: usize, b: usize, c: Option<usize>, t: Option<usize>, top_hook: bool) -> SquareCase {
    SquareCase { s, b, c, t, top_hook }
}

pub const SQUARE_CASES: [SquareCase; 15] = [
    case(0, 0, None, None, false),
    case(0, 1, Some(2), Some(3), false),
    case(0, 1, Some(3), Some(3), true),
    case(0, 1, Some(4), Some(4), true),
    case(1, 1, Some(3), Some(3), false),
    case(1, 1, Some(4), Some(4), false),
    case(2, 2, Some(2), Some(2), false),
    case(2, 2, Some(2), Some(3), false),
    case(2, 2, Some(3), Some(3), false),
    case(2, 3, Some(2), Some(3), false),
    case(2, 3, Some(3), Some(3), true),
    case(2, 2, Some(4), Some(4), false),
    case(2, 3, Some(4), Some(4), false),
    case(3, 3, Some(3), Some(3), false),
    case(3, 3, Some(4), Some(4), false),
];

impl SquareCase {
    fn matches(&self, r: [usize; 4]) -> bool {
        self.s == r[0]
            && self.b == r[1]
            && self.c.is_none_or(|c| c == r[2])
            && self.t.is_none_or(|t| t == r[3])
    }
}

/// Comparability marks between regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    None,
    Leq,
    Square,
}

/// Rows: region of `s`; columns: region of `t`.
pub const REGION_TABLE: [[Mark; 5]; 5] = {
    use Mark::{Leq as L, None as N, Square as Q};
    [
        [L, L, Q, Q, Q],
        [N, L, N, Q, Q],
        [N, N, Q, Q, Q],
        [N, N, N, Q, Q],
        [N, N, N, N, L],
    ]
};

/// Observed comparability between the regions of a hook spec.
pub fn observed_marks(spec: &HookSpec) -> [[Mark; 5]; 5] {
    let mut seen = [[Mark::None; 5]; 5];
    for (s, t) in spec.shape.pairs() {
        let (Some(i), Some(j)) = (spec.region(s), spec.region(t)) else { continue };
        let mark = if s.x < t.x && s.y < t.y { Mark::Square } else { Mark::Leq };
        if seen[i][j] != Mark::Square {
            seen[i][j] = mark.max_with(seen[i][j]);
        }
    }
    seen
}

impl Mark {
    fn max_with(self, other: Mark) -> Mark {
        match (self, other) {
            (Mark::Square, _) | (_, Mark::Square) => Mark::Square,
            (Mark::Leq, _) | (_, Mark::Leq) => Mark::Leq,
            _ => Mark::None,
        }
    }
}

/// Checks the region comparability table on a hook spec. Cells marked
/// empty must stay empty and `≤` cells must be realized only degenerately;
/// with `require_squares`, every `□` cell must be realized by a
/// non-degenerate square.
pub fn verify_region_table(spec: &HookSpec, require_squares: bool) -> Result<Report, GalleryError> {
    spec.validate()?;
    let seen = observed_marks(spec);
    let mut report = Report::new("region comparability table");
    for i in 0..5 {
        for j in 0..5 {
            let (want, got) = (REGION_TABLE[i][j], seen[i][j]);
            let ok = match want {
                Mark::None => got == Mark::None,
                Mark::Leq => got == Mark::Leq,
                Mark::Square => got == Mark::Square || (!require_squares && got != Mark::None),
            };
            report.check(format!("P{i} -> P{j}"), ok, format!("expected {want:?}, observed {got:?}"));
        }
    }
    let monotone = spec
        .shape
        .pairs()
        .filter_map(|(s, t)| Some((spec.region(s)?, spec.region(t)?)))
        .all(|(i, j)| region_leq(i, j));
    report.check("region map is order preserving", monotone, "checked on all comparable hull pairs");
    Ok(report)
}

/// Region quadruple of a square with both corners in the hull.
fn square_regions(spec: &HookSpec, q: &Square) -> Option<[usize; 4]> {
    Some([
        spec.region(q.s)?,
        spec.region(q.b())?,
        spec.region(q.c())?,
        spec.region(q.t)?,
    ])
}

/// Checks the hook module: local endomorphism ring, rectangle decomposition
/// refused with a genuine witness, every square restriction decomposing into
/// rectangles and hooks of one orientation, and (for the primal module) the
/// case analysis of square restrictions.
pub fn verify_hook(spec: &HookSpec, field: FieldSpec) -> Result<Report, GalleryError> {
    let module = hook_counterexample(spec, field)?;
    let orientation = if spec.dual { "bottom" } else { "top" };
    let mut report = Report::new(format!(
        "hook module on {} (cols {:?}, rows {:?}, S corner {}{})",
        spec.shape,
        spec.xs,
        spec.ys,
        spec.corner(),
        if spec.dual { ", dual" } else { "" }
    ));

    let s = spec.s_interval()?;
    let q0 = spec.outer_square();
    let trace: Vec<bool> = [q0.s, q0.b(), q0.c(), q0.t].iter().map(|&p| s.contains(p)).collect();
    report.check(
        "S is an interval tracing the top hook of the outer square",
        trace == [false, true, true, true],
        format!("S has {} cells; membership of outer corners {trace:?}", s.len()),
    );

    let e = end_dim(&module);
    report.check("end_dim = 1", e == 1, format!("end_dim = {e}"));
    let max_dim = module.dims().iter().copied().max().unwrap_or(0);
    report.check(
        "not interval-decomposable",
        e == 1 && max_dim >= 2,
        format!("indecomposable with a node of dimension {max_dim}"),
    );
    if module.shape().len() <= 12 {
        let oracle = interval_decompose(&module)?;
        report.check(
            "interval oracle finds no decomposition",
            oracle.is_none(),
            format!("interval_decompose returned {}", describe(&oracle)),
        );
    }

    match decompose_rectangles(&module, false) {
        Err(DecomposeError::NotWeaklyExact(w)) => {
            report.check("rectangle decomposition refused", w.recheck(&module), w.to_string());
        }
        other => {
            report.check(
                "rectangle decomposition refused",
                false,
                format!("unexpected result {other:?}"),
            );
        }
    }

    let class = if spec.dual {
        LocalClass::RectanglesPlusBottomHooks
    } else {
        LocalClass::RectanglesPlusTopHooks
    };
    let squares = square_decompositions(&module)?;
    let mut bad_squares = Vec::new();
    let mut hook_squares = Vec::new();
    for (q, d) in &squares {
        match d {
            Some(d) if d.summands.iter().all(|(i, _)| class.admits(i)) => {
                if d.summands.iter().any(|(i, _)| !i.is_rectangle()) {
                    hook_squares.push(*q);
                }
            }
            _ => bad_squares.push(format!("{}..{}", q.s, q.t)),
        }
    }
    report.check(
        format!("every square restriction is rectangles plus {orientation} hooks"),
        bad_squares.is_empty(),
        if bad_squares.is_empty() {
            format!("{} squares checked, {} with a hook summand", squares.len(), hook_squares.len())
        } else {
            format!("failing squares: {}", bad_squares.join(", "))
        },
    );

    if !spec.dual {
        report.extend(check_square_cases(spec, &squares)?.0);
    }
    Ok(report)
}

/// Matches each square restriction of the primal hook module against the
/// case analysis. Returns the report and the set of case indices realized.
pub fn check_square_cases(
    spec: &HookSpec,
    squares: &[(Square, Option<Decomposition>)],
) -> Result<(Report, BTreeSet<usize>), GalleryError> {
    let mut report = Report::new("square case analysis");
    let mut realized = BTreeSet::new();
    let mut mismatches = Vec::new();
    let mut outside_hooks = Vec::new();
    for (q, d) in squares {
        let hooks = d
            .as_ref()
            .map(|d| d.summands.iter().filter(|(i, _)| i.is_top_hook()).map(|(_, n)| n).sum::<usize>());
        let Some(regions) = square_regions(spec, q) else {
            if hooks != Some(0) {
                outside_hooks.push(format!("{}..{}", q.s, q.t));
            }
            continue;
        };
        let label = format!("{}..{} regions {regions:?}", q.s, q.t);
        let Some(k) = SQUARE_CASES.iter().position(|c| c.matches(regions)) else {
            mismatches.push(format!("{label}: no displayed case"));
            continue;
        };
        realized.insert(k);
        let dims: Vec<usize> = regions.iter().map(|&r| REGION_DIMS[r]).collect();
        let observed: Vec<usize> = [q.s, q.b(), q.c(), q.t]
            .iter()
            .map(|&p| if spec.in_hull(p) { dims_at(spec, p) } else { 0 })
            .collect();
        if dims != observed {
            mismatches.push(format!("{label}: dims {observed:?}, displayed {dims:?}"));
        }
        let want = usize::from(SQUARE_CASES[k].top_hook);
        if hooks != Some(want) {
            mismatches.push(format!("{label}: {hooks:?} top hooks, displayed {want}"));
        }
    }
    report.check(
        "squares leaving the hull decompose into rectangles",
        outside_hooks.is_empty(),
        outside_hooks.join(", "),
    );
    report.check(
        "squares inside the hull reproduce the displayed diagrams",
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("{} of {} displayed cases realized", realized.len(), SQUARE_CASES.len())
        } else {
            mismatches.join("; ")
        },
    );
    Ok((report, realized))
}

fn dims_at(spec: &HookSpec, p: GridPoint) -> usize {
    spec.region(p).map_or(0, |r| REGION_DIMS[r])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposer::{is_summand, weak_exact};
    use crate::shapes::RectangleShape;

    fn pt(x: usize, y: usize) -> GridPoint {
        GridPoint::new(x, y)
    }

    #[test]
    fn psi_two_layout() {
        let m = psi(2, FieldSpec::GF2).unwrap();
        let rows: Vec<Vec<usize>> = (1..=3).map(|y| (1..=3).map(|x| m.dim(pt(x, y))).collect()).collect();
        assert_eq!(rows, vec![vec![0, 0, 1], vec![0, 1, 2], vec![1, 2, 2]]);
        assert_eq!(m.vmap(pt(3, 1)).unwrap(), &Matrix::from_ints(FieldSpec::GF2, 2, 1, &[1, 1]));
        assert!(!weak_exact(&m).verdict);
    }

    #[test]
    fn psi_rejects_small_m() {
        assert!(psi(1, FieldSpec::GF2).is_err());
    }

    #[test]
    fn identity_embedding_is_psi() {
        let f = FieldSpec::new(3).unwrap();
        let spec = PsiSpec::identity(3).unwrap();
        assert_eq!(psi_embedded(&spec, f).unwrap(), psi(3, f).unwrap());
    }

    #[test]
    fn embedding_vanishes_below_the_image() {
        let spec = PsiSpec {
            m: 2,
            shape: GridShape::new(4, 4).unwrap(),
            cols: vec![2, 3, 4],
            rows: vec![1, 3, 4],
        };
        let m = psi_embedded(&spec, FieldSpec::GF2).unwrap();
        for y in 1..=4 {
            assert_eq!(m.dim(pt(1, y)), 0);
        }
        assert_eq!(m.dim(pt(4, 2)), 1);
        assert_eq!(m.dim(pt(4, 4)), 2);
    }

    #[test]
    fn minimal_hook_layout() {
        let f = FieldSpec::GF2;
        let m = hook_counterexample(&HookSpec::minimal(), f).unwrap();
        let rows: Vec<Vec<usize>> = (1..=2).map(|y| (1..=3).map(|x| m.dim(pt(x, y))).collect()).collect();
        assert_eq!(rows, vec![vec![0, 1, 1], vec![1, 2, 1]]);
        assert_eq!(m.hmap(pt(1, 2)).unwrap(), &Matrix::from_ints(f, 2, 1, &[1, 1]));
        assert_eq!(m.hmap(pt(2, 2)).unwrap(), &Matrix::from_ints(f, 1, 2, &[1, 0]));
        assert_eq!(m.vmap(pt(2, 1)).unwrap(), &Matrix::from_ints(f, 2, 1, &[1, 0]));
    }

    #[test]
    fn hook_right_square_splits_off_a_point() {
        let f = FieldSpec::GF2;
        let m = hook_counterexample(&HookSpec::minimal(), f).unwrap();
        let sub = m.restrict(&[2, 3], &[1, 2]).unwrap();
        let d = interval_decompose(&sub).unwrap().unwrap();
        let shape = sub.shape();
        let full = RectangleShape::parse(shape, "1..2,1..2").unwrap().to_interval();
        let point = RectangleShape::parse(shape, "1..1,2..2").unwrap().to_interval();
        let mut got: Vec<_> = d.summands.iter().map(|(i, n)| (i.to_string(), *n)).collect();
        got.sort();
        let mut want = vec![(full.to_string(), 1), (point.to_string(), 1)];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn outer_square_restriction_is_a_top_hook() {
        let m = hook_counterexample(&HookSpec::minimal(), FieldSpec::GF2).unwrap();
        let sub = m.restrict(&[1, 3], &[1, 2]).unwrap();
        let hook = IntervalShape::new(sub.shape(), [pt(1, 2), pt(2, 1), pt(2, 2)]).unwrap();
        assert!(is_summand(&sub, &hook).unwrap().is_some());
    }

    #[test]
    fn minimal_hook_verifies_with_one_hook_square() {
        let spec = HookSpec::minimal();
        let report = verify_hook(&spec, FieldSpec::GF2).unwrap();
        assert!(report.passed(), "{report}");
        let m = hook_counterexample(&spec, FieldSpec::GF2).unwrap();
        let hooks = square_decompositions(&m)
            .unwrap()
            .into_iter()
            .filter(|(_, d)| d.as_ref().unwrap().summands.iter().any(|(i, _)| i.is_top_hook()))
            .count();
        assert_eq!(hooks, 1);
    }

    #[test]
    fn dual_hook_uses_bottom_hooks() {
        let spec = HookSpec {
            dual: true,
            ..HookSpec::minimal()
        };
        let report = verify_hook(&spec, FieldSpec::new(3).unwrap()).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn invalid_hook_indices() {
        let spec = HookSpec {
            xs: [1, 1, 3],
            ..HookSpec::minimal()
        };
        assert!(hook_counterexample(&spec, FieldSpec::GF2).is_err());
        let spec = HookSpec {
            corner: Some(pt(1, 2)),
            ..HookSpec::minimal()
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn region_table_on_rich_spec() {
        let report = verify_region_table(&HookSpec::rich(), true).unwrap();
        assert!(report.passed(), "{report}");
        let report = verify_region_table(&HookSpec::minimal(), false).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn rich_spec_realizes_every_case() {
        let spec = HookSpec::rich();
        let m = hook_counterexample(&spec, FieldSpec::GF2).unwrap();
        let squares = square_decompositions(&m).unwrap();
        let (report, realized) = check_square_cases(&spec, &squares).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(realized.len(), SQUARE_CASES.len());
    }
}
