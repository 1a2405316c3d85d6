//! Exactness checks, rectangle decomposition with certificates, morphism
//! spaces, and a brute-force interval-decomposition oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bimodule::{BimoduleError, GridModule, GridPoint, Square};
use crate::exactfield::{LinalgError, Matrix, Subspace};
use crate::filtration::{Exact, FiltrationError, SubmoduleFamily};
use crate::shapes::{enumerate_intervals, enumerate_rectangles, IntervalShape, RectangleShape, ShapeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("module is not weakly exact: {0}")]
    NotWeaklyExact(Box<ExactnessWitness>),
    #[error("modules live on different grids or fields")]
    Incompatible,
    #[error("morphism is not natural")]
    NotNatural,
    #[error("morphism is not idempotent")]
    NotIdempotent,
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Module(#[from] BimoduleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which equality of the exactness conditions fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    /// `Im ρ_s^t = Im ρ_c^t ∩ Im ρ_b^t`
    Image,
    /// `Ker ρ_s^t = Ker ρ_s^c + Ker ρ_s^b`
    Kernel,
    /// `ker [ρ_b^t  −ρ_c^t] = im [ρ_s^b; ρ_s^c]`
    Middle,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Image => "image",
            Condition::Kernel => "kernel",
            Condition::Middle => "middle",
        })
    }
}

/// A square on which an exactness condition fails. `left` is the space on
/// the left of the failed equality, `right` the one on the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessWitness {
    pub square: Square,
    pub condition: Condition,
    pub left: Subspace,
    pub right: Subspace,
}

impl fmt::Display for ExactnessWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} condition fails on square {}..{} (dim {} vs {})",
            self.condition,
            self.square.s,
            self.square.t,
            self.left.dim(),
            self.right.dim()
        )
    }
}

impl ExactnessWitness {
    /// Recomputes both sides on `m` and confirms that they are the recorded,
    /// distinct spaces.
    pub fn recheck(&self, m: &GridModule) -> bool {
        if !m.shape().contains(self.square.t) || !self.square.s.leq(self.square.t) {
            return false;
        }
        let found = match self.condition {
            Condition::Image | Condition::Kernel => weak_sides(m, &self.square, self.condition),
            Condition::Middle => middle_sides(m, &self.square),
        };
        matches!(found, Ok((l, r)) if l == self.left && r == self.right && l != r)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "square": [[self.square.s.x, self.square.s.y], [self.square.t.x, self.square.t.y]],
            "condition": self.condition,
            "left_dim": self.left.dim(),
            "right_dim": self.right.dim(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    pub verdict: bool,
    pub witness: Option<ExactnessWitness>,
}

impl ExactnessReport {
    fn from_witness(witness: Option<ExactnessWitness>) -> Self {
        ExactnessReport {
            verdict: witness.is_none(),
            witness,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "verdict": self.verdict,
            "witness": self.witness.as_ref().map(ExactnessWitness::to_json),
        })
    }
}

fn weak_sides(
    m: &GridModule,
    q: &Square,
    condition: Condition,
) -> Result<(Subspace, Subspace), LinalgError> {
    let (s, b, c, t) = (q.s, q.b(), q.c(), q.t);
    match condition {
        Condition::Image => {
            let left = m.transition(s, t).image();
            let right = m
                .transition(c, t)
                .image()
                .intersection(&m.transition(b, t).image())?;
            Ok((left, right))
        }
        _ => {
            let left = m.transition(s, t).kernel();
            let right = m.transition(s, c).kernel().sum(&m.transition(s, b).kernel())?;
            Ok((left, right))
        }
    }
}

fn middle_sides(m: &GridModule, q: &Square) -> Result<(Subspace, Subspace), LinalgError> {
    let (s, b, c, t) = (q.s, q.b(), q.c(), q.t);
    let f = m.field();
    let out = Matrix::hstack(f, m.dim(t), &[m.transition(b, t), &-m.transition(c, t)]);
    let inc = Matrix::vstack(f, m.dim(s), &[m.transition(s, b), m.transition(s, c)]);
    Ok((out.kernel(), inc.image()))
}

/// Checks both weak exactness equalities on every non-degenerate square.
/// Degenerate squares satisfy them trivially.
pub fn weak_exact(m: &GridModule) -> ExactnessReport {
    for q in m.shape().squares() {
        for condition in [Condition::Image, Condition::Kernel] {
            let (left, right) = weak_sides(m, &q, condition).expect("single field");
            if left != right {
                return ExactnessReport::from_witness(Some(ExactnessWitness {
                    square: q,
                    condition,
                    left,
                    right,
                }));
            }
        }
    }
    ExactnessReport::from_witness(None)
}

/// Checks exactness of `M_s → M_b ⊕ M_c → M_t` on every non-degenerate square.
pub fn strong_exact(m: &GridModule) -> ExactnessReport {
    for q in m.shape().squares() {
        let (left, right) = middle_sides(m, &q).expect("single field");
        if left != right {
            return ExactnessReport::from_witness(Some(ExactnessWitness {
                square: q,
                condition: Condition::Middle,
                left,
                right,
            }));
        }
    }
    ExactnessReport::from_witness(None)
}

/// A family of matrices `f_t : A_t → B_t`, one per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub maps: Vec<Matrix>,
}

impl Morphism {
    pub fn identity(m: &GridModule) -> Self {
        Morphism {
            maps: m.dims().iter().map(|&d| Matrix::identity(m.field(), d)).collect(),
        }
    }

    pub fn zero(a: &GridModule, b: &GridModule) -> Self {
        Morphism {
            maps: a
                .dims()
                .iter()
                .zip(b.dims())
                .map(|(&da, &db)| Matrix::zeros(a.field(), db, da))
                .collect(),
        }
    }

    pub fn at(&self, i: usize) -> &Matrix {
        &self.maps[i]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Morphism) -> Result<Morphism, LinalgError> {
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(f, g)| f.checked_mul(g))
            .collect::<Result<_, _>>()?;
        Ok(Morphism { maps })
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism, LinalgError> {
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(f, g)| f.checked_sub(g))
            .collect::<Result<_, _>>()?;
        Ok(Morphism { maps })
    }

    pub fn scale(&self, c: u32) -> Morphism {
        Morphism {
            maps: self.maps.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// Whether the maps have the right sizes and commute with every edge.
    pub fn is_natural(&self, a: &GridModule, b: &GridModule) -> bool {
        let shape = a.shape();
        if b.shape() != shape || a.field() != b.field() || self.maps.len() != shape.len() {
            return false;
        }
        for p in shape.points() {
            let f = &self.maps[shape.index(p)];
            if f.rows() != b.dim(p) || f.cols() != a.dim(p) {
                return false;
            }
        }
        for p in shape.points() {
            for q in [GridPoint::new(p.x + 1, p.y), GridPoint::new(p.x, p.y + 1)] {
                if !shape.contains(q) {
                    continue;
                }
                let lhs = b.transition(p, q) * &self.maps[shape.index(p)];
                let rhs = &self.maps[shape.index(q)] * a.transition(p, q);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_pointwise_invertible(&self) -> bool {
        self.maps
            .iter()
            .all(|f| f.rows() == f.cols() && f.inverse().is_ok())
    }
}

/// A basis of the space of morphisms between two modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomBasis {
    pub basis: Vec<Morphism>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Solves the commutation constraints `B_e f_s = f_t A_e` over all edges.
pub fn hom_space(a: &GridModule, b: &GridModule) -> Result<HomBasis, DecomposeError> {
    let shape = a.shape();
    if b.shape() != shape || a.field() != b.field() {
        return Err(DecomposeError::Incompatible);
    }
    let field = a.field();
    let mut offsets = Vec::with_capacity(shape.len() + 1);
    offsets.push(0);
    for p in shape.points() {
        offsets.push(offsets.last().unwrap() + a.dim(p) * b.dim(p));
    }
    let unknowns = *offsets.last().unwrap();
    // f_t[i][j] lives at offsets[t] + i * dim A_t + j
    let var = |p: GridPoint, i: usize, j: usize| offsets[shape.index(p)] + i * a.dim(p) + j;

    let mut rows: Vec<Vec<u32>> = Vec::new();
    for p in shape.points() {
        for q in [GridPoint::new(p.x + 1, p.y), GridPoint::new(p.x, p.y + 1)] {
            if !shape.contains(q) {
                continue;
            }
            let (ae, be) = (a.transition(p, q), b.transition(p, q));
            for i in 0..b.dim(q) {
                for j in 0..a.dim(p) {
                    let mut row = vec![0u32; unknowns];
                    for k in 0..b.dim(p) {
                        let v = &mut row[var(p, k, j)];
                        *v = field.add(*v, be.get(i, k));
                    }
                    for k in 0..a.dim(q) {
                        let v = &mut row[var(q, i, k)];
                        *v = field.sub(*v, ae.get(k, j));
                    }
                    if row.iter().any(|&x| x != 0) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let constraints = Matrix::from_fn(field, rows.len(), unknowns, |i, j| rows[i][j]);
    let basis = constraints
        .kernel()
        .basis()
        .iter()
        .map(|v| Morphism {
            maps: shape
                .points()
                .map(|p| Matrix::from_fn(field, b.dim(p), a.dim(p), |i, j| v[var(p, i, j)]))
                .collect(),
        })
        .collect();
    Ok(HomBasis { basis })
}

pub fn end_dim(m: &GridModule) -> usize {
    hom_space(m, m).expect("same module").dim()
}

/// When `k_I` is a summand of `m`, a pair `f : k_I → m`, `g : m → k_I` with
/// `g ∘ f = id`.
pub fn is_summand(
    m: &GridModule,
    i: &IntervalShape,
) -> Result<Option<(Morphism, Morphism)>, DecomposeError> {
    if i.grid() != m.shape() {
        return Err(DecomposeError::Incompatible);
    }
    if i.cells().iter().any(|&p| m.dim(p) == 0) {
        return Ok(None);
    }
    let ind = i.indicator(m.field());
    let into = hom_space(&ind, m)?;
    if into.basis.is_empty() {
        return Ok(None);
    }
    let out = hom_space(m, &ind)?;
    let anchor = m.shape().index(*i.cells().iter().next().expect("interval is nonempty"));
    let field = m.field();
    for f in &into.basis {
        for g in &out.basis {
            let c = (g.at(anchor) * f.at(anchor)).get(0, 0);
            if c != 0 {
                let g = g.scale(field.inv(c));
                debug_assert!(g.compose(f)? == Morphism::identity(&ind));
                return Ok(Some((f.clone(), g)));
            }
        }
    }
    Ok(None)
}

/// Splits `m` as `im e ⊕ im (1 − e)` for a natural idempotent `e`.
pub fn split_by_idempotent(
    m: &GridModule,
    e: &Morphism,
) -> Result<(GridModule, GridModule), DecomposeError> {
    if !e.is_natural(m, m) {
        return Err(DecomposeError::NotNatural);
    }
    if e.compose(e)? != *e {
        return Err(DecomposeError::NotIdempotent);
    }
    let co = Morphism::identity(m).sub(e)?;
    let family = |g: &Morphism| SubmoduleFamily {
        base: m,
        spaces: g.maps.iter().map(Matrix::image).collect(),
    };
    let (first, first_basis) = family(e).as_module()?;
    let (second, second_basis) = family(&co).as_module()?;
    let field = m.field();
    let joined = Morphism {
        maps: first_basis
            .iter()
            .zip(&second_basis)
            .zip(m.dims())
            .map(|((x, y), &d)| Matrix::hstack(field, d, &[x, y]))
            .collect(),
    };
    let sum = first.direct_sum(&second)?;
    if !joined.is_natural(&sum, m) || !joined.is_pointwise_invertible() {
        return Err(DecomposeError::Certificate(
            "image of e and of 1 - e do not add up to the module".into(),
        ));
    }
    Ok((first, second))
}

/// A multiset of interval summands, optionally with explicit summands and a
/// verified isomorphism from their direct sum onto the module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub summands: Vec<(IntervalShape, usize)>,
    pub bases: Option<Vec<(RectangleShape, Vec<Subspace>)>>,
    pub iso: Option<Vec<Matrix>>,
}

impl Decomposition {
    fn from_counts(counts: BTreeMap<Vec<GridPoint>, (IntervalShape, usize)>) -> Self {
        Decomposition {
            summands: counts.into_values().collect(),
            bases: None,
            iso: None,
        }
    }

    /// The summands with multiplicity, as rectangles; `None` if some summand
    /// is not a rectangle.
    pub fn rectangles(&self) -> Option<Vec<RectangleShape>> {
        let mut out = Vec::new();
        for (i, n) in &self.summands {
            let r = i.as_rectangle()?;
            out.extend(std::iter::repeat_n(r, *n));
        }
        out.sort();
        Some(out)
    }

    pub fn total(&self) -> usize {
        self.summands.iter().map(|(_, n)| n).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let summands: Vec<_> = self
            .summands
            .iter()
            .map(|(i, n)| {
                let shape = match i.as_rectangle() {
                    Some(r) => r.to_string(),
                    None => i.to_string(),
                };
                serde_json::json!({ "shape": shape, "multiplicity": n })
            })
            .collect();
        let mut doc = serde_json::json!({ "summands": summands });
        if let Some(iso) = &self.iso {
            doc["iso"] = iso
                .iter()
                .map(|a| serde_json::json!(a.to_rows()))
                .collect::<Vec<_>>()
                .into();
        }
        doc
    }
}

fn tally(items: impl IntoIterator<Item = IntervalShape>) -> BTreeMap<Vec<GridPoint>, (IntervalShape, usize)> {
    let mut counts: BTreeMap<Vec<GridPoint>, (IntervalShape, usize)> = BTreeMap::new();
    for i in items {
        let key: Vec<GridPoint> = i.cells().iter().copied().collect();
        counts.entry(key).or_insert((i, 0)).1 += 1;
    }
    counts
}

/// Rectangle decomposition of a weakly exact module. With `certify`, the
/// filtrates are built and assembled into an isomorphism that is checked to
/// be natural and invertible.
pub fn decompose_rectangles(m: &GridModule, certify: bool) -> Result<Decomposition, DecomposeError> {
    let exact = Exact::check(m).map_err(|e| match e {
        FiltrationError::NotWeaklyExact(w) => DecomposeError::NotWeaklyExact(w),
        other => other.into(),
    })?;
    let mut found = Vec::new();
    for r in enumerate_rectangles(m.shape()) {
        let c = exact.counting_dim(&r)?;
        if c > 0 {
            found.push((r, c));
        }
    }
    let counts = tally(
        found
            .iter()
            .flat_map(|(r, c)| std::iter::repeat_n(r.to_interval(), *c)),
    );
    let mut dec = Decomposition::from_counts(counts);
    let shape = m.shape();
    let covered: Vec<usize> = shape
        .points()
        .map(|p| found.iter().filter(|(r, _)| r.contains(p)).map(|(_, c)| c).sum())
        .collect();
    if covered != m.dims() {
        return Err(DecomposeError::Certificate(
            "multiplicities do not account for the pointwise dimensions".into(),
        ));
    }
    if !certify {
        return Ok(dec);
    }

    let field = m.field();
    let mut bases = Vec::new();
    let mut columns: Vec<Vec<Vec<u32>>> = vec![Vec::new(); shape.len()];
    let mut parts = Vec::new();
    for (r, _) in &found {
        let fam = exact.rectangle_filtrate(r)?;
        let t0 = r.min_corner();
        let seed = fam.at(t0).clone();
        for w in seed.basis() {
            for t in r.cells() {
                columns[shape.index(t)].push(m.transition(t0, t).apply(w));
            }
            parts.push(r.indicator(field));
        }
        bases.push((*r, fam.spaces));
    }
    let source = GridModule::direct_sum_all(shape, field, &parts)?;
    let iso = Morphism {
        maps: shape
            .points()
            .map(|p| Matrix::from_columns(field, m.dim(p), &columns[shape.index(p)]))
            .collect(),
    };
    if !iso.is_natural(&source, m) {
        return Err(DecomposeError::Certificate("assembled map is not natural".into()));
    }
    if !iso.is_pointwise_invertible() {
        return Err(DecomposeError::Certificate("assembled map is not invertible".into()));
    }
    dec.bases = Some(bases);
    dec.iso = Some(iso.maps);
    Ok(dec)
}

/// Re-verifies a certified decomposition against `m`.
pub fn verify_certificate(m: &GridModule, dec: &Decomposition) -> bool {
    let (Some(iso), Some(rects)) = (&dec.iso, dec.rectangles()) else {
        return false;
    };
    let parts: Vec<GridModule> = rects.iter().map(|r| r.indicator(m.field())).collect();
    let Ok(source) = GridModule::direct_sum_all(m.shape(), m.field(), &parts) else {
        return false;
    };
    let f = Morphism { maps: iso.clone() };
    f.is_natural(&source, m) && f.is_pointwise_invertible()
}

/// Peels interval summands off `m`, largest first. `None` when a nonzero
/// residual has no interval summand.
pub fn interval_decompose(m: &GridModule) -> Result<Option<Decomposition>, DecomposeError> {
    let mut intervals = enumerate_intervals(m.shape())?;
    intervals.sort_by_key(|i| std::cmp::Reverse(i.len()));
    let mut residual = m.clone();
    let mut found = Vec::new();
    let mut k = 0;
    while !residual.is_zero() {
        let Some(i) = intervals.get(k) else {
            return Ok(None);
        };
        match is_summand(&residual, i)? {
            Some((f, g)) => {
                let e = f.compose(&g)?;
                let (_, rest) = split_by_idempotent(&residual, &e)?;
                residual = rest;
                found.push(i.clone());
            }
            // a summand of the residual is a summand of m, so an interval
            // rejected once never needs to be retried
            None => k += 1,
        }
    }
    Ok(Some(Decomposition::from_counts(tally(found))))
}

/// Interval classes admissible on square restrictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalClass {
    Rectangles,
    Intervals,
    RectanglesPlusTopHooks,
    RectanglesPlusBottomHooks,
}

impl LocalClass {
    pub fn admits(&self, i: &IntervalShape) -> bool {
        match self {
            LocalClass::Rectangles => i.is_rectangle(),
            LocalClass::Intervals => true,
            LocalClass::RectanglesPlusTopHooks => i.is_rectangle() || i.is_top_hook(),
            LocalClass::RectanglesPlusBottomHooks => i.is_rectangle() || i.is_bottom_hook(),
        }
    }
}

impl FromStr for LocalClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rectangles" => Ok(LocalClass::Rectangles),
            "intervals" => Ok(LocalClass::Intervals),
            "rectangles_plus_top_hooks" => Ok(LocalClass::RectanglesPlusTopHooks),
            "rectangles_plus_bottom_hooks" => Ok(LocalClass::RectanglesPlusBottomHooks),
            other => Err(format!("unknown interval class {other:?}")),
        }
    }
}

/// The interval decomposition of the restriction of `m` to every
/// non-degenerate square.
pub fn square_decompositions(
    m: &GridModule,
) -> Result<Vec<(Square, Option<Decomposition>)>, DecomposeError> {
    m.shape()
        .squares()
        .map(|q| {
            let sub = m.restrict(&q.cols(), &q.rows())?;
            Ok((q, interval_decompose(&sub)?))
        })
        .collect()
}

/// Whether every square restriction decomposes into intervals of `class`.
pub fn local_condition_check(m: &GridModule, class: LocalClass) -> bool {
    square_decompositions(m)
        .expect("2x2 restrictions are within the interval guard")
        .iter()
        .all(|(_, d)| {
            d.as_ref()
                .is_some_and(|d| d.summands.iter().all(|(i, _)| class.admits(i)))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{GridModuleBuilder, GridShape};
    use crate::exactfield::FieldSpec;
    use crate::shapes::hooks;

    fn grid(nx: usize, ny: usize) -> GridShape {
        GridShape::new(nx, ny).unwrap()
    }

    fn rect(shape: GridShape, s: &str) -> RectangleShape {
        RectangleShape::parse(shape, s).unwrap()
    }

    fn top_hook() -> IntervalShape {
        let q = Square::new(GridPoint::new(1, 1), GridPoint::new(2, 2)).unwrap();
        hooks(&q).unwrap().1
    }

    #[test]
    fn rectangles_are_weakly_exact() {
        let shape = grid(3, 3);
        for r in enumerate_rectangles(shape) {
            assert!(weak_exact(&r.indicator(FieldSpec::GF2)).verdict, "{r}");
        }
    }

    #[test]
    fn top_hook_fails_the_image_condition() {
        let h = top_hook().indicator(FieldSpec::GF2);
        let report = weak_exact(&h);
        let w = report.witness.unwrap();
        assert_eq!(w.condition, Condition::Image);
        assert_eq!((w.left.dim(), w.right.dim()), (0, 1));
        assert!(w.recheck(&h));
        assert!(!w.recheck(&GridModule::zero(h.shape(), FieldSpec::GF2)));
    }

    #[test]
    fn strong_implies_weak_on_rectangles() {
        let shape = grid(4, 4);
        let zero = GridModule::zero(shape, FieldSpec::GF2);
        assert!(strong_exact(&zero).verdict);
        for r in enumerate_rectangles(shape) {
            let m = r.indicator(FieldSpec::GF2);
            if strong_exact(&m).verdict {
                assert!(weak_exact(&m).verdict);
            }
        }
        let inner = rect(shape, "2..3,2..3").indicator(FieldSpec::GF2);
        assert!(!strong_exact(&inner).verdict);
        assert!(weak_exact(&inner).verdict);
        let block = rect(shape, "1..4,2..3").indicator(FieldSpec::GF2);
        assert!(strong_exact(&block).verdict);
    }

    #[test]
    fn hom_dimensions() {
        let shape = grid(3, 3);
        let f = FieldSpec::new(3).unwrap();
        let a = rect(shape, "1..2,1..2").indicator(f);
        assert_eq!(end_dim(&a), 1);
        let b = rect(shape, "3..3,3..3").indicator(f);
        assert_eq!(hom_space(&a, &b).unwrap().dim(), 0);
        let aa = a.direct_sum(&a).unwrap();
        assert_eq!(end_dim(&aa), 4);
        for g in hom_space(&aa, &aa).unwrap().basis {
            assert!(g.is_natural(&aa, &aa));
        }
    }

    #[test]
    fn split_trivial_idempotents() {
        let shape = grid(2, 2);
        let m = rect(shape, "1..2,1..1").indicator(FieldSpec::GF2);
        let (a, b) = split_by_idempotent(&m, &Morphism::identity(&m)).unwrap();
        assert_eq!((a, b.is_zero()), (m.clone(), true));
        let (a, b) = split_by_idempotent(&m, &Morphism::zero(&m, &m)).unwrap();
        assert_eq!((a.is_zero(), b), (true, m));
    }

    #[test]
    fn summand_of_itself() {
        let shape = grid(2, 2);
        let h = top_hook();
        let m = h.indicator(FieldSpec::GF2);
        let (f, g) = is_summand(&m, &h).unwrap().unwrap();
        assert_eq!(g.compose(&f).unwrap(), Morphism::identity(&m));
        let whole = IntervalShape::new(shape, shape.points()).unwrap();
        assert!(is_summand(&m, &whole).unwrap().is_none());
    }

    #[test]
    fn decompose_sum_with_certificate() {
        let shape = grid(3, 3);
        let f = FieldSpec::new(5).unwrap();
        let r1 = rect(shape, "1..2,1..3");
        let r2 = rect(shape, "2..3,2..2");
        let parts = [r1.indicator(f), r2.indicator(f), r2.indicator(f)];
        let m = GridModule::direct_sum_all(shape, f, &parts).unwrap();
        let dec = decompose_rectangles(&m, true).unwrap();
        let mut want = vec![r1, r2, r2];
        want.sort();
        assert_eq!(dec.rectangles().unwrap(), want);
        assert!(verify_certificate(&m, &dec));
        assert_eq!(interval_decompose(&m).unwrap().unwrap().rectangles().unwrap(), want);
    }

    #[test]
    fn hook_is_not_rectangle_decomposable() {
        let m = top_hook().indicator(FieldSpec::GF2);
        assert!(matches!(
            decompose_rectangles(&m, false),
            Err(DecomposeError::NotWeaklyExact(_))
        ));
        assert!(!local_condition_check(&m, LocalClass::Rectangles));
        assert!(local_condition_check(&m, LocalClass::RectanglesPlusTopHooks));
        assert!(local_condition_check(&m, LocalClass::Intervals));
        assert!(!local_condition_check(&m, LocalClass::RectanglesPlusBottomHooks));
    }

    #[test]
    fn one_row_modules_always_peel() {
        let shape = grid(4, 1);
        let f = FieldSpec::new(3).unwrap();
        for seed in 0..20 {
            let m = crate::bimodule::random_module(shape, f, 3, seed);
            let dec = interval_decompose(&m).unwrap().expect("one-parameter modules are interval-decomposable");
            let covered: usize = dec.summands.iter().map(|(i, n)| i.len() * n).sum();
            assert_eq!(covered, m.total_dim());
        }
    }

    #[test]
    fn non_natural_idempotent_is_rejected() {
        let shape = grid(2, 1);
        let f = FieldSpec::GF2;
        let mut b = GridModuleBuilder::new(shape, f);
        b.set_dim(GridPoint::new(1, 1), 1)
            .set_dim(GridPoint::new(2, 1), 1)
            .set_hmap(GridPoint::new(1, 1), Matrix::identity(f, 1));
        let m = b.build().unwrap();
        let e = Morphism {
            maps: vec![Matrix::identity(f, 1), Matrix::zeros(f, 1, 1)],
        };
        assert_eq!(split_by_idempotent(&m, &e), Err(DecomposeError::NotNatural));
    }
}
