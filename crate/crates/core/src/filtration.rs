//! Functorial filtration of a grid module relative to a rectangle.
//!
//! For a rectangle `R = [x1, x2] × [y1, y2]` and a node `t ∈ R`, elements of
//! `M_t` are sorted by where they are born (images of transition maps
//! arriving at `t`) and where they die (kernels of transition maps leaving
//! `t`). The resulting spaces `V⁺ ⊇ V⁻` isolate the elements whose lifespan
//! is exactly `R`, and `dim V⁺ − dim V⁻` at the bottom-left corner is the
//! multiplicity of `k_R` as a summand of a weakly exact module.

use thiserror::Error;

use crate::bimodule::{BimoduleError, GridModule, GridModuleBuilder, GridPoint, GridShape};
use crate::decomposer::{weak_exact, ExactnessWitness};
use crate::exactfield::{complement_within, pushforward, LinalgError, Matrix, Subspace};
use crate::shapes::{RectangleShape, ShapeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiltrationError {
    #[error("{t} is not in rectangle {r}")]
    NotInRectangle { t: GridPoint, r: RectangleShape },
    #[error("rectangle and module live on different grids")]
    ShapeMismatch,
    #[error("module is not weakly exact: {0}")]
    NotWeaklyExact(Box<ExactnessWitness>),
    #[error("family of subspaces is not a submodule")]
    NotSubmodule,
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Module(#[from] BimoduleError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// Every filtration space of `M_t` for one rectangle and one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltSpaces {
    pub t: GridPoint,
    pub il_plus: Subspace,
    pub il_minus: Subspace,
    pub ib_plus: Subspace,
    pub ib_minus: Subspace,
    pub kr_plus: Subspace,
    pub kr_minus: Subspace,
    pub kt_plus: Subspace,
    pub kt_minus: Subspace,
    pub im_plus: Subspace,
    pub im_minus: Subspace,
    pub ker_plus: Subspace,
    pub ker_minus: Subspace,
    pub v_plus: Subspace,
    pub v_minus: Subspace,
}

impl FiltSpaces {
    pub fn v(&self, sign: Sign) -> &Subspace {
        match sign {
            Sign::Plus => &self.v_plus,
            Sign::Minus => &self.v_minus,
        }
    }

    /// The eight cut spaces in the order l±, b±, r±, t±.
    pub fn cut_spaces(&self) -> [&Subspace; 8] {
        [
            &self.il_plus,
            &self.il_minus,
            &self.ib_plus,
            &self.ib_minus,
            &self.kr_plus,
            &self.kr_minus,
            &self.kt_plus,
            &self.kt_minus,
        ]
    }

    fn all(&self) -> [&Subspace; 14] {
        [
            &self.il_plus,
            &self.il_minus,
            &self.ib_plus,
            &self.ib_minus,
            &self.kr_plus,
            &self.kr_minus,
            &self.kt_plus,
            &self.kt_minus,
            &self.im_plus,
            &self.im_minus,
            &self.ker_plus,
            &self.ker_minus,
            &self.v_plus,
            &self.v_minus,
        ]
    }

    /// Applies `f` to every space.
    pub fn try_map(
        &self,
        f: impl FnMut(&Subspace) -> Result<Subspace, LinalgError>,
    ) -> Result<FiltSpaces, LinalgError> {
        let [a, b, c, d, e, g, h, i, j, k, l, m, n, o] = self.all().map(f);
        Ok(FiltSpaces {
            t: self.t,
            il_plus: a?,
            il_minus: b?,
            ib_plus: c?,
            ib_minus: d?,
            kr_plus: e?,
            kr_minus: g?,
            kt_plus: h?,
            kt_minus: i?,
            im_plus: j?,
            im_minus: k?,
            ker_plus: l?,
            ker_minus: m?,
            v_plus: n?,
            v_minus: o?,
        })
    }

    /// Checks the inclusions `X⁻ ⊆ X⁺` for every pair of spaces.
    pub fn is_nested(&self) -> Result<bool, LinalgError> {
        let pairs = [
            (&self.il_plus, &self.il_minus),
            (&self.ib_plus, &self.ib_minus),
            (&self.kr_plus, &self.kr_minus),
            (&self.kt_plus, &self.kt_minus),
            (&self.im_plus, &self.im_minus),
            (&self.ker_plus, &self.ker_minus),
            (&self.v_plus, &self.v_minus),
        ];
        for (plus, minus) in pairs {
            if !plus.contains(minus)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `Kfilt_r⁺ ∩ Kfilt_t⁺ ⊆ Im_R⁺`, the condition that lets a
    /// complement of `V⁻` in `V⁺` be transported without leaking outside `R`.
    pub fn linking_condition(&self) -> Result<bool, LinalgError> {
        self.im_plus.contains(&self.kr_plus.intersection(&self.kt_plus)?)
    }
}

fn check_grid(m: &GridModule, r: &RectangleShape) -> Result<(), FiltrationError> {
    if r.grid() != m.shape() {
        return Err(FiltrationError::ShapeMismatch);
    }
    Ok(())
}

fn image_into(m: &GridModule, s: GridPoint, t: GridPoint) -> Subspace {
    m.transition(s, t).image()
}

fn kernel_from(m: &GridModule, s: GridPoint, t: GridPoint) -> Subspace {
    m.transition(s, t).kernel()
}

/// The filtration spaces of `M_t` for `t ∈ r`.
pub fn pointwise_filtration(
    m: &GridModule,
    r: &RectangleShape,
    t: GridPoint,
) -> Result<FiltSpaces, FiltrationError> {
    check_grid(m, r)?;
    if !r.contains(t) {
        return Err(FiltrationError::NotInRectangle { t, r: *r });
    }
    let shape = m.shape();
    let (f, n) = (m.field(), m.dim(t));
    let (x1, x2, y1, y2) = (r.x1(), r.x2(), r.y1(), r.y2());
    let at = |x, y| GridPoint::new(x, y);

    let il_plus = image_into(m, at(x1, t.y), t);
    let il_minus = if x1 == 1 {
        Subspace::zero(f, n)
    } else {
        image_into(m, at(x1 - 1, t.y), t)
    };
    let ib_plus = image_into(m, at(t.x, y1), t);
    let ib_minus = if y1 == 1 {
        Subspace::zero(f, n)
    } else {
        image_into(m, at(t.x, y1 - 1), t)
    };
    let kr_plus = if x2 == shape.nx {
        Subspace::full(f, n)
    } else {
        kernel_from(m, t, at(x2 + 1, t.y))
    };
    let kr_minus = kernel_from(m, t, at(x2, t.y));
    let kt_plus = if y2 == shape.ny {
        Subspace::full(f, n)
    } else {
        kernel_from(m, t, at(t.x, y2 + 1))
    };
    let kt_minus = kernel_from(m, t, at(t.x, y2));

    let im_plus = il_plus.intersection(&ib_plus)?;
    let im_minus = il_minus.sum(&ib_minus)?.intersection(&im_plus)?;
    let ker_plus = kr_plus
        .sum(&kt_minus)?
        .intersection(&kr_minus.sum(&kt_plus)?)?;
    let ker_minus = kr_minus.sum(&kt_minus)?;
    let v_plus = im_plus.intersection(&ker_plus)?;
    let v_minus = im_plus
        .intersection(&ker_minus)?
        .sum(&im_minus.intersection(&ker_plus)?)?;

    Ok(FiltSpaces {
        t,
        il_plus,
        il_minus,
        ib_plus,
        ib_minus,
        kr_plus,
        kr_minus,
        kt_plus,
        kt_minus,
        im_plus,
        im_minus,
        ker_plus,
        ker_minus,
        v_plus,
        v_minus,
    })
}

/// A subspace of `M_t` at every node of the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmoduleFamily<'a> {
    pub base: &'a GridModule,
    pub spaces: Vec<Subspace>,
}

impl<'a> SubmoduleFamily<'a> {
    pub fn new(base: &'a GridModule, spaces: Vec<Subspace>) -> Result<Self, FiltrationError> {
        let shape = base.shape();
        if spaces.len() != shape.len()
            || shape
                .points()
                .any(|p| spaces[shape.index(p)].ambient_dim() != base.dim(p))
        {
            return Err(FiltrationError::ShapeMismatch);
        }
        Ok(SubmoduleFamily { base, spaces })
    }

    pub fn zero(base: &'a GridModule) -> Self {
        let spaces = base
            .shape()
            .points()
            .map(|p| Subspace::zero(base.field(), base.dim(p)))
            .collect();
        SubmoduleFamily { base, spaces }
    }

    pub fn at(&self, p: GridPoint) -> &Subspace {
        &self.spaces[self.base.shape().index(p)]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Subspace::dim).collect()
    }

    /// Whether every unit edge maps the family into itself, which is enough
    /// for every transition map to do so.
    pub fn is_submodule(&self) -> Result<bool, LinalgError> {
        let shape = self.base.shape();
        for p in shape.points() {
            for q in [GridPoint::new(p.x + 1, p.y), GridPoint::new(p.x, p.y + 1)] {
                if !shape.contains(q) {
                    continue;
                }
                let pushed = pushforward(self.base.transition(p, q), self.at(p))?;
                if !self.at(q).contains(&pushed)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The family as a module in its own right, together with the basis
    /// matrices `B_t` (columns spanning the family at `t`) that embed it
    /// into the base module.
    pub fn as_module(&self) -> Result<(GridModule, Vec<Matrix>), FiltrationError> {
        if !self.is_submodule()? {
            return Err(FiltrationError::NotSubmodule);
        }
        let shape = self.base.shape();
        let f = self.base.field();
        let bases: Vec<Matrix> = self.spaces.iter().map(Subspace::basis_matrix).collect();
        let mut b = GridModuleBuilder::new(shape, f).dims(self.dims());
        for p in shape.points() {
            for (q, horizontal) in [
                (GridPoint::new(p.x + 1, p.y), true),
                (GridPoint::new(p.x, p.y + 1), false),
            ] {
                if !shape.contains(q) {
                    continue;
                }
                let image = self.base.transition(p, q) * &bases[shape.index(p)];
                let target = self.at(q);
                let columns: Vec<Vec<u32>> = (0..image.cols())
                    .map(|j| {
                        target
                            .coordinates(&image.column(j))
                            .expect("submodule maps into itself")
                    })
                    .collect();
                let map = Matrix::from_columns(f, target.dim(), &columns);
                if horizontal {
                    b.set_hmap(p, map);
                } else {
                    b.set_vmap(p, map);
                }
            }
        }
        Ok((b.build()?, bases))
    }
}

/// A module that has been checked to be weakly exact. The filtration
/// results below depend on weak exactness; holding this token avoids
/// repeating the check for every rectangle.
#[derive(Debug, Clone, Copy)]
pub struct Exact<'a>(&'a GridModule);

impl<'a> Exact<'a> {
    pub fn check(m: &'a GridModule) -> Result<Self, FiltrationError> {
        let report = weak_exact(m);
        match report.witness {
            None => Ok(Exact(m)),
            Some(w) => Err(FiltrationError::NotWeaklyExact(Box::new(w))),
        }
    }

    pub fn module(&self) -> &'a GridModule {
        self.0
    }

    /// `V±` on `R`, pushed forward over the upset of `R`, zero elsewhere.
    pub fn filt_submodule(
        &self,
        r: &RectangleShape,
        sign: Sign,
    ) -> Result<SubmoduleFamily<'a>, FiltrationError> {
        let m = self.0;
        check_grid(m, r)?;
        let shape = m.shape();
        let mut on_rect = vec![None; shape.len()];
        for p in r.cells() {
            on_rect[shape.index(p)] = Some(pointwise_filtration(m, r, p)?.v(sign).clone());
        }
        let spaces = shape
            .points()
            .map(|t| {
                if !r.upset_contains(t) {
                    return Ok(Subspace::zero(m.field(), m.dim(t)));
                }
                let s = GridPoint::new(t.x.min(r.x2()), t.y.min(r.y2()));
                let v = on_rect[shape.index(s)].as_ref().expect("corner lies in R");
                if s == t {
                    Ok(v.clone())
                } else {
                    pushforward(m.transition(s, t), v)
                }
            })
            .collect::<Result<Vec<_>, LinalgError>>()?;
        Ok(SubmoduleFamily { base: m, spaces })
    }

    /// Multiplicity of `k_R`: `dim V⁺ − dim V⁻` at the bottom-left corner.
    pub fn counting_dim(&self, r: &RectangleShape) -> Result<usize, FiltrationError> {
        let fs = pointwise_filtration(self.0, r, r.min_corner())?;
        Ok(fs.v_plus.dim() - fs.v_minus.dim())
    }

    /// The filtration of the `V⁺` family, computed on that family as a module
    /// and expressed in coordinates of `M_t`, at every `t ∈ R`.
    pub fn double_filtration(&self, r: &RectangleShape) -> Result<Vec<FiltSpaces>, FiltrationError> {
        let inner = InnerModule::new(self, r)?;
        if let Some(w) = weak_exact(&inner.module).witness {
            return Err(FiltrationError::Internal(format!(
                "V+ is not weakly exact: {w}"
            )));
        }
        r.cells().into_iter().map(|t| inner.filtration_at(t)).collect()
    }

    /// An explicit submodule isomorphic to `k_R^c` with `c` the counting
    /// dimension, supported exactly on `R`.
    pub fn rectangle_filtrate(&self, r: &RectangleShape) -> Result<SubmoduleFamily<'a>, FiltrationError> {
        let m = self.0;
        let t0 = r.min_corner();
        let inner = InnerModule::new(self, r)?;
        let w = inner.filtration_at(t0)?;
        let dying = w.kr_plus.intersection(&w.kt_plus)?;
        // W⁻ alone misses summands R' ≠ R with R' ∩ R⁺ = R, which V⁺ sees
        // as copies of k_R; quotienting by V⁻ of M removes them.
        let outer = pointwise_filtration(m, r, t0)?;
        let lower = outer.v_minus.intersection(&w.v_plus)?.sum(&w.v_minus)?;
        let seed = complement_within(&lower, &w.v_plus, &dying)?;
        let expected = outer.v_plus.dim() - outer.v_minus.dim();
        if seed.dim() != expected {
            return Err(FiltrationError::Internal(format!(
                "filtrate of {r} has dimension {} instead of {expected}",
                seed.dim()
            )));
        }
        let shape = m.shape();
        let spaces = shape
            .points()
            .map(|t| {
                if r.contains(t) {
                    pushforward(m.transition(t0, t), &seed)
                } else {
                    Ok(Subspace::zero(m.field(), m.dim(t)))
                }
            })
            .collect::<Result<Vec<_>, LinalgError>>()?;
        let family = SubmoduleFamily { base: m, spaces };
        if r.cells().iter().any(|&t| family.at(t).dim() != seed.dim()) {
            return Err(FiltrationError::Internal(format!(
                "filtrate of {r} is not injective along R"
            )));
        }
        if !family.is_submodule()? {
            return Err(FiltrationError::Internal(format!(
                "filtrate of {r} leaks outside R"
            )));
        }
        Ok(family)
    }
}

/// The `V⁺` family of a rectangle, viewed as a module.
struct InnerModule<'a> {
    base: Exact<'a>,
    r: RectangleShape,
    module: GridModule,
    embeddings: Vec<Matrix>,
}

impl<'a> InnerModule<'a> {
    fn new(base: &Exact<'a>, r: &RectangleShape) -> Result<Self, FiltrationError> {
        let (module, embeddings) = base.filt_submodule(r, Sign::Plus)?.as_module()?;
        Ok(InnerModule {
            base: *base,
            r: *r,
            module,
            embeddings,
        })
    }

    /// Filtration of `V⁺` at `t`, in `M_t` coordinates, checked against the
    /// closed forms in terms of the filtration of `M`.
    fn filtration_at(&self, t: GridPoint) -> Result<FiltSpaces, FiltrationError> {
        let shape = self.module.shape();
        let embed = &self.embeddings[shape.index(t)];
        let inner = pointwise_filtration(&self.module, &self.r, t)?;
        let w = inner.try_map(|s| pushforward(embed, s))?;

        let outer = pointwise_filtration(self.base.module(), &self.r, t)?;
        let v = &outer.v_plus;
        let zero = Subspace::zero(v.field(), v.ambient_dim());
        let cap = |s: &Subspace| s.intersection(v);
        let ker_minus = cap(&outer.kt_minus)?.sum(&cap(&outer.kr_minus)?)?;
        let ker_plus = cap(&outer.kt_plus.intersection(&outer.kr_plus)?)?.sum(&ker_minus)?;
        let expected = [
            ("Ifilt_l+", &w.il_plus, v.clone()),
            ("Ifilt_l-", &w.il_minus, zero.clone()),
            ("Ifilt_b+", &w.ib_plus, v.clone()),
            ("Ifilt_b-", &w.ib_minus, zero.clone()),
            ("Kfilt_r+", &w.kr_plus, cap(&outer.kr_plus)?),
            ("Kfilt_r-", &w.kr_minus, cap(&outer.kr_minus)?),
            ("Kfilt_t+", &w.kt_plus, cap(&outer.kt_plus)?),
            ("Kfilt_t-", &w.kt_minus, cap(&outer.kt_minus)?),
            ("Im+", &w.im_plus, v.clone()),
            ("Im-", &w.im_minus, zero),
            ("Ker+", &w.ker_plus, ker_plus.clone()),
            ("Ker-", &w.ker_minus, ker_minus.clone()),
            ("W+", &w.v_plus, ker_plus),
            ("W-", &w.v_minus, ker_minus),
        ];
        for (name, got, want) in expected {
            if *got != want {
                return Err(FiltrationError::Internal(format!(
                    "double filtration {name} at {t} for {} disagrees with its closed form",
                    self.r
                )));
            }
        }
        Ok(w)
    }
}

pub fn filt_submodule<'a>(
    m: &'a GridModule,
    r: &RectangleShape,
    sign: Sign,
) -> Result<SubmoduleFamily<'a>, FiltrationError> {
    Exact::check(m)?.filt_submodule(r, sign)
}

pub fn counting_dim(m: &GridModule, r: &RectangleShape) -> Result<usize, FiltrationError> {
    Exact::check(m)?.counting_dim(r)
}

pub fn double_filtration(m: &GridModule, r: &RectangleShape) -> Result<Vec<FiltSpaces>, FiltrationError> {
    Exact::check(m)?.double_filtration(r)
}

pub fn rectangle_filtrate<'a>(
    m: &'a GridModule,
    r: &RectangleShape,
) -> Result<SubmoduleFamily<'a>, FiltrationError> {
    Exact::check(m)?.rectangle_filtrate(r)
}

/// Whether the linking condition holds on the raw module at every node of `R`.
pub fn linking_condition(m: &GridModule, r: &RectangleShape) -> Result<bool, FiltrationError> {
    for t in r.cells() {
        if !pointwise_filtration(m, r, t)?.linking_condition()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A finite subgrid through `t` on which every kernel of a map out of `M_t`
/// and every image of a map into `M_t` along the row and column of `t` is
/// realized exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub t: GridPoint,
    pub cols: Vec<usize>,
    pub rows: Vec<usize>,
    /// Positions of `t.x` in `cols` and `t.y` in `rows`, 0-based.
    pub origin: (usize, usize),
}

impl Skeleton {
    pub fn shape(&self) -> GridShape {
        GridShape::new(self.cols.len(), self.rows.len()).expect("skeleton is nonempty")
    }

    /// The node `t` in skeleton coordinates.
    pub fn origin_point(&self) -> GridPoint {
        GridPoint::new(self.origin.0 + 1, self.origin.1 + 1)
    }

    pub fn restrict(&self, m: &GridModule) -> Result<GridModule, BimoduleError> {
        m.restrict(&self.cols, &self.rows)
    }
}

/// Kernel dimensions of `M_t → M_q` for `q` running outward along one axis,
/// with `None` standing for the point beyond the grid.
struct Axis<'m> {
    m: &'m GridModule,
    t: GridPoint,
    horizontal: bool,
}

impl Axis<'_> {
    fn len(&self) -> usize {
        if self.horizontal {
            self.m.shape().nx
        } else {
            self.m.shape().ny
        }
    }

    fn coord(&self) -> usize {
        if self.horizontal {
            self.t.x
        } else {
            self.t.y
        }
    }

    fn point(&self, i: usize) -> GridPoint {
        if self.horizontal {
            GridPoint::new(i, self.t.y)
        } else {
            GridPoint::new(self.t.x, i)
        }
    }

    /// `Ker ρ_t^q` with `q` at index `i`; past the grid the map is zero.
    fn kernel(&self, i: usize) -> Subspace {
        if i > self.len() {
            Subspace::full(self.m.field(), self.m.dim(self.t))
        } else {
            kernel_from(self.m, self.t, self.point(i))
        }
    }

    /// `Im ρ_q^t` with `q` at index `i`; before the grid the map is zero.
    fn image(&self, i: usize) -> Subspace {
        if i == 0 {
            Subspace::zero(self.m.field(), self.m.dim(self.t))
        } else {
            image_into(self.m, self.point(i), self.t)
        }
    }

    fn indices(&self) -> Vec<usize> {
        let full = self.m.dim(self.t);
        let c = self.coord();
        let mut out = vec![c];
        let mut seen = vec![0, full];
        for i in c + 1..=self.len() {
            let d = self.kernel(i).dim();
            if !seen.contains(&d) {
                seen.push(d);
                out.push(i);
            }
        }
        let mut seen = vec![0, full];
        for i in (1..c).rev() {
            let d = self.image(i).dim();
            if !seen.contains(&d) {
                seen.push(d);
                out.push(i);
            }
        }
        out.sort_unstable();
        out
    }

    /// The upper bound of the lifted lower part of a right (or top) cut whose
    /// last skeleton index is `i`.
    fn lift_upper(&self, i: usize) -> usize {
        let k = self.kernel(i);
        (i + 1..=self.len() + 1)
            .find(|&j| j > self.len() || self.kernel(j) != k)
            .expect("range ends past the grid")
            - 1
    }

    /// The number of indices in the lifted lower part of a left (or bottom)
    /// cut whose first upper skeleton index is `i`.
    fn lift_lower(&self, i: usize) -> usize {
        let im = self.image(i);
        (0..i)
            .rev()
            .find(|&j| self.image(j) != im)
            .unwrap_or(0)
    }
}

impl Axis<'_> {
    /// Checks the ordering and covering properties of the skeleton indices
    /// `idx` along this axis, with `origin` the position of `t`.
    fn violations(&self, idx: &[usize], origin: usize, label: &str) -> Vec<String> {
        let mut out = Vec::new();
        if idx.get(origin) != Some(&self.coord()) {
            out.push(format!("{label}: t is not at the origin index"));
            return out;
        }
        if !idx.windows(2).all(|w| w[0] < w[1]) {
            out.push(format!("{label}: indices not strictly increasing"));
        }
        let mut kernels: Vec<Subspace> = idx[origin..].iter().map(|&i| self.kernel(i)).collect();
        let nonzero = self.m.dim(self.t) > 0;
        if nonzero {
            kernels.push(self.kernel(self.len() + 1));
        }
        let strictly_grows = |w: &[Subspace]| w[0] != w[1] && w[1].contains(&w[0]).unwrap_or(false);
        if !kernels.windows(2).all(strictly_grows) {
            out.push(format!("{label}: kernels not strictly increasing"));
        }
        let mut images = if nonzero { vec![self.image(0)] } else { Vec::new() };
        images.extend(idx[..=origin].iter().map(|&i| self.image(i)));
        if !images.windows(2).all(strictly_grows) {
            out.push(format!("{label}: images not strictly increasing"));
        }
        for i in self.coord()..=self.len() + 1 {
            if !kernels.contains(&self.kernel(i)) {
                out.push(format!("{label}: kernel at index {i} not realized"));
            }
        }
        for i in 0..=self.coord() {
            if !images.contains(&self.image(i)) {
                out.push(format!("{label}: image at index {i} not realized"));
            }
        }
        out
    }
}

impl Skeleton {
    /// Lists every failure of the skeleton properties against `m`: `t` sits
    /// at the origin, kernels out of `M_t` strictly grow along the indices
    /// past `t` and images into `M_t` strictly grow up to `t` (with the zero
    /// image before the grid and the full kernel after it), and every kernel
    /// and image along the row and column of `t` is realized by an index.
    pub fn violations(&self, m: &GridModule) -> Vec<String> {
        if !m.shape().contains(self.t) {
            return vec![format!("{} is outside the grid", self.t)];
        }
        let h = Axis { m, t: self.t, horizontal: true };
        let v = Axis { m, t: self.t, horizontal: false };
        let mut out = h.violations(&self.cols, self.origin.0, "columns");
        out.extend(v.violations(&self.rows, self.origin.1, "rows"));
        out
    }
}

/// The skeleton of `m` at `t`, choosing the smallest index for each new
/// kernel and the largest for each new image.
pub fn t_skeleton(m: &GridModule, t: GridPoint) -> Result<Skeleton, FiltrationError> {
    if !m.shape().contains(t) {
        return Err(BimoduleError::OutOfRange(t).into());
    }
    let cols = Axis { m, t, horizontal: true }.indices();
    let rows = Axis { m, t, horizontal: false }.indices();
    let origin = (
        cols.iter().position(|&x| x == t.x).expect("t.x is a column"),
        rows.iter().position(|&y| y == t.y).expect("t.y is a row"),
    );
    Ok(Skeleton { t, cols, rows, origin })
}

/// Lifts a rectangle of the skeleton containing its origin to the unique
/// rectangle of the full grid with the same filtration spaces at `t`.
pub fn lift_rectangle(
    m: &GridModule,
    sk: &Skeleton,
    r_sk: &RectangleShape,
) -> Result<RectangleShape, FiltrationError> {
    if r_sk.grid() != sk.shape() {
        return Err(FiltrationError::ShapeMismatch);
    }
    let o = sk.origin_point();
    if !r_sk.contains(o) {
        return Err(FiltrationError::NotInRectangle { t: o, r: *r_sk });
    }
    let t = sk.t;
    let h = Axis { m, t, horizontal: true };
    let v = Axis { m, t, horizontal: false };
    let x1 = h.lift_lower(sk.cols[r_sk.x1() - 1]) + 1;
    let x2 = h.lift_upper(sk.cols[r_sk.x2() - 1]);
    let y1 = v.lift_lower(sk.rows[r_sk.y1() - 1]) + 1;
    let y2 = v.lift_upper(sk.rows[r_sk.y2() - 1]);
    Ok(RectangleShape::from_bounds(m.shape(), x1, x2, y1, y2)?)
}
