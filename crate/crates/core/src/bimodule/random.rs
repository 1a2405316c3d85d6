use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GridModule, GridModuleBuilder, GridPoint, GridShape};
use crate::exactfield::{FieldSpec, Matrix, Subspace};
use crate::shapes::{enumerate_rectangles, RectangleShape};

/// A random invertible `n × n` matrix, as a product of elementary matrices.
pub fn random_invertible<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> Matrix {
    let mut m = Matrix::identity(field, n);
    if n == 0 {
        return m;
    }
    let p = field.p();
    for _ in 0..3 * n + 2 {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        match rng.gen_range(0..3) {
            0 if i != j => {
                // row_i += c · row_j
                let c = rng.gen_range(1..p);
                for col in 0..n {
                    let v = field.add(m.get(i, col), field.mul(c, m.get(j, col)));
                    m.set(i, col, v);
                }
            }
            1 if p > 2 => {
                let c = rng.gen_range(1..p);
                for col in 0..n {
                    m.set(i, col, field.mul(c, m.get(i, col)));
                }
            }
            _ => {
                for col in 0..n {
                    let (a, b) = (m.get(i, col), m.get(j, col));
                    m.set(i, col, b);
                    m.set(j, col, a);
                }
            }
        }
    }
    m
}

fn random_point<R: Rng>(shape: GridShape, rng: &mut R) -> GridPoint {
    GridPoint::new(rng.gen_range(1..=shape.nx), rng.gen_range(1..=shape.ny))
}

/// A random module with pointwise dimension at most `max_dim`.
///
/// The module is the image of a random morphism from a sum of at most
/// `max_dim` free modules (generated at random points) to a sum of co-free
/// modules (cogenerated at random points). Every module arises this way for
/// suitable choices.
pub fn random_module(shape: GridShape, field: FieldSpec, max_dim: usize, seed: u64) -> GridModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if max_dim == 0 {
        return GridModule::zero(shape, field);
    }
    let births: Vec<GridPoint> = (0..rng.gen_range(1..=max_dim))
        .map(|_| random_point(shape, &mut rng))
        .collect();
    let deaths: Vec<GridPoint> = (0..rng.gen_range(1..=max_dim + 1))
        .map(|_| random_point(shape, &mut rng))
        .collect();
    // coefficient from birth i to death j, allowed only when births[i] ≤ deaths[j]
    let coeff: Vec<Vec<u32>> = deaths
        .iter()
        .map(|q| {
            births
                .iter()
                .map(|p| {
                    if p.leq(*q) {
                        rng.gen_range(0..field.p())
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();

    let alive_deaths = |t: GridPoint| -> Vec<usize> {
        (0..deaths.len()).filter(|&j| t.leq(deaths[j])).collect()
    };
    let spaces: Vec<(Vec<usize>, Subspace)> = shape
        .points()
        .map(|t| {
            let js = alive_deaths(t);
            let is: Vec<usize> = (0..births.len()).filter(|&i| births[i].leq(t)).collect();
            let cols = is.iter().map(|&i| js.iter().map(|&j| coeff[j][i]).collect());
            (js.clone(), Subspace::span(field, js.len(), cols))
        })
        .collect();

    let mut b = GridModuleBuilder::new(shape, field);
    for t in shape.points() {
        b.set_dim(t, spaces[shape.index(t)].1.dim());
    }
    for s in shape.points() {
        let (js, src) = &spaces[shape.index(s)];
        for t in [GridPoint::new(s.x + 1, s.y), GridPoint::new(s.x, s.y + 1)] {
            if !shape.contains(t) {
                continue;
            }
            let (jt, dst) = &spaces[shape.index(t)];
            let columns: Vec<Vec<u32>> = src
                .basis()
                .iter()
                .map(|v| {
                    let projected: Vec<u32> = jt
                        .iter()
                        .map(|j| v[js.iter().position(|x| x == j).unwrap()])
                        .collect();
                    dst.coordinates(&projected).expect("projection lands in the image")
                })
                .collect();
            let m = Matrix::from_columns(field, dst.dim(), &columns);
            if t.x > s.x {
                b.set_hmap(s, m);
            } else {
                b.set_vmap(s, m);
            }
        }
    }
    b.build().expect("image of a morphism is a module")
}

/// A randomly conjugated direct sum of `count` uniformly chosen rectangle
/// indicators, with the sorted list of rectangles used.
pub fn random_rectangle_decomposable(
    shape: GridShape,
    field: FieldSpec,
    count: usize,
    seed: u64,
) -> (GridModule, Vec<RectangleShape>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = enumerate_rectangles(shape);
    let mut rects: Vec<RectangleShape> = (0..count)
        .map(|_| *all.choose(&mut rng).expect("grid has rectangles"))
        .collect();
    rects.sort();
    let parts: Vec<GridModule> = rects.iter().map(|r| r.indicator(field)).collect();
    let sum = GridModule::direct_sum_all(shape, field, &parts).expect("same grid");
    let bases: Vec<Matrix> = sum
        .dims()
        .iter()
        .map(|&d| random_invertible(field, d, &mut rng))
        .collect();
    (sum.conjugate(&bases).expect("bases are invertible"), rects)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invertible_is_invertible() {
        let f = FieldSpec::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 0..5 {
            assert!(random_invertible(f, n, &mut rng).inverse().is_ok());
        }
    }

    #[test]
    fn seeded_generators_are_reproducible() {
        let shape = GridShape::new(3, 3).unwrap();
        let f = FieldSpec::new(2).unwrap();
        assert_eq!(random_module(shape, f, 3, 9), random_module(shape, f, 3, 9));
        assert_eq!(
            random_rectangle_decomposable(shape, f, 4, 9),
            random_rectangle_decomposable(shape, f, 4, 9)
        );
    }

    #[test]
    fn random_module_respects_bound() {
        let shape = GridShape::new(3, 3).unwrap();
        let f = FieldSpec::new(3).unwrap();
        for seed in 0..50 {
            let m = random_module(shape, f, 3, seed);
            assert!(m.dims().iter().all(|&d| d <= 3));
        }
    }

    #[test]
    fn zero_count_is_zero_module() {
        let shape = GridShape::new(2, 2).unwrap();
        let (m, rects) = random_rectangle_decomposable(shape, FieldSpec::GF2, 0, 1);
        assert!(m.is_zero());
        assert!(rects.is_empty());
    }
}
