//! Fixed inputs shared by the benchmarks.

use rectdec_core::bimodule::random_rectangle_decomposable;
use rectdec_core::{FieldSpec, GridModule, GridShape};

/// A conjugated sum of `count` rectangle modules on an `n × n` grid over GF(5).
pub fn rectangle_sum(n: usize, count: usize) -> GridModule {
    let shape = GridShape::new(n, n).expect("nonempty grid");
    let field = FieldSpec::new(5).expect("prime");
    random_rectangle_decomposable(shape, field, count, 0xbe7c).0
}
