//! Fixtures shared by the benchmarks.

use fqgraph::{ext_field, field_of_order, make_form, FormKind, QuadraticForm};
use fqgraph::ffield::ExtCtx;

pub fn form(q: u64, kind: FormKind, dim: usize) -> QuadraticForm {
    make_form(field_of_order(q).expect("prime power"), kind, dim).expect("catalogued form")
}

/// `GF(q)(√σ)` with `σ` the primitive element.
pub fn halfplane_field(q: u64) -> ExtCtx {
    let f = field_of_order(q).expect("prime power");
    let sigma = f.primitive_element();
    ext_field(f, sigma).expect("primitive elements are non-squares")
}
