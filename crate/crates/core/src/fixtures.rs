//! Named processes and cones used by the examples, tests and CLI.

use crate::cone::PolyhedralCone;
use crate::matrix::RationalMatrix;
use crate::process::ConvexProcess;
use crate::rational::{frac, int, Rational};

fn v(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

/// `H(x) = [x/2, 2x]` for `x >= 0`, empty otherwise.
pub fn example_interval() -> ConvexProcess {
    ConvexProcess::from_generators(1, &[vec![int(1), frac(1, 2)], v(&[1, 2])], &[]).expect("fixture")
}

pub fn example_interval_cone() -> PolyhedralCone {
    PolyhedralCone::nonneg_orthant(1)
}

pub fn example_2x2_matrix() -> RationalMatrix {
    RationalMatrix::from_i64(&[&[4, 1], &[2, 3]])
}

/// `{(a, b) : a - b >= 0}`.
pub fn example_2x2_cone() -> PolyhedralCone {
    PolyhedralCone::from_constraints(2, &[v(&[1, -1])], &[]).expect("fixture")
}

/// `H(x) = Ax - K` on `K`.
pub fn example_2x2() -> ConvexProcess {
    ConvexProcess::map_minus_cone(&example_2x2_matrix(), &example_2x2_cone()).expect("fixture")
}

/// `gr(H) = ({0} × R) × ({0} × R)`: every real number is an eigenvalue.
pub fn two_dim_linear() -> ConvexProcess {
    ConvexProcess::from_generators(2, &[], &[v(&[0, 1, 0, 0]), v(&[0, 0, 0, 1])]).expect("fixture")
}

pub const PROCESS_NAMES: [&str; 3] = ["example_interval", "example_2x2", "two_dim_linear"];

pub fn process(name: &str) -> Option<ConvexProcess> {
    match name {
        "example_interval" => Some(example_interval()),
        "example_2x2" => Some(example_2x2()),
        "two_dim_linear" => Some(two_dim_linear()),
        _ => None,
    }
}

/// The cone each process fixture is paired with, under the name `<process>.K`.
pub fn cone(name: &str) -> Option<PolyhedralCone> {
    match name {
        "example_interval.K" => Some(example_interval_cone()),
        "example_2x2.K" => Some(example_2x2_cone()),
        "two_dim_linear.K" => Some(PolyhedralCone::full(2)),
        _ => None,
    }
}
