use ndarray::{Array1, ArrayView1};

use crate::error::{Error, Result};
use crate::linalg::{norm1, norm2};
use crate::scalar::{Scalar, Sparsity};

pub fn soft_threshold<S: Scalar>(x: ArrayView1<S>, t: S) -> Array1<S> {
    x.mapv(|v| {
        let m = v.abs() - t;
        if m > S::zero() {
            m.copysign(v)
        } else {
            S::zero()
        }
    })
}

/// `⟨x, y⟩ + ½‖y‖₂² + a‖y‖₂ + b‖y‖₁`.
pub fn prox_l2_l1_objective<S: Scalar>(x: ArrayView1<S>, y: ArrayView1<S>, a: S, b: S) -> S {
    x.dot(&y) + S::lit(0.5) * y.dot(&y) + a * norm2(y) + b * norm1(y)
}

/// Global minimiser of `⟨x, y⟩ + ½‖y‖₂² + a‖y‖₂ + b‖y‖₁`: soft-threshold
/// `-x` at `b`, then shrink the result radially by `a`.
pub fn prox_l2_l1<S: Scalar>(x: ArrayView1<S>, a: S, b: S) -> Result<Array1<S>> {
    if !(a >= S::zero()) || !(b >= S::zero()) {
        return Err(Error::Parameter(format!(
            "prox weights must be nonnegative, got a = {a}, b = {b}"
        )));
    }
    Ok(prox_shrink(x.mapv(|v| -v).view(), a, b))
}

/// `argmin_u ½‖u − z‖² + a‖u‖₂ + b‖u‖₁`.
pub fn prox_shrink<S: Scalar>(z: ArrayView1<S>, a: S, b: S) -> Array1<S> {
    let mut w = soft_threshold(z, b);
    let nw = norm2(w.view());
    if nw <= a {
        w.fill(S::zero());
    } else {
        let scale = S::one() - a / nw;
        w.mapv_inplace(|v| v * scale);
    }
    w
}

/// `argmin_u ½‖u − z‖² + c·g(u)²` with `g` the factor gauge.
///
/// The minimiser is `prox_shrink(z; 2cG, 2cG/√s)` for the unique `G ≥ 0` with
/// `g(prox_shrink(z; 2cG, 2cG/√s)) = G`; the left side is nonincreasing in `G`, so
/// the fixed point is bracketed in `[0, g(z)]` and found by bisection.
pub fn prox_gauge_squared<S: Scalar>(z: ArrayView1<S>, c: S, s: &Sparsity<S>) -> Result<Array1<S>> {
    if !(c >= S::zero()) {
        return Err(Error::Parameter(format!("prox weight must be nonnegative, got {c}")));
    }
    let gauge = |u: &Array1<S>| norm2(u.view()) + norm1(u.view()) * s.inv_sqrt();
    let at = |big_g: S| {
        let a = S::lit(2.0) * c * big_g;
        prox_shrink(z, a, a * s.inv_sqrt())
    };
    let gz = norm2(z) + norm1(z) * s.inv_sqrt();
    if c == S::zero() || gz == S::zero() {
        return Ok(z.to_owned());
    }
    let (mut lo, mut hi) = (S::zero(), gz);
    for _ in 0..200 {
        let mid = S::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gauge(&at(mid)) > mid {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(at(S::lit(0.5) * (lo + hi)))
}
