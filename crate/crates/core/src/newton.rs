//! Newton polygons of polynomials over `F_q(T)` at a finite place or at
//! infinity. A slope `s` of length `l` corresponds to `l` roots of
//! valuation `-s`.

use num_rational::Ratio;

use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::ring::Ring;
use crate::Error;

/// A place of `F_q(T)`: a monic irreducible of `A`, or infinity
/// (normalized so that `v(T) = -1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn valuation(&self, x: &RatFunc) -> i64 {
        match self {
            Place::Finite(pi) => x.valuation_at(pi),
            Place::Infinity => x.valuation_at_infinity(),
        }
    }
}

/// Lower convex hull slopes of the points `(i, v(c_i))` for the nonzero
/// coefficients `c_i`, with multiplicities summing to `deg f`. Slopes are
/// returned nondecreasing.
pub fn newton_polygon(
    coeffs: &[RatFunc],
    place: &Place,
) -> Result<Vec<(Ratio<i64>, usize)>, Error> {
    let pts: Vec<(i64, i64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, place.valuation(c)))
        .collect();
    if pts.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    // lower convex hull, left to right (monotone chain on the given points,
    // which are already sorted by abscissa)
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b if it lies on or above segment a-p
            if (b.1 - a.1) * (p.0 - a.0) >= (p.1 - a.1) * (b.0 - a.0) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::new();
    for w in hull.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        let len = (x1 - x0) as usize;
        out.push((Ratio::new(y1 - y0, x1 - x0), len));
    }
    Ok(out)
}

/// Convenience wrapper for polynomials with coefficients in `A`.
pub fn newton_polygon_integral(
    coeffs: &[Poly],
    place: &Place,
) -> Result<Vec<(Ratio<i64>, usize)>, Error> {
    let rf: Vec<RatFunc> = coeffs.iter().map(RatFunc::from_poly).collect();
    newton_polygon(&rf, place)
}
