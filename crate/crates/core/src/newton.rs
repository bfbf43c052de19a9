//! Lower convex hulls of valuation points (dual Newton polygons).

use num_rational::Rational64;

/// A vertex `(i, v)` of a lower hull.
pub type Vertex = (i64, Rational64);

/// Lower convex hull of `points`, sorted by abscissa. Collinear interior
/// points are dropped; for repeated abscissae the lowest ordinate is kept.
pub fn lower_hull(points: &[Vertex]) -> Vec<Vertex> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup_by(|b, a| a.0 == b.0);
    let mut hull: Vec<Vertex> = Vec::with_capacity(pts.len());
    for pt in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // Drop b unless it lies strictly below the segment a–pt.
            let lhs = (b.1 - a.1) * Rational64::from_integer(pt.0 - a.0);
            let rhs = (pt.1 - a.1) * Rational64::from_integer(b.0 - a.0);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull
}

/// Slopes of consecutive hull segments.
pub fn slopes(hull: &[Vertex]) -> Vec<Rational64> {
    hull.windows(2)
        .map(|w| (w[1].1 - w[0].1) / Rational64::from_integer(w[1].0 - w[0].0))
        .collect()
}

/// Slope of the first segment, `None` for a single vertex.
pub fn first_slope(hull: &[Vertex]) -> Option<Rational64> {
    slopes(hull).first().copied()
}
