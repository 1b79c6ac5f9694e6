//! Pareto dominance (maximisation) and the hypervolume indicator.

use std::cmp::Ordering;

use rand::Rng;

use crate::error::{Error, Result};

/// Lower corner of the measured region.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePoint(pub Vec<f64>);

impl ReferencePoint {
    /// The all-zeros point in `m` dimensions.
    pub fn origin(m: usize) -> Self {
        Self(vec![0.0; m])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Mutually non-dominated, duplicate-free points.
#[derive(Debug, Clone, PartialEq)]
pub struct Front {
    pub points: Vec<Vec<f64>>,
}

impl Front {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[inline]
fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return false;
        }
        if x > y {
            strict = true;
        }
    }
    strict
}

/// `a` is at least as good as `b` everywhere and strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(dominates_unchecked(a, b))
}

fn common_dim<P: AsRef<[f64]>>(points: &[P], expected: Option<usize>) -> Result<Option<usize>> {
    let mut dim = expected;
    for p in points {
        let len = p.as_ref().len();
        match dim {
            None => dim = Some(len),
            Some(d) if d != len => {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: len,
                })
            }
            _ => {}
        }
    }
    Ok(dim)
}

/// Points of `points` not dominated by any other, duplicates collapsed.
/// Output order follows first occurrence in the input.
pub fn nondominated_filter<P: AsRef<[f64]>>(points: &[P]) -> Result<Front> {
    common_dim(points, None)?;
    Ok(Front {
        points: filter_unchecked(points.iter().map(|p| p.as_ref())),
    })
}

fn filter_unchecked<'a>(points: impl Iterator<Item = &'a [f64]> + Clone) -> Vec<Vec<f64>> {
    let all: Vec<&[f64]> = points.collect();
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for (i, p) in all.iter().enumerate() {
        let dominated = all.iter().any(|q| dominates_unchecked(q, p));
        let repeated = all[..i].iter().any(|q| q == p);
        if !dominated && !repeated {
            kept.push(p.to_vec());
        }
    }
    kept
}

fn check_reference<P: AsRef<[f64]>>(points: &[P], reference: &ReferencePoint) -> Result<()> {
    common_dim(points, Some(reference.dim()))?;
    for p in points {
        for (objective, (&value, &r)) in p.as_ref().iter().zip(&reference.0).enumerate() {
            if value < r || value.is_nan() {
                return Err(Error::PointBelowReference {
                    objective,
                    value,
                    reference: r,
                });
            }
        }
    }
    Ok(())
}

/// Lebesgue measure of the union of boxes `[reference, p]`.
///
/// Dimension sweep: slice along the last objective and recurse on the
/// remaining ones, with a closed-form sweep in two dimensions.
pub fn hypervolume<P: AsRef<[f64]>>(points: &[P], reference: &ReferencePoint) -> Result<f64> {
    check_reference(points, reference)?;
    let pts: Vec<&[f64]> = points.iter().map(|p| p.as_ref()).collect();
    Ok(sweep(pts, &reference.0, 2))
}

/// The same measure with the recursion carried down to one dimension.
/// Slower; kept as a second route for cross-checking the 2-D base case.
pub fn hypervolume_full_recursion<P: AsRef<[f64]>>(
    points: &[P],
    reference: &ReferencePoint,
) -> Result<f64> {
    check_reference(points, reference)?;
    let pts: Vec<&[f64]> = points.iter().map(|p| p.as_ref()).collect();
    Ok(sweep(pts, &reference.0, 1))
}

/// Closed-form two-dimensional hypervolume: after sorting by the first
/// objective (descending), `sum (x_i - x_{i+1}) * (y_max_i - ref_y)`.
pub fn hypervolume_2d<P: AsRef<[f64]>>(points: &[P], reference: &ReferencePoint) -> Result<f64> {
    if reference.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: reference.dim(),
        });
    }
    check_reference(points, reference)?;
    let pts: Vec<&[f64]> = points.iter().map(|p| p.as_ref()).collect();
    Ok(area_2d(pts, &reference.0))
}

fn area_2d(mut pts: Vec<&[f64]>, reference: &[f64]) -> f64 {
    pts.sort_unstable_by(|a, b| b[0].partial_cmp(&a[0]).unwrap_or(Ordering::Equal));
    let mut height = reference[1];
    let mut area = 0.0;
    for (i, p) in pts.iter().enumerate() {
        height = height.max(p[1]);
        let next_x = pts.get(i + 1).map_or(reference[0], |q| q[0]);
        area += (p[0] - next_x) * (height - reference[1]);
    }
    area
}

fn sweep(mut pts: Vec<&[f64]>, reference: &[f64], base_dim: usize) -> f64 {
    let d = reference.len();
    if pts.is_empty() || d == 0 {
        return 0.0;
    }
    if d == 1 {
        let top = pts.iter().map(|p| p[0]).fold(reference[0], f64::max);
        return top - reference[0];
    }
    if d == 2 && base_dim == 2 {
        return area_2d(pts, reference);
    }
    let last = d - 1;
    pts.sort_unstable_by(|a, b| b[last].partial_cmp(&a[last]).unwrap_or(Ordering::Equal));
    let lower_ref = &reference[..last];
    let mut slice: Vec<&[f64]> = Vec::with_capacity(pts.len());
    let mut volume = 0.0;
    for (i, p) in pts.iter().enumerate() {
        let projected = &p[..last];
        // a point weakly dominated in the projection adds nothing to the slice
        if !slice
            .iter()
            .any(|q| q.iter().zip(projected).all(|(a, b)| a >= b))
        {
            slice.retain(|q| !q.iter().zip(projected).all(|(a, b)| b >= a));
            slice.push(projected);
        }
        let next = pts.get(i + 1).map_or(reference[last], |q| q[last]);
        let height = p[last] - next;
        if height > 0.0 {
            volume += height * sweep(slice.clone(), lower_ref, base_dim);
        }
    }
    volume
}

/// Monte-Carlo estimate of the hypervolume and its binomial standard error,
/// sampling uniformly in the box spanned by `reference` and the coordinate-wise
/// maximum of `points`.
pub fn hypervolume_mc<P: AsRef<[f64]>, R: Rng + ?Sized>(
    points: &[P],
    reference: &ReferencePoint,
    sample_count: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    check_reference(points, reference)?;
    if points.is_empty() || sample_count == 0 {
        return Ok((0.0, 0.0));
    }
    let d = reference.dim();
    let upper: Vec<f64> = (0..d)
        .map(|j| {
            points
                .iter()
                .map(|p| p.as_ref()[j])
                .fold(reference.0[j], f64::max)
        })
        .collect();
    let widths: Vec<f64> = upper.iter().zip(&reference.0).map(|(u, r)| u - r).collect();
    let volume: f64 = widths.iter().product();
    if volume == 0.0 {
        return Ok((0.0, 0.0));
    }
    let mut sample = vec![0.0; d];
    let mut hits = 0usize;
    for _ in 0..sample_count {
        for ((s, w), r) in sample.iter_mut().zip(&widths).zip(&reference.0) {
            *s = r + w * rng.random::<f64>();
        }
        if points
            .iter()
            .any(|p| p.as_ref().iter().zip(&sample).all(|(a, b)| a >= b))
        {
            hits += 1;
        }
    }
    let n = sample_count as f64;
    let frac = hits as f64 / n;
    Ok((volume * frac, volume * (frac * (1.0 - frac) / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomStream;

    #[test]
    fn dominance_examples() {
        assert!(dominates(&[0.6, 0.5], &[0.5, 0.5]).unwrap());
        assert!(!dominates(&[0.5, 0.5], &[0.5, 0.5]).unwrap());
        assert!(!dominates(&[0.6, 0.4], &[0.5, 0.5]).unwrap());
        assert!(!dominates(&[0.5, 0.5], &[0.6, 0.4]).unwrap());
        assert!(matches!(
            dominates(&[0.1], &[0.1, 0.2]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn filter_examples() {
        let pts = vec![vec![0.2, 0.8], vec![0.8, 0.2], vec![0.1, 0.1]];
        let f = nondominated_filter(&pts).unwrap();
        assert_eq!(f.points, vec![vec![0.2, 0.8], vec![0.8, 0.2]]);
        // (0.3, 0.3) beats each extreme point in one objective, so it stays
        let pts = vec![vec![0.2, 0.8], vec![0.8, 0.2], vec![0.3, 0.3]];
        assert_eq!(nondominated_filter(&pts).unwrap().points, pts);
        let single = vec![vec![0.4, 0.1, 0.9]];
        assert_eq!(nondominated_filter(&single).unwrap().points, single);
        let dup = vec![vec![0.5, 0.5], vec![0.5, 0.5]];
        assert_eq!(nondominated_filter(&dup).unwrap().len(), 1);
        let ragged = vec![vec![0.5, 0.5], vec![0.5]];
        assert!(nondominated_filter(&ragged).is_err());
    }

    #[test]
    fn hypervolume_examples() {
        let r = ReferencePoint::origin(2);
        assert_eq!(hypervolume(&[vec![0.5, 0.5]], &r).unwrap(), 0.25);
        assert_eq!(hypervolume(&[vec![1.0, 0.5], vec![0.5, 1.0]], &r).unwrap(), 0.75);
        assert_eq!(hypervolume::<Vec<f64>>(&[], &r).unwrap(), 0.0);
        assert_eq!(
            hypervolume_full_recursion(&[vec![1.0, 0.5], vec![0.5, 1.0]], &r).unwrap(),
            0.75
        );
        let r3 = ReferencePoint::origin(3);
        // two unit-ish boxes overlapping in a 0.5^3 cube
        let pts = [vec![1.0, 0.5, 0.5], vec![0.5, 1.0, 1.0]];
        assert!((hypervolume(&pts, &r3).unwrap() - (0.25 + 0.5 - 0.125)).abs() < 1e-15);
    }

    #[test]
    fn hypervolume_errors() {
        let r = ReferencePoint::origin(2);
        assert!(matches!(
            hypervolume(&[vec![0.5, -0.1]], &r),
            Err(Error::PointBelowReference { objective: 1, .. })
        ));
        assert!(matches!(
            hypervolume(&[vec![0.5, 0.1, 0.2]], &r),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn monte_carlo_trivial_cases() {
        let mut rng = RandomStream::from_seed(0);
        let r = ReferencePoint::origin(2);
        assert_eq!(hypervolume_mc::<Vec<f64>, _>(&[], &r, 1000, &mut rng).unwrap(), (0.0, 0.0));
        assert_eq!(
            hypervolume_mc(&[vec![1.0, 1.0]], &r, 1000, &mut rng).unwrap(),
            (1.0, 0.0)
        );
    }

    #[test]
    fn monte_carlo_single_box() {
        let mut rng = RandomStream::from_seed(42);
        let r = ReferencePoint::origin(2);
        let pts = [vec![0.5, 0.5]];
        let (est, se) = hypervolume_mc(&pts, &r, 1_000_000, &mut rng).unwrap();
        // the box equals the bounding box, so every sample hits
        assert_eq!((est, se), (0.25, 0.0));
        let pts = [vec![0.5, 0.5], vec![1.0, 0.1]];
        let (est, se) = hypervolume_mc(&pts, &r, 1_000_000, &mut rng).unwrap();
        let exact = hypervolume(&pts, &r).unwrap();
        assert!(se > 0.0);
        assert!((est - exact).abs() <= 3.0 * se, "{est} vs {exact} (se {se})");
    }
}
