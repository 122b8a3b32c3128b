use rayon::prelude::*;

use super::{chain_links, combine, permutation_corners, triangle_slack, BistochasticMatrix, PermutationMatrix, PolytopePoint};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Corners of the equilateral triangle whose unistochastic subset is bounded
/// by a deltoid: the even permutations `P_0, P_3, P_4`, with the all-`1/3`
/// matrix at the centroid.
pub const HYPOCYCLOID_TRIANGLE: [usize; 3] = [0, 3, 4];

/// Integer compositions of `resolution` into `parts` nonnegative parts, in
/// lexicographic order. Dividing by `resolution` gives the barycentric grid.
pub fn simplex_grid(parts: usize, resolution: usize) -> Vec<Vec<usize>> {
    fn fill(rest: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=rest {
            prefix.push(k);
            fill(rest - k, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        fill(resolution, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// One grid point of a corner patch of `B_3`.
#[derive(Clone, Debug)]
pub struct SurfaceSample<T> {
    /// Barycentric coordinates over the chosen corners, in the order given.
    pub point: PolytopePoint<T>,
    pub matrix: BistochasticMatrix<T>,
    pub det: T,
    /// Triangle slack of the chain links; nonnegative iff unistochastic.
    pub slack: T,
    pub unistochastic: bool,
    /// `|det| < 0.5 / resolution`.
    pub near_degenerate: bool,
}

fn patch_corners(subset: &[usize], max: usize) -> Result<Vec<PermutationMatrix>> {
    if subset.is_empty() || subset.len() > max {
        return Err(Error::InvalidCornerSubset(format!("{} corners, expected 1 to {max}", subset.len())));
    }
    let all = permutation_corners(3)?;
    let mut out = Vec::with_capacity(subset.len());
    for (i, &k) in subset.iter().enumerate() {
        if k >= all.len() {
            return Err(Error::InvalidCornerSubset(format!("corner {k} out of range 0..6")));
        }
        if subset[..i].contains(&k) {
            return Err(Error::InvalidCornerSubset(format!("corner {k} repeated")));
        }
        out.push(all[k].clone());
    }
    Ok(out)
}

fn grid_points<T: Scalar>(parts: usize, resolution: usize) -> Vec<PolytopePoint<T>> {
    let r = T::from_usize(resolution).expect("resolution fits");
    simplex_grid(parts, resolution)
        .into_iter()
        .map(|c| {
            let p = c.iter().map(|&k| T::from_usize(k).expect("fits") / r).collect();
            PolytopePoint::new(p).expect("grid point on the simplex")
        })
        .collect()
}

/// Grids the simplex spanned by up to four corners of `B_3` (indices into
/// [`permutation_corners`]`(3)`) and evaluates `det`, the triangle test and
/// the near-degeneracy flag at every point. Output is in grid order.
pub fn sample_degenerate_surface<T: Scalar>(subset: &[usize], resolution: usize) -> Result<Vec<SurfaceSample<T>>> {
    let corners = patch_corners(subset, 4)?;
    if resolution < 2 {
        return Err(Error::InvalidResolution { resolution, min: 2 });
    }
    let delta = T::lit(0.5) / T::from_usize(resolution).expect("fits");
    grid_points::<T>(corners.len(), resolution)
        .into_par_iter()
        .map(|point| {
            let matrix = combine(&point, &corners)?;
            let det = matrix.det();
            let slack = triangle_slack(chain_links(&matrix)?);
            Ok(SurfaceSample {
                point,
                matrix,
                det,
                slack,
                unistochastic: slack >= -T::EPS_SUM,
                near_degenerate: det.abs() < delta,
            })
        })
        .collect()
}

/// Grid points that are both near-degenerate and unistochastic.
pub fn unistochastic_degenerate_intersection<T: Scalar>(
    subset: &[usize],
    resolution: usize,
) -> Result<Vec<SurfaceSample<T>>> {
    Ok(sample_degenerate_surface(subset, resolution)?
        .into_iter()
        .filter(|s| s.near_degenerate && s.unistochastic)
        .collect())
}

/// Grid points of the triangle spanned by three corners where the chain-link
/// triangle closes flat, `|slack| <= 2 / resolution`.
pub fn equality_locus<T: Scalar>(triangle: [usize; 3], resolution: usize) -> Result<Vec<PolytopePoint<T>>> {
    let corners = patch_corners(&triangle, 3)?;
    if resolution < 3 {
        return Err(Error::InvalidResolution { resolution, min: 3 });
    }
    let band = T::lit(2.0) / T::from_usize(resolution).expect("fits");
    let flags: Vec<bool> = grid_points::<T>(3, resolution)
        .par_iter()
        .map(|p| -> Result<bool> {
            let mu = combine(p, &corners)?;
            Ok(triangle_slack(chain_links(&mu)?).abs() <= band)
        })
        .collect::<Result<_>>()?;
    Ok(grid_points::<T>(3, resolution).into_iter().zip(flags).filter_map(|(p, keep)| keep.then_some(p)).collect())
}

/// The deltoid bounding the unistochastic part of [`HYPOCYCLOID_TRIANGLE`].
pub fn hypocycloid_boundary<T: Scalar>(resolution: usize) -> Result<Vec<PolytopePoint<T>>> {
    equality_locus(HYPOCYCLOID_TRIANGLE, resolution)
}

/// Position in the plane of an equilateral triangle with unit sides, corners
/// at `(0, 0)`, `(1, 0)`, `(1/2, sqrt 3 / 2)`.
pub fn planar_embedding<T: Scalar>(p: &PolytopePoint<T>) -> (T, T) {
    let c = p.coefficients();
    let half = T::lit(0.5);
    (c[1] + half * c[2], T::lit(3f64.sqrt() / 2.0) * c[2])
}

/// The `count` points of a three-corner locus farthest from the centroid,
/// chosen greedily so that no two lie within `pi / count` of each other in
/// angle around the centroid.
pub fn locus_cusps<T: Scalar>(locus: &[PolytopePoint<T>], count: usize) -> Vec<PolytopePoint<T>> {
    let third = T::one() / T::lit(3.0);
    let (cx, cy) = planar_embedding(&PolytopePoint { coefficients: vec![third; 3] });
    let mut polar: Vec<(T, T, &PolytopePoint<T>)> = locus
        .iter()
        .filter(|p| p.len() == 3)
        .map(|p| {
            let (x, y) = planar_embedding(p);
            let (dx, dy) = (x - cx, y - cy);
            (dx.hypot(dy), dy.atan2(dx), p)
        })
        .collect();
    polar.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite radii"));
    let gap = T::PI() / T::from_usize(count.max(1)).expect("fits");
    let mut picked: Vec<(T, &PolytopePoint<T>)> = Vec::with_capacity(count);
    for (_, angle, p) in polar {
        if picked.len() == count {
            break;
        }
        let clear = picked.iter().all(|&(a, _)| {
            let d = (angle - a).abs();
            d.min(T::TAU() - d) >= gap
        });
        if clear {
            picked.push((angle, p));
        }
    }
    picked.into_iter().map(|(_, p)| p.clone()).collect()
}
