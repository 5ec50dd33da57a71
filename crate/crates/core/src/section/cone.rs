use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::dd::{dual_cone_rays, orthant_section, DdConfig};
use super::subspace::SubspaceBasis;
use super::SectionError;
use crate::arith::{dot, field_rank, int_rref, integer_direction, make_primitive, IntMatrix, Matrix, Rational};
use crate::automata::BehaviorMatrix;

/// Extreme rays of a cone, primitive and in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeGenerators {
    rays: Vec<Vec<BigInt>>,
}

impl ConeGenerators {
    /// Normalizes, dedupes and sorts. Zero vectors are dropped.
    pub fn new(rays: Vec<Vec<BigInt>>) -> Self {
        let set: BTreeSet<Vec<BigInt>> = rays
            .into_iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .map(|mut r| {
                make_primitive(&mut r);
                r
            })
            .collect();
        ConeGenerators { rays: set.into_iter().collect() }
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn span_rank(&self) -> usize {
        if self.rays.is_empty() {
            return 0;
        }
        let cols = self.rays[0].len();
        let m = Matrix::from_rows(self.rays.clone(), cols);
        crate::arith::int_rank(&m)
    }
}

/// Rows `b` asserting `b . (1, q) >= 0`, primitive and lexicographically sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetSystem {
    rows: Vec<Vec<BigInt>>,
}

impl FacetSystem {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Self {
        let set: BTreeSet<Vec<BigInt>> = rows
            .into_iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .map(|mut r| {
                make_primitive(&mut r);
                r
            })
            .collect();
        FacetSystem { rows: set.into_iter().collect() }
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, y: &[BigInt]) -> bool {
        self.rows.iter().all(|r| !dot(r, y).is_negative())
    }
}

/// Counts reported alongside the section rays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SectionStats {
    pub ka_rank: usize,
    /// Extreme rays of `{r >= 0 : K A r = 0}`.
    pub d_rays: usize,
    /// Distinct images `A r` before pruning.
    pub images: usize,
}

/// Extreme rays of `{A r : r >= 0, K A r = 0}`.
pub fn section_rays(
    a: &BehaviorMatrix,
    k: &IntMatrix,
    basis: &SubspaceBasis,
    cfg: &DdConfig,
) -> Result<ConeGenerators, SectionError> {
    section_rays_with_stats(a, k, basis, cfg).map(|(g, _)| g)
}

pub fn section_rays_with_stats(
    a: &BehaviorMatrix,
    k: &IntMatrix,
    basis: &SubspaceBasis,
    cfg: &DdConfig,
) -> Result<(ConeGenerators, SectionStats), SectionError> {
    let a_int = a.to_int();
    let ka = k * &a_int;
    let (eqs, pivots) = int_rref(ka.to_rows(), ka.cols());
    let d = orthant_section(a.cols(), &eqs, cfg)?;
    let images = ConeGenerators::new(d.iter().map(|r| a_int.mul_vec(r)).collect());
    let stats = SectionStats {
        ka_rank: pivots.len(),
        d_rays: d.len(),
        images: images.len(),
    };
    let pruned = prune_to_extreme(&images, basis, cfg)?;
    Ok((pruned, stats))
}

fn chart_rays(g: &ConeGenerators, basis: &SubspaceBasis) -> Result<Vec<Vec<BigInt>>, SectionError> {
    g.rays()
        .iter()
        .enumerate()
        .map(|(i, y)| {
            basis
                .chart(y)
                .map(|c| integer_direction(&c))
                .ok_or(SectionError::RayOutsideSubspace { index: i })
        })
        .collect()
}

/// Chart facets of the cone generated by `g` (rows of length `basis.dim()`).
fn chart_facets(g: &ConeGenerators, basis: &SubspaceBasis, cfg: &DdConfig) -> Result<Vec<Vec<BigInt>>, SectionError> {
    let chart = chart_rays(g, basis)?;
    Ok(dual_cone_rays(&chart, basis.dim(), cfg)?)
}

/// Drops generators that are not extreme: a ray of a `d`-dimensional cone is
/// extreme iff the facets tight on it have rank `d - 1`.
fn prune_to_extreme(
    g: &ConeGenerators,
    basis: &SubspaceBasis,
    cfg: &DdConfig,
) -> Result<ConeGenerators, SectionError> {
    let facets = chart_facets(g, basis, cfg)?;
    let chart = chart_rays(g, basis)?;
    let d = basis.dim();
    let keep = g
        .rays()
        .iter()
        .zip(&chart)
        .filter(|(_, c)| {
            let tight: Vec<Vec<Rational>> = facets
                .iter()
                .filter(|f| dot(f, c).is_zero())
                .map(|f| f.iter().map(|x| Rational::from_integer(x.clone())).collect())
                .collect();
            tight.len() >= d - 1 && field_rank(&Matrix::from_rows(tight, d)) == d - 1
        })
        .map(|(y, _)| y.clone())
        .collect();
    Ok(ConeGenerators::new(keep))
}

/// H-representation of the cone generated by `g`: the lifted facets of the
/// 10-dimensional section plus `±k` for every row of `K`, so that
/// `{y : B' y >= 0}` is exactly the cone.
pub fn rays_to_facets(
    g: &ConeGenerators,
    basis: &SubspaceBasis,
    k: &IntMatrix,
    cfg: &DdConfig,
) -> Result<FacetSystem, SectionError> {
    let facets = chart_facets(g, basis, cfg)?;
    let mut rows: Vec<Vec<BigInt>> = facets.iter().map(|f| basis.lift_functional(f)).collect();
    for row in k.row_iter() {
        rows.push(row.to_vec());
        rows.push(row.iter().map(|x| -x).collect());
    }
    Ok(FacetSystem::new(rows))
}

/// Generators of `{y : B' y >= 0}`, computed in the chart of `basis`.
pub fn facets_to_rays(
    f: &FacetSystem,
    basis: &SubspaceBasis,
    cfg: &DdConfig,
) -> Result<ConeGenerators, SectionError> {
    let chart: Vec<Vec<BigInt>> = f
        .rows()
        .iter()
        .map(|r| basis.restrict_functional(r))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let rays = dual_cone_rays(&chart, basis.dim(), cfg)?;
    Ok(ConeGenerators::new(
        rays.iter()
            .map(|c| {
                let c: Vec<Rational> = c.iter().map(|x| Rational::from_integer(x.clone())).collect();
                integer_direction(&basis.embed(&c))
            })
            .collect(),
    ))
}

/// Whether `(1, q)` satisfies every row of `f`.
pub fn membership(q: &[Rational], f: &FacetSystem) -> bool {
    f.rows().iter().all(|row| {
        let mut acc = Rational::from_integer(row[0].clone());
        for (b, x) in row[1..].iter().zip(q) {
            if !b.is_zero() {
                acc += x * Rational::from_integer(b.clone());
            }
        }
        !acc.is_negative()
    })
}
