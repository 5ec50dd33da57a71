//! Exact double description for pointed polyhedral cones.
//!
//! Rays are integer vectors kept primitive. Each ray carries the set of
//! inserted inequalities it satisfies with equality; two rays are adjacent
//! when the constraints tight on both have rank `dim - 2`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{bareiss_echelon, dot, field_inverse, field_rank, integer_direction, make_primitive, Matrix, Rational};

/// Order in which pending constraints are inserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InsertionOrder {
    /// Input order.
    Natural,
    /// Next constraint is the one cutting the fewest current rays (ties by index).
    MinCutoff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdConfig {
    /// Abort once the working ray set exceeds this many rays.
    pub ray_cap: usize,
    pub order: InsertionOrder,
}

impl Default for DdConfig {
    fn default() -> Self {
        DdConfig {
            ray_cap: 1_000_000,
            order: InsertionOrder::MinCutoff,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DdError {
    #[error("double description exceeded the ray cap of {cap} ({reached} rays after {inserted} insertions)")]
    Overflow { cap: usize, reached: usize, inserted: usize },
    #[error("generators span dimension {rank}, expected {dim}")]
    NotFullDimensional { rank: usize, dim: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(bits: usize) -> Self {
        BitSet(vec![0; bits.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        let word = i / 64;
        if word >= self.0.len() {
            self.0.resize(word + 1, 0);
        }
        self.0[word] |= 1 << (i % 64);
    }

    fn intersection(&self, other: &Self) -> Self {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

#[derive(Clone, Debug)]
struct Ray {
    coords: Vec<BigInt>,
    zeros: BitSet,
}

#[derive(Clone, Debug)]
enum Constraint {
    Inequality(Vec<BigInt>),
    Equality(Vec<BigInt>),
}

impl Constraint {
    fn row(&self) -> &[BigInt] {
        match self {
            Constraint::Inequality(r) | Constraint::Equality(r) => r,
        }
    }
}

struct DdState {
    dim: usize,
    inequalities: Vec<Vec<BigInt>>,
    /// Coordinate `k` when inequality `i` is the unit row `x_k >= 0`.
    unit: Vec<Option<usize>>,
    equalities: Vec<Vec<BigInt>>,
    rays: Vec<Ray>,
    cfg: DdConfig,
}

fn unit_coordinate(row: &[BigInt]) -> Option<usize> {
    let mut nz = row.iter().enumerate().filter(|(_, x)| !x.is_zero());
    match (nz.next(), nz.next()) {
        (Some((k, x)), None) if x.is_positive() => Some(k),
        _ => None,
    }
}

impl DdState {
    fn check_cap(&self) -> Result<(), DdError> {
        if self.rays.len() > self.cfg.ray_cap {
            return Err(DdError::Overflow {
                cap: self.cfg.ray_cap,
                reached: self.rays.len(),
                inserted: self.inequalities.len() + self.equalities.len(),
            });
        }
        Ok(())
    }

    /// Algebraic adjacency: rank of the constraints tight on both rays must
    /// be `dim - 2`. Tight unit rows pin coordinates to zero and are removed
    /// by column deletion before the rank computation.
    fn adjacent(&self, common: &BitSet) -> bool {
        let target = self.dim - 2;
        let mut fixed = vec![false; self.dim];
        let mut others = Vec::new();
        let mut n_fixed = 0;
        for i in common.iter() {
            match self.unit[i] {
                Some(k) if !fixed[k] => {
                    fixed[k] = true;
                    n_fixed += 1;
                }
                Some(_) => {}
                None => others.push(i),
            }
        }
        if n_fixed + others.len() + self.equalities.len() < target {
            return false;
        }
        let need = target - n_fixed;
        if need == 0 {
            return true;
        }
        let free: Vec<usize> = (0..self.dim).filter(|&k| !fixed[k]).collect();
        let rows: Vec<Vec<BigInt>> = others
            .iter()
            .map(|&i| &self.inequalities[i])
            .chain(self.equalities.iter())
            .map(|row| free.iter().map(|&k| row[k].clone()).collect::<Vec<_>>())
            .filter(|r: &Vec<BigInt>| r.iter().any(|x| !x.is_zero()))
            .collect();
        if rows.len() < need {
            return false;
        }
        bareiss_echelon(rows, free.len()).1.len() == need
    }

    fn insert(&mut self, c: Constraint) -> Result<(), DdError> {
        let row = c.row().to_vec();
        let values: Vec<BigInt> = self.rays.par_iter().map(|r| dot(&row, &r.coords)).collect();
        let new_index = self.inequalities.len();
        let is_ineq = matches!(c, Constraint::Inequality(_));

        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut kept = Vec::new();
        for (i, v) in values.iter().enumerate() {
            if v.is_zero() {
                let mut r = self.rays[i].clone();
                if is_ineq {
                    r.zeros.insert(new_index);
                }
                kept.push(r);
            } else if v.is_positive() {
                pos.push(i);
            } else {
                neg.push(i);
            }
        }

        let combos: Vec<Ray> = pos
            .par_iter()
            .flat_map_iter(|&p| {
                let values = &values;
                let this = &*self;
                neg.iter().filter_map(move |&n| {
                    let (rp, rn) = (&this.rays[p], &this.rays[n]);
                    let common = rp.zeros.intersection(&rn.zeros);
                    if !this.adjacent(&common) {
                        return None;
                    }
                    let (vp, vn) = (&values[p], &values[n]);
                    let mut coords: Vec<BigInt> = rp
                        .coords
                        .iter()
                        .zip(&rn.coords)
                        .map(|(a, b)| vp * b - vn * a)
                        .collect();
                    make_primitive(&mut coords);
                    let mut zeros = common;
                    if is_ineq {
                        zeros.insert(new_index);
                    }
                    Some(Ray { coords, zeros })
                })
            })
            .collect();

        let mut next = Vec::with_capacity(kept.len() + combos.len() + pos.len());
        if is_ineq {
            next.extend(pos.iter().map(|&i| self.rays[i].clone()));
        }
        next.extend(kept);
        next.extend(combos);
        self.rays = next;
        match c {
            Constraint::Inequality(r) => {
                self.unit.push(unit_coordinate(&r));
                self.inequalities.push(r);
            }
            Constraint::Equality(r) => self.equalities.push(r),
        }
        self.check_cap()
    }

    fn run(&mut self, mut pending: Vec<Constraint>) -> Result<(), DdError> {
        while !pending.is_empty() {
            let next = match self.cfg.order {
                InsertionOrder::Natural => 0,
                InsertionOrder::MinCutoff => {
                    let scores: Vec<usize> = pending
                        .par_iter()
                        .map(|c| {
                            let row = c.row();
                            self.rays
                                .iter()
                                .filter(|r| {
                                    let v = dot(row, &r.coords);
                                    match c {
                                        Constraint::Inequality(_) => v.is_negative(),
                                        Constraint::Equality(_) => !v.is_zero(),
                                    }
                                })
                                .count()
                        })
                        .collect();
                    (0..pending.len()).min_by_key(|&i| (scores[i], i)).expect("nonempty")
                }
            };
            let c = pending.remove(next);
            self.insert(c)?;
        }
        Ok(())
    }

    fn into_sorted_rays(self) -> Vec<Vec<BigInt>> {
        let mut out: Vec<Vec<BigInt>> = self.rays.into_iter().map(|r| r.coords).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Extreme rays of `{x >= 0 : E x = 0}` in `dim` coordinates.
pub fn orthant_section(
    dim: usize,
    equalities: &[Vec<BigInt>],
    cfg: &DdConfig,
) -> Result<Vec<Vec<BigInt>>, DdError> {
    let mut inequalities = Vec::with_capacity(dim);
    let mut rays = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut e = vec![BigInt::zero(); dim];
        e[k] = BigInt::from(1);
        let mut zeros = BitSet::new(dim);
        for i in (0..dim).filter(|&i| i != k) {
            zeros.insert(i);
        }
        inequalities.push(e.clone());
        rays.push(Ray { coords: e, zeros });
    }
    let mut state = DdState {
        dim,
        unit: (0..dim).map(Some).collect(),
        inequalities,
        equalities: Vec::new(),
        rays,
        cfg: *cfg,
    };
    state.check_cap()?;
    let pending = equalities
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .map(Constraint::Equality)
        .collect();
    state.run(pending)?;
    Ok(state.into_sorted_rays())
}

/// Extreme rays of the dual cone `{f : g . f >= 0 for every g in gens}`.
/// The generators must span all `dim` coordinates so the dual is pointed.
pub fn dual_cone_rays(
    gens: &[Vec<BigInt>],
    dim: usize,
    cfg: &DdConfig,
) -> Result<Vec<Vec<BigInt>>, DdError> {
    let as_rat = |v: &Vec<BigInt>| v.iter().map(|x| Rational::from_integer(x.clone())).collect::<Vec<_>>();
    // greedy basis in input order
    let mut basis: Vec<usize> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let mut rows: Vec<Vec<Rational>> = basis.iter().map(|&b| as_rat(&gens[b])).collect();
        rows.push(as_rat(g));
        if field_rank(&Matrix::from_rows(rows, dim)) == basis.len() + 1 {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    if basis.len() < dim {
        return Err(DdError::NotFullDimensional { rank: basis.len(), dim });
    }
    let g = Matrix::from_rows(basis.iter().map(|&b| as_rat(&gens[b])).collect(), dim);
    let inv = field_inverse(&g).expect("basis rows are independent");
    let rays = (0..dim)
        .map(|i| {
            let coords = integer_direction(&inv.column(i));
            let mut zeros = BitSet::new(dim);
            for j in (0..dim).filter(|&j| j != i) {
                zeros.insert(j);
            }
            Ray { coords, zeros }
        })
        .collect();
    let inequalities: Vec<Vec<BigInt>> = basis.iter().map(|&b| gens[b].clone()).collect();
    let mut state = DdState {
        dim,
        unit: inequalities.iter().map(|r| unit_coordinate(r)).collect(),
        inequalities,
        equalities: Vec::new(),
        rays,
        cfg: *cfg,
    };
    state.check_cap()?;
    let pending = gens
        .iter()
        .enumerate()
        .filter(|(i, _)| !basis.contains(i))
        .map(|(_, g)| Constraint::Inequality(g.clone()))
        .collect();
    state.run(pending)?;
    Ok(state.into_sorted_rays())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn orthant_with_one_equation() {
        // {x >= 0 : x0 + x1 - x2 - x3 = 0} has rays e0+e2, e0+e3, e1+e2, e1+e3
        let rays = orthant_section(4, &[v(&[1, 1, -1, -1])], &DdConfig::default()).unwrap();
        assert_eq!(
            rays,
            vec![v(&[0, 1, 0, 1]), v(&[0, 1, 1, 0]), v(&[1, 0, 0, 1]), v(&[1, 0, 1, 0])]
        );
    }

    #[test]
    fn square_cone_facets() {
        // cone over a square: rays (1, ±1, ±1) -> four facets (1, ±1, 0), (1, 0, ±1)
        let gens = vec![v(&[1, 1, 1]), v(&[1, 1, -1]), v(&[1, -1, 1]), v(&[1, -1, -1])];
        for order in [InsertionOrder::Natural, InsertionOrder::MinCutoff] {
            let cfg = DdConfig { ray_cap: 100, order };
            let facets = dual_cone_rays(&gens, 3, &cfg).unwrap();
            assert_eq!(
                facets,
                vec![v(&[1, -1, 0]), v(&[1, 0, -1]), v(&[1, 0, 1]), v(&[1, 1, 0])]
            );
            let back = dual_cone_rays(&facets, 3, &cfg).unwrap();
            let mut expected = gens.clone();
            expected.sort();
            assert_eq!(back, expected);
        }
    }

    #[test]
    fn redundant_generator_is_dropped() {
        // (1,0,0) lies inside the square cone; facets are unchanged
        let gens = vec![v(&[1, 0, 0]), v(&[1, 1, 1]), v(&[1, 1, -1]), v(&[1, -1, 1]), v(&[1, -1, -1])];
        let facets = dual_cone_rays(&gens, 3, &DdConfig::default()).unwrap();
        assert_eq!(facets.len(), 4);
    }

    #[test]
    fn cap_is_enforced() {
        let err = orthant_section(4, &[v(&[1, 1, -1, -1])], &DdConfig { ray_cap: 1, order: InsertionOrder::Natural });
        assert!(matches!(err, Err(DdError::Overflow { cap: 1, .. })));
    }

    #[test]
    fn lower_dimensional_generators_are_rejected() {
        let gens = vec![v(&[1, 0, 0]), v(&[0, 1, 0])];
        assert_eq!(
            dual_cone_rays(&gens, 3, &DdConfig::default()),
            Err(DdError::NotFullDimensional { rank: 2, dim: 3 })
        );
    }
}
