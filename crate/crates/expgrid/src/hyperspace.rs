//! Size-bounded point sets, Vietoris basic neighborhoods, and the exact
//! squared Hausdorff distance between them.
//!
//! A `KSet` is an element of the hyperspace of at-most-`k`-point subsets of
//! the ambient space. Neighborhood membership and Hausdorff distance are the
//! two faces of the same topology; their compatibility is a tested property.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::geometry::{closure_eps, d2_coords, dist2, GridSpace, Point, PointId, Resolution};
use crate::scalar::Rat;

/// A nonempty set of at most `bound` points, kept sorted for value equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KSet {
    elems: Vec<Point>,
    bound: usize,
}

impl KSet {
    pub fn new(mut elems: Vec<Point>, bound: usize) -> Result<Self> {
        if bound == 0 {
            return Err(Error::Invalid("cardinality bound must be positive".into()));
        }
        if elems.is_empty() {
            return Err(Error::EmptySet);
        }
        let dim = elems[0].dim();
        for e in &elems {
            if e.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
        }
        elems.sort();
        elems.dedup();
        if elems.len() > bound {
            return Err(Error::CardinalityBound {
                len: elems.len(),
                bound,
            });
        }
        Ok(KSet { elems, bound })
    }

    pub fn from_ids(space: &GridSpace, ids: &[PointId], bound: usize) -> Result<Self> {
        let elems = ids.iter().map(|&i| space.point(i)).collect();
        KSet::new(elems, bound)
    }

    pub fn elems(&self) -> &[Point] {
        &self.elems
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elems[0].dim()
    }

    /// Grid indices of the elements, when every element lies on the grid.
    pub fn ids_in(&self, space: &GridSpace) -> Option<Vec<PointId>> {
        self.elems
            .iter()
            .map(|p| space.id_of(&p.as_int_coords()?))
            .collect()
    }

    fn int_coords(&self) -> Option<Vec<Vec<i64>>> {
        self.elems.iter().map(|p| p.as_int_coords()).collect()
    }
}

/// A basic neighborhood `<U_1, .., U_m>`: all sets inside the union of the
/// opens that meet every open. Opens are resolved to concrete grid subsets
/// at construction.
#[derive(Debug, Clone)]
pub struct VietorisNbhd {
    space: Arc<GridSpace>,
    opens: Vec<BTreeSet<PointId>>,
}

impl VietorisNbhd {
    pub fn from_index_sets(space: Arc<GridSpace>, opens: Vec<Vec<PointId>>) -> Result<Self> {
        if opens.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut resolved = Vec::with_capacity(opens.len());
        for u in opens {
            if u.is_empty() {
                return Err(Error::EmptySet);
            }
            for &p in &u {
                if !space.contains_id(p) {
                    return Err(Error::NotInDomain(p));
                }
            }
            resolved.push(u.into_iter().collect());
        }
        Ok(VietorisNbhd {
            space,
            opens: resolved,
        })
    }

    /// `<ball(b, eps) : b in centers>` with balls resolved against the grid.
    pub fn from_balls(
        space: Arc<GridSpace>,
        centers: &[PointId],
        eps: &Resolution,
    ) -> Result<Self> {
        let opens = centers
            .iter()
            .map(|&b| closure_eps(&space, &[b], eps))
            .collect::<Result<Vec<_>>>()?;
        VietorisNbhd::from_index_sets(space, opens)
    }

    pub fn opens(&self) -> &[BTreeSet<PointId>] {
        &self.opens
    }

    pub fn space(&self) -> &Arc<GridSpace> {
        &self.space
    }
}

/// True iff `a` is inside the union of the opens and meets every open.
/// Elements off the grid belong to no open, so they fail the cover clause.
pub fn vietoris_member(a: &KSet, n: &VietorisNbhd) -> bool {
    let ids: Vec<Option<PointId>> = a
        .elems()
        .iter()
        .map(|p| p.as_int_coords().and_then(|c| n.space().id_of(&c)))
        .collect();
    let covered = ids.iter().all(|id| {
        id.is_some_and(|id| n.opens().iter().any(|u| u.contains(&id)))
    });
    if !covered {
        return false;
    }
    n.opens()
        .iter()
        .all(|u| ids.iter().flatten().any(|id| u.contains(id)))
}

/// Exact squared Hausdorff distance:
/// `max(max_a min_b d2(a,b), max_b min_a d2(a,b))`.
pub fn hausdorff2(a: &KSet, b: &KSet) -> Result<Rat> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if let (Some(ca), Some(cb)) = (a.int_coords(), b.int_coords()) {
        let d = directed_int(&ca, &cb).max(directed_int(&cb, &ca));
        return Ok(Rat::from_integer(BigInt::from(d)));
    }
    let fwd = directed_rat(a, b)?;
    let back = directed_rat(b, a)?;
    Ok(fwd.max(back))
}

fn directed_int(from: &[Vec<i64>], to: &[Vec<i64>]) -> i128 {
    from.iter()
        .map(|p| {
            to.iter()
                .map(|q| d2_coords(p, q))
                .min()
                .expect("KSet nonempty")
        })
        .max()
        .expect("KSet nonempty")
}

fn directed_rat(from: &KSet, to: &KSet) -> Result<Rat> {
    let mut worst: Option<Rat> = None;
    for p in from.elems() {
        let mut best: Option<Rat> = None;
        for q in to.elems() {
            let d = dist2(p, q)?;
            if best.as_ref().is_none_or(|b| d < *b) {
                best = Some(d);
            }
        }
        let best = best.expect("KSet nonempty");
        if worst.as_ref().is_none_or(|w| best > *w) {
            worst = Some(best);
        }
    }
    Ok(worst.expect("KSet nonempty"))
}
