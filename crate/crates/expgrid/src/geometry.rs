//! Finite metric geometry on integer grids: points, squared distances,
//! ε-fattening closures, and nearest-point queries.
//!
//! All comparisons go through squared quantities, so nothing is ever rounded.
//! Grid coordinates are bounded integers; free points (queries, lifted image
//! points) carry exact scalar coordinates which may include quadratic surds.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Rat, Scalar};

/// Largest coordinate magnitude accepted in a [`GridSpace`].
///
/// With `|c| <= 2^31` every squared distance fits an `i128` exactly for any
/// realistic dimension, which keeps the hot distance loops allocation-free.
pub const COORD_MAX: i64 = 1 << 31;

/// Index of a point within its [`GridSpace`]'s canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub usize);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point with exact coordinates, not necessarily on any grid.
/// Ordered lexicographically by exact coordinate value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    coords: Vec<Scalar>,
}

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Point { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point {
            coords: coords.iter().map(|&c| Scalar::from_int(c)).collect(),
        }
    }

    pub fn from_rats(coords: Vec<Rat>) -> Self {
        Point {
            coords: coords.into_iter().map(Scalar::from_rat).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }

    /// Integer coordinates when every coordinate is an integer in range.
    pub fn as_int_coords(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| {
                let r = c.as_rat()?;
                r.is_integer().then(|| i64::try_from(r.numer()).ok())?
            })
            .collect()
    }

    /// Drops the last coordinate (projection onto the base hyperplane).
    pub fn project(&self) -> Point {
        Point {
            coords: self.coords[..self.coords.len() - 1].to_vec(),
        }
    }
}

/// A finite set of integer-grid points in fixed canonical (lexicographic)
/// order, serving as the ambient space.
#[derive(Debug)]
pub struct GridSpace {
    dim: usize,
    points: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, PointId>,
    name: String,
}

impl GridSpace {
    /// Builds a space from points already in canonical order.
    pub fn new(dim: usize, points: Vec<Vec<i64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            for &c in p {
                if c.abs() > COORD_MAX {
                    return Err(Error::Invalid(format!(
                        "coordinate {c} exceeds supported magnitude {COORD_MAX}"
                    )));
                }
            }
        }
        for w in points.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Invalid(
                    "points must be distinct and lexicographically sorted".into(),
                ));
            }
        }
        let index = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), PointId(i)))
            .collect();
        Ok(GridSpace {
            dim,
            points,
            index,
            name: String::new(),
        })
    }

    /// Builds a space from points in any order, sorting them canonically.
    pub fn from_unsorted(dim: usize, mut points: Vec<Vec<i64>>) -> Result<Self> {
        points.sort();
        points.dedup();
        GridSpace::new(dim, points)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = PointId> + '_ {
        (0..self.points.len()).map(PointId)
    }

    pub fn coords(&self, id: PointId) -> &[i64] {
        &self.points[id.0]
    }

    pub fn point(&self, id: PointId) -> Point {
        Point::from_ints(&self.points[id.0])
    }

    pub fn id_of(&self, coords: &[i64]) -> Option<PointId> {
        self.index.get(coords).copied()
    }

    pub fn contains_id(&self, id: PointId) -> bool {
        id.0 < self.points.len()
    }

    /// Exact squared distance between two grid members.
    pub(crate) fn d2_int(&self, a: PointId, b: PointId) -> i128 {
        d2_coords(&self.points[a.0], &self.points[b.0])
    }

    /// Squared distance between grid members as a rational.
    pub fn d2(&self, a: PointId, b: PointId) -> Rat {
        Rat::from_integer(BigInt::from(self.d2_int(a, b)))
    }
}

pub(crate) fn d2_coords(a: &[i64], b: &[i64]) -> i128 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x as i128 - y as i128;
            d * d
        })
        .sum()
}

/// A nonempty subset of a [`GridSpace`], kept as sorted indices.
#[derive(Debug, Clone)]
pub struct Subspace {
    space: Arc<GridSpace>,
    members: Vec<PointId>,
    mask: Vec<bool>,
}

impl Subspace {
    pub fn new(space: Arc<GridSpace>, mut members: Vec<PointId>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptySet);
        }
        members.sort();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Invalid(format!("duplicate member index {}", w[0])));
            }
        }
        let last = *members.last().expect("nonempty");
        if !space.contains_id(last) {
            return Err(Error::NotInDomain(last));
        }
        let mut mask = vec![false; space.len()];
        for &m in &members {
            mask[m.0] = true;
        }
        Ok(Subspace {
            space,
            members,
            mask,
        })
    }

    /// The whole space as a subspace.
    pub fn full(space: Arc<GridSpace>) -> Self {
        let members: Vec<PointId> = space.ids().collect();
        let mask = vec![true; space.len()];
        Subspace {
            space,
            members,
            mask,
        }
    }

    pub fn space(&self) -> &Arc<GridSpace> {
        &self.space
    }

    pub fn members(&self) -> &[PointId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: PointId) -> bool {
        id.0 < self.mask.len() && self.mask[id.0]
    }
}

/// Nonnegative rational resolution ε, always applied through ε².
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    eps: Rat,
}

impl Resolution {
    pub fn new(eps: Rat) -> Result<Self> {
        if eps.is_negative() {
            return Err(Error::NegativeResolution);
        }
        Ok(Resolution { eps })
    }

    pub fn zero() -> Self {
        Resolution { eps: Rat::zero() }
    }

    pub fn eps(&self) -> &Rat {
        &self.eps
    }

    pub fn eps2(&self) -> Rat {
        &self.eps * &self.eps
    }

    /// Largest integer `t` with `t <= eps²`, clamped to `i128`.
    ///
    /// An integer squared distance `d` satisfies `d <= eps²` iff `d <= t`.
    pub(crate) fn floor_eps2(&self) -> i128 {
        let e2 = self.eps2();
        let t = e2.numer() / e2.denom();
        i128::try_from(&t).unwrap_or(i128::MAX)
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::scalar::rat_to_string(&self.eps))
    }
}

/// Exact squared distance between points; must land in the rationals.
pub fn dist2(a: &Point, b: &Point) -> Result<Rat> {
    let s = dist2_scalar(a, b)?;
    s.as_rat()
        .cloned()
        .ok_or(Error::Incommensurable)
}

/// Exact squared distance as a scalar (may carry a surd part).
pub fn dist2_scalar(a: &Point, b: &Point) -> Result<Scalar> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let mut acc = Scalar::from_int(0);
    for (x, y) in a.coords().iter().zip(b.coords()) {
        let d = x.checked_sub(y)?;
        acc = acc.checked_add(&d.square())?;
    }
    Ok(acc)
}

/// ε-fattening of `s` within the ambient grid:
/// `{z : min over s of dist2(z, s) <= eps²}`, as sorted indices.
pub fn closure_eps(ambient: &GridSpace, s: &[PointId], eps: &Resolution) -> Result<Vec<PointId>> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let thr = eps.floor_eps2();
    let mut out = Vec::new();
    for z in ambient.ids() {
        if s.iter().any(|&m| ambient.d2_int(z, m) <= thr) {
            out.push(z);
        }
    }
    Ok(out)
}

/// Member of `x` nearest to `p`; ties go to the smallest canonical index.
pub fn nearest_in(p: &Point, x: &Subspace) -> Result<PointId> {
    let space = x.space();
    if p.dim() != space.dim() {
        return Err(Error::DimMismatch {
            expected: space.dim(),
            found: p.dim(),
        });
    }
    if let Some(coords) = p.as_int_coords() {
        let mut best: Option<(i128, PointId)> = None;
        for &m in x.members() {
            let d = d2_coords(&coords, space.coords(m));
            if best.as_ref().is_none_or(|&(bd, _)| d < bd) {
                best = Some((d, m));
            }
        }
        return Ok(best.expect("subspace nonempty").1);
    }
    let mut best: Option<(Scalar, PointId)> = None;
    for &m in x.members() {
        let d = dist2_scalar(p, &space.point(m))?;
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, m));
        }
    }
    Ok(best.expect("subspace nonempty").1)
}

/// Builds a line space `{lo..=hi}` in one dimension (tests and examples).
pub fn line_space(lo: i64, hi: i64) -> Result<GridSpace> {
    GridSpace::new(1, (lo..=hi).map(|c| vec![c]).collect())
}
