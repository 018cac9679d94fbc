//! Multivalued maps on grid subspaces: iteration, fixed points, orbit
//! graphs, exact periods, restrictions, and the diagonal-lift extension of a
//! hyperplane map to the whole grid.
//!
//! Iteration is partial by design: the composite is defined at a point only
//! while every intermediate image stays inside the domain. Orbit questions
//! (periods, periodic sets) therefore live on the orbit graph, whose edges
//! chain only through domain points.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::geometry::{d2_coords, GridSpace, Point, PointId, Subspace};
use crate::hyperspace::KSet;
use crate::scalar::{rat_int, Rat, Scalar};

/// One image set of a multivalued map: grid members by index plus exact
/// off-grid points (produced by the extension's diagonal lift).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImagePoints {
    ids: Vec<PointId>,
    free: Vec<Point>,
}

impl ImagePoints {
    pub fn from_ids(mut ids: Vec<PointId>) -> Self {
        ids.sort();
        ids.dedup();
        ImagePoints { ids, free: Vec::new() }
    }

    /// Sorts points into grid members and genuinely off-grid points.
    pub fn resolve(space: &GridSpace, points: Vec<Point>) -> Self {
        let mut ids = Vec::new();
        let mut free = Vec::new();
        for p in points {
            match p.as_int_coords().and_then(|c| space.id_of(&c)) {
                Some(id) => ids.push(id),
                None => free.push(p),
            }
        }
        ids.sort();
        ids.dedup();
        free.sort();
        free.dedup();
        ImagePoints { ids, free }
    }

    pub fn ids(&self) -> &[PointId] {
        &self.ids
    }

    pub fn free(&self) -> &[Point] {
        &self.free
    }

    pub fn len(&self) -> usize {
        self.ids.len() + self.free.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains_id(&self, id: PointId) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    pub fn points(&self, space: &GridSpace) -> Vec<Point> {
        let mut out: Vec<Point> = self.ids.iter().map(|&i| space.point(i)).collect();
        out.extend(self.free.iter().cloned());
        out
    }
}

/// Result of iterating a map `n` times at a point: either the `n`-th image
/// set, or the first step `j` at which the composite stopped being defined
/// because the previous iterate left the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IterResult {
    Defined(KSet),
    UndefinedAt(usize),
}

/// A multivalued map `f` from a domain subspace into the ambient grid, every
/// image holding between 1 and `k` points.
#[derive(Debug, Clone)]
pub struct MultiMap {
    domain: Subspace,
    k: usize,
    rows: Vec<Option<ImagePoints>>,
}

impl MultiMap {
    pub fn new(
        domain: Subspace,
        k: usize,
        table: BTreeMap<PointId, ImagePoints>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("image bound k must be positive".into()));
        }
        let space = domain.space().clone();
        let mut rows: Vec<Option<ImagePoints>> = vec![None; space.len()];
        for (x, img) in table {
            if !domain.contains(x) {
                return Err(Error::NotInDomain(x));
            }
            if img.is_empty() {
                return Err(Error::EmptySet);
            }
            if img.len() > k {
                return Err(Error::CardinalityBound {
                    len: img.len(),
                    bound: k,
                });
            }
            for &y in img.ids() {
                if !space.contains_id(y) {
                    return Err(Error::Invalid(format!(
                        "image point index {y} outside the ambient space"
                    )));
                }
            }
            rows[x.0] = Some(img);
        }
        for &m in domain.members() {
            if rows[m.0].is_none() {
                return Err(Error::Invalid(format!(
                    "map table missing an image for domain point {m}"
                )));
            }
        }
        Ok(MultiMap { domain, k, rows })
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn ambient(&self) -> &Arc<GridSpace> {
        self.domain.space()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn image(&self, x: PointId) -> Result<&ImagePoints> {
        if !self.domain.contains(x) {
            return Err(Error::NotInDomain(x));
        }
        Ok(self.rows[x.0].as_ref().expect("table is total on the domain"))
    }

    /// `{x in X : x in f(x)}`.
    pub fn fix_points(&self) -> Vec<PointId> {
        self.domain
            .members()
            .iter()
            .copied()
            .filter(|&x| self.rows[x.0].as_ref().expect("total").contains_id(x))
            .collect()
    }

    /// The `n`-th composite at `x`, or the first step where it is undefined.
    pub fn iterate(&self, x: PointId, n: usize) -> Result<IterResult> {
        if n == 0 {
            return Err(Error::Invalid("iteration count must be positive".into()));
        }
        let first = self.image(x)?;
        let mut ids: BTreeSet<PointId> = first.ids().iter().copied().collect();
        let mut free: BTreeSet<Point> = first.free().iter().cloned().collect();
        for step in 2..=n {
            if !free.is_empty() || ids.iter().any(|&i| !self.domain.contains(i)) {
                return Ok(IterResult::UndefinedAt(step));
            }
            let mut next_ids = BTreeSet::new();
            let mut next_free = BTreeSet::new();
            for &y in &ids {
                let img = self.rows[y.0].as_ref().expect("y is a domain member");
                next_ids.extend(img.ids().iter().copied());
                next_free.extend(img.free().iter().cloned());
            }
            ids = next_ids;
            free = next_free;
        }
        let bound = self
            .k
            .checked_pow(u32::try_from(n).unwrap_or(u32::MAX))
            .unwrap_or(usize::MAX);
        let space = self.ambient();
        let elems: Vec<Point> = ids
            .iter()
            .map(|&i| space.point(i))
            .chain(free)
            .collect();
        Ok(IterResult::Defined(KSet::new(elems, bound)?))
    }

    /// The `n`-th image set of `s`, chaining only through domain points:
    /// `A_1 = union f(s)`, `A_{j+1} = union { f(y) : y in A_j ∩ X }`.
    /// Off-grid image points cannot be indexed and never chain; the result
    /// is the grid part of `A_n`, possibly empty when the orbit dies.
    pub fn internal_images(&self, s: &[PointId], n: usize) -> Result<Vec<PointId>> {
        if n == 0 {
            return Err(Error::Invalid("iteration count must be positive".into()));
        }
        for &p in s {
            if !self.domain.contains(p) {
                return Err(Error::NotInDomain(p));
            }
        }
        let mut frontier: Vec<PointId> = s.to_vec();
        let mut acc = BTreeSet::new();
        for _ in 0..n {
            acc.clear();
            for &y in &frontier {
                if self.domain.contains(y) {
                    acc.extend(self.rows[y.0].as_ref().expect("domain member").ids());
                }
            }
            frontier = acc.iter().copied().collect();
        }
        Ok(frontier)
    }

    pub fn orbit_graph(&self) -> OrbitGraph {
        OrbitGraph::new(self)
    }

    /// Length of the shortest directed cycle through `x` in the orbit graph.
    pub fn period_at(&self, x: PointId) -> Result<Option<usize>> {
        self.orbit_graph().shortest_cycle_through(x)
    }

    /// `{x in X : period_at(f, x) <= max_period}`.
    pub fn periodic_set(&self, max_period: usize) -> Result<Vec<PointId>> {
        if max_period == 0 {
            return Err(Error::Invalid("period bound must be positive".into()));
        }
        let graph = self.orbit_graph();
        let mut out = Vec::new();
        for &x in self.domain.members() {
            if let Some(m) = graph.shortest_cycle_through(x)? {
                if m <= max_period {
                    out.push(x);
                }
            }
        }
        Ok(out)
    }

    /// The same map on a smaller domain `a ⊆ X`.
    pub fn restrict(&self, a: &[PointId]) -> Result<MultiMap> {
        for &m in a {
            if !self.domain.contains(m) {
                return Err(Error::NotInDomain(m));
            }
        }
        let sub = Subspace::new(self.ambient().clone(), a.to_vec())?;
        let table = sub
            .members()
            .iter()
            .map(|&m| (m, self.rows[m.0].clone().expect("member of X")))
            .collect();
        MultiMap::new(sub, self.k, table)
    }

    /// Extends a map on a hyperplane subspace to the whole grid.
    ///
    /// The domain must lie in the hyperplane `{last coordinate 0}` and so
    /// must every image. Each grid point `p` takes the image of the domain
    /// point nearest to its projection, lifted in the last coordinate by the
    /// exact Euclidean distance from the projection to the domain:
    /// `g(p) = { (y_1..y_{n-1}, p_n + dist(proj(p), X)) : y in f(nearest) }`.
    /// On the domain itself the distance is zero, so `g` coincides with `f`.
    pub fn extend_map(&self) -> Result<MultiMap> {
        let space = self.ambient().clone();
        let n = space.dim();
        if n < 2 {
            return Err(Error::Invalid(
                "extension needs ambient dimension at least 2".into(),
            ));
        }
        let members = self.domain.members();
        for &x in members {
            if space.coords(x)[n - 1] != 0 {
                return Err(Error::Invalid(format!(
                    "domain point {x} is outside the zero hyperplane"
                )));
            }
        }
        for &x in members {
            let img = self.image(x)?;
            if !img.free().is_empty() {
                return Err(Error::Invalid(
                    "only grid-valued maps can be extended".into(),
                ));
            }
            for &y in img.ids() {
                if space.coords(y)[n - 1] != 0 {
                    return Err(Error::Invalid(format!(
                        "image point {y} is outside the zero hyperplane"
                    )));
                }
            }
        }
        let proj: Vec<&[i64]> = members
            .iter()
            .map(|&x| &space.coords(x)[..n - 1])
            .collect();
        let mut table = BTreeMap::new();
        for p in space.ids() {
            let pc = space.coords(p);
            let pp = &pc[..n - 1];
            let (mut best_d, mut best_x) = (i128::MAX, members[0]);
            for (i, &x) in members.iter().enumerate() {
                let d = d2_coords(pp, proj[i]);
                if d < best_d {
                    best_d = d;
                    best_x = x;
                }
            }
            let lift = Scalar::sqrt_rat(&Rat::from_integer(BigInt::from(best_d)))?
                .add_rat(&rat_int(pc[n - 1]));
            let mut pts = Vec::new();
            for &y in self.image(best_x)?.ids() {
                let yc = space.coords(y);
                let mut coords: Vec<Scalar> =
                    yc[..n - 1].iter().map(|&c| Scalar::from_int(c)).collect();
                coords.push(lift.clone());
                pts.push(Point::new(coords));
            }
            table.insert(p, ImagePoints::resolve(&space, pts));
        }
        MultiMap::new(Subspace::full(space), self.k, table)
    }
}

/// Directed graph on the domain with an edge `u -> v` iff `v in f(u) ∩ X`.
#[derive(Debug, Clone)]
pub struct OrbitGraph {
    members: Vec<PointId>,
    pos: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

const NO_POS: usize = usize::MAX;

impl OrbitGraph {
    fn new(f: &MultiMap) -> Self {
        let members = f.domain().members().to_vec();
        let mut pos = vec![NO_POS; f.ambient().len()];
        for (i, &m) in members.iter().enumerate() {
            pos[m.0] = i;
        }
        let adj = members
            .iter()
            .map(|&u| {
                f.rows[u.0]
                    .as_ref()
                    .expect("total")
                    .ids()
                    .iter()
                    .filter_map(|&v| (pos[v.0] != NO_POS).then_some(pos[v.0]))
                    .collect()
            })
            .collect();
        OrbitGraph { members, pos, adj }
    }

    pub fn members(&self) -> &[PointId] {
        &self.members
    }

    /// Edges as `(u, v)` pairs of point indices, in canonical order.
    pub fn edges(&self) -> Vec<(PointId, PointId)> {
        let mut out = Vec::new();
        for (i, targets) in self.adj.iter().enumerate() {
            for &j in targets {
                out.push((self.members[i], self.members[j]));
            }
        }
        out
    }

    /// Shortest directed cycle through `x`: breadth-first distances from `x`
    /// plus one closing edge back into `x`.
    pub fn shortest_cycle_through(&self, x: PointId) -> Result<Option<usize>> {
        let xp = *self
            .pos
            .get(x.0)
            .filter(|&&p| p != NO_POS)
            .ok_or(Error::NotInDomain(x))?;
        let mut dist = vec![usize::MAX; self.members.len()];
        let mut queue = VecDeque::new();
        dist[xp] = 0;
        queue.push_back(xp);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let best = (0..self.members.len())
            .filter(|&u| dist[u] != usize::MAX && self.adj[u].binary_search(&xp).is_ok())
            .map(|u| dist[u] + 1)
            .min();
        Ok(best)
    }

    /// DOT rendering: one node per domain member labeled by its index, one
    /// edge per orbit edge, in deterministic order.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph orbit {\n");
        for &m in &self.members {
            let _ = writeln!(out, "  {m} [label=\"{m}\"];");
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -> {v};");
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::line_space;
    use proptest::prelude::*;

    /// Map on a 1-dim grid given by coordinate rules.
    fn line_map(
        zlo: i64,
        zhi: i64,
        xs: &[i64],
        k: usize,
        f: impl Fn(i64) -> Vec<i64>,
    ) -> MultiMap {
        let space = Arc::new(line_space(zlo, zhi).unwrap());
        let members: Vec<PointId> = xs
            .iter()
            .map(|&c| space.id_of(&[c]).expect("domain point on grid"))
            .collect();
        let domain = Subspace::new(space.clone(), members.clone()).unwrap();
        let table = members
            .iter()
            .map(|&m| {
                let c = space.coords(m)[0];
                let ids = f(c)
                    .into_iter()
                    .map(|y| space.id_of(&[y]).expect("image point on grid"))
                    .collect();
                (m, ImagePoints::from_ids(ids))
            })
            .collect();
        MultiMap::new(domain, k, table).unwrap()
    }

    fn shift2_mod4() -> MultiMap {
        line_map(0, 3, &[0, 1, 2, 3], 1, |x| vec![(x + 2) % 4])
    }

    fn coords_of(f: &MultiMap, set: &[PointId]) -> Vec<i64> {
        set.iter().map(|&i| f.ambient().coords(i)[0]).collect()
    }

    #[test]
    fn iterate_examples() {
        let f = shift2_mod4();
        let x0 = f.ambient().id_of(&[0]).unwrap();
        match f.iterate(x0, 2).unwrap() {
            IterResult::Defined(k) => {
                assert_eq!(k.ids_in(f.ambient()).unwrap(), vec![x0]);
            }
            other => panic!("expected defined iterate, got {other:?}"),
        }

        let g = line_map(-5, 5, &(-4..=4).collect::<Vec<_>>(), 2, |x| {
            vec![x - 1, x + 1]
        });
        let zero = g.ambient().id_of(&[0]).unwrap();
        match g.iterate(zero, 2).unwrap() {
            IterResult::Defined(k) => {
                let got = k.ids_in(g.ambient()).unwrap();
                assert_eq!(coords_of(&g, &got), vec![-2, 0, 2]);
            }
            other => panic!("expected defined iterate, got {other:?}"),
        }

        let h = line_map(0, 2, &[0], 1, |_| vec![2]);
        let start = h.ambient().id_of(&[0]).unwrap();
        assert_eq!(h.iterate(start, 2).unwrap(), IterResult::UndefinedAt(2));
        assert!(h.iterate(PointId(1), 1).is_err());
        assert!(h.iterate(start, 0).is_err());
    }

    #[test]
    fn internal_images_examples() {
        let f = shift2_mod4();
        let s: Vec<PointId> = [0, 1]
            .iter()
            .map(|&c| f.ambient().id_of(&[c]).unwrap())
            .collect();
        assert_eq!(coords_of(&f, &f.internal_images(&s, 1).unwrap()), vec![2, 3]);

        let g = line_map(0, 9, &(0..=5).collect::<Vec<_>>(), 1, |x| vec![x + 4]);
        let zero = [g.ambient().id_of(&[0]).unwrap()];
        assert_eq!(coords_of(&g, &g.internal_images(&zero, 2).unwrap()), vec![8]);
        let four = [g.ambient().id_of(&[4]).unwrap()];
        assert!(g.internal_images(&four, 2).unwrap().is_empty());
    }

    #[test]
    fn fix_points_examples() {
        let ident = line_map(0, 2, &[0, 1, 2], 1, |x| vec![x]);
        assert_eq!(coords_of(&ident, &ident.fix_points()), vec![0, 1, 2]);
        assert!(shift2_mod4().fix_points().is_empty());

        let f = line_map(0, 1, &[0, 1], 2, |x| if x == 0 { vec![0, 1] } else { vec![0] });
        assert_eq!(coords_of(&f, &f.fix_points()), vec![0]);
    }

    #[test]
    fn period_examples() {
        let cyc = line_map(0, 2, &[0, 1, 2], 1, |x| vec![(x + 1) % 3]);
        let a = cyc.ambient().id_of(&[0]).unwrap();
        assert_eq!(cyc.period_at(a).unwrap(), Some(3));

        let f = shift2_mod4();
        let zero = f.ambient().id_of(&[0]).unwrap();
        assert_eq!(f.period_at(zero).unwrap(), Some(2));

        let g = line_map(0, 9, &(0..=5).collect::<Vec<_>>(), 1, |x| vec![x + 4]);
        let z = g.ambient().id_of(&[0]).unwrap();
        assert_eq!(g.period_at(z).unwrap(), None);
    }

    #[test]
    fn periodic_set_examples() {
        let f = shift2_mod4();
        assert!(f.periodic_set(1).unwrap().is_empty());
        assert_eq!(coords_of(&f, &f.periodic_set(2).unwrap()), vec![0, 1, 2, 3]);
        let ident = line_map(0, 2, &[0, 1, 2], 1, |x| vec![x]);
        assert_eq!(coords_of(&ident, &ident.periodic_set(1).unwrap()), vec![0, 1, 2]);
        assert!(f.periodic_set(0).is_err());
    }

    #[test]
    fn restrict_keeps_rows_and_checks_domain() {
        let f = shift2_mod4();
        let keep: Vec<PointId> = [0, 2]
            .iter()
            .map(|&c| f.ambient().id_of(&[c]).unwrap())
            .collect();
        let r = f.restrict(&keep).unwrap();
        assert_eq!(r.domain().members(), keep.as_slice());
        for &m in &keep {
            assert_eq!(r.image(m).unwrap(), f.image(m).unwrap());
        }
        assert_eq!(r.period_at(keep[0]).unwrap(), Some(2));
        assert!(f.restrict(&[PointId(99)]).is_err());
    }

    fn planar_swap() -> MultiMap {
        // X = {(0,0),(1,0)} swapped by f, inside a small planar grid
        let mut pts = vec![vec![-1, 0], vec![0, 0], vec![1, 0], vec![1, 1]];
        pts.sort();
        let space = Arc::new(GridSpace::new(2, pts).unwrap());
        let a = space.id_of(&[0, 0]).unwrap();
        let b = space.id_of(&[1, 0]).unwrap();
        let domain = Subspace::new(space.clone(), vec![a, b]).unwrap();
        let table = BTreeMap::from([
            (a, ImagePoints::from_ids(vec![b])),
            (b, ImagePoints::from_ids(vec![a])),
        ]);
        MultiMap::new(domain, 1, table).unwrap()
    }

    #[test]
    fn extension_example() {
        let f = planar_swap();
        let g = f.extend_map().unwrap();
        let space = g.ambient();
        assert_eq!(g.domain().len(), space.len());

        // off-domain corner: projection -1 is nearest to (0,0), distance 1
        let corner = space.id_of(&[-1, 0]).unwrap();
        let img = g.image(corner).unwrap();
        assert_eq!(img.ids(), &[space.id_of(&[1, 1]).unwrap()]);
        assert!(img.free().is_empty());

        // g extends f exactly on X
        let a = space.id_of(&[0, 0]).unwrap();
        let b = space.id_of(&[1, 0]).unwrap();
        assert_eq!(g.image(a).unwrap(), f.image(a).unwrap());
        assert_eq!(g.image(b).unwrap(), f.image(b).unwrap());

        // lifted image of a height-1 point is off-grid with positive height
        let top = space.id_of(&[1, 1]).unwrap();
        let img_top = g.image(top).unwrap();
        assert!(img_top.ids().is_empty());
        for p in img_top.free() {
            assert_eq!(p.coord(1).signum(), 1);
        }

        // periods agree on X
        assert_eq!(g.period_at(a).unwrap(), f.period_at(a).unwrap());
        assert_eq!(g.period_at(b).unwrap(), f.period_at(b).unwrap());
    }

    #[test]
    fn extension_rejects_bad_inputs() {
        let line = line_map(0, 3, &[0, 1], 1, |x| vec![x + 1]);
        assert!(line.extend_map().is_err());

        let space = Arc::new(GridSpace::new(2, vec![vec![0, 0], vec![0, 1]]).unwrap());
        let off = space.id_of(&[0, 1]).unwrap();
        let domain = Subspace::new(space.clone(), vec![off]).unwrap();
        let table = BTreeMap::from([(off, ImagePoints::from_ids(vec![off]))]);
        let f = MultiMap::new(domain, 1, table).unwrap();
        assert!(f.extend_map().is_err());
    }

    #[test]
    fn dot_export_is_stable() {
        let f = shift2_mod4();
        let dot = f.orbit_graph().to_dot();
        let expect = "digraph orbit {\n  0 [label=\"0\"];\n  1 [label=\"1\"];\n  2 [label=\"2\"];\n  3 [label=\"3\"];\n  0 -> 2;\n  1 -> 3;\n  2 -> 0;\n  3 -> 1;\n}\n";
        assert_eq!(dot, expect);
    }

    #[test]
    fn map_validation() {
        let space = Arc::new(line_space(0, 2).unwrap());
        let domain = Subspace::new(space.clone(), vec![PointId(0)]).unwrap();
        let empty = BTreeMap::new();
        assert!(MultiMap::new(domain.clone(), 1, empty).is_err());
        let oversize = BTreeMap::from([(
            PointId(0),
            ImagePoints::from_ids(vec![PointId(0), PointId(1)]),
        )]);
        assert!(matches!(
            MultiMap::new(domain.clone(), 1, oversize),
            Err(Error::CardinalityBound { len: 2, bound: 1 })
        ));
        let stray = BTreeMap::from([
            (PointId(0), ImagePoints::from_ids(vec![PointId(0)])),
            (PointId(1), ImagePoints::from_ids(vec![PointId(0)])),
        ]);
        assert!(MultiMap::new(domain, 1, stray).is_err());
    }

    /// Random self-map on `{0..size-1}` as coordinate image lists.
    fn arb_self_map(size: i64, k: usize) -> impl Strategy<Value = MultiMap> {
        let images = prop::collection::vec(
            prop::collection::btree_set(0..size, 1..=k),
            size as usize,
        );
        images.prop_map(move |imgs| {
            line_map(0, size - 1, &(0..size).collect::<Vec<_>>(), k, |x| {
                imgs[x as usize].iter().copied().collect()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn iterate_size_within_k_pow_n(f in arb_self_map(12, 3), n in 1usize..=4) {
            for &x in f.domain().members() {
                if let IterResult::Defined(s) = f.iterate(x, n).unwrap() {
                    prop_assert!(s.len() <= 3usize.pow(n as u32));
                }
            }
        }

        #[test]
        fn self_map_iterate_matches_internal_images(
            f in arb_self_map(10, 2),
            n in 1usize..=4,
        ) {
            for &x in f.domain().members() {
                let via_iter = match f.iterate(x, n).unwrap() {
                    IterResult::Defined(s) => s.ids_in(f.ambient()).unwrap(),
                    IterResult::UndefinedAt(_) => unreachable!("self-map iterate is total"),
                };
                prop_assert_eq!(via_iter, f.internal_images(&[x], n).unwrap());
            }
        }

        #[test]
        fn period_equals_first_self_return(f in arb_self_map(10, 2)) {
            for &x in f.domain().members() {
                let period = f.period_at(x).unwrap();
                let first_return = (1..=10usize).find(|&m| {
                    f.internal_images(&[x], m).unwrap().binary_search(&x).is_ok()
                });
                // period of a 10-point self-map is at most 10, so the probes cover it
                prop_assert_eq!(period, first_return);
            }
        }

        #[test]
        fn restriction_periods_do_not_grow(
            f in arb_self_map(10, 2),
            keep in prop::collection::btree_set(0usize..10, 1..=10),
            m in 1usize..=4,
        ) {
            let a: Vec<PointId> = keep.into_iter().map(PointId).collect();
            let r = f.restrict(&a).unwrap();
            let small = r.periodic_set(m).unwrap();
            let big = f.periodic_set(m).unwrap();
            for x in small {
                prop_assert!(big.contains(&x) && a.contains(&x));
            }
        }
    }
}
