//! Colors of a multivalued map at a resolution: verification, greedy
//! synthesis from the conflict graph, refinement of a plain coloring into a
//! bright one, and largest bright neighborhoods of a point.
//!
//! A color is a set disjoint from the union of images of its own points; a
//! bright color keeps a gap of more than ε from that union; an N-bright
//! color keeps the gap from every image union up to depth N. Brightness is
//! always decided by exact squared-distance comparisons against ε².

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::dynamics::MultiMap;
use crate::error::{Error, Result};
use crate::geometry::{PointId, Resolution};
use crate::scalar::{rat, Rat, Scalar};

/// Which predicate the sets of a coloring are claimed to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorKind {
    Plain,
    Bright,
    NBright(usize),
}

/// A finite family of subsets of the domain, together with the resolution
/// and predicate kind it is measured against. `verified` is set only by
/// [`verify_coloring`] or by constructions that verify their own output.
#[derive(Debug, Clone)]
pub struct Coloring {
    sets: Vec<Vec<PointId>>,
    resolution: Resolution,
    kind: ColorKind,
    verified: bool,
}

impl Coloring {
    pub fn new(sets: Vec<Vec<PointId>>, resolution: Resolution, kind: ColorKind) -> Self {
        let sets = sets
            .into_iter()
            .map(|mut s| {
                s.sort();
                s.dedup();
                s
            })
            .collect();
        Coloring {
            sets,
            resolution,
            kind,
            verified: false,
        }
    }

    pub fn sets(&self) -> &[Vec<PointId>] {
        &self.sets
    }

    pub fn resolution(&self) -> &Resolution {
        &self.resolution
    }

    pub fn kind(&self) -> ColorKind {
        self.kind
    }

    pub fn verified(&self) -> bool {
        self.verified
    }
}

/// Why a set failed verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailReason {
    /// The set contains a point outside the map's domain.
    OutsideDomain,
    /// The set meets the union of images of its own points.
    NotColor,
    /// The set comes within ε of its image union.
    NotBright,
    /// The set comes within ε of its depth-`n` image union.
    NotNBright { n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFailure {
    pub set_index: usize,
    pub reason: FailReason,
    pub witness: PointId,
}

/// Outcome of checking a coloring: cover of the domain plus the per-set
/// predicate of its kind, with a witness point for every failure.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub ok: bool,
    pub uncovered: Vec<PointId>,
    pub set_failures: Vec<SetFailure>,
}

/// Union of the image sets of the members of `set`, as sorted grid indices.
fn image_union(f: &MultiMap, set: &[PointId]) -> Result<Vec<PointId>> {
    let mut out = BTreeSet::new();
    for &x in set {
        out.extend(f.image(x)?.ids().iter().copied());
    }
    Ok(out.into_iter().collect())
}

/// First image point that lands back in `set`, scanning set members in
/// order and each member's image in order.
fn color_witness(f: &MultiMap, set: &[PointId]) -> Result<Option<PointId>> {
    let mut in_set = vec![false; f.ambient().len()];
    for &x in set {
        in_set[x.0] = true;
    }
    for &x in set {
        for &y in f.image(x)?.ids() {
            if in_set[y.0] {
                return Ok(Some(y));
            }
        }
    }
    Ok(None)
}

/// First point of `set` within squared distance `thr` of `others`, if any.
fn proximity_witness(
    f: &MultiMap,
    set: &[PointId],
    others: &[PointId],
    thr: i128,
) -> Option<PointId> {
    let space = f.ambient();
    set.iter()
        .copied()
        .find(|&x| others.iter().any(|&y| space.d2_int(x, y) <= thr))
}

/// Smallest squared distance between the two index sets, `None` when either
/// is empty.
fn min_gap2(f: &MultiMap, a: &[PointId], b: &[PointId]) -> Option<i128> {
    let space = f.ambient();
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| space.d2_int(x, y)))
        .min()
}

/// True iff `set` misses the union of images of its own points.
/// The empty set is vacuously a color.
pub fn is_color(f: &MultiMap, set: &[PointId]) -> Result<bool> {
    Ok(color_witness(f, set)?.is_none())
}

/// True iff `set` misses the ε-fattening of its image union: every pair
/// `(x in set, y in image)` has `dist2(x, y) > eps²`.
pub fn is_bright_color(f: &MultiMap, set: &[PointId], eps: &Resolution) -> Result<bool> {
    let img = image_union(f, set)?;
    Ok(proximity_witness(f, set, &img, eps.floor_eps2()).is_none())
}

/// True iff `set` misses the ε-fattening of its depth-`n` image union for
/// every `n <= max_depth`. Empty image unions pass vacuously.
pub fn is_n_bright(
    f: &MultiMap,
    set: &[PointId],
    max_depth: usize,
    eps: &Resolution,
) -> Result<bool> {
    if max_depth == 0 {
        return Err(Error::Invalid("depth bound must be positive".into()));
    }
    let thr = eps.floor_eps2();
    for n in 1..=max_depth {
        let img = f.internal_images(set, n)?;
        if proximity_witness(f, set, &img, thr).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that the coloring covers the domain and that every set satisfies
/// the predicate of its kind; sets the coloring's `verified` flag.
pub fn verify_coloring(f: &MultiMap, c: &mut Coloring) -> VerifyReport {
    let mut covered = vec![false; f.ambient().len()];
    for s in &c.sets {
        for &p in s {
            if p.0 < covered.len() {
                covered[p.0] = true;
            }
        }
    }
    let uncovered: Vec<PointId> = f
        .domain()
        .members()
        .iter()
        .copied()
        .filter(|&m| !covered[m.0])
        .collect();

    let mut set_failures = Vec::new();
    for (i, s) in c.sets.iter().enumerate() {
        if let Some(&w) = s.iter().find(|&&p| !f.domain().contains(p)) {
            set_failures.push(SetFailure {
                set_index: i,
                reason: FailReason::OutsideDomain,
                witness: w,
            });
            continue;
        }
        let failure = match c.kind {
            ColorKind::Plain => color_witness(f, s)
                .expect("members validated")
                .map(|w| (FailReason::NotColor, w)),
            ColorKind::Bright => {
                let img = image_union(f, s).expect("members validated");
                proximity_witness(f, s, &img, c.resolution.floor_eps2())
                    .map(|w| (FailReason::NotBright, w))
            }
            ColorKind::NBright(max_depth) => {
                let thr = c.resolution.floor_eps2();
                (1..=max_depth.max(1)).find_map(|n| {
                    let img = f.internal_images(s, n).expect("members validated");
                    proximity_witness(f, s, &img, thr)
                        .map(|w| (FailReason::NotNBright { n }, w))
                })
            }
        };
        if let Some((reason, witness)) = failure {
            set_failures.push(SetFailure {
                set_index: i,
                reason,
                witness,
            });
        }
    }
    let ok = uncovered.is_empty() && set_failures.is_empty();
    c.verified = ok;
    VerifyReport {
        ok,
        uncovered,
        set_failures,
    }
}

/// Colors the conflict graph (`u ~ v` iff `v in f(u)` or `u in f(v)`) with
/// a saturation-greedy sweep and returns the classes as a plain coloring.
///
/// Vertex choice: highest saturation, then highest degree, then smallest
/// index; each vertex takes the smallest class unused by its neighbors.
/// The class count never exceeds maxdegree + 1, and every class is a color
/// because classes are independent in the conflict graph.
pub fn synth_coloring(f: &MultiMap) -> Result<Coloring> {
    if let Some(&w) = f.fix_points().first() {
        return Err(Error::NotFixedPointFree(w));
    }
    let members = f.domain().members();
    let m = members.len();
    let mut pos = vec![usize::MAX; f.ambient().len()];
    for (i, &u) in members.iter().enumerate() {
        pos[u.0] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];
    for (i, &u) in members.iter().enumerate() {
        for &v in f.image(u)?.ids() {
            let j = pos[v.0];
            if j != usize::MAX && j != i {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }

    let deg: Vec<usize> = adj.iter().map(BTreeSet::len).collect();
    let mut class: Vec<Option<usize>> = vec![None; m];
    let mut seen: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];
    for _ in 0..m {
        let mut best: Option<usize> = None;
        for i in 0..m {
            if class[i].is_some() {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => (seen[i].len(), deg[i]) > (seen[b].len(), deg[b]),
            };
            if better {
                best = Some(i);
            }
        }
        let v = best.expect("an uncolored vertex remains");
        let c = (0..).find(|c| !seen[v].contains(c)).expect("unbounded range");
        class[v] = Some(c);
        for &u in &adj[v] {
            seen[u].insert(c);
        }
    }

    let nclasses = class.iter().map(|c| c.expect("all colored") + 1).max();
    let mut sets = vec![Vec::new(); nclasses.unwrap_or(0)];
    for (i, c) in class.iter().enumerate() {
        sets[c.expect("all colored")].push(members[i]);
    }
    let mut coloring = Coloring::new(sets, Resolution::zero(), ColorKind::Plain);
    let report = verify_coloring(f, &mut coloring);
    if !report.ok {
        return Err(Error::Invalid(
            "synthesized classes failed verification".into(),
        ));
    }
    Ok(coloring)
}

/// Record of one subfamily processed during a brightening step.
#[derive(Debug, Clone)]
pub struct SubfamilyRecord {
    /// Bit `i` set iff input set `i` belongs to the subfamily.
    pub mask: u64,
    pub core: Vec<PointId>,
    /// Depth-1 images of the core lie inside the union of the other sets.
    pub claim1_ok: bool,
    /// The core misses the union of the other sets.
    pub claim2_ok: bool,
    /// Squared gap from the core to its image union (`None` if no images).
    pub gap2: Option<Rat>,
    /// Fattening radius that produced the output set.
    pub delta: Rat,
    pub set: Vec<PointId>,
}

/// One induction step: subfamilies of size `n - k` with nonempty core.
#[derive(Debug, Clone)]
pub struct BrightenStep {
    pub k: usize,
    /// Number of size-`(n-k)` subfamilies considered.
    pub candidates: usize,
    pub subfamilies: Vec<SubfamilyRecord>,
    /// Accumulated union of chosen sets after this step.
    pub o_after: Vec<PointId>,
    /// Every subfamily one size larger has its intersection inside the
    /// previous accumulation.
    pub a1_ok: bool,
    /// The previous accumulation is covered by the sets chosen so far.
    pub a2_ok: bool,
}

/// Full log of a successful brightening run.
#[derive(Debug, Clone)]
pub struct BrightenState {
    pub requested_eps: Resolution,
    /// Resolution of the successful attempt.
    pub eps: Resolution,
    /// Whether the whole input family has empty intersection.
    pub step0_intersection_empty: bool,
    pub steps: Vec<BrightenStep>,
    pub cover_ok: bool,
}

#[derive(Debug, Clone)]
pub struct BrightenOutcome {
    pub coloring: Coloring,
    pub achieved_eps: Resolution,
    /// Smallest squared set-to-image gap over the output, `None` when every
    /// image union is empty.
    pub margin2: Option<Rat>,
    pub state: BrightenState,
}

/// Subfamily enumeration is exponential in the number of input sets.
const MAX_BRIGHTEN_SETS: usize = 20;

fn masks_with_popcount(n: usize, count: usize) -> Vec<u64> {
    (0u64..(1 << n))
        .filter(|m| m.count_ones() as usize == count)
        .collect()
}

/// Refines a verified plain coloring into a bright one at the requested
/// resolution, degrading the resolution by halving when needed.
///
/// Induction over subfamily sizes, largest first. At step `k` every
/// subfamily `G` of `n - k` input sets with nonempty core
/// `core(G) = (intersection of G) minus accumulated-so-far` contributes one
/// output set: the core fattened by a radius `δ` found by halving from a
/// rational lower bound of `(gap(G) - ε) / 2`, accepted only if the result
/// is bright at the attempt's ε (δ = 0, the bare core, as the fallback).
/// If some core is not bright even bare, the whole attempt is retried at
/// ε/2, and at 0 after 64 halvings; a subset of a color is again a color,
/// so the bare cores always succeed at resolution 0 on grid-valued maps.
pub fn brighten(f: &MultiMap, c: &Coloring, eps: &Resolution) -> Result<BrightenOutcome> {
    if !c.verified || c.kind != ColorKind::Plain {
        return Err(Error::UnverifiedInput);
    }
    let n = c.sets.len();
    if n > MAX_BRIGHTEN_SETS {
        return Err(Error::Invalid(format!(
            "refusing to enumerate subfamilies of {n} sets (limit {MAX_BRIGHTEN_SETS})"
        )));
    }
    let mut attempt_eps = eps.clone();
    let mut halvings = 0u32;
    loop {
        if let Some(outcome) = brighten_attempt(f, c, eps, &attempt_eps)? {
            return Ok(outcome);
        }
        if attempt_eps.eps().is_zero() {
            return Err(Error::Unsatisfiable(
                "no bright refinement exists even at resolution 0".into(),
            ));
        }
        halvings += 1;
        attempt_eps = if halvings > 64 {
            Resolution::zero()
        } else {
            Resolution::new(attempt_eps.eps() / rat(2, 1)).expect("halving keeps sign")
        };
    }
}

/// One full induction pass at a fixed resolution; `None` when some core is
/// not bright even unfattened, which signals the caller to degrade ε.
fn brighten_attempt(
    f: &MultiMap,
    c: &Coloring,
    requested: &Resolution,
    eps: &Resolution,
) -> Result<Option<BrightenOutcome>> {
    let n = c.sets.len();
    let members = f.domain().members();
    let space_len = f.ambient().len();
    let thr = eps.floor_eps2();
    let half = Scalar::from_rat(rat(1, 2));

    let set_mask = |s: &[PointId]| {
        let mut m = vec![false; space_len];
        for &p in s {
            m[p.0] = true;
        }
        m
    };
    let input_masks: Vec<Vec<bool>> = c.sets.iter().map(|s| set_mask(s)).collect();

    let mut o_mask = vec![false; space_len];
    let mut chosen: Vec<Vec<PointId>> = Vec::new();
    let mut steps: Vec<BrightenStep> = Vec::new();
    let mut step0_intersection_empty = true;

    for k in 0..n {
        let size = n - k;

        // A1: intersections one size up are already swallowed by the
        // accumulation; A2: the accumulation is covered by chosen sets.
        let a1_ok = k == 0
            || masks_with_popcount(n, size + 1).iter().all(|&gm| {
                members
                    .iter()
                    .filter(|&&p| (0..n).all(|i| gm & (1 << i) == 0 || input_masks[i][p.0]))
                    .all(|&p| o_mask[p.0])
            });
        let a2_ok = {
            let mut covered = vec![false; space_len];
            for s in &chosen {
                for &p in s {
                    covered[p.0] = true;
                }
            }
            members
                .iter()
                .all(|&p| !o_mask[p.0] || covered[p.0])
        };

        // cores of one step are all taken against the accumulation left by
        // the previous step, so collect them before fattening anything
        let masks = masks_with_popcount(n, size);
        let candidates = masks.len();
        let mut cores = Vec::new();
        for gm in masks {
            let core: Vec<PointId> = members
                .iter()
                .copied()
                .filter(|&p| {
                    !o_mask[p.0]
                        && (0..n).all(|i| gm & (1 << i) == 0 || input_masks[i][p.0])
                })
                .collect();
            if k == 0 {
                step0_intersection_empty = core.is_empty();
            }
            if !core.is_empty() {
                cores.push((gm, core));
            }
        }

        let mut records = Vec::new();
        for (gm, core) in cores {
            let img1 = f.internal_images(&core, 1)?;
            let rest_union: Vec<bool> = {
                let mut m = vec![false; space_len];
                for (i, im) in input_masks.iter().enumerate() {
                    if gm & (1 << i) == 0 {
                        for (j, &b) in im.iter().enumerate() {
                            if b {
                                m[j] = true;
                            }
                        }
                    }
                }
                m
            };
            let claim1_ok = img1.iter().all(|&y| rest_union[y.0]);
            let claim2_ok = core.iter().all(|&x| !rest_union[x.0]);

            let gap2_int = min_gap2(f, &core, &img1);
            let gap2 = gap2_int.map(|g| Rat::from_integer(BigInt::from(g)));

            // halving search for the fattening radius
            let mut delta = match gap2_int {
                None => Rat::zero(),
                Some(g) => {
                    let gamma = Scalar::sqrt_rat(&Rat::from_integer(BigInt::from(g)))
                        .expect("squared gaps are nonnegative");
                    let start = gamma
                        .add_rat(&-eps.eps().clone())
                        .checked_mul(&half)
                        .expect("rational factor")
                        .lower_bound(8);
                    if start.is_positive() {
                        start
                    } else {
                        Rat::zero()
                    }
                }
            };
            let chosen_set = loop {
                let r = Resolution::new(delta.clone()).expect("radius nonnegative");
                if r.floor_eps2() == 0 {
                    delta = Rat::zero();
                }
                let u: Vec<PointId> = if delta.is_zero() {
                    core.clone()
                } else {
                    let dthr = r.floor_eps2();
                    members
                        .iter()
                        .copied()
                        .filter(|&p| core.iter().any(|&q| f.ambient().d2_int(p, q) <= dthr))
                        .collect()
                };
                let u_img = image_union(f, &u)?;
                if proximity_witness(f, &u, &u_img, thr).is_none() {
                    break Some(u);
                }
                if delta.is_zero() {
                    break None;
                }
                delta = delta / rat(2, 1);
            };
            let Some(set) = chosen_set else {
                // this core cannot be bright at this resolution
                return Ok(None);
            };
            for &p in &set {
                o_mask[p.0] = true;
            }
            chosen.push(set.clone());
            records.push(SubfamilyRecord {
                mask: gm,
                core,
                claim1_ok,
                claim2_ok,
                gap2,
                delta,
                set,
            });
        }
        let o_after: Vec<PointId> = members
            .iter()
            .copied()
            .filter(|&p| o_mask[p.0])
            .collect();
        steps.push(BrightenStep {
            k,
            candidates,
            subfamilies: records,
            o_after,
            a1_ok,
            a2_ok,
        });
    }

    let cover_ok = members.iter().all(|&p| o_mask[p.0]);
    let margin2 = chosen
        .iter()
        .filter_map(|s| min_gap2(f, s, &image_union(f, s).expect("validated")))
        .min()
        .map(|g| Rat::from_integer(BigInt::from(g)));

    let mut coloring = Coloring::new(chosen, eps.clone(), ColorKind::Bright);
    coloring.verified = cover_ok;
    Ok(Some(BrightenOutcome {
        coloring,
        achieved_eps: eps.clone(),
        margin2,
        state: BrightenState {
            requested_eps: requested.clone(),
            eps: eps.clone(),
            step0_intersection_empty,
            steps,
            cover_ok,
        },
    }))
}

/// A ball around a point whose domain part is an N-bright color.
#[derive(Debug, Clone)]
pub struct BallOutcome {
    pub radius2: Rat,
    /// Exact radius; a quadratic surd when the squared radius is not a
    /// perfect square.
    pub radius: Scalar,
    pub members: Vec<PointId>,
}

/// Largest radius among the distances from `x` to domain points whose
/// closed ball around `x`, intersected with the domain, is an N-bright
/// color at `eps`; `None` when even the bare point fails.
pub fn n_bright_ball(
    f: &MultiMap,
    x: PointId,
    max_depth: usize,
    eps: &Resolution,
) -> Result<Option<BallOutcome>> {
    if !f.domain().contains(x) {
        return Err(Error::NotInDomain(x));
    }
    if max_depth == 0 {
        return Err(Error::Invalid("depth bound must be positive".into()));
    }
    let space = f.ambient();
    let mut radii: Vec<i128> = f
        .domain()
        .members()
        .iter()
        .map(|&m| space.d2_int(x, m))
        .collect();
    radii.sort();
    radii.dedup();
    for &r2 in radii.iter().rev() {
        let ball: Vec<PointId> = f
            .domain()
            .members()
            .iter()
            .copied()
            .filter(|&m| space.d2_int(x, m) <= r2)
            .collect();
        if is_n_bright(f, &ball, max_depth, eps)? {
            let radius2 = Rat::from_integer(BigInt::from(r2));
            let radius = Scalar::sqrt_rat(&radius2).expect("nonnegative");
            return Ok(Some(BallOutcome {
                radius2,
                radius,
                members: ball,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::ImagePoints;
    use crate::geometry::{line_space, GridSpace, Subspace};
    use proptest::prelude::*;
    use std::sync::Arc;

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

    fn ids(space: &GridSpace, coords: &[i64]) -> Vec<PointId> {
        coords.iter().map(|&c| space.id_of(&[c]).unwrap()).collect()
    }

    fn res(p: i64, q: i64) -> Resolution {
        Resolution::new(rat(p, q)).unwrap()
    }

    #[test]
    fn is_color_examples() {
        let f = shift2_mod4();
        let s = f.ambient().clone();
        assert!(is_color(&f, &ids(&s, &[0, 1])).unwrap());
        let ident = line_map(0, 2, &[0, 1, 2], 1, |x| vec![x]);
        let t = ident.ambient().clone();
        assert!(!is_color(&ident, &ids(&t, &[0])).unwrap());
        assert!(is_color(&f, &[]).unwrap());
    }

    #[test]
    fn is_bright_color_examples() {
        let f = shift2_mod4();
        let s = f.ambient().clone();
        let set = ids(&s, &[0, 1]);
        assert!(is_bright_color(&f, &set, &res(1, 2)).unwrap());
        assert!(!is_bright_color(&f, &set, &res(1, 1)).unwrap());
        for probe in [vec![0], vec![0, 1], vec![3]] {
            let set = ids(&s, &probe);
            assert_eq!(
                is_bright_color(&f, &set, &Resolution::zero()).unwrap(),
                is_color(&f, &set).unwrap()
            );
        }
    }

    #[test]
    fn is_n_bright_examples() {
        let g = line_map(0, 9, &(0..=5).collect::<Vec<_>>(), 1, |x| vec![x + 4]);
        let s = g.ambient().clone();
        assert!(is_n_bright(&g, &ids(&s, &[0, 1]), 2, &res(1, 2)).unwrap());
        assert!(is_n_bright(&g, &ids(&s, &[0, 1, 2, 3]), 1, &res(1, 2)).unwrap());
        let f = shift2_mod4();
        let t = f.ambient().clone();
        assert!(!is_n_bright(&f, &ids(&t, &[0]), 2, &Resolution::zero()).unwrap());
    }

    #[test]
    fn verify_coloring_examples() {
        let f = shift2_mod4();
        let s = f.ambient().clone();

        let mut good = Coloring::new(
            vec![ids(&s, &[0, 1]), ids(&s, &[2, 3])],
            Resolution::zero(),
            ColorKind::Plain,
        );
        let rep = verify_coloring(&f, &mut good);
        assert!(rep.ok && good.verified());

        let mut partial = Coloring::new(vec![ids(&s, &[0, 1])], Resolution::zero(), ColorKind::Plain);
        let rep = verify_coloring(&f, &mut partial);
        assert!(!rep.ok && !partial.verified());
        assert_eq!(rep.uncovered, ids(&s, &[2, 3]));

        let mut bad = Coloring::new(
            vec![ids(&s, &[0, 1, 2]), ids(&s, &[3])],
            Resolution::zero(),
            ColorKind::Plain,
        );
        let rep = verify_coloring(&f, &mut bad);
        assert!(!rep.ok);
        assert_eq!(
            rep.set_failures,
            vec![SetFailure {
                set_index: 0,
                reason: FailReason::NotColor,
                witness: s.id_of(&[2]).unwrap(),
            }]
        );
    }

    #[test]
    fn synth_matches_greedy_traces() {
        let f = shift2_mod4();
        let s = f.ambient().clone();
        let c = synth_coloring(&f).unwrap();
        assert_eq!(c.sets(), &[ids(&s, &[0, 1]), ids(&s, &[2, 3])]);
        assert!(c.verified());

        // path conflict graph: images one step right, domain truncated
        let p = line_map(0, 5, &[0, 1, 2, 3, 4], 1, |x| vec![x + 1]);
        let t = p.ambient().clone();
        let c = synth_coloring(&p).unwrap();
        assert_eq!(c.sets(), &[ids(&t, &[1, 3]), ids(&t, &[0, 2, 4])]);

        // images entirely outside the domain: edgeless conflict graph
        let e = line_map(0, 9, &[0, 1, 2], 1, |x| vec![x + 5]);
        let u = e.ambient().clone();
        let c = synth_coloring(&e).unwrap();
        assert_eq!(c.sets(), &[ids(&u, &[0, 1, 2])]);
    }

    #[test]
    fn synth_rejects_fixed_points() {
        let ident = line_map(0, 2, &[0, 1, 2], 1, |x| vec![x]);
        let w = ident.ambient().id_of(&[0]).unwrap();
        assert!(matches!(
            synth_coloring(&ident),
            Err(Error::NotFixedPointFree(x)) if x == w
        ));
    }

    #[test]
    fn brighten_two_set_example() {
        let f = shift2_mod4();
        let s = f.ambient().clone();
        let mut c = Coloring::new(
            vec![ids(&s, &[0, 1]), ids(&s, &[2, 3])],
            Resolution::zero(),
            ColorKind::Plain,
        );
        verify_coloring(&f, &mut c);
        let out = brighten(&f, &c, &res(1, 2)).unwrap();
        assert_eq!(out.achieved_eps, res(1, 2));
        assert_eq!(
            out.coloring.sets(),
            &[ids(&s, &[0, 1]), ids(&s, &[2, 3])]
        );
        assert!(out.coloring.verified());
        assert_eq!(out.margin2, Some(rat(1, 1)));
        assert!(out.state.step0_intersection_empty);
        assert!(out.state.steps.iter().all(|st| st.a1_ok && st.a2_ok));
        assert!(out
            .state
            .steps
            .iter()
            .flat_map(|st| &st.subfamilies)
            .all(|r| r.claim1_ok && r.claim2_ok));
        assert!(out.coloring.sets().len() <= (1 << 2) - 1);
    }

    #[test]
    fn brighten_single_set_example() {
        // every image leaves the domain far to the right
        let f = line_map(0, 9, &[0, 1, 2], 1, |x| vec![x + 5]);
        let s = f.ambient().clone();
        let mut c = synth_coloring(&f).unwrap();
        assert_eq!(c.sets().len(), 1);
        verify_coloring(&f, &mut c);
        let out = brighten(&f, &c, &res(1, 2)).unwrap();
        assert_eq!(out.coloring.sets(), &[ids(&s, &[0, 1, 2])]);
        assert_eq!(out.achieved_eps, res(1, 2));
        // the whole family is the single processed subfamily at the base step
        assert!(!out.state.step0_intersection_empty);
        assert_eq!(out.state.steps[0].subfamilies.len(), 1);
    }

    #[test]
    fn brighten_degrades_resolution_by_halving() {
        let f = shift2_mod4();
        let s = f.ambient().clone();
        let mut c = Coloring::new(
            vec![ids(&s, &[0, 1]), ids(&s, &[2, 3])],
            Resolution::zero(),
            ColorKind::Plain,
        );
        verify_coloring(&f, &mut c);
        // gap between a color and its images is exactly 1, so eps = 2 is
        // unattainable; 2 -> 1 -> 1/2 is the first success
        let out = brighten(&f, &c, &res(2, 1)).unwrap();
        assert_eq!(out.achieved_eps, res(1, 2));
        assert_eq!(out.state.requested_eps, res(2, 1));
        assert!(out.coloring.verified());
    }

    #[test]
    fn brighten_rejects_unverified_input() {
        let f = shift2_mod4();
        let s = f.ambient().clone();
        let c = Coloring::new(
            vec![ids(&s, &[0, 1]), ids(&s, &[2, 3])],
            Resolution::zero(),
            ColorKind::Plain,
        );
        assert!(matches!(
            brighten(&f, &c, &res(1, 2)),
            Err(Error::UnverifiedInput)
        ));
    }

    #[test]
    fn n_bright_ball_examples() {
        let g = line_map(0, 9, &(0..=5).collect::<Vec<_>>(), 1, |x| vec![x + 4]);
        let s = g.ambient().clone();
        let x0 = s.id_of(&[0]).unwrap();
        let out = n_bright_ball(&g, x0, 2, &res(1, 2)).unwrap().unwrap();
        assert_eq!(out.radius2, rat(9, 1));
        assert_eq!(out.radius, Scalar::from_int(3));
        assert_eq!(out.members, ids(&s, &[0, 1, 2, 3]));

        let f = shift2_mod4();
        let z = f.ambient().id_of(&[0]).unwrap();
        assert!(n_bright_ball(&f, z, 2, &Resolution::zero())
            .unwrap()
            .is_none());

        // isolated point with a far image: at least the bare point works
        let h = line_map(0, 9, &[0], 1, |_| vec![9]);
        let w = h.ambient().id_of(&[0]).unwrap();
        let out = n_bright_ball(&h, w, 1, &res(1, 2)).unwrap().unwrap();
        assert!(out.radius2 >= rat(0, 1));
    }

    /// Fixed-point-free self-map on `{0..size-1}`: images avoid their own
    /// point by sampling from the other size-1 columns.
    fn arb_fpf_self_map(size: i64, k: usize) -> impl Strategy<Value = MultiMap> {
        let images = prop::collection::vec(
            prop::collection::btree_set(0..size - 1, 1..=k),
            size as usize,
        );
        images.prop_map(move |imgs| {
            line_map(0, size - 1, &(0..size).collect::<Vec<_>>(), k, |x| {
                imgs[x as usize]
                    .iter()
                    .map(|&j| if j >= x { j + 1 } else { j })
                    .collect()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn synth_verifies_and_respects_degree_bound(f in arb_fpf_self_map(10, 2)) {
            let c = synth_coloring(&f).unwrap();
            prop_assert!(c.verified());
            // independent degree computation from the table
            let members = f.domain().members();
            let maxdeg = members.iter().map(|&u| {
                members.iter().filter(|&&v| {
                    v != u && (f.image(u).unwrap().contains_id(v)
                        || f.image(v).unwrap().contains_id(u))
                }).count()
            }).max().unwrap_or(0);
            prop_assert!(c.sets().len() <= maxdeg + 1);
        }

        #[test]
        fn brighten_covers_and_stays_within_bound(f in arb_fpf_self_map(8, 2)) {
            let mut c = synth_coloring(&f).unwrap();
            verify_coloring(&f, &mut c);
            let n = c.sets().len();
            let out = brighten(&f, &c, &res(1, 2)).unwrap();
            prop_assert!(out.coloring.verified());
            prop_assert!(out.coloring.sets().len() <= (1 << n) - 1);
            let mut covered = vec![false; f.ambient().len()];
            for s in out.coloring.sets() {
                prop_assert!(is_bright_color(&f, s, &out.achieved_eps).unwrap());
                for &p in s {
                    covered[p.0] = true;
                }
            }
            prop_assert!(f.domain().members().iter().all(|&m| covered[m.0]));
            // the induction's internal checks hold on self-maps
            prop_assert!(out.state.step0_intersection_empty);
            prop_assert!(out.state.steps.iter().all(|s| s.a1_ok && s.a2_ok));
            prop_assert!(out.state.steps.iter()
                .flat_map(|s| &s.subfamilies)
                .all(|r| r.claim1_ok && r.claim2_ok));
        }

        #[test]
        fn brightness_is_downward_closed_in_eps(
            f in arb_fpf_self_map(8, 2),
            num in 0i64..6,
        ) {
            let mut c = synth_coloring(&f).unwrap();
            verify_coloring(&f, &mut c);
            let out = brighten(&f, &c, &res(1, 1)).unwrap();
            let smaller = Resolution::new(out.achieved_eps.eps() * rat(num, 6)).unwrap();
            for s in out.coloring.sets() {
                prop_assert!(is_bright_color(&f, s, &smaller).unwrap());
            }
        }

        #[test]
        fn ball_search_succeeds_without_self_returns(f in arb_fpf_self_map(9, 2)) {
            let eps = Resolution::zero();
            for &x in f.domain().members() {
                let self_return = (1..=3usize).any(|n| {
                    f.internal_images(&[x], n).unwrap().binary_search(&x).is_ok()
                });
                if !self_return {
                    let out = n_bright_ball(&f, x, 3, &eps).unwrap();
                    prop_assert!(out.is_some());
                    prop_assert!(out.unwrap().members.contains(&x));
                }
            }
        }
    }
}
