//! Seeded instance generators, an independent brute-force period oracle, and
//! the named property suites driven by the `verify` subcommand.
//!
//! Everything here is deterministic: a [`GenSpec`] is reproduced exactly by
//! its seed, and [`run_suite`] derives one sub-seed per instance from the
//! suite seed, so a failing instance can be replayed in isolation. Instances
//! are evaluated sequentially and independently; reports carry no
//! environment-dependent data.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::coloring::{brighten, is_bright_color, n_bright_ball, synth_coloring, verify_coloring};
use crate::dynamics::{ImagePoints, IterResult, MultiMap};
use crate::error::{Error, Result};
use crate::geometry::{GridSpace, PointId, Resolution, Subspace};
use crate::hyperspace::{hausdorff2, vietoris_member, KSet, VietorisNbhd};
use crate::scalar::rat;

/// Families of random instances. Every model produces a valid map table;
/// they differ in which dynamical features are guaranteed to appear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenModel {
    /// Independent images of 1..=k points drawn uniformly from the space;
    /// the map is a self-map on the whole space.
    UniformK,
    /// `UniformK` followed by a repair pass: any self-image is replaced by
    /// the nearest distinct point, smallest index on ties.
    FpfUniform,
    /// Singleton-image cycles of the prescribed lengths planted on a
    /// shuffled subset; remaining points get uniform images.
    PlantedCycles(Vec<usize>),
    /// A grid translation with a strictly positive first component plus
    /// per-coordinate noise in {-1,0,1}; the first coordinate grows along
    /// every orbit, so the orbit graph is acyclic and orbits leave the
    /// domain.
    Geometric,
}

impl GenModel {
    pub fn name(&self) -> &'static str {
        match self {
            GenModel::UniformK => "uniform_k",
            GenModel::FpfUniform => "fpf_uniform",
            GenModel::PlantedCycles(_) => "planted_cycles",
            GenModel::Geometric => "geometric",
        }
    }
}

/// A fully seeded instance description; equal specs generate equal maps.
#[derive(Debug, Clone)]
pub struct GenSpec {
    pub model: GenModel,
    pub dim: usize,
    pub size: usize,
    pub k: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn generate(&self) -> Result<MultiMap> {
        Ok(self.generate_with_plants()?.0)
    }

    /// Like [`generate`](Self::generate) but also returns the planted
    /// cycles (in cycle order); empty for the other models.
    pub fn generate_with_plants(&self) -> Result<(MultiMap, Vec<Vec<PointId>>)> {
        if self.dim == 0 || self.size == 0 || self.k == 0 {
            return Err(Error::Invalid(
                "generator needs dim, size, and k at least 1".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        match &self.model {
            GenModel::UniformK => Ok((uniform_map(&mut rng, self, false)?, Vec::new())),
            GenModel::FpfUniform => Ok((uniform_map(&mut rng, self, true)?, Vec::new())),
            GenModel::PlantedCycles(lengths) => planted_map(&mut rng, self, lengths),
            GenModel::Geometric => Ok((geometric_map(&mut rng, self)?, Vec::new())),
        }
    }
}

pub fn generate(spec: &GenSpec) -> Result<MultiMap> {
    spec.generate()
}

/// Uniform draw from `0..n` using the raw stream, so results do not depend
/// on distribution plumbing in the rand ecosystem.
fn draw(rng: &mut ChaCha8Rng, n: usize) -> usize {
    debug_assert!(n > 0);
    (rng.next_u64() % n as u64) as usize
}

/// Smallest box side `b` with `b^dim >= 2*size`, so rejection sampling of
/// distinct points terminates quickly.
fn box_side(size: usize, dim: usize) -> u64 {
    let target = 2 * size as u128;
    let mut b: u128 = 1;
    while b.pow(dim as u32) < target {
        b += 1;
    }
    b as u64
}

/// `size` distinct grid points in `[0, b)^dim`, in canonical order.
fn sample_distinct(rng: &mut ChaCha8Rng, size: usize, dim: usize) -> Vec<Vec<i64>> {
    let b = box_side(size, dim);
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    while seen.len() < size {
        seen.insert((0..dim).map(|_| (rng.next_u64() % b) as i64).collect());
    }
    seen.into_iter().collect()
}

fn uniform_image_ids(rng: &mut ChaCha8Rng, size: usize, k: usize) -> Vec<PointId> {
    let cnt = 1 + draw(rng, k.min(size));
    let mut ids = BTreeSet::new();
    while ids.len() < cnt {
        ids.insert(PointId(draw(rng, size)));
    }
    ids.into_iter().collect()
}

fn nearest_distinct(space: &GridSpace, x: PointId) -> PointId {
    (0..space.len())
        .map(PointId)
        .filter(|&y| y != x)
        .min_by_key(|&y| (space.d2_int(x, y), y.0))
        .expect("space has a second point")
}

fn uniform_map(rng: &mut ChaCha8Rng, spec: &GenSpec, repair_fpf: bool) -> Result<MultiMap> {
    if repair_fpf && spec.size < 2 {
        return Err(Error::Unsatisfiable(
            "a fixed-point-free map needs at least two points".into(),
        ));
    }
    let pts = sample_distinct(rng, spec.size, spec.dim);
    let space = Arc::new(GridSpace::new(spec.dim, pts)?);
    let domain = Subspace::full(space.clone());
    let mut table = BTreeMap::new();
    for i in 0..spec.size {
        let x = PointId(i);
        let mut ids = uniform_image_ids(rng, spec.size, spec.k);
        if repair_fpf {
            if let Some(pos) = ids.iter().position(|&y| y == x) {
                ids.remove(pos);
                let near = nearest_distinct(&space, x);
                if !ids.contains(&near) {
                    ids.push(near);
                }
            }
        }
        table.insert(x, ImagePoints::from_ids(ids));
    }
    MultiMap::new(domain, spec.k, table)
}

fn planted_map(
    rng: &mut ChaCha8Rng,
    spec: &GenSpec,
    lengths: &[usize],
) -> Result<(MultiMap, Vec<Vec<PointId>>)> {
    if lengths.iter().any(|&l| l == 0) {
        return Err(Error::Invalid("cycle lengths must be positive".into()));
    }
    let total: usize = lengths.iter().sum();
    if total > spec.size {
        return Err(Error::Unsatisfiable(format!(
            "cannot plant cycles of total length {total} on {} points",
            spec.size
        )));
    }
    let pts = sample_distinct(rng, spec.size, spec.dim);
    let space = Arc::new(GridSpace::new(spec.dim, pts)?);
    let domain = Subspace::full(space.clone());

    let mut order: Vec<usize> = (0..spec.size).collect();
    for j in (1..spec.size).rev() {
        let r = draw(rng, j + 1);
        order.swap(j, r);
    }

    let mut table = BTreeMap::new();
    let mut plants = Vec::new();
    let mut cursor = 0;
    for &l in lengths {
        let cyc: Vec<PointId> = order[cursor..cursor + l].iter().map(|&i| PointId(i)).collect();
        cursor += l;
        // Singleton images along the cycle: the only closed walk through a
        // planted point is the cycle itself, so its period is exactly `l`.
        for i in 0..l {
            table.insert(cyc[i], ImagePoints::from_ids(vec![cyc[(i + 1) % l]]));
        }
        plants.push(cyc);
    }
    for &i in &order[cursor..] {
        table.insert(
            PointId(i),
            ImagePoints::from_ids(uniform_image_ids(rng, spec.size, spec.k)),
        );
    }
    Ok((MultiMap::new(domain, spec.k, table)?, plants))
}

fn geometric_map(rng: &mut ChaCha8Rng, spec: &GenSpec) -> Result<MultiMap> {
    let xs = sample_distinct(rng, spec.size, spec.dim);
    let mut shift: Vec<i64> = vec![0; spec.dim];
    shift[0] = 2 + draw(rng, 2) as i64;
    for s in shift.iter_mut().skip(1) {
        *s = draw(rng, 2) as i64;
    }
    let mut ambient: BTreeSet<Vec<i64>> = xs.iter().cloned().collect();
    let mut rows: Vec<(Vec<i64>, BTreeSet<Vec<i64>>)> = Vec::new();
    for x in &xs {
        let cnt = 1 + draw(rng, spec.k);
        let mut imgs = BTreeSet::new();
        for _ in 0..cnt {
            // Noise is bounded by 1 while the first shift component is at
            // least 2, so the first coordinate strictly increases.
            let y: Vec<i64> = x
                .iter()
                .zip(&shift)
                .map(|(a, s)| a + s + draw(rng, 3) as i64 - 1)
                .collect();
            imgs.insert(y);
        }
        ambient.extend(imgs.iter().cloned());
        rows.push((x.clone(), imgs));
    }
    let space = Arc::new(GridSpace::new(spec.dim, ambient.into_iter().collect())?);
    let members: Vec<PointId> = xs
        .iter()
        .map(|c| space.id_of(c).expect("sampled point is on the grid"))
        .collect();
    let domain = Subspace::new(space.clone(), members)?;
    let mut table = BTreeMap::new();
    for (x, imgs) in rows {
        let ids: Vec<PointId> = imgs
            .iter()
            .map(|c| space.id_of(c).expect("image point is on the grid"))
            .collect();
        table.insert(
            space.id_of(&x).expect("domain point is on the grid"),
            ImagePoints::from_ids(ids),
        );
    }
    MultiMap::new(domain, spec.k, table)
}

/// Smallest cycle length through `x`, found by exhaustive depth-first
/// enumeration of all admissible sequences of length at most `l_max`.
/// Independent of the orbit-graph search: it walks the raw image table.
pub fn oracle_period(f: &MultiMap, x: PointId, l_max: usize) -> Result<Option<usize>> {
    f.image(x)?;
    for m in 1..=l_max {
        if seq_exists(f, x, x, m)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// True iff a sequence `cur = x_1, ..., x_m` inside the domain exists with
/// `x_{i+1}` in `f(x_i)` and `target` in `f(x_m)`, where `m = remaining`.
fn seq_exists(f: &MultiMap, target: PointId, cur: PointId, remaining: usize) -> Result<bool> {
    let img = f.image(cur)?;
    if remaining == 1 {
        return Ok(img.contains_id(target));
    }
    for &y in img.ids() {
        if f.domain().contains(y) && seq_exists(f, target, y, remaining - 1)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    /// Position of the instance in the suite run.
    pub index: usize,
    /// Sub-seed that reproduces the instance on its own.
    pub seed: u64,
    pub witness: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<Failure>,
}

pub const SUITES: &[&str] = &[
    "period_oracle",
    "kpow_bound",
    "colorable_fpf",
    "fpf_colorable",
    "brighten_2n",
    "nbright_ball",
    "extension",
    "restriction",
    "vietoris_hausdorff",
];

/// Runs `budget` seeded instances of the named suite. Each instance draws a
/// fresh sub-seed from the suite seed and is checked independently; the
/// report lists every violation with a replayable seed and witness.
pub fn run_suite(name: &str, budget: usize, seed: u64) -> Result<SuiteReport> {
    let runner: fn(u64) -> Check = match name {
        "period_oracle" => period_oracle_instance,
        "kpow_bound" => kpow_bound_instance,
        "colorable_fpf" => colorable_fpf_instance,
        "fpf_colorable" => fpf_colorable_instance,
        "brighten_2n" => brighten_instance,
        "nbright_ball" => nbright_ball_instance,
        "extension" => extension_instance,
        "restriction" => restriction_instance,
        "vietoris_hausdorff" => vietoris_hausdorff_instance,
        _ => return Err(Error::UnknownSuite(name.into())),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut failures = Vec::new();
    for index in 0..budget {
        let inst_seed = rng.next_u64();
        match runner(inst_seed) {
            Ok(()) => passed += 1,
            Err(witness) => failures.push(Failure {
                index,
                seed: inst_seed,
                witness,
            }),
        }
    }
    Ok(SuiteReport {
        suite: name.into(),
        seed,
        instances: budget,
        passed,
        failed: failures.len(),
        failures,
    })
}

type Check = std::result::Result<(), String>;

fn ck<T>(r: Result<T>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

/// Instance shapes for the mixed-model suites: all four models, dims 1-2,
/// 6-30 points, k up to 3.
fn mixed_spec(rng: &mut ChaCha8Rng) -> GenSpec {
    let model = match draw(rng, 4) {
        0 => GenModel::UniformK,
        1 => GenModel::FpfUniform,
        2 => GenModel::PlantedCycles(vec![1 + draw(rng, 3), 2 + draw(rng, 2)]),
        _ => GenModel::Geometric,
    };
    GenSpec {
        model,
        dim: 1 + draw(rng, 2),
        size: 6 + draw(rng, 25),
        k: 1 + draw(rng, 3),
        seed: rng.next_u64(),
    }
}

fn fpf_spec(rng: &mut ChaCha8Rng) -> GenSpec {
    GenSpec {
        model: GenModel::FpfUniform,
        dim: 1 + draw(rng, 2),
        size: 4 + draw(rng, 27),
        k: 1 + draw(rng, 3),
        seed: rng.next_u64(),
    }
}

fn period_oracle_instance(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = mixed_spec(&mut rng);
    let f = ck(spec.generate(), "generate")?;
    for &x in f.domain().members() {
        let fast = ck(f.period_at(x), "period_at")?;
        let slow = ck(oracle_period(&f, x, 8), "oracle_period")?;
        let agree = match fast {
            Some(m) if m <= 8 => slow == Some(m),
            _ => slow.is_none(),
        };
        if !agree {
            return Err(format!(
                "{spec:?}: point {x}: period_at gives {fast:?}, oracle at depth 8 gives {slow:?}"
            ));
        }
    }
    Ok(())
}

fn kpow_bound_instance(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = mixed_spec(&mut rng);
    let f = ck(spec.generate(), "generate")?;
    for &x in f.domain().members() {
        for n in 1..=5usize {
            match ck(f.iterate(x, n), "iterate")? {
                IterResult::Defined(s) => {
                    let bound = f.k().pow(n as u32);
                    if s.len() > bound {
                        return Err(format!(
                            "{spec:?}: |f^{n}({x})| = {} exceeds k^{n} = {bound}",
                            s.len()
                        ));
                    }
                }
                IterResult::UndefinedAt(_) => break,
            }
        }
    }
    Ok(())
}

fn colorable_fpf_instance(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = fpf_spec(&mut rng);
    let f = ck(spec.generate(), "generate")?;
    let mut c = ck(synth_coloring(&f), "synth_coloring")?;
    let report = verify_coloring(&f, &mut c);
    if !report.ok {
        return Err(format!("{spec:?}: synthesized coloring failed verification"));
    }
    if let Some(&w) = f.fix_points().first() {
        return Err(format!(
            "{spec:?}: map admits a verified coloring yet has fixed point {w}"
        ));
    }
    Ok(())
}

fn fpf_colorable_instance(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = fpf_spec(&mut rng);
    let f = ck(spec.generate(), "generate")?;
    if let Some(&w) = f.fix_points().first() {
        return Err(format!("{spec:?}: generator left fixed point {w}"));
    }
    let c = ck(synth_coloring(&f), "synth_coloring")?;
    if !c.verified() {
        return Err(format!("{spec:?}: synthesized coloring is not verified"));
    }
    Ok(())
}

fn brighten_instance(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // k <= 2 keeps synthesized class counts small; respin the sub-seed on
    // the rare draw whose conflict graph needs more than 6 classes.
    let mut spec = GenSpec {
        model: GenModel::FpfUniform,
        dim: 1 + draw(&mut rng, 2),
        size: 6 + draw(&mut rng, 11),
        k: 1 + draw(&mut rng, 2),
        seed: rng.next_u64(),
    };
    let mut found = None;
    for _ in 0..50 {
        let f = ck(spec.generate(), "generate")?;
        let c = ck(synth_coloring(&f), "synth_coloring")?;
        if c.sets().len() <= 6 {
            found = Some((f, c));
            break;
        }
        spec.seed = rng.next_u64();
    }
    let (f, c) = found.ok_or_else(|| {
        format!("{spec:?}: no draw produced a coloring with at most 6 classes")
    })?;
    let n = c.sets().len();
    let eps = Resolution::new(rat(1, 2)).expect("positive resolution");
    let out = ck(brighten(&f, &c, &eps), "brighten")?;

    if out.coloring.sets().len() > (1usize << n) {
        return Err(format!(
            "{spec:?}: {} output sets exceed 2^{n}",
            out.coloring.sets().len()
        ));
    }
    let mut covered = vec![false; f.ambient().len()];
    for s in out.coloring.sets() {
        for &p in s {
            covered[p.0] = true;
        }
    }
    if let Some(&m) = f.domain().members().iter().find(|m| !covered[m.0]) {
        return Err(format!("{spec:?}: output does not cover domain point {m}"));
    }
    if out.achieved_eps.eps() <= &rat(0, 1) {
        return Err(format!("{spec:?}: achieved resolution is not positive"));
    }
    for (i, s) in out.coloring.sets().iter().enumerate() {
        if !ck(is_bright_color(&f, s, &out.achieved_eps), "is_bright_color")? {
            return Err(format!(
                "{spec:?}: output set {i} is not bright at the achieved resolution"
            ));
        }
    }
    if !out.state.step0_intersection_empty {
        return Err(format!(
            "{spec:?}: input family has a common point despite being a coloring"
        ));
    }
    for step in &out.state.steps {
        for sub in &step.subfamilies {
            if !sub.claim1_ok {
                return Err(format!(
                    "{spec:?}: step {}: core images of subfamily {:#b} leave the other sets",
                    step.k, sub.mask
                ));
            }
            if !sub.claim2_ok {
                return Err(format!(
                    "{spec:?}: step {}: core of subfamily {:#b} meets the other sets",
                    step.k, sub.mask
                ));
            }
        }
        if !step.a1_ok {
            return Err(format!(
                "{spec:?}: step {}: a larger subfamily intersection escapes the accumulation",
                step.k
            ));
        }
        if !step.a2_ok {
            return Err(format!(
                "{spec:?}: step {}: chosen sets do not cover the accumulation",
                step.k
            ));
        }
    }
    Ok(())
}

fn nbright_ball_instance(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let depth = 1 + draw(&mut rng, 3);
    let spec = GenSpec {
        model: GenModel::Geometric,
        dim: 1 + draw(&mut rng, 2),
        size: 5 + draw(&mut rng, 16),
        k: 1 + draw(&mut rng, 3),
        seed: rng.next_u64(),
    };
    let f = ck(spec.generate(), "generate")?;
    let periodic = ck(f.periodic_set(depth), "periodic_set")?;
    if !periodic.is_empty() {
        return Err(format!("{spec:?}: expected an acyclic instance"));
    }
    let eps = Resolution::new(rat(1, 2)).expect("positive resolution");
    for &x in f.domain().members() {
        if ck(n_bright_ball(&f, x, depth, &eps), "n_bright_ball")?.is_none() {
            return Err(format!("{spec:?}: no ball at {x} for depth {depth}"));
        }
    }
    Ok(())
}

fn extension_instance(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = 4 + draw(&mut rng, 8);
    let line = sample_distinct(&mut rng, size, 1);
    let lo = line[0][0] - 1;
    let hi = line[size - 1][0] + 1;
    let mut pts = Vec::new();
    for a in lo..=hi {
        for b in [-1i64, 0, 1, 2] {
            pts.push(vec![a, b]);
        }
    }
    pts.sort();
    let space = Arc::new(ck(GridSpace::new(2, pts), "space")?);
    let members: Vec<PointId> = line
        .iter()
        .map(|c| space.id_of(&[c[0], 0]).expect("hyperplane point is on the grid"))
        .collect();
    let domain = ck(Subspace::new(space.clone(), members.clone()), "domain")?;
    let k = 1 + draw(&mut rng, 2);
    let mut table = BTreeMap::new();
    for &x in &members {
        let cnt = 1 + draw(&mut rng, k);
        let mut ids = BTreeSet::new();
        while ids.len() < cnt {
            ids.insert(members[draw(&mut rng, size)]);
        }
        table.insert(x, ImagePoints::from_ids(ids.into_iter().collect()));
    }
    let f = ck(MultiMap::new(domain, k, table), "map")?;
    let g = ck(f.extend_map(), "extend_map")?;

    for &x in f.domain().members() {
        if ck(g.image(x), "g.image")? != ck(f.image(x), "f.image")? {
            return Err(format!("seed {seed}: extension disagrees with the map at {x}"));
        }
    }
    let xset: BTreeSet<PointId> = members.iter().copied().collect();
    for id in space.ids() {
        if xset.contains(&id) || space.coords(id)[1] < 0 {
            continue;
        }
        let img = ck(g.image(id), "g.image")?;
        if let Some(&y) = img.ids().iter().find(|y| xset.contains(y)) {
            return Err(format!(
                "seed {seed}: image of off-domain point {id} meets the domain at {y}"
            ));
        }
    }
    for &x in &members {
        let pf = ck(f.period_at(x), "f.period_at")?;
        let pg = ck(g.period_at(x), "g.period_at")?;
        if pf != pg {
            return Err(format!(
                "seed {seed}: period at {x} changed from {pf:?} to {pg:?} under extension"
            ));
        }
    }
    Ok(())
}

fn restriction_instance(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = mixed_spec(&mut rng);
    let f = ck(spec.generate(), "generate")?;
    let max_period = 1 + draw(&mut rng, 4);
    let members = f.domain().members();
    let mut a: Vec<PointId> = members
        .iter()
        .copied()
        .filter(|_| draw(&mut rng, 2) == 1)
        .collect();
    if a.is_empty() {
        a.push(members[0]);
    }
    let fa = ck(f.restrict(&a), "restrict")?;
    let ps_sub = ck(fa.periodic_set(max_period), "restricted periodic_set")?;
    let ps = ck(f.periodic_set(max_period), "periodic_set")?;
    for &p in &ps_sub {
        if ps.binary_search(&p).is_err() {
            return Err(format!(
                "{spec:?}: {p} is periodic (max {max_period}) in the restriction only"
            ));
        }
        if a.binary_search(&p).is_err() {
            return Err(format!("{spec:?}: restricted periodic point {p} escapes A"));
        }
    }
    Ok(())
}

fn vietoris_hausdorff_instance(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = 3 + draw(&mut rng, 10);
    let dim = 1 + draw(&mut rng, 2);
    let pts = sample_distinct(&mut rng, size, dim);
    let space = Arc::new(ck(GridSpace::new(dim, pts), "space")?);
    let ids: Vec<PointId> = space.ids().collect();

    let mut sets: Vec<Vec<PointId>> = Vec::new();
    for mask in 1u32..(1 << size) {
        if mask.count_ones() <= 3 {
            sets.push(
                ids.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect(),
            );
        }
    }
    let ksets: Vec<KSet> = sets
        .iter()
        .map(|s| ck(KSet::from_ids(&space, s, 3), "kset"))
        .collect::<std::result::Result<_, _>>()?;

    let resolutions = [rat(1, 2), rat(1, 1), rat(3, 2)]
        .into_iter()
        .map(|e| Resolution::new(e).expect("positive resolution"))
        .collect::<Vec<_>>();
    let mut nbhds = Vec::new();
    for eps in &resolutions {
        let per_set = sets
            .iter()
            .map(|s| ck(VietorisNbhd::from_balls(space.clone(), s, eps), "nbhd"))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        nbhds.push(per_set);
    }

    for (ai, a) in ksets.iter().enumerate() {
        for (bi, b) in ksets.iter().enumerate() {
            let h2 = ck(hausdorff2(a, b), "hausdorff2")?;
            for (ei, eps) in resolutions.iter().enumerate() {
                let member = vietoris_member(a, &nbhds[ei][bi]);
                let e2 = eps.eps2();
                if h2 < e2 && !member {
                    return Err(format!(
                        "seed {seed}: sets {ai}/{bi}: inside squared distance {e2} but not a member"
                    ));
                }
                if member && h2 > e2 {
                    return Err(format!(
                        "seed {seed}: sets {ai}/{bi}: member but squared distance exceeds {e2}"
                    ));
                }
            }
        }
    }
    Ok(())
}
