use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::generators::{build_level, certify_girth, GeneratorParams, GeneratorSet, DEFAULT_WORD_BUDGET};
use crate::graph::{cayley, GraphError, LDigraph};
use crate::group::{GroupElement, GroupSpec, Modulus};

use super::{ball_type, inner_density, is_unit_interval, BallType, HomogeneityError, HomogeneityReport, LabelMode, OrderedGraph};

/// Largest `d * log2(n)` for which the density test is done in exact
/// arithmetic; beyond it a floating-point logarithm is used.
const EXACT_DENSITY_BITS: f64 = 200_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildMode {
    Materialize,
    Implicit,
}

/// Best connected component of a materialized ordered Cayley graph of `H`.
#[derive(Debug, Clone)]
pub struct MaterializedCayley {
    pub ordered: OrderedGraph,
    /// Group element of every vertex of `ordered`.
    pub elements: Vec<GroupElement>,
    pub spec: GroupSpec,
    pub generators: Vec<(String, GroupElement)>,
    pub r: usize,
    pub tau_star: BallType,
    /// Report on the selected component.
    pub report: HomogeneityReport,
    pub component_count: usize,
    pub girth: Option<usize>,
}

impl MaterializedCayley {
    pub fn n(&self) -> u64 {
        modulus_of(&self.spec)
    }

    pub fn tau_star_count(&self) -> usize {
        self.report.count_of(&self.tau_star)
    }
}

/// Local access to the ordered Cayley graph of `H` without materializing it.
#[derive(Debug, Clone)]
pub struct ImplicitHandle {
    spec: GroupSpec,
    generators: Vec<(String, GroupElement)>,
    r: usize,
    tau_star: BallType,
}

#[derive(Debug, Clone)]
pub enum Homogeneous {
    Materialized(Box<MaterializedCayley>),
    Implicit(ImplicitHandle),
}

/// An explored ball; vertex 0 is the centre and ids are discovery indices.
#[derive(Debug, Clone)]
pub struct ImplicitBall {
    pub graph: LDigraph,
    pub elements: Vec<GroupElement>,
    pub ranks: Vec<usize>,
    pub ball_type: BallType,
}

impl ImplicitBall {
    pub fn is_tree(&self) -> bool {
        self.graph.edge_count() + 1 == self.graph.vertex_count()
    }
}

fn modulus_of(spec: &GroupSpec) -> u64 {
    match spec.modulus() {
        Modulus::Finite(n) => n,
        Modulus::Infinite => 0,
    }
}

fn ceil_log2(k: usize) -> u32 {
    usize::BITS - (k - 1).leading_zeros()
}

/// Compares elements of `H` or `U` by the order of `U`.
fn u_order(a: &GroupElement, b: &GroupElement) -> Ordering {
    a.embed_in_u().compare(&b.embed_in_u()).expect("U is ordered")
}

fn density_at_least(n: u64, d: u32, r: usize, target: &BigRational) -> bool {
    if n <= 2 * r as u64 {
        return false;
    }
    if d as f64 * (n as f64).log2() <= EXACT_DENSITY_BITS {
        return &inner_density(n, d, r).expect("n > 2r") >= target;
    }
    let t = target.to_f64().unwrap_or(0.0);
    t <= 0.0 || d as f64 * (-(2.0 * r as f64) / n as f64).ln_1p() >= t.ln()
}

/// Smallest even `n > 2r + 1` with `(n - 2r)^d / n^d >= 1 - epsilon`.
pub fn choose_n(d: u32, r: usize, epsilon: &BigRational) -> Result<u64, HomogeneityError> {
    if !is_unit_interval(epsilon) {
        return Err(HomogeneityError::InvalidEpsilon);
    }
    let target = BigRational::one() - epsilon;
    let lo = 2 * r as u64 + 2;
    if density_at_least(lo, d, r, &target) {
        return Ok(lo);
    }
    let mut bad = lo;
    let mut good = lo;
    while !density_at_least(good, d, r, &target) {
        bad = good;
        good = good.checked_mul(2).ok_or_else(|| HomogeneityError::Invalid("n overflows".into()))?;
    }
    while good - bad > 2 {
        let mid = bad + ((good - bad) / 4) * 2;
        if density_at_least(mid, d, r, &target) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

/// Breadth-first ball around `centre` using right multiplication by the
/// generators and their inverses; every edge between ball vertices is kept.
fn explore(generators: &[(String, GroupElement)], centre: &GroupElement, r: usize) -> ImplicitBall {
    let inverses: Vec<GroupElement> = generators.iter().map(|(_, s)| s.inverse()).collect();
    let mut elements = vec![centre.clone()];
    let mut dist = vec![0usize];
    let mut index: HashMap<GroupElement, usize> = HashMap::from([(centre.clone(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        if dist[v] == r {
            continue;
        }
        for ((_, s), s_inv) in generators.iter().zip(&inverses) {
            for step in [s, s_inv] {
                let w = elements[v].mul(step).expect("same group");
                if !index.contains_key(&w) {
                    index.insert(w.clone(), elements.len());
                    elements.push(w);
                    dist.push(dist[v] + 1);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
    }
    let mut graph = LDigraph::with_vertices(elements.len(), generators.iter().map(|(l, _)| l.clone()));
    for (v, x) in elements.iter().enumerate() {
        for (label, (_, s)) in generators.iter().enumerate() {
            if let Some(&w) = index.get(&x.mul(s).expect("same group")) {
                graph.add_edge_labelled(v, w, label).expect("valid indices");
            }
        }
    }
    let mut idx: Vec<usize> = (0..elements.len()).collect();
    idx.sort_by(|&a, &b| u_order(&elements[a], &elements[b]));
    let mut ranks = vec![0; idx.len()];
    for (rank, v) in idx.into_iter().enumerate() {
        ranks[v] = rank;
    }
    let ball_type = ball_type(&graph, 0, r, |a, b| Some(ranks[a].cmp(&ranks[b])), LabelMode::Labelled);
    ImplicitBall { graph, elements, ranks, ball_type }
}

/// Reinterprets generator label vectors in `target`.
fn lift_generators(set: &[GroupElement], target: GroupSpec) -> Result<Vec<(String, GroupElement)>, HomogeneityError> {
    set.iter()
        .enumerate()
        .map(|(j, s)| Ok((format!("s{}", j + 1), GroupElement::from_labels(target, s.labels().to_vec())?)))
        .collect()
}

/// The type of the identity's ball in the Cayley graph of `U`.
fn reference_type(height: u32, generators: &[(String, GroupElement)], r: usize) -> Result<BallType, HomogeneityError> {
    let u = GroupSpec::u(height);
    let gens: Vec<(String, GroupElement)> = generators
        .iter()
        .map(|(l, s)| Ok((l.clone(), GroupElement::from_labels(u, s.labels().to_vec())?)))
        .collect::<Result<_, HomogeneityError>>()?;
    Ok(explore(&gens, &GroupElement::identity(u), r).ball_type)
}

impl ImplicitHandle {
    /// `generators` are reinterpreted in `H_height` with modulus `n`.
    pub fn new(height: u32, n: u64, generators: &[GroupElement], r: usize) -> Result<Self, HomogeneityError> {
        let spec = GroupSpec::h(height, n)?;
        let generators = lift_generators(generators, spec)?;
        let tau_star = reference_type(height, &generators, r)?;
        Ok(Self { spec, generators, r, tau_star })
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn n(&self) -> u64 {
        modulus_of(&self.spec)
    }

    pub fn d(&self) -> usize {
        self.spec.dim()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn generators(&self) -> &[(String, GroupElement)] {
        &self.generators
    }

    /// The reference type at the handle's radius.
    pub fn tau_star(&self) -> &BallType {
        &self.tau_star
    }

    /// The reference type at another radius.
    pub fn tau_star_at(&self, r: usize) -> Result<BallType, HomogeneityError> {
        if r == self.r {
            return Ok(self.tau_star.clone());
        }
        reference_type(self.spec.height(), &self.generators, r)
    }

    /// The element with coordinates `coords`, each in `0..n`.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, HomogeneityError> {
        let n = self.n() as i64;
        if coords.len() != self.d() {
            return Err(HomogeneityError::InvalidCoordinates(format!("expected {} coordinates, got {}", self.d(), coords.len())));
        }
        if let Some(c) = coords.iter().find(|&&c| c < 0 || c >= n) {
            return Err(HomogeneityError::InvalidCoordinates(format!("coordinate {c} is outside 0..{n}")));
        }
        Ok(GroupElement::from_labels(self.spec, coords.to_vec())?)
    }

    /// Whether every coordinate lies in `[r, n - 1 - r]`.
    pub fn is_inner(&self, u: &GroupElement, r: usize) -> bool {
        let (r, n) = (r as i64, self.n() as i64);
        u.labels().iter().all(|&x| x >= r && x <= n - 1 - r)
    }
}

/// The ordered radius-`r` ball around `u`, computed by group multiplication.
pub fn implicit_ball(handle: &ImplicitHandle, u: &GroupElement, r: usize) -> Result<ImplicitBall, HomogeneityError> {
    if u.spec() != handle.spec {
        return Err(HomogeneityError::InvalidCoordinates(format!("{} is not an element of {}", u, handle.spec)));
    }
    Ok(explore(&handle.generators, u, r))
}

fn materialize(
    spec: GroupSpec,
    generators: Vec<(String, GroupElement)>,
    r: usize,
    budget: u128,
) -> Result<MaterializedCayley, HomogeneityError> {
    let tau_star = reference_type(spec.height(), &generators, r)?;
    let c = cayley(&spec, &generators, budget)?;
    let og = OrderedGraph::from_keys(c.graph, &c.elements.iter().map(UKey).collect::<Vec<_>>())?;
    let types: Vec<BallType> = (0..og.vertex_count()).map(|u| og.tau(u, r).expect("valid vertex")).collect();
    let components = og.components();
    let component_count = components.len();
    let score = |members: &[usize]| members.iter().filter(|&&v| types[v] == tau_star).count();
    let (members, ordered) = components
        .into_iter()
        .min_by(|(a, _), (b, _)| {
            let (sa, sb) = (score(a) as u128 * b.len() as u128, score(b) as u128 * a.len() as u128);
            sb.cmp(&sa).then(b.len().cmp(&a.len())).then(a[0].cmp(&b[0]))
        })
        .ok_or_else(|| HomogeneityError::Invalid("empty group".into()))?;
    let report = HomogeneityReport::from_types(r, &members.iter().map(|&v| types[v].clone()).collect::<Vec<_>>());
    let elements = members.iter().map(|&v| c.elements[v].clone()).collect();
    let girth = ordered.graph.girth();
    Ok(MaterializedCayley { ordered, elements, spec, generators, r, tau_star, report, component_count, girth })
}

/// Sort key ordering group elements by `U`.
struct UKey<'a>(&'a GroupElement);

impl PartialEq for UKey<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for UKey<'_> {}

impl PartialOrd for UKey<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for UKey<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        u_order(self.0, other.0)
    }
}

/// A `2k`-regular ordered Cayley graph of girth larger than `2r + 1` in which
/// at least a `1 - epsilon` fraction of vertices (of the inner region) share
/// the reference type. `k = 1` is the directed `n`-cycle; larger `k` take the
/// explicit generator family with girth bound `2r + 1`.
pub fn build_homogeneous_cayley(
    k: usize,
    r: usize,
    epsilon: &BigRational,
    mode: BuildMode,
    budget: u128,
) -> Result<Homogeneous, HomogeneityError> {
    if k == 0 {
        return Err(HomogeneityError::Invalid("need at least one generator".into()));
    }
    if !is_unit_interval(epsilon) {
        return Err(HomogeneityError::InvalidEpsilon);
    }
    if k == 1 {
        let n = choose_n(1, r, epsilon)?;
        let spec = GroupSpec::h(1, n)?;
        let gens = vec![GroupElement::x(spec, 1)?];
        return finish(1, n, &gens, r, mode, budget);
    }
    let g = 2 * r as u32 + 1;
    let params = GeneratorParams::new(g, ceil_log2(k).max(1))?;
    let set = build_level(params, g)?.truncated(k);
    build_homogeneous_cayley_with(&set, r, epsilon, mode, budget)
}

/// As [`build_homogeneous_cayley`] for a given generator set, which must be
/// certified for girth larger than `2r + 1`.
pub fn build_homogeneous_cayley_with(
    set: &GeneratorSet,
    r: usize,
    epsilon: &BigRational,
    mode: BuildMode,
    budget: u128,
) -> Result<Homogeneous, HomogeneityError> {
    let g = 2 * r as u32 + 1;
    let first = set.elements.first().ok_or_else(|| HomogeneityError::Invalid("empty generator set".into()))?;
    let cert = certify_girth(set, g, DEFAULT_WORD_BUDGET)?;
    if !cert.ok {
        return Err(HomogeneityError::Uncertified(g));
    }
    let height = first.height();
    let d = first.spec().dim() as u32;
    let n = choose_n(d, r, epsilon)?;
    finish(height, n, &set.elements, r, mode, budget)
}

fn finish(height: u32, n: u64, gens: &[GroupElement], r: usize, mode: BuildMode, budget: u128) -> Result<Homogeneous, HomogeneityError> {
    match mode {
        BuildMode::Implicit => Ok(Homogeneous::Implicit(ImplicitHandle::new(height, n, gens, r)?)),
        BuildMode::Materialize => {
            let spec = GroupSpec::h(height, n)?;
            let needed = spec.order().unwrap_or(u128::MAX);
            if needed > budget {
                return Err(GraphError::BudgetExceeded { needed, budget }.into());
            }
            let generators = lift_generators(gens, spec)?;
            Ok(Homogeneous::Materialized(Box::new(materialize(spec, generators, r, budget)?)))
        }
    }
}
