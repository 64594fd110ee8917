use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::view::{view_tree, LocalInput, PoView};
use super::{run, LocalAlgorithm, Output, Rule, RunInputs, SimError, Solution, SolutionKind};
use crate::graph::LDigraph;

/// Largest number of vertices (or edges) brute force will enumerate over.
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Minimize,
    Maximize,
}

/// A graph problem whose feasibility is checked by a radius-1 PO verifier.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: &'static str,
    pub objective: Objective,
    pub kind: SolutionKind,
    pub verifier: LocalAlgorithm,
}

fn selected(v: &PoView, node: usize) -> bool {
    v.input(node).selected()
}

fn edge_count(v: &PoView, node: usize) -> usize {
    v.input(node).edges().map_or(0, |e| e.len())
}

impl Problem {
    pub const NAMES: [&'static str; 6] =
        ["vertex-cover", "dominating-set", "independent-set", "edge-cover", "matching", "edge-dominating-set"];

    pub fn all() -> Vec<Problem> {
        Self::NAMES.iter().filter_map(|n| Self::by_name(n)).collect()
    }

    pub fn by_name(name: &str) -> Option<Problem> {
        use Objective::*;
        use SolutionKind::*;
        let (name, objective, kind, check): (&'static str, _, _, fn(&PoView) -> bool) = match name {
            "vertex-cover" => ("vertex-cover", Minimize, Vertex, |v| {
                selected(v, 0) || v.root_children().iter().all(|&c| selected(v, c))
            }),
            "dominating-set" => ("dominating-set", Minimize, Vertex, |v| {
                selected(v, 0) || v.root_children().iter().any(|&c| selected(v, c))
            }),
            "independent-set" => ("independent-set", Maximize, Vertex, |v| {
                !selected(v, 0) || v.root_children().iter().all(|&c| !selected(v, c))
            }),
            "edge-cover" => ("edge-cover", Minimize, Edge, |v| edge_count(v, 0) > 0),
            "matching" => ("matching", Maximize, Edge, |v| edge_count(v, 0) <= 1),
            "edge-dominating-set" => ("edge-dominating-set", Minimize, Edge, |v| {
                edge_count(v, 0) > 0 || v.root_children().iter().all(|&c| edge_count(v, c) > 0)
            }),
            _ => return None,
        };
        let verifier = LocalAlgorithm::po(&format!("verify-{name}"), 1, Vertex, move |v| Ok(Output::Bit(check(v))));
        Some(Problem { name, objective, kind, verifier })
    }

    fn better(&self, a: usize, b: usize) -> bool {
        match self.objective {
            Objective::Minimize => a < b,
            Objective::Maximize => a > b,
        }
    }
}

/// Acceptance bit of every vertex.
pub fn verify_detailed(p: &Problem, g: &LDigraph, x: &Solution) -> Result<Vec<bool>, SimError> {
    if x.kind != p.kind {
        return Err(SimError::Invalid(format!("{} needs a {:?} solution", p.name, p.kind)));
    }
    let inputs = x.local_inputs();
    let out = run(&p.verifier, g, RunInputs::local(&inputs))?;
    Ok(out.outputs.iter().map(|o| *o == Output::Bit(true)).collect())
}

pub fn verify_solution(p: &Problem, g: &LDigraph, x: &Solution) -> Result<bool, SimError> {
    Ok(verify_detailed(p, g, x)?.into_iter().all(|b| b))
}

/// Optimum size by exhaustive search, or `None` when nothing is feasible.
pub fn brute_force_optimum(p: &Problem, g: &LDigraph) -> Result<Option<usize>, SimError> {
    let size = match p.kind {
        SolutionKind::Vertex => g.vertex_count(),
        SolutionKind::Edge => g.edge_count(),
    };
    if size > BRUTE_FORCE_LIMIT {
        return Err(SimError::TooLarge { size, limit: BRUTE_FORCE_LIMIT });
    }
    let Rule::Po(check) = &p.verifier.rule else { unreachable!("verifiers are PO") };
    let trees: Vec<_> = (0..g.vertex_count()).map(|u| view_tree(g, u, p.verifier.radius)).collect();
    let mut best: Option<usize> = None;
    for mask in 0u32..(1u32 << size) {
        let k = mask.count_ones() as usize;
        if best.is_some_and(|b| !p.better(k, b)) {
            continue;
        }
        let members: Vec<usize> = (0..size).filter(|i| mask >> i & 1 == 1).collect();
        let x = match p.kind {
            SolutionKind::Vertex => Solution::vertex_set(g, &members)?,
            SolutionKind::Edge => Solution::edge_set(g, &members)?,
        };
        let inputs: Vec<LocalInput> = x.local_inputs();
        let ok = trees.iter().try_fold(true, |acc, t| {
            Ok::<_, SimError>(acc && check(&t.with_inputs(Some(&inputs))).map_err(SimError::Invalid)? == Output::Bit(true))
        })?;
        if ok {
            best = Some(k);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RatioOutcome {
    /// Solution size over optimum (minimization) or optimum over solution
    /// size (maximization); always at least 1.
    Ratio(Ratio<u64>),
    Infeasible,
    Unbounded,
}

/// Approximation ratio of `alg` on a single instance.
pub fn approx_ratio(alg: &LocalAlgorithm, p: &Problem, g: &LDigraph, inputs: RunInputs<'_>) -> Result<RatioOutcome, SimError> {
    let x = run(alg, g, inputs)?;
    if !verify_solution(p, g, &x)? {
        return Ok(RatioOutcome::Infeasible);
    }
    let Some(opt) = brute_force_optimum(p, g)? else {
        return Ok(RatioOutcome::Infeasible);
    };
    let (num, den) = match p.objective {
        Objective::Minimize => (x.len(), opt),
        Objective::Maximize => (opt, x.len()),
    };
    Ok(match (num, den) {
        (0, 0) => RatioOutcome::Ratio(Ratio::from_integer(1)),
        (_, 0) => RatioOutcome::Unbounded,
        (a, b) => RatioOutcome::Ratio(Ratio::new(a as u64, b as u64)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::directed_cycle;
    use crate::localsim::builtin;

    #[test]
    fn cycle_optima() {
        let g = directed_cycle(6, "a");
        let opt = |name| brute_force_optimum(&Problem::by_name(name).unwrap(), &g).unwrap();
        assert_eq!(opt("vertex-cover"), Some(3));
        assert_eq!(opt("dominating-set"), Some(2));
        assert_eq!(opt("independent-set"), Some(3));
        assert_eq!(opt("edge-cover"), Some(3));
        assert_eq!(opt("matching"), Some(3));
        assert_eq!(opt("edge-dominating-set"), Some(2));
    }

    #[test]
    fn ratios() {
        let g = directed_cycle(6, "a");
        let all = builtin("po-all").unwrap();
        let ds = Problem::by_name("dominating-set").unwrap();
        assert_eq!(approx_ratio(&all, &ds, &g, RunInputs::default()).unwrap(), RatioOutcome::Ratio(Ratio::from_integer(3)));
        let vc = Problem::by_name("vertex-cover").unwrap();
        assert_eq!(approx_ratio(&all, &vc, &g, RunInputs::default()).unwrap(), RatioOutcome::Ratio(Ratio::from_integer(2)));
        let none = builtin("po-none").unwrap();
        assert_eq!(approx_ratio(&none, &vc, &g, RunInputs::default()).unwrap(), RatioOutcome::Infeasible);
        let is = Problem::by_name("independent-set").unwrap();
        assert_eq!(approx_ratio(&none, &is, &g, RunInputs::default()).unwrap(), RatioOutcome::Unbounded);
        let edges = builtin("po-all-edges").unwrap();
        let ec = Problem::by_name("edge-cover").unwrap();
        assert_eq!(approx_ratio(&edges, &ec, &g, RunInputs::default()).unwrap(), RatioOutcome::Ratio(Ratio::from_integer(2)));
    }

    #[test]
    fn verifiers_reject_locally() {
        let g = directed_cycle(6, "a");
        let vc = Problem::by_name("vertex-cover").unwrap();
        let x = Solution::vertex_set(&g, &[0, 2, 3]).unwrap();
        assert_eq!(verify_detailed(&vc, &g, &x).unwrap(), [true, true, true, true, false, false]);
        let m = Problem::by_name("matching").unwrap();
        assert!(verify_solution(&m, &g, &Solution::edge_set(&g, &[0, 2, 4]).unwrap()).unwrap());
        assert!(!verify_solution(&m, &g, &Solution::edge_set(&g, &[0, 1]).unwrap()).unwrap());
        assert!(verify_solution(&m, &g, &x).is_err());
    }

    #[test]
    fn isolated_vertex_has_no_edge_cover() {
        let mut g = directed_cycle(3, "a");
        g.add_vertex(3).unwrap();
        assert_eq!(brute_force_optimum(&Problem::by_name("edge-cover").unwrap(), &g).unwrap(), None);
        let big = directed_cycle(21, "a");
        assert!(matches!(
            brute_force_optimum(&Problem::by_name("vertex-cover").unwrap(), &big),
            Err(SimError::TooLarge { .. })
        ));
    }
}
