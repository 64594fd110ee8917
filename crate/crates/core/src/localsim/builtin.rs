use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use super::view::{PoView, Step, Word};
use super::{LocalAlgorithm, Output, Rule, SimError, SolutionKind};
use crate::graph::Dir;
use crate::homogeneity::{ball_type, BallType, LabelMode};

const NAMES: &[&str] = &[
    "po-all",
    "po-none",
    "po-sources",
    "po-all-edges",
    "po-min-out-edge",
    "oi-min-rank",
    "oi-local-max",
    "id-min",
    "id-parity",
];

pub fn builtin_names() -> &'static [&'static str] {
    NAMES
}

fn min_radius(name: &str) -> usize {
    match name {
        "po-all" | "po-none" | "oi-min-rank" | "oi-local-max" | "id-min" | "id-parity" => 0,
        "po-min-out-edge" => 2,
        _ => 1,
    }
}

/// A registered algorithm at its default radius.
pub fn builtin(name: &str) -> Option<LocalAlgorithm> {
    builtin_with_radius(name, min_radius(name).max(1)).ok()
}

pub fn builtin_with_radius(name: &str, r: usize) -> Result<LocalAlgorithm, SimError> {
    if !NAMES.contains(&name) {
        return Err(SimError::Invalid(format!("unknown algorithm {name:?}")));
    }
    if r < min_radius(name) {
        return Err(SimError::Invalid(format!("{name} needs radius at least {}", min_radius(name))));
    }
    use SolutionKind::*;
    Ok(match name {
        "po-all" => LocalAlgorithm::po(name, r, Vertex, |_| Ok(Output::Bit(true))),
        "po-none" => LocalAlgorithm::po(name, r, Vertex, |_| Ok(Output::Bit(false))),
        "po-sources" => LocalAlgorithm::po(name, r, Vertex, |v| {
            Ok(Output::Bit(v.root_children().iter().all(|&c| !v.nodes()[c].word[0].inverse)))
        }),
        "po-all-edges" => LocalAlgorithm::po(name, r, Edge, |v| {
            Ok(Output::Edges(v.root_children().iter().map(|&c| half_edge(&v.nodes()[c].word[0])).collect()))
        }),
        "po-min-out-edge" => LocalAlgorithm::po(name, r, Edge, min_out_edge),
        "oi-min-rank" => LocalAlgorithm::oi(name, r, Vertex, |t| {
            Ok(Output::Bit((1..t.vertex_count).all(|j| t.relation(0, j) == Some(Ordering::Less))))
        }),
        "oi-local-max" => LocalAlgorithm::oi(name, r, Vertex, |t| {
            Ok(Output::Bit((1..t.vertex_count).all(|j| t.relation(0, j) == Some(Ordering::Greater))))
        }),
        "id-min" => LocalAlgorithm::id(name, r, Vertex, |b| {
            let me = b.graph.id(b.root);
            Ok(Output::Bit(b.graph.ids().iter().all(|&x| x >= me)))
        }),
        "id-parity" => LocalAlgorithm::id(name, r, Vertex, |b| Ok(Output::Bit(b.graph.id(b.root) % 2 == 0))),
        _ => unreachable!(),
    })
}

fn half_edge(s: &Step) -> (String, Dir) {
    (s.label.clone(), s.dir())
}

/// Every vertex selects its out-edge with the smallest label.
fn min_out_edge(v: &PoView) -> Result<Output, String> {
    let nodes = v.nodes();
    let mut chosen = BTreeSet::new();
    let own = v.root_children().iter().map(|&c| &nodes[c].word[0]).filter(|s| !s.inverse).min();
    if let Some(s) = own {
        chosen.insert(half_edge(s));
    }
    for &c in v.root_children() {
        let s = &nodes[c].word[0];
        if !s.inverse {
            continue;
        }
        let tail_min = nodes[c]
            .children
            .iter()
            .map(|&d| nodes[d].word[1].clone())
            .filter(|x| !x.inverse)
            .map(|x| x.label)
            .min();
        if tail_min.is_none_or(|m| s.label <= m) {
            chosen.insert(half_edge(s));
        }
    }
    Ok(Output::Edges(chosen))
}

/// A total order on the words of a complete tree, read off a tree-shaped
/// ball type such as `τ*`.
#[derive(Debug, Clone)]
pub struct TreeOrder {
    pub ty: BallType,
    index: HashMap<Word, usize>,
}

impl TreeOrder {
    pub fn from_type(ty: &BallType) -> Result<Self, SimError> {
        if !ty.is_tree() || !ty.is_total() {
            return Err(SimError::Invalid("the reference type must be a totally ordered tree".into()));
        }
        let mut words: Vec<Option<Word>> = vec![None; ty.vertex_count];
        words[0] = Some(Vec::new());
        let mut by_from: HashMap<u32, Vec<usize>> = HashMap::new();
        for (i, e) in ty.edges.iter().enumerate() {
            by_from.entry(e.from).or_default().push(i);
        }
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            for &i in by_from.get(&x).into_iter().flatten() {
                let e = &ty.edges[i];
                let (Some(label), Some(dir)) = (&e.label, e.dir) else {
                    return Err(SimError::Invalid("the reference type must be labelled".into()));
                };
                if words[e.to as usize].is_none() {
                    let mut w = words[x as usize].clone().expect("assigned before queued");
                    w.push(Step::new(label.clone(), dir == Dir::In));
                    words[e.to as usize] = Some(w);
                    queue.push_back(e.to);
                }
            }
        }
        let index = words.into_iter().enumerate().map(|(i, w)| (w.expect("types are connected"), i)).collect();
        Ok(Self { ty: ty.clone(), index })
    }

    pub fn radius(&self) -> usize {
        self.ty.radius
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn index_of(&self, w: &[Step]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn cmp_words(&self, a: &[Step], b: &[Step]) -> Option<Ordering> {
        self.ty.relation(self.index_of(a)?, self.index_of(b)?)
    }

    /// Rank of every word of `T*` under `<*`.
    pub fn rank_of(&self, w: &[Step]) -> Option<usize> {
        let ranks = self.ty.ranks()?;
        Some(ranks[self.index_of(w)?])
    }
}

/// The PO algorithm `B(W) = A((T*, <*) ↾ W)` simulating the OI algorithm `A`
/// on views ordered by `order`.
pub fn po_from_oi(a: &LocalAlgorithm, order: &TreeOrder) -> Result<LocalAlgorithm, SimError> {
    let Rule::Oi(f) = &a.rule else {
        return Err(SimError::Invalid(format!("{} is not an OI algorithm", a.name)));
    };
    if a.radius > order.radius() {
        return Err(SimError::Invalid(format!(
            "reference tree has radius {}, algorithm needs {}",
            order.radius(),
            a.radius
        )));
    }
    let f = Arc::clone(f);
    let order = order.clone();
    let r = a.radius;
    Ok(LocalAlgorithm::po(&format!("po({})", a.name), r, a.kind, move |v| {
        let idx: Vec<usize> = v
            .nodes()
            .iter()
            .map(|n| order.index_of(&n.word))
            .collect::<Option<_>>()
            .ok_or_else(|| "view does not embed in the reference tree".to_string())?;
        let g = v.shape.to_graph();
        let t = ball_type(&g, 0, r, |x, y| order.ty.relation(idx[x], idx[y]), LabelMode::Labelled);
        f(&t)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homogeneity::tests::grid;
    use crate::localsim::{complete_tree, view_tree};

    #[test]
    fn registry() {
        for name in builtin_names() {
            let a = builtin(name).unwrap();
            assert_eq!(a.name, *name);
        }
        assert!(builtin("nope").is_none());
        assert!(builtin_with_radius("po-min-out-edge", 1).is_err());
        assert_eq!(builtin("po-min-out-edge").unwrap().radius, 2);
    }

    #[test]
    fn grid_reference_order() {
        let og = grid();
        let t = og.tau(3 * 6 + 2, 1).unwrap();
        let order = TreeOrder::from_type(&t).unwrap();
        assert_eq!(order.len(), complete_tree(&["a", "b"], 1).len());
        let rank = |w: &[Step]| order.rank_of(w).unwrap();
        assert_eq!(rank(&[Step::back("a")]), 0);
        assert_eq!(rank(&[Step::back("b")]), 1);
        assert_eq!(rank(&[]), 2);
        assert_eq!(rank(&[Step::out("b")]), 3);
        assert_eq!(rank(&[Step::out("a")]), 4);
    }

    #[test]
    fn transfer_agrees_on_inner_vertices() {
        let og = grid();
        let t = og.tau(3 * 6 + 2, 1).unwrap();
        let order = TreeOrder::from_type(&t).unwrap();
        let a = builtin("oi-min-rank").unwrap();
        let b = po_from_oi(&a, &order).unwrap();
        let Rule::Po(fb) = &b.rule else { unreachable!() };
        let Rule::Oi(fa) = &a.rule else { unreachable!() };
        for u in 0..og.vertex_count() {
            let tu = og.tau(u, 1).unwrap();
            let view = view_tree(&og.graph, u, 1).with_inputs(None);
            if tu == t {
                assert_eq!(fb(&view).unwrap(), fa(&tu).unwrap());
            }
        }
        assert!(po_from_oi(&builtin("po-all").unwrap(), &order).is_err());
        assert!(po_from_oi(&builtin_with_radius("oi-min-rank", 2).unwrap(), &order).is_err());
    }
}
