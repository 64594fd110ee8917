use std::collections::HashMap;
use std::hash::Hash;

use crate::group::{GroupElement, GroupSpec, Modulus};

use super::{GraphError, LDigraph};

pub const DEFAULT_VERTEX_BUDGET: u128 = 1_000_000;

/// A group small enough to list element by element.
pub trait FiniteGroup {
    type Element: Clone + Eq + Hash;

    /// `None` when the group is infinite or its order overflows.
    fn order(&self) -> Option<u128>;
    /// All elements in a fixed enumeration order, identity first.
    fn elements(&self) -> Vec<Self::Element>;
    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn is_identity(&self, a: &Self::Element) -> bool;
    fn encode(&self, a: &Self::Element) -> String;
}

/// `Z_{n1} x ... x Z_{nk}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicProduct {
    pub moduli: Vec<u64>,
}

impl CyclicProduct {
    pub fn new(moduli: Vec<u64>) -> Result<Self, GraphError> {
        if moduli.contains(&0) {
            return Err(GraphError::Invalid("cyclic factors need a positive modulus".into()));
        }
        Ok(Self { moduli })
    }

    pub fn element(&self, coords: &[i64]) -> Result<Vec<u64>, GraphError> {
        if coords.len() != self.moduli.len() {
            return Err(GraphError::Invalid(format!(
                "expected {} coordinates, got {}",
                self.moduli.len(),
                coords.len()
            )));
        }
        Ok(coords.iter().zip(&self.moduli).map(|(&c, &n)| c.rem_euclid(n as i64) as u64).collect())
    }
}

/// Lexicographic odometer over `0..radix[0] x 0..radix[1] x ...`.
fn odometer(radix: &[u64]) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; radix.len()];
    loop {
        out.push(cur.clone());
        let mut k = radix.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < radix[k] {
                break;
            }
            cur[k] = 0;
        }
    }
}

impl FiniteGroup for CyclicProduct {
    type Element = Vec<u64>;

    fn order(&self) -> Option<u128> {
        self.moduli.iter().try_fold(1u128, |acc, &n| acc.checked_mul(n as u128))
    }

    fn elements(&self) -> Vec<Vec<u64>> {
        odometer(&self.moduli)
    }

    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), n)| (x + y) % n).collect()
    }

    fn is_identity(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&x| x == 0)
    }

    fn encode(&self, a: &Vec<u64>) -> String {
        let parts: Vec<String> = a.iter().map(u64::to_string).collect();
        format!("({})", parts.join(","))
    }
}

/// The finite members `H_i` and `W_i` of the wreath-product family.
impl FiniteGroup for GroupSpec {
    type Element = GroupElement;

    fn order(&self) -> Option<u128> {
        GroupSpec::order(self)
    }

    fn elements(&self) -> Vec<GroupElement> {
        let Modulus::Finite(n) = self.modulus() else {
            return Vec::new();
        };
        odometer(&vec![n; self.dim()])
            .into_iter()
            .map(|l| GroupElement::from_labels(*self, l.into_iter().map(|x| x as i64).collect()).expect("labels fit"))
            .collect()
    }

    fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        a.mul(b).expect("elements of one group")
    }

    fn is_identity(&self, a: &GroupElement) -> bool {
        a.is_identity()
    }

    fn encode(&self, a: &GroupElement) -> String {
        a.to_string()
    }
}

/// A materialized Cayley graph with the element behind every vertex.
#[derive(Debug, Clone)]
pub struct CayleyGraph<E> {
    pub graph: LDigraph,
    /// `elements[v]` is the group element of dense vertex `v`.
    pub elements: Vec<E>,
    index: HashMap<E, usize>,
}

impl<E: Clone + Eq + Hash> CayleyGraph<E> {
    pub fn vertex_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).copied()
    }
}

/// Vertices are the group elements (ids in enumeration order) and every
/// element `g` gets an edge `g -> g*s` labelled with the name of `s`.
pub fn cayley<G: FiniteGroup>(
    group: &G,
    generators: &[(String, G::Element)],
    budget: u128,
) -> Result<CayleyGraph<G::Element>, GraphError> {
    for (name, s) in generators {
        if group.is_identity(s) {
            return Err(GraphError::IdentityGenerator(name.clone()));
        }
    }
    let needed = group.order().unwrap_or(u128::MAX);
    if needed > budget {
        return Err(GraphError::BudgetExceeded { needed, budget });
    }
    let elements = group.elements();
    let index: HashMap<G::Element, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let mut graph = LDigraph::with_vertices(elements.len(), generators.iter().map(|(n, _)| n.clone()));
    if graph.alphabet().len() != generators.len() {
        return Err(GraphError::Invalid("generator names must be distinct".into()));
    }
    for (v, g) in elements.iter().enumerate() {
        for (label, (_, s)) in generators.iter().enumerate() {
            let w = *index
                .get(&group.mul(g, s))
                .ok_or_else(|| GraphError::Invalid(format!("generator {} is not in the group", group.encode(s))))?;
            graph.add_edge_labelled(v, w, label)?;
        }
    }
    Ok(CayleyGraph { graph, elements, index })
}
