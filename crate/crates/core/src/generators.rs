//! Explicit high-girth generator sets in the symmetric 2-groups `W_h`.
//!
//! Level 1 uses the involutions `X(j; n(1))`. Level `i` pairs the previous
//! level as `(gamma_j, delta_j)` in list order, glues `n(i)` copies of the
//! bracket `[gamma_j, delta_j]` into `K_j`, and sets `L_j = K_j X(j; n(i))`.
//! Every `(i-1)`-complex word over level `i` is non-vanishing, so reduced
//! words of length at most `g` over the top level never vanish and the
//! Cayley graph has girth larger than `g`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupElement, GroupError, GroupSpec};

pub const DEFAULT_WORD_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("parameters must satisfy g >= 1 and m >= 1 (got g={g}, m={m})")]
    InvalidParams { g: u32, m: u32 },
    #[error("level {level} outside 1..={g}")]
    LevelOutOfRange { level: u32, g: u32 },
    #[error("level {level} expects {expected} previous generators, got {got}")]
    SizeMismatch { level: u32, expected: u64, got: usize },
    #[error("generator index {index} out of range (set has {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("projection slot {k} outside 1..={n}")]
    SlotOutOfRange { k: usize, n: u64 },
    #[error("element is not block-structured at depth {depth}")]
    NotBlockStructured { depth: u32 },
    #[error("enumeration needs {needed} words, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("malformed generator file: {0}")]
    Parse(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub g: u32,
    pub m: u32,
}

impl GeneratorParams {
    pub fn new(g: u32, m: u32) -> Result<Self, GeneratorError> {
        if g == 0 || m == 0 || g + m > 62 {
            return Err(GeneratorError::InvalidParams { g, m });
        }
        Ok(Self { g, m })
    }
}

/// `f(i) = m + g - i`, `h(i) = i(2m + 2g - i + 1)/2`, `n(i) = 2^f(i)` for `i = 0..=g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub params: GeneratorParams,
    pub f: Vec<u32>,
    pub h: Vec<u32>,
    pub n: Vec<u64>,
}

impl Schedule {
    pub fn f(&self, i: u32) -> u32 {
        self.f[i as usize]
    }

    pub fn h(&self, i: u32) -> u32 {
        self.h[i as usize]
    }

    pub fn n(&self, i: u32) -> u64 {
        self.n[i as usize]
    }

    pub fn top(&self) -> u32 {
        self.params.g
    }

    fn check_level(&self, level: u32) -> Result<(), GeneratorError> {
        if level == 0 || level > self.params.g {
            return Err(GeneratorError::LevelOutOfRange { level, g: self.params.g });
        }
        Ok(())
    }
}

pub fn compute_schedule(params: GeneratorParams) -> Schedule {
    let GeneratorParams { g, m } = params;
    let levels = 0..=g;
    let f: Vec<u32> = levels.clone().map(|i| m + g - i).collect();
    let h = levels.map(|i| i * (2 * m + 2 * g - i + 1) / 2).collect();
    let n = f.iter().map(|&fi| 1u64 << fi).collect();
    Schedule { params, f, h, n }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub params: GeneratorParams,
    pub level: u32,
    pub elements: Vec<GroupElement>,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The first `k` elements; any subset of a high-girth set is high-girth.
    pub fn truncated(&self, k: usize) -> Self {
        Self {
            params: self.params,
            level: self.level,
            elements: self.elements.iter().take(k).cloned().collect(),
        }
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "#gens g={} m={} level={} count={}",
            self.params.g,
            self.params.m,
            self.level,
            self.elements.len()
        )?;
        for e in &self.elements {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for GeneratorSet {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| GeneratorError::Parse("empty input".into()))?;
        let fields = header
            .strip_prefix("#gens")
            .ok_or_else(|| GeneratorError::Parse(format!("bad header {header:?}")))?;
        let mut kv = HashMap::new();
        for field in fields.split_whitespace() {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| GeneratorError::Parse(format!("bad header field {field:?}")))?;
            let v: u64 = v.parse().map_err(|_| GeneratorError::Parse(format!("bad value {field:?}")))?;
            kv.insert(k.to_string(), v);
        }
        let get = |k: &str| {
            kv.get(k).copied().ok_or_else(|| GeneratorError::Parse(format!("missing header field {k}")))
        };
        let params = GeneratorParams::new(get("g")? as u32, get("m")? as u32)?;
        let level = get("level")? as u32;
        let elements = lines.map(|l| l.parse::<GroupElement>()).collect::<Result<Vec<_>, _>>()?;
        if let Some(count) = kv.get("count") {
            if *count as usize != elements.len() {
                return Err(GeneratorError::Parse(format!(
                    "header announces {count} elements, found {}",
                    elements.len()
                )));
            }
        }
        Ok(Self { params, level, elements })
    }
}

/// `S_1 = { X_{h(1)}(j; n(1)) : j = 1..n(1) }`.
pub fn base_generators(schedule: &Schedule) -> Result<GeneratorSet, GeneratorError> {
    let spec = GroupSpec::w(schedule.h(1));
    let width = schedule.n(1) as usize;
    let elements = (1..=width)
        .map(|j| GroupElement::x_slot(spec, j, width))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GeneratorSet { params: schedule.params, level: 1, elements })
}

/// Builds `S_i` from `S_{i-1}`.
pub fn step_generators(prev: &GeneratorSet, schedule: &Schedule) -> Result<GeneratorSet, GeneratorError> {
    let level = prev.level + 1;
    schedule.check_level(level)?;
    let count = schedule.n(level);
    if prev.elements.len() as u64 != 2 * count {
        return Err(GeneratorError::SizeMismatch { level, expected: 2 * count, got: prev.elements.len() });
    }
    let spec = GroupSpec::w(schedule.h(level));
    let width = count as usize;
    let mut elements = Vec::with_capacity(width);
    for (j, pair) in prev.elements.chunks_exact(2).enumerate() {
        let blocks: Vec<GroupElement> = pair.iter().cycle().take(2 * width).cloned().collect();
        let k = GroupElement::bracket_vector(&blocks)?;
        let x = GroupElement::x_slot(spec, j + 1, width)?;
        elements.push(k.mul(&x)?);
    }
    Ok(GeneratorSet { params: schedule.params, level, elements })
}

/// All levels `S_1, ..., S_g`.
pub fn build_family(params: GeneratorParams) -> Result<Vec<GeneratorSet>, GeneratorError> {
    let schedule = compute_schedule(params);
    let mut levels = vec![base_generators(&schedule)?];
    for _ in 2..=params.g {
        let next = step_generators(levels.last().expect("non-empty"), &schedule)?;
        levels.push(next);
    }
    Ok(levels)
}

pub fn build_level(params: GeneratorParams, level: u32) -> Result<GeneratorSet, GeneratorError> {
    let schedule = compute_schedule(params);
    schedule.check_level(level)?;
    let mut set = base_generators(&schedule)?;
    while set.level < level {
        set = step_generators(&set, &schedule)?;
    }
    Ok(set)
}

/// `p_level^k`: the `k`-th block (1-based) of an element of `G_level`.
pub fn project(schedule: &Schedule, level: u32, k: usize, a: &GroupElement) -> Result<GroupElement, GeneratorError> {
    schedule.check_level(level)?;
    let n = schedule.n(level);
    if k == 0 || k as u64 > n {
        return Err(GeneratorError::SlotOutOfRange { k, n });
    }
    let depth = schedule.f(level);
    if a.height() != schedule.h(level) || !a.is_zero_above(depth) {
        return Err(GeneratorError::NotBlockStructured { depth });
    }
    Ok(a.subtree(depth, k - 1)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    /// 0-based generator index.
    pub index: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn plus(index: usize) -> Self {
        Self { index, sign: Sign::Plus }
    }

    pub fn minus(index: usize) -> Self {
        Self { index, sign: Sign::Minus }
    }

    pub fn inverse(self) -> Self {
        Self { index: self.index, sign: self.sign.flip() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }
}

impl fmt::Display for Word {
    /// Generators are printed 1-based, e.g. `L1 L2^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "L{}", l.index + 1)?;
            if l.sign == Sign::Minus {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WordAnalysis {
    pub reduced: bool,
    /// Length minus the number of distinct generators used.
    pub complexity: usize,
}

pub fn analyze_word(word: &Word) -> WordAnalysis {
    let reduced = word.0.windows(2).all(|p| p[1] != p[0].inverse());
    let mut seen: Vec<usize> = word.0.iter().map(|l| l.index).collect();
    seen.sort_unstable();
    seen.dedup();
    WordAnalysis { reduced, complexity: word.len() - seen.len() }
}

pub fn evaluate_word(set: &GeneratorSet, word: &Word) -> Result<GroupElement, GeneratorError> {
    let inverses: Vec<GroupElement> = set.elements.iter().map(GroupElement::inverse).collect();
    evaluate_with(set, &inverses, word)
}

fn evaluate_with(set: &GeneratorSet, inverses: &[GroupElement], word: &Word) -> Result<GroupElement, GeneratorError> {
    let spec = match set.elements.first() {
        Some(e) => e.spec(),
        None if word.is_empty() => return Ok(GroupElement::identity(GroupSpec::w(0))),
        None => return Err(GeneratorError::IndexOutOfRange { index: word.0[0].index, len: 0 }),
    };
    let mut acc = GroupElement::identity(spec);
    for l in &word.0 {
        let g = match l.sign {
            Sign::Plus => set.elements.get(l.index),
            Sign::Minus => inverses.get(l.index),
        }
        .ok_or(GeneratorError::IndexOutOfRange { index: l.index, len: set.len() })?;
        acc = acc.mul(g)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// Depth-first enumeration of reduced words.
    WordEnumeration,
    /// Breadth-first search from the identity in the implicit Cayley graph.
    ImplicitBfs,
    /// Per-level check of `(level-1)`-complex words only.
    Stratified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub ok: bool,
    pub girth_bound: u32,
    pub strategy: Strategy,
    /// A reduced word that evaluates to the identity, when `ok` is false.
    pub witness: Option<Word>,
    /// Words (or BFS vertices) evaluated.
    pub checked: u64,
}

/// Number of reduced words of length `1..=max_len` over `k` generators and inverses.
pub fn reduced_word_count(k: usize, max_len: u32) -> u64 {
    if k == 0 {
        return 0;
    }
    let k = k as u64;
    let mut total: u64 = 0;
    let mut layer = 2 * k;
    for _ in 0..max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(2 * k - 1);
    }
    total
}

/// Certifies that no reduced word of length `1..=g` vanishes, i.e. that the
/// Cayley graph has girth larger than `g`.
pub fn certify_girth(set: &GeneratorSet, g: u32, budget: u64) -> Result<Certificate, GeneratorError> {
    let needed = reduced_word_count(set.len(), g);
    if needed > budget {
        return Err(GeneratorError::BudgetExceeded { needed, budget });
    }
    let mut search = WordSearch::new(set, g, None);
    let witness = search.run()?;
    Ok(Certificate {
        ok: witness.is_none(),
        girth_bound: g,
        strategy: Strategy::WordEnumeration,
        witness,
        checked: search.checked,
    })
}

/// Same question as [`certify_girth`], restricted to words of complexity at
/// most `level - 1`. At the top level `g` every reduced word of length at
/// most `g` qualifies, so this coincides with the full check there.
pub fn certify_stratified(set: &GeneratorSet, g: u32, budget: u64) -> Result<Certificate, GeneratorError> {
    let max_complexity = set.level.saturating_sub(1) as usize;
    let mut search = WordSearch::new(set, g, Some(max_complexity));
    search.budget = Some(budget);
    let witness = search.run()?;
    Ok(Certificate {
        ok: witness.is_none(),
        girth_bound: g,
        strategy: Strategy::Stratified,
        witness,
        checked: search.checked,
    })
}

struct WordSearch<'a> {
    set: &'a GeneratorSet,
    inverses: Vec<GroupElement>,
    max_len: u32,
    max_complexity: Option<usize>,
    budget: Option<u64>,
    checked: u64,
    letters: Vec<Letter>,
    uses: Vec<usize>,
}

impl<'a> WordSearch<'a> {
    fn new(set: &'a GeneratorSet, max_len: u32, max_complexity: Option<usize>) -> Self {
        Self {
            set,
            inverses: set.elements.iter().map(GroupElement::inverse).collect(),
            max_len,
            max_complexity,
            budget: None,
            checked: 0,
            letters: Vec::new(),
            uses: vec![0; set.len()],
        }
    }

    fn run(&mut self) -> Result<Option<Word>, GeneratorError> {
        let Some(first) = self.set.elements.first() else {
            return Ok(None);
        };
        let id = GroupElement::identity(first.spec());
        self.extend(&id)
    }

    fn complexity(&self) -> usize {
        self.letters.len() - self.uses.iter().filter(|&&u| u > 0).count()
    }

    fn extend(&mut self, prefix: &GroupElement) -> Result<Option<Word>, GeneratorError> {
        if self.letters.len() as u32 == self.max_len {
            return Ok(None);
        }
        for index in 0..self.set.len() {
            for sign in [Sign::Plus, Sign::Minus] {
                let letter = Letter { index, sign };
                if self.letters.last() == Some(&letter.inverse()) {
                    continue;
                }
                self.letters.push(letter);
                self.uses[index] += 1;
                let within = self.max_complexity.is_none_or(|c| self.complexity() <= c);
                let mut found = None;
                if within {
                    self.checked += 1;
                    if let Some(budget) = self.budget {
                        if self.checked > budget {
                            return Err(GeneratorError::BudgetExceeded { needed: self.checked, budget });
                        }
                    }
                    let g = match sign {
                        Sign::Plus => &self.set.elements[index],
                        Sign::Minus => &self.inverses[index],
                    };
                    let next = prefix.mul(g)?;
                    if next.is_identity() {
                        found = Some(Word(self.letters.clone()));
                    } else {
                        found = self.extend(&next)?;
                    }
                }
                self.uses[index] -= 1;
                self.letters.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
        }
        Ok(None)
    }
}

/// Girth certificate by breadth-first search from the identity. The Cayley
/// graph is vertex-transitive, so a cycle of length `<= g` exists iff one
/// passes through the identity, and it is detected by exploring to depth
/// `ceil(g/2)`.
pub fn certify_girth_bfs(set: &GeneratorSet, g: u32, budget: u64) -> Result<Certificate, GeneratorError> {
    let k = set.len();
    let Some(first) = set.elements.first() else {
        return Ok(Certificate {
            ok: true,
            girth_bound: g,
            strategy: Strategy::ImplicitBfs,
            witness: None,
            checked: 0,
        });
    };
    let inverses: Vec<GroupElement> = set.elements.iter().map(GroupElement::inverse).collect();
    let step = |x: &GroupElement, l: Letter| -> Result<GroupElement, GeneratorError> {
        Ok(match l.sign {
            Sign::Plus => x.mul(&set.elements[l.index])?,
            Sign::Minus => x.mul(&inverses[l.index])?,
        })
    };

    // node: (element, depth, parent, arrival letter)
    struct Node {
        depth: u32,
        parent: usize,
        arrival: Option<Letter>,
    }
    let root = GroupElement::identity(first.spec());
    let mut nodes = vec![Node { depth: 0, parent: 0, arrival: None }];
    let mut elems = vec![root.clone()];
    let mut index: HashMap<GroupElement, usize> = HashMap::from([(root, 0)]);
    let explore_depth = g.saturating_sub(1) / 2;
    let mut head = 0;
    let path_to = |nodes: &Vec<Node>, mut v: usize| -> Vec<Letter> {
        let mut out = Vec::new();
        while let Some(l) = nodes[v].arrival {
            out.push(l);
            v = nodes[v].parent;
        }
        out.reverse();
        out
    };
    while head < nodes.len() {
        let u = head;
        head += 1;
        if nodes[u].depth > explore_depth {
            break;
        }
        for index_j in 0..k {
            for sign in [Sign::Plus, Sign::Minus] {
                let l = Letter { index: index_j, sign };
                if nodes[u].arrival.map(Letter::inverse) == Some(l) {
                    continue;
                }
                let next = step(&elems[u], l)?;
                if let Some(&v) = index.get(&next) {
                    // Tree edge u -l-> v was recorded when v was discovered.
                    if nodes[v].parent == u && nodes[v].arrival == Some(l) && v != 0 {
                        continue;
                    }
                    if nodes[u].depth + 1 + nodes[v].depth <= g {
                        let mut letters = path_to(&nodes, u);
                        letters.push(l);
                        letters.extend(path_to(&nodes, v).into_iter().rev().map(Letter::inverse));
                        return Ok(Certificate {
                            ok: false,
                            girth_bound: g,
                            strategy: Strategy::ImplicitBfs,
                            witness: Some(cyclically_reduce(letters)),
                            checked: nodes.len() as u64,
                        });
                    }
                    continue;
                }
                if nodes.len() as u64 >= budget {
                    return Err(GeneratorError::BudgetExceeded { needed: nodes.len() as u64 + 1, budget });
                }
                nodes.push(Node { depth: nodes[u].depth + 1, parent: u, arrival: Some(l) });
                index.insert(next.clone(), elems.len());
                elems.push(next);
            }
        }
    }
    Ok(Certificate {
        ok: true,
        girth_bound: g,
        strategy: Strategy::ImplicitBfs,
        witness: None,
        checked: nodes.len() as u64,
    })
}

/// Free and cyclic reduction; conjugates of a vanishing word still vanish.
fn cyclically_reduce(letters: Vec<Letter>) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    let mut start = 0;
    let mut end = out.len();
    while end - start >= 2 && out[end - 1] == out[start].inverse() {
        start += 1;
        end -= 1;
    }
    Word(out[start..end].to_vec())
}
