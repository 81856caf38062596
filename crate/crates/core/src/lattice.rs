//! Finite bounded lattices built from Hasse (cover) data.
//!
//! Elements are referred to by index into the declaration order; names are
//! opaque strings. Join and meet are materialized as full tables during
//! construction so that downstream value computations are plain lookups.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("duplicate element name `{0}`")]
    DuplicateElement(String),
    #[error("unknown lattice element `{0}`")]
    UnknownElement(String),
    #[error("cover relation has a cycle through `{0}`")]
    NotAPartialOrder(String),
    #[error("poset has no global {0}")]
    NoBound(&'static str),
    #[error("elements `{0}` and `{1}` have no unique {2}")]
    NotALattice(String, String, &'static str),
    #[error("unknown lattice catalog key `{0}`")]
    UnknownCatalogKey(String),
    #[error("bad parameter for `{0}`: {1}")]
    BadParam(&'static str, String),
}

/// A finite bounded lattice: a partial order with materialized join/meet
/// tables, a bottom and a top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<bool>,
    join_tab: Vec<usize>,
    meet_tab: Vec<usize>,
    bottom: usize,
    top: usize,
    /// A fixed linear extension of the order (indices, increasing). Used
    /// wherever a deterministic scan order over lattice elements is needed.
    extension: Vec<usize>,
}

impl Lattice {
    /// Builds a lattice from element names and cover pairs `(lower, upper)`.
    ///
    /// The order is the reflexive-transitive closure of the covers. Fails if
    /// the covers contain a cycle, if the resulting poset is unbounded, or if
    /// some pair of elements lacks a unique least upper bound or greatest
    /// lower bound.
    pub fn from_covers(
        elements: &[&str],
        covers: &[(&str, &str)],
    ) -> Result<Lattice, LatticeError> {
        let n = elements.len();
        if n == 0 {
            return Err(LatticeError::NoBound("bottom"));
        }
        let mut index = HashMap::new();
        for (i, name) in elements.iter().enumerate() {
            if index.insert(name.to_string(), i).is_some() {
                return Err(LatticeError::DuplicateElement(name.to_string()));
            }
        }

        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (lo, hi) in covers {
            let i = *index
                .get(*lo)
                .ok_or_else(|| LatticeError::UnknownElement(lo.to_string()))?;
            let j = *index
                .get(*hi)
                .ok_or_else(|| LatticeError::UnknownElement(hi.to_string()))?;
            leq[i * n + j] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i * n + j] && leq[j * n + i] {
                    return Err(LatticeError::NotAPartialOrder(elements[i].to_string()));
                }
            }
        }

        let bottom = (0..n)
            .find(|&i| (0..n).all(|j| leq[i * n + j]))
            .ok_or(LatticeError::NoBound("bottom"))?;
        let top = (0..n)
            .find(|&i| (0..n).all(|j| leq[j * n + i]))
            .ok_or(LatticeError::NoBound("top"))?;

        let mut join_tab = vec![0usize; n * n];
        let mut meet_tab = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                join_tab[i * n + j] = bound_of(&leq, n, i, j, true).ok_or_else(|| {
                    LatticeError::NotALattice(
                        elements[i].to_string(),
                        elements[j].to_string(),
                        "least upper bound",
                    )
                })?;
                meet_tab[i * n + j] = bound_of(&leq, n, i, j, false).ok_or_else(|| {
                    LatticeError::NotALattice(
                        elements[i].to_string(),
                        elements[j].to_string(),
                        "greatest lower bound",
                    )
                })?;
            }
        }

        let extension = linear_extension(&leq, n);

        Ok(Lattice {
            elements: elements.iter().map(|s| s.to_string()).collect(),
            index,
            leq,
            join_tab,
            meet_tab,
            bottom,
            top,
            extension,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, a: usize) -> &str {
        &self.elements[a]
    }

    pub fn element(&self, name: &str) -> Result<usize, LatticeError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| LatticeError::UnknownElement(name.to_string()))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn join2(&self, a: usize, b: usize) -> usize {
        self.join_tab[a * self.len() + b]
    }

    pub fn meet2(&self, a: usize, b: usize) -> usize {
        self.meet_tab[a * self.len() + b]
    }

    /// Join of a set of elements; the empty join is the bottom.
    pub fn join(&self, set: impl IntoIterator<Item = usize>) -> usize {
        set.into_iter()
            .fold(self.bottom, |acc, x| self.join2(acc, x))
    }

    /// Meet of a set of elements; the empty meet is the top.
    pub fn meet(&self, set: impl IntoIterator<Item = usize>) -> usize {
        set.into_iter().fold(self.top, |acc, x| self.meet2(acc, x))
    }

    /// The fixed linear extension of the order, bottom first, top last.
    pub fn linear_extension(&self) -> &[usize] {
        &self.extension
    }

    /// True iff meet distributes over join on every triple. For finite
    /// lattices this coincides with complete distributivity.
    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = self.meet2(x, self.join2(y, z));
                    let rhs = self.join2(self.meet2(x, y), self.meet2(x, z));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True iff every non-empty subset contains its supremum. For a finite
    /// lattice this is equivalent to the order being total, which is what is
    /// checked here; the literal subset formulation serves as a test oracle.
    pub fn is_upper_well_ordered(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                if !self.leq(a, b) && !self.leq(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// Cover pairs `(lower, upper)` of the order, for serialization.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.leq(i, j) {
                    continue;
                }
                let direct =
                    (0..n).all(|k| k == i || k == j || !(self.leq(i, k) && self.leq(k, j)));
                if direct {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// All elements below or equal to `a`, in linear-extension order.
    pub fn down_set(&self, a: usize) -> Vec<usize> {
        self.extension
            .iter()
            .copied()
            .filter(|&x| self.leq(x, a))
            .collect()
    }
}

fn bound_of(leq: &[bool], n: usize, i: usize, j: usize, upper: bool) -> Option<usize> {
    let cmp = |a: usize, b: usize| {
        if upper {
            leq[a * n + b]
        } else {
            leq[b * n + a]
        }
    };
    let candidates: Vec<usize> = (0..n).filter(|&k| cmp(i, k) && cmp(j, k)).collect();
    candidates
        .iter()
        .copied()
        .find(|&k| candidates.iter().all(|&m| cmp(k, m)))
}

/// Kahn topological sort preferring the smallest declaration index, so the
/// extension is stable across runs and matches declaration order whenever
/// that order is itself a linear extension.
fn linear_extension(leq: &[bool], n: usize) -> Vec<usize> {
    let mut placed = vec![false; n];
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let next = (0..n)
            .find(|&i| !placed[i] && (0..n).all(|j| placed[j] || j == i || !leq[j * n + i]))
            .expect("antisymmetric relation always has a minimal element");
        placed[next] = true;
        out.push(next);
    }
    out
}

/// Builds one of the named catalog lattices.
///
/// Keys: `chain(n)`, `boolean(n)`, `diamond_M3`, `pentagon_N5`, `example_M`.
pub fn builtin_lattice(key: &str) -> Result<Lattice, LatticeError> {
    let key = key.trim();
    if let Some(arg) = parse_call(key, "chain") {
        let n: usize = arg
            .parse()
            .map_err(|_| LatticeError::BadParam("chain", arg.to_string()))?;
        if n < 1 {
            return Err(LatticeError::BadParam("chain", "n < 1".into()));
        }
        if n > 512 {
            return Err(LatticeError::BadParam("chain", "n > 512".into()));
        }
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let covers: Vec<(&str, &str)> = (0..n.saturating_sub(1))
            .map(|i| (name_refs[i], name_refs[i + 1]))
            .collect();
        return Lattice::from_covers(&name_refs, &covers);
    }
    if let Some(arg) = parse_call(key, "boolean") {
        let n: usize = arg
            .parse()
            .map_err(|_| LatticeError::BadParam("boolean", arg.to_string()))?;
        if n < 1 {
            return Err(LatticeError::BadParam("boolean", "n < 1".into()));
        }
        if n > 10 {
            return Err(LatticeError::BadParam("boolean", "n > 10".into()));
        }
        // Elements are bitstrings over the atoms; covers flip one 0 to 1.
        let names: Vec<String> = (0..1usize << n)
            .map(|mask| {
                (0..n)
                    .map(|bit| if mask >> bit & 1 == 1 { '1' } else { '0' })
                    .collect()
            })
            .collect();
        let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let mut covers = Vec::new();
        for mask in 0..1usize << n {
            for bit in 0..n {
                if mask >> bit & 1 == 0 {
                    covers.push((name_refs[mask], name_refs[mask | 1 << bit]));
                }
            }
        }
        return Lattice::from_covers(&name_refs, &covers);
    }
    match key {
        "diamond_M3" => Lattice::from_covers(
            &["0", "a", "b", "c", "1"],
            &[
                ("0", "a"),
                ("0", "b"),
                ("0", "c"),
                ("a", "1"),
                ("b", "1"),
                ("c", "1"),
            ],
        ),
        "pentagon_N5" => Lattice::from_covers(
            &["0", "a", "c", "b", "1"],
            &[("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")],
        ),
        "example_M" => Lattice::from_covers(
            &["l", "f", "a", "b", "c", "d", "u"],
            &[
                ("l", "f"),
                ("f", "a"),
                ("f", "b"),
                ("f", "c"),
                ("a", "d"),
                ("b", "d"),
                ("c", "d"),
                ("d", "u"),
            ],
        ),
        _ => Err(LatticeError::UnknownCatalogKey(key.to_string())),
    }
}

/// Catalog keys accepted by [`builtin_lattice`], with the parametric entries
/// shown schematically.
pub const LATTICE_CATALOG: &[&str] = &[
    "chain(n)",
    "boolean(n)",
    "diamond_M3",
    "pentagon_N5",
    "example_M",
];

fn parse_call<'a>(key: &'a str, name: &str) -> Option<&'a str> {
    key.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')
}
