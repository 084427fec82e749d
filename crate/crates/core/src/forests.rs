//! Canonical unordered rooted trees and forests.
//!
//! A tree is identified by its canonical key: `[` followed by the keys of
//! its children in ascending byte order, then `]`. A forest is the sorted
//! concatenation of its tree keys; the empty forest prints as `1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rings::{int, Rational};

#[derive(Clone)]
pub struct Tree {
    key: Arc<str>,
    children: Arc<[Tree]>,
    size: usize,
}

impl Tree {
    /// The tree whose root carries `children`, in any order.
    pub fn new(mut children: Vec<Tree>) -> Tree {
        children.sort();
        let mut key = String::with_capacity(2 + children.iter().map(|c| c.key.len()).sum::<usize>());
        key.push('[');
        for c in &children {
            key.push_str(&c.key);
        }
        key.push(']');
        let size = 1 + children.iter().map(|c| c.size).sum::<usize>();
        Tree {
            key: key.into(),
            children: children.into(),
            size,
        }
    }

    pub fn node() -> Tree {
        Tree::new(Vec::new())
    }

    /// The ladder with `n >= 1` nodes.
    pub fn ladder(n: usize) -> Tree {
        assert!(n >= 1);
        (1..n).fold(Tree::node(), |t, _| Tree::new(vec![t]))
    }

    /// The corolla: a root with `k` leaves.
    pub fn corolla(k: usize) -> Tree {
        Tree::new(vec![Tree::node(); k])
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// The forest of the root's children, i.e. the inverse of grafting.
    pub fn branches(&self) -> Forest {
        Forest::new(self.children.to_vec())
    }

    pub fn to_forest(&self) -> Forest {
        Forest::new(vec![self.clone()])
    }

    /// Subtrees rooted at every node, in depth-first pre-order.
    pub fn subtrees(&self) -> Vec<&Tree> {
        let mut out = Vec::with_capacity(self.size);
        fn walk<'a>(t: &'a Tree, out: &mut Vec<&'a Tree>) {
            out.push(t);
            for c in t.children.iter() {
                walk(c, out);
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn factorial(&self) -> Rational {
        self.subtrees().iter().map(|t| int(t.size as i64)).product()
    }

    pub fn latex(&self) -> String {
        format!("\\mathtt{{{}}}", self.key)
    }
}

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for Tree {}

impl Hash for Tree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key)
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({})", self.key)
    }
}

impl FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Tree> {
        let f: Forest = s.parse()?;
        match f.trees() {
            [t] => Ok(t.clone()),
            _ => Err(Error::Parse(format!("`{s}` is not a single tree"))),
        }
    }
}

/// A commutative monomial of trees; the basis of the Hopf algebra.
#[derive(Clone)]
pub struct Forest {
    key: Arc<str>,
    trees: Arc<[Tree]>,
    nodes: usize,
}

impl Forest {
    pub fn new(mut trees: Vec<Tree>) -> Forest {
        trees.sort();
        let key: String = trees.iter().map(|t| &*t.key).collect();
        let nodes = trees.iter().map(|t| t.size).sum();
        Forest {
            key: key.into(),
            trees: trees.into(),
            nodes,
        }
    }

    /// The empty forest, unit of the algebra.
    pub fn one() -> Forest {
        static ONE: OnceLock<Forest> = OnceLock::new();
        ONE.get_or_init(|| Forest::new(Vec::new())).clone()
    }

    pub fn is_one(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn is_tree(&self) -> bool {
        self.trees.len() == 1
    }

    pub fn as_tree(&self) -> Option<&Tree> {
        match &*self.trees {
            [t] => Some(t),
            _ => None,
        }
    }

    pub fn mul(&self, other: &Forest) -> Forest {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut v = self.trees.to_vec();
        v.extend(other.trees.iter().cloned());
        Forest::new(v)
    }

    /// Grafts all trees onto a new common root.
    pub fn b_plus(&self) -> Tree {
        Tree::new(self.trees.to_vec())
    }

    /// Distinct trees with their multiplicities, in canonical order.
    pub fn multiplicities(&self) -> Vec<(&Tree, usize)> {
        let mut out: Vec<(&Tree, usize)> = Vec::new();
        for t in self.trees.iter() {
            match out.last_mut() {
                Some((last, n)) if *last == t => *n += 1,
                _ => out.push((t, 1)),
            }
        }
        out
    }

    /// Every node's subtree in depth-first pre-order over the canonical form.
    pub fn subtrees(&self) -> Vec<&Tree> {
        self.trees.iter().flat_map(|t| t.subtrees()).collect()
    }

    pub fn factorial(&self) -> Rational {
        tree_factorial(self)
    }

    pub fn latex(&self) -> String {
        if self.is_one() {
            "\\mathbb{1}".into()
        } else {
            format!("\\mathtt{{{}}}", self.key)
        }
    }
}

impl PartialEq for Forest {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for Forest {}

impl Hash for Forest {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl Ord for Forest {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl PartialOrd for Forest {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            f.write_str("1")
        } else {
            f.write_str(&self.key)
        }
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Forest({self})")
    }
}

impl From<Tree> for Forest {
    fn from(t: Tree) -> Forest {
        t.to_forest()
    }
}

impl FromStr for Forest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Forest> {
        parse_forest(s)
    }
}

/// Parses the bracket grammar `forest := (tree | ws)*`, `tree := "[" forest "]"`.
/// The lone token `1` denotes the empty forest.
pub fn parse_forest(text: &str) -> Result<Forest> {
    if text.trim() == "1" {
        return Ok(Forest::one());
    }
    let bytes = text.as_bytes();
    let mut pos = 0;
    let trees = parse_trees(bytes, &mut pos, 0)?;
    Ok(Forest::new(trees))
}

fn parse_trees(bytes: &[u8], pos: &mut usize, depth: usize) -> Result<Vec<Tree>> {
    let mut trees = Vec::new();
    loop {
        match bytes.get(*pos) {
            None if depth == 0 => return Ok(trees),
            None => {
                return Err(Error::Syntax {
                    offset: *pos,
                    msg: "unexpected end of input, expected `]`".into(),
                })
            }
            Some(b'[') => {
                *pos += 1;
                let children = parse_trees(bytes, pos, depth + 1)?;
                // parse_trees returns at depth > 0 only on a consumed `]`
                trees.push(Tree::new(children));
            }
            Some(b']') if depth > 0 => {
                *pos += 1;
                return Ok(trees);
            }
            Some(c) if c.is_ascii_whitespace() => *pos += 1,
            Some(&c) => {
                return Err(Error::Syntax {
                    offset: *pos,
                    msg: format!("unexpected character `{}`", c as char),
                })
            }
        }
    }
}

pub fn b_plus(f: &Forest) -> Tree {
    f.b_plus()
}

/// `f! = prod_v |f_v|` over all nodes, multiplicative over components.
pub fn tree_factorial(f: &Forest) -> Rational {
    f.trees().iter().map(Tree::factorial).product()
}

/// Number of plane embeddings of `t`, via
/// `sigma(t) = multinomial(n_1, ..., n_r) * prod sigma(t_i)^{n_i}`
/// over the distinct branches `t_i` with multiplicities `n_i`.
pub fn sigma_count(t: &Tree) -> Rational {
    Rational::from_integer(sigma_int(t))
}

fn sigma_int(t: &Tree) -> BigInt {
    let branches = t.branches();
    let mult = branches.multiplicities();
    let total: usize = mult.iter().map(|&(_, n)| n).sum();
    let mut acc = factorial_int(total);
    for (b, n) in mult {
        acc /= factorial_int(n);
        acc *= sigma_int(b).pow(n as u32);
    }
    acc
}

fn factorial_int(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Removes the subtree rooted at pre-order address `v` and returns what
/// remains.
pub fn leaves_and_prune(f: &Forest, v: usize) -> Result<Forest> {
    if v >= f.nodes() {
        return Err(Error::BadAddress {
            address: v,
            nodes: f.nodes(),
        });
    }
    let mut remaining = Vec::with_capacity(f.trees().len());
    let mut offset = 0;
    for t in f.trees() {
        if v >= offset && v < offset + t.size() {
            if let Some(pruned) = prune(t, v - offset) {
                remaining.push(pruned);
            }
        } else {
            remaining.push(t.clone());
        }
        offset += t.size();
    }
    Ok(Forest::new(remaining))
}

fn prune(t: &Tree, v: usize) -> Option<Tree> {
    if v == 0 {
        return None;
    }
    let mut offset = 1;
    let mut children = Vec::with_capacity(t.children().len());
    for c in t.children() {
        if v >= offset && v < offset + c.size() {
            if let Some(p) = prune(c, v - offset) {
                children.push(p);
            }
        } else {
            children.push(c.clone());
        }
        offset += c.size();
    }
    Some(Tree::new(children))
}

/// Pre-order addresses of the leaves of `f`.
pub fn leaf_addresses(f: &Forest) -> Vec<usize> {
    f.subtrees()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.is_leaf())
        .map(|(i, _)| i)
        .collect()
}

struct Catalogue {
    trees: Vec<Vec<Tree>>,
    forests: Vec<Vec<Forest>>,
}

fn catalogue() -> &'static Mutex<Catalogue> {
    static CAT: OnceLock<Mutex<Catalogue>> = OnceLock::new();
    CAT.get_or_init(|| {
        Mutex::new(Catalogue {
            trees: vec![Vec::new()],
            forests: vec![vec![Forest::one()]],
        })
    })
}

/// All trees with exactly `n` nodes, in canonical order.
pub fn trees_with_nodes(n: usize) -> Vec<Tree> {
    let mut cat = catalogue().lock().unwrap_or_else(|e| e.into_inner());
    extend_catalogue(&mut cat, n);
    cat.trees[n].clone()
}

/// All forests with exactly `n` nodes, in canonical order.
pub fn forests_with_nodes(n: usize) -> Vec<Forest> {
    let mut cat = catalogue().lock().unwrap_or_else(|e| e.into_inner());
    extend_catalogue(&mut cat, n);
    cat.forests[n].clone()
}

/// All forests with at most `n` nodes, by increasing node count.
pub fn forests_up_to(n: usize) -> Vec<Forest> {
    (0..=n).flat_map(forests_with_nodes).collect()
}

/// All trees with between 1 and `n` nodes, by increasing node count.
pub fn trees_up_to(n: usize) -> Vec<Tree> {
    (1..=n).flat_map(trees_with_nodes).collect()
}

fn extend_catalogue(cat: &mut Catalogue, n: usize) {
    while cat.trees.len() <= n {
        let m = cat.trees.len();
        let mut trees: Vec<Tree> = cat.forests[m - 1].iter().map(Forest::b_plus).collect();
        trees.sort();
        cat.trees.push(trees);
        // forests of m nodes: nondecreasing sequences in a fixed global tree order
        let pool: Vec<&Tree> = cat.trees.iter().flatten().collect();
        let mut found: BTreeMap<Forest, ()> = BTreeMap::new();
        let mut stack = Vec::new();
        multisets(&pool, 0, m, &mut stack, &mut found);
        cat.forests.push(found.into_keys().collect());
    }
}

fn multisets(
    pool: &[&Tree],
    start: usize,
    remaining: usize,
    stack: &mut Vec<Tree>,
    out: &mut BTreeMap<Forest, ()>,
) {
    if remaining == 0 {
        out.insert(Forest::new(stack.clone()), ());
        return;
    }
    for i in start..pool.len() {
        let t = pool[i];
        if t.size() <= remaining {
            stack.push(t.clone());
            multisets(pool, i, remaining - t.size(), stack, out);
            stack.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::rat;

    fn f(s: &str) -> Forest {
        s.parse().unwrap()
    }

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    #[test]
    fn parse_is_canonical() {
        assert_eq!(f("[[][]]"), f("[[] []]"));
        assert_eq!(f("[[[]][]]"), f("[[][[]]]"));
        assert_eq!(f("[] [[]]").to_string(), "[[]][]");
        assert_eq!(f("").to_string(), "1");
        assert_eq!(f("1"), Forest::one());
        assert_eq!(f("[[][]]").nodes(), 3);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        assert!(matches!("[[]".parse::<Forest>(), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!("[]]".parse::<Forest>(), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!("[x]".parse::<Forest>(), Err(Error::Syntax { offset: 1, .. })));
    }

    #[test]
    fn grafting() {
        assert_eq!(Forest::one().b_plus(), Tree::node());
        assert_eq!(f("[][]").b_plus(), t("[[][]]"));
        assert_eq!(f("[][[]]").b_plus().size(), 4);
    }

    #[test]
    fn factorials() {
        assert_eq!(tree_factorial(&f("[]")), int(1));
        assert_eq!(tree_factorial(&f("[[[]]]")), int(6));
        assert_eq!(tree_factorial(&f("[[][]]")), int(3));
        assert_eq!(tree_factorial(&f("[[][]][[]]")), int(6));
        assert_eq!(tree_factorial(&Forest::one()), int(1));
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma_count(&t("[]")), int(1));
        assert_eq!(sigma_count(&t("[[[]][][]]")), int(3));
        assert_eq!(sigma_count(&t("[[][[]]]")), int(2));
        assert_eq!(sigma_count(&t("[[][][][]]")), int(1));
    }

    #[test]
    fn pruning() {
        assert_eq!(leaves_and_prune(&f("[[]]"), 1).unwrap(), f("[]"));
        assert_eq!(leaves_and_prune(&f("[[][]]"), 2).unwrap(), f("[[]]"));
        assert_eq!(leaves_and_prune(&f("[]"), 0).unwrap(), Forest::one());
        assert_eq!(leaves_and_prune(&f("[[]][]"), 2).unwrap(), f("[[]]"));
        assert!(matches!(
            leaves_and_prune(&f("[]"), 1),
            Err(Error::BadAddress { address: 1, nodes: 1 })
        ));
        assert_eq!(leaf_addresses(&f("[[][[]]]")), vec![2, 3]);
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| trees_with_nodes(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48]);
        let forests: Vec<usize> = (0..=6).map(|n| forests_with_nodes(n).len()).collect();
        assert_eq!(forests, vec![1, 1, 2, 4, 9, 20, 48]);
    }

    #[test]
    fn ladder_and_corolla() {
        assert_eq!(Tree::ladder(3), t("[[[]]]"));
        assert_eq!(Tree::corolla(2), t("[[][]]"));
        assert_eq!(Tree::ladder(4).factorial(), int(24));
        assert_eq!(Tree::corolla(3).factorial(), rat(4, 1));
    }
}
