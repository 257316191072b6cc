//! Enumerated finite groups with a multiplication table, subgroups as bit sets, and
//! permutation groups acting on element indices.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

/// A set of element indices of a fixed universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> BitSet {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn from_iter(n: usize, it: impl IntoIterator<Item = u32>) -> BitSet {
        let mut b = BitSet::new(n);
        for x in it {
            b.insert(x);
        }
        b
    }

    #[inline]
    pub fn insert(&mut self, x: u32) -> bool {
        let (w, bit) = ((x / 64) as usize, x % 64);
        let was = self.words[w] >> bit & 1 == 1;
        self.words[w] |= 1 << bit;
        !was
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.words[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| (i * 64 + b) as u32)
        })
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }
}

/// A finite group on indices 0..n with identity 0.
#[derive(Debug, Clone)]
pub struct FinGroup {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
}

impl FinGroup {
    /// Enumerates a group from its elements (identity first) and a multiplication.
    pub fn from_elements<T: Clone + Eq + Hash>(
        elements: &[T],
        mul: impl Fn(&T, &T) -> T,
    ) -> FinGroup {
        Self::try_from_elements(elements, mul)
            .expect("elements do not form a group with identity first")
    }

    /// None if the set is not closed or element 0 is not an identity with inverses.
    pub fn try_from_elements<T: Clone + Eq + Hash>(
        elements: &[T],
        mul: impl Fn(&T, &T) -> T,
    ) -> Option<FinGroup> {
        let n = elements.len();
        let index: HashMap<&T, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e, i as u32))
            .collect();
        let mut table = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let c = mul(a, b);
                table[i * n + j] = *index.get(&c)?;
            }
        }
        if (0..n).any(|i| table[i] != i as u32) {
            return None;
        }
        let mut inv = vec![0u32; n];
        for i in 0..n {
            inv[i] = (0..n as u32).find(|&j| table[i * n + j as usize] == 0)?;
        }
        Some(FinGroup { n, table, inv })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn all(&self) -> BitSet {
        BitSet::from_iter(self.n, 0..self.n as u32)
    }

    pub fn empty(&self) -> BitSet {
        BitSet::new(self.n)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// g x g⁻¹.
    #[inline]
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commutes(&self, a: u32, b: u32) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn closure(&self, gens: &[u32]) -> BitSet {
        let mut set = BitSet::new(self.n);
        set.insert(0);
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    /// A generating set chosen greedily in index order.
    pub fn generators(&self, sub: &BitSet) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut cur = self.closure(&[]);
        for x in sub.iter() {
            if !cur.contains(x) {
                gens.push(x);
                cur = self.closure(&gens);
                if cur.len() == sub.len() {
                    break;
                }
            }
        }
        gens
    }

    pub fn is_subgroup(&self, set: &BitSet) -> bool {
        set.contains(0)
            && set
                .iter()
                .all(|a| set.iter().all(|b| set.contains(self.mul(a, b))))
    }

    /// Elements commuting with every element of `set`.
    pub fn centralizer(&self, within: &BitSet, set: &BitSet) -> BitSet {
        let gens = self.generators(set);
        BitSet::from_iter(
            self.n,
            within
                .iter()
                .filter(|&g| gens.iter().all(|&x| self.commutes(g, x))),
        )
    }

    pub fn center(&self, sub: &BitSet) -> BitSet {
        self.centralizer(sub, sub)
    }

    pub fn conjugate_set(&self, g: u32, set: &BitSet) -> BitSet {
        BitSet::from_iter(self.n, set.iter().map(|x| self.conj(g, x)))
    }

    pub fn normalizer(&self, within: &BitSet, sub: &BitSet) -> BitSet {
        let gens = self.generators(sub);
        BitSet::from_iter(
            self.n,
            within
                .iter()
                .filter(|&g| gens.iter().all(|&x| sub.contains(self.conj(g, x)))),
        )
    }

    pub fn is_abelian(&self, sub: &BitSet) -> bool {
        let gens = self.generators(sub);
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.commutes(a, b)))
    }

    pub fn is_elementary_abelian(&self, sub: &BitSet) -> bool {
        self.is_abelian(sub) && sub.iter().all(|x| self.mul(x, x) == 0)
    }

    pub fn exponent(&self, sub: &BitSet) -> u64 {
        sub.iter().map(|x| self.element_order(x)).fold(1, lcm)
    }

    pub fn involutions(&self, sub: &BitSet) -> Vec<u32> {
        sub.iter()
            .filter(|&x| x != 0 && self.mul(x, x) == 0)
            .collect()
    }

    /// Orbit representatives of subgroups under conjugation by `by`.
    pub fn conjugacy_classes_of_subgroups(&self, by: &BitSet, subs: &[BitSet]) -> Vec<Vec<usize>> {
        let mut seen: HashMap<BitSet, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let by_gens = self.generators(by);
        for (i, s) in subs.iter().enumerate() {
            if let Some(&c) = seen.get(s) {
                classes[c].push(i);
                continue;
            }
            let c = classes.len();
            classes.push(vec![i]);
            let mut queue = VecDeque::from([s.clone()]);
            seen.insert(s.clone(), c);
            while let Some(t) = queue.pop_front() {
                for &g in &by_gens {
                    let u = self.conjugate_set(g, &t);
                    if !seen.contains_key(&u) {
                        seen.insert(u.clone(), c);
                        queue.push_back(u);
                    }
                }
            }
        }
        classes
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// A permutation of 0..n, composed as functions: (p ∘ q)(i) = p(q(i)).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u32).collect())
    }

    pub fn compose(&self, q: &Perm) -> Perm {
        Perm(q.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j as usize] = i as u32;
        }
        Perm(out)
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.0[i as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }
}

/// The subgroup of Sym(n) generated by `gens`, enumerated in BFS order.
pub fn perm_closure(n: usize, gens: &[Perm], limit: usize) -> Option<Vec<Perm>> {
    let id = Perm::identity(n);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut head = 0;
    while head < out.len() {
        let x = out[head].clone();
        head += 1;
        for g in gens {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                if out.len() >= limit {
                    return None;
                }
                out.push(y);
            }
        }
    }
    Some(out)
}

/// A finite group given as an explicit list of permutations closed under composition.
#[derive(Debug, Clone)]
pub struct PermGroup {
    pub elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl PermGroup {
    pub fn new(elements: Vec<Perm>) -> PermGroup {
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        PermGroup { elements, index }
    }

    pub fn generate(n: usize, gens: &[Perm], limit: usize) -> Option<PermGroup> {
        perm_closure(n, gens, limit).map(PermGroup::new)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    pub fn position(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn as_set(&self) -> HashSet<Perm> {
        self.elements.iter().cloned().collect()
    }

    /// Enumerated group structure (identity first, as BFS order guarantees).
    pub fn to_fingroup(&self) -> FinGroup {
        FinGroup::from_elements(&self.elements, |a, b| a.compose(b))
    }
}

/// Structural summary used to recognise small groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    pub order: usize,
    pub center_order: usize,
    pub derived_order: usize,
}

impl FinGroup {
    /// Extends gens[i] ↦ imgs[i] to a homomorphism on ⟨gens⟩, checking every edge
    /// x ↦ x·gens[i] of the Cayley graph; None if the assignment is not a homomorphism.
    pub fn extend_hom(&self, gens: &[u32], imgs: &[u32]) -> Option<HashMap<u32, u32>> {
        let mut map = HashMap::from([(0u32, 0u32)]);
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            let fx = map[&x];
            for (&g, &i) in gens.iter().zip(imgs) {
                let y = self.mul(x, g);
                let fy = self.mul(fx, i);
                match map.get(&y) {
                    Some(&v) if v != fy => return None,
                    Some(_) => {}
                    None => {
                        map.insert(y, fy);
                        queue.push_back(y);
                    }
                }
            }
        }
        Some(map)
    }

    /// All subgroups of `sub`, by adjoining one element at a time.
    pub fn all_subgroups(&self, sub: &BitSet) -> Vec<BitSet> {
        let mut seen: HashSet<BitSet> = HashSet::new();
        let triv = self.closure(&[]);
        seen.insert(triv.clone());
        let mut queue = VecDeque::from([triv]);
        while let Some(h) = queue.pop_front() {
            let gens = self.generators(&h);
            for x in sub.iter() {
                if h.contains(x) {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.push(x);
                let k = self.closure(&g2);
                if seen.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
        let mut out: Vec<BitSet> = seen.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out
    }

    /// A Sylow 2-subgroup, grown from a 2-element of maximal order inside normalizers.
    pub fn sylow2(&self) -> BitSet {
        let target = 1usize << self.n.trailing_zeros();
        let all = self.all();
        let two = |k: u64| k.is_power_of_two();
        let start = (0..self.n as u32)
            .filter(|&x| two(self.element_order(x)))
            .max_by_key(|&x| (self.element_order(x), std::cmp::Reverse(x)))
            .unwrap_or(0);
        let mut p = self.closure(&[start]);
        while p.len() < target {
            let n = self.normalizer(&all, &p);
            let mut grown = false;
            for x in n.iter() {
                if p.contains(x) || !two(self.element_order(x)) {
                    continue;
                }
                let mut g = self.generators(&p);
                g.push(x);
                let k = self.closure(&g);
                if k.len().is_power_of_two() {
                    p = k;
                    grown = true;
                    break;
                }
            }
            if !grown {
                break;
            }
        }
        p
    }
}

impl FinGroup {
    pub fn derived_subgroup(&self, sub: &BitSet) -> BitSet {
        let gens = self.generators(sub);
        let mut comms = Vec::new();
        for &a in &gens {
            for &b in &gens {
                comms.push(self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))));
            }
        }
        // normal closure of the generator commutators
        self.normal_closure(sub, &comms)
    }

    pub fn normal_closure(&self, within: &BitSet, xs: &[u32]) -> BitSet {
        let wg = self.generators(within);
        let mut gens: Vec<u32> = xs.to_vec();
        loop {
            let h = self.closure(&gens);
            let hg = self.generators(&h);
            let mut grew = false;
            for &g in &wg {
                for &x in &hg {
                    let y = self.conj(g, x);
                    if !h.contains(y) {
                        gens.push(y);
                        grew = true;
                    }
                }
            }
            if !grew {
                return h;
            }
        }
    }

    pub fn structure(&self, sub: &BitSet) -> Structure {
        Structure {
            order: sub.len(),
            center_order: self.center(sub).len(),
            derived_order: self.derived_subgroup(sub).len(),
        }
    }

    /// Simple iff every nontrivial element has normal closure equal to the group.
    pub fn is_simple(&self, sub: &BitSet) -> bool {
        sub.len() > 1
            && sub
                .iter()
                .filter(|&x| x != 0)
                .all(|x| self.normal_closure(sub, &[x]).len() == sub.len())
    }

    /// The largest normal p-subgroup.
    pub fn largest_normal_p_subgroup(&self, sub: &BitSet, p: u64) -> BitSet {
        let is_p_power = |mut k: usize| {
            while k.is_multiple_of(p as usize) {
                k /= p as usize;
            }
            k == 1
        };
        let mut gens = Vec::new();
        for x in sub.iter() {
            if x == 0 || !is_p_power(self.element_order(x) as usize) {
                continue;
            }
            if self.closure(&gens).contains(x) {
                continue;
            }
            let nc = self.normal_closure(sub, &[x]);
            if is_p_power(nc.len()) {
                gens.push(x);
            }
        }
        self.closure(&gens)
    }

    /// Quotient by a normal subgroup, as a group on coset representatives.
    pub fn quotient(&self, sub: &BitSet, normal: &BitSet) -> (FinGroup, Vec<u32>) {
        let mut rep_of = vec![u32::MAX; self.n];
        let mut reps = Vec::new();
        for x in sub.iter() {
            if rep_of[x as usize] != u32::MAX {
                continue;
            }
            let r = reps.len() as u32;
            reps.push(x);
            for k in normal.iter() {
                rep_of[self.mul(x, k) as usize] = r;
            }
        }
        let m = reps.len();
        let mut table = vec![0u32; m * m];
        for i in 0..m {
            for j in 0..m {
                table[i * m + j] = rep_of[self.mul(reps[i], reps[j]) as usize];
            }
        }
        let mut inv = vec![0u32; m];
        for i in 0..m {
            inv[i] = rep_of[self.inv(reps[i]) as usize];
        }
        (FinGroup { n: m, table, inv }, reps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: u32) -> FinGroup {
        let els: Vec<u32> = (0..n).collect();
        FinGroup::from_elements(&els, |a, b| (a + b) % n)
    }

    #[test]
    fn cyclic_group_basics() {
        let g = cyclic(12);
        assert_eq!(g.element_order(1), 12);
        assert_eq!(g.closure(&[4]).len(), 3);
        assert!(g.is_abelian(&g.all()));
        assert_eq!(g.exponent(&g.all()), 12);
        assert_eq!(g.largest_normal_p_subgroup(&g.all(), 2).len(), 4);
    }

    #[test]
    fn symmetric_group_on_three_points() {
        let gens = [Perm(vec![1, 0, 2]), Perm(vec![1, 2, 0])];
        let s3 = PermGroup::generate(3, &gens, 100).unwrap();
        assert_eq!(s3.order(), 6);
        let g = s3.to_fingroup();
        let all = g.all();
        assert_eq!(g.center(&all).len(), 1);
        assert_eq!(g.derived_subgroup(&all).len(), 3);
        assert!(!g.is_simple(&all));
        assert_eq!(g.largest_normal_p_subgroup(&all, 2).len(), 1);
        assert_eq!(g.largest_normal_p_subgroup(&all, 3).len(), 3);
        let (q, _) = g.quotient(&all, &g.derived_subgroup(&all));
        assert_eq!(q.order(), 2);
    }
}
