//! Finite permutation groups: element orders, generators and a small
//! catalogue of names.
//!
//! Groups are given as a list of permutations of `0..k` that is closed under
//! composition. Composition follows the crate convention
//! `(s·t)(i) = t(s(i))`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_integer::Integer;
use serde::Serialize;

/// Largest order for which a full Cayley table is materialized.
pub const CAYLEY_LIMIT: usize = 1024;

/// Budget of candidate generating sets examined per size.
const GENERATOR_SEARCH_BUDGET: usize = 20_000;

/// `(s·t)(i) = t(s(i))`.
pub fn compose(s: &[usize], t: &[usize]) -> Vec<usize> {
    s.iter().map(|&i| t[i]).collect()
}

pub fn inverse(s: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; s.len()];
    for (i, &j) in s.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

pub fn is_identity(s: &[usize]) -> bool {
    s.iter().enumerate().all(|(i, &j)| i == j)
}

/// Order of a permutation: the lcm of its cycle lengths.
pub fn perm_order(s: &[usize]) -> usize {
    let mut seen = vec![false; s.len()];
    let mut order = 1usize;
    for start in 0..s.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = s[i];
            len += 1;
        }
        order = order.lcm(&len);
    }
    order
}

/// Structural summary of a finite group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupDescription {
    pub order: usize,
    pub abelian: bool,
    /// Number of elements of each order.
    pub element_orders: BTreeMap<usize, usize>,
    /// Indices of a generating set, minimum size when found within the
    /// search budget.
    pub generators: Vec<usize>,
    pub name: String,
}

/// A closed list of permutations with fast index lookup.
pub struct PermGroup<'a> {
    perms: &'a [Vec<usize>],
    index: HashMap<&'a [usize], usize>,
    table: Option<&'a [Vec<usize>]>,
}

impl<'a> PermGroup<'a> {
    pub fn new(perms: &'a [Vec<usize>], table: Option<&'a [Vec<usize>]>) -> Self {
        let index = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        Self {
            perms,
            index,
            table,
        }
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn index_of(&self, p: &[usize]) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> Option<usize> {
        match self.table {
            Some(t) => Some(t[a][b]),
            None => self.index_of(&compose(&self.perms[a], &self.perms[b])),
        }
    }

    /// Size of the subgroup generated by `gens`, stopping early once it
    /// exceeds `cap`.
    fn closure_size(&self, gens: &[usize], cap: usize) -> usize {
        let Some(identity) = self.perms.iter().position(|p| is_identity(p)) else {
            return 0;
        };
        let mut seen = HashSet::from([identity]);
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                if let Some(y) = self.mul(x, g) {
                    if seen.insert(y) {
                        if seen.len() >= cap {
                            return seen.len();
                        }
                        queue.push_back(y);
                    }
                }
            }
        }
        seen.len()
    }

    fn generates(&self, gens: &[usize]) -> bool {
        self.closure_size(gens, self.order()) == self.order()
    }

    pub fn generators(&self, element_orders: &[usize]) -> Vec<usize> {
        let order = self.order();
        if order <= 1 {
            return Vec::new();
        }
        if let Some(g) = element_orders.iter().position(|&o| o == order) {
            return vec![g];
        }
        let candidates: Vec<usize> = (0..order).filter(|&i| element_orders[i] > 1).collect();
        for size in 2..=3 {
            let mut tried = 0;
            let mut stack: Vec<usize> = Vec::with_capacity(size);
            if let Some(found) = self.search(&candidates, size, 0, &mut stack, &mut tried) {
                return found;
            }
        }
        // Greedy fallback: add the first element outside the current span.
        let mut gens = Vec::new();
        let mut span = 1;
        for &c in &candidates {
            gens.push(c);
            let s = self.closure_size(&gens, order);
            if s > span {
                span = s;
                if span == order {
                    break;
                }
            } else {
                gens.pop();
            }
        }
        gens
    }

    fn search(
        &self,
        candidates: &[usize],
        size: usize,
        start: usize,
        stack: &mut Vec<usize>,
        tried: &mut usize,
    ) -> Option<Vec<usize>> {
        if stack.len() == size {
            *tried += 1;
            return self.generates(stack).then(|| stack.clone());
        }
        for i in start..candidates.len() {
            if *tried >= GENERATOR_SEARCH_BUDGET {
                return None;
            }
            stack.push(candidates[i]);
            let found = self.search(candidates, size, i + 1, stack, tried);
            stack.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    pub fn describe(&self) -> GroupDescription {
        let orders: Vec<usize> = self.perms.iter().map(|p| perm_order(p)).collect();
        let generators = self.generators(&orders);
        let abelian = generators.iter().all(|&a| {
            generators
                .iter()
                .all(|&b| self.mul(a, b).is_some() && self.mul(a, b) == self.mul(b, a))
        });
        let mut element_orders = BTreeMap::new();
        for o in orders {
            *element_orders.entry(o).or_insert(0) += 1;
        }
        let name = identify(self.order(), abelian, &element_orders);
        GroupDescription {
            order: self.order(),
            abelian,
            element_orders,
            generators,
            name,
        }
    }
}

/// Describes a closed list of permutations.
pub fn describe_permutations(perms: &[Vec<usize>]) -> GroupDescription {
    PermGroup::new(perms, None).describe()
}

/// Builds the Cayley table `table[a][b] = index(perms[a]·perms[b])`, or
/// `None` when the list is not closed.
pub fn cayley_table(perms: &[Vec<usize>]) -> Option<Vec<Vec<usize>>> {
    let group = PermGroup::new(perms, None);
    (0..perms.len())
        .map(|a| (0..perms.len()).map(|b| group.mul(a, b)).collect())
        .collect()
}

/// Name from the catalogue of groups of order at most 24, keyed by
/// `(order, abelian, element-order counts)`; `"unidentified"` otherwise.
pub fn identify(order: usize, abelian: bool, element_orders: &BTreeMap<usize, usize>) -> String {
    if order == 1 {
        return "1".into();
    }
    if order > 24 {
        return "unidentified".into();
    }
    if abelian {
        return abelian_name(order, element_orders).unwrap_or_else(|| "unidentified".into());
    }
    const NONABELIAN: &[(&str, usize, &[(usize, usize)])] = &[
        ("S_3", 6, &[(1, 1), (2, 3), (3, 2)]),
        ("D_4", 8, &[(1, 1), (2, 5), (4, 2)]),
        ("Q_8", 8, &[(1, 1), (2, 1), (4, 6)]),
        ("D_5", 10, &[(1, 1), (2, 5), (5, 4)]),
        ("A_4", 12, &[(1, 1), (2, 3), (3, 8)]),
        ("D_6", 12, &[(1, 1), (2, 7), (3, 2), (6, 2)]),
        ("Dic_3", 12, &[(1, 1), (2, 1), (3, 2), (4, 6), (6, 2)]),
        ("D_7", 14, &[(1, 1), (2, 7), (7, 6)]),
        ("D_9", 18, &[(1, 1), (2, 9), (3, 2), (9, 6)]),
        ("S_3xZ_3", 18, &[(1, 1), (2, 3), (3, 8), (6, 6)]),
        ("(Z_3xZ_3):Z_2", 18, &[(1, 1), (2, 9), (3, 8)]),
        ("D_10", 20, &[(1, 1), (2, 11), (5, 4), (10, 4)]),
        ("Dic_5", 20, &[(1, 1), (2, 1), (4, 10), (5, 4), (10, 4)]),
        ("F_20", 20, &[(1, 1), (2, 5), (4, 10), (5, 4)]),
        ("Z_7:Z_3", 21, &[(1, 1), (3, 14), (7, 6)]),
        ("D_11", 22, &[(1, 1), (2, 11), (11, 10)]),
        ("S_4", 24, &[(1, 1), (2, 9), (3, 8), (4, 6)]),
    ];
    NONABELIAN
        .iter()
        .find(|(_, o, counts)| {
            *o == order
                && counts.len() == element_orders.len()
                && counts.iter().all(|(k, v)| element_orders.get(k) == Some(v))
        })
        .map_or_else(|| "unidentified".into(), |(name, _, _)| (*name).into())
}

/// Finite abelian groups are determined by their element-order counts; this
/// recovers the invariant factors.
fn abelian_name(order: usize, element_orders: &BTreeMap<usize, usize>) -> Option<String> {
    let mut primary: Vec<Vec<usize>> = Vec::new();
    let mut rest = order;
    let mut p = 2;
    while rest > 1 {
        if rest % p == 0 {
            while rest % p == 0 {
                rest /= p;
            }
            let dividing = |k: u32| -> usize {
                let pk = p.pow(k);
                element_orders
                    .iter()
                    .filter(|(o, _)| pk % **o == 0)
                    .map(|(_, c)| c)
                    .sum()
            };
            let log_p = |mut x: usize| -> Option<u32> {
                let mut e = 0;
                while x > 1 {
                    if x % p != 0 {
                        return None;
                    }
                    x /= p;
                    e += 1;
                }
                Some(e)
            };
            // r_k = number of cyclic p-factors of exponent >= k
            let mut at_least = Vec::new();
            let mut k = 1;
            loop {
                let r = log_p(dividing(k))? - log_p(dividing(k - 1))?;
                if r == 0 {
                    break;
                }
                at_least.push(r as usize);
                k += 1;
            }
            let mut exps = Vec::new();
            for (idx, &r) in at_least.iter().enumerate() {
                let next = at_least.get(idx + 1).copied().unwrap_or(0);
                exps.extend(std::iter::repeat_n(idx + 1, r - next));
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            primary.push(exps.into_iter().map(|e| p.pow(e as u32)).collect());
        }
        p += 1;
    }
    let width = primary.iter().map(Vec::len).max().unwrap_or(0);
    let mut factors: Vec<usize> = (0..width)
        .map(|i| primary.iter().filter_map(|v| v.get(i)).product())
        .collect();
    factors.sort_unstable();
    if factors.iter().product::<usize>() != order {
        return None;
    }
    Some(if factors.len() == 1 {
        format!("Z_{}", factors[0])
    } else if factors.iter().all(|&f| f == factors[0]) {
        format!("Z_{}^{}", factors[0], factors.len())
    } else {
        factors
            .iter()
            .map(|f| format!("Z_{f}"))
            .collect::<Vec<_>>()
            .join("x")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closure of a generating set under composition.
    fn generate(gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let k = gens[0].len();
        let id: Vec<usize> = (0..k).collect();
        let mut seen = vec![id.clone()];
        let mut set: HashSet<Vec<usize>> = HashSet::from([id]);
        let mut i = 0;
        while i < seen.len() {
            for g in gens {
                let p = compose(&seen[i], g);
                if set.insert(p.clone()) {
                    seen.push(p);
                }
            }
            i += 1;
        }
        seen.sort();
        seen
    }

    fn cycle(k: usize) -> Vec<usize> {
        (0..k).map(|i| (i + 1) % k).collect()
    }

    fn reflection(k: usize) -> Vec<usize> {
        (0..k).map(|i| (k - i) % k).collect()
    }

    #[test]
    fn cyclic_and_dihedral_names() {
        for k in 2..=11 {
            let z = describe_permutations(&generate(&[cycle(k)]));
            assert_eq!(z.name, format!("Z_{k}"));
            assert_eq!(z.generators.len(), 1);
        }
        for (k, name) in [
            (3, "S_3"),
            (4, "D_4"),
            (5, "D_5"),
            (6, "D_6"),
            (7, "D_7"),
            (9, "D_9"),
            (10, "D_10"),
            (11, "D_11"),
        ] {
            let d = describe_permutations(&generate(&[cycle(k), reflection(k)]));
            assert_eq!(d.order, 2 * k);
            assert!(!d.abelian);
            assert_eq!(d.name, name);
            assert_eq!(d.generators.len(), 2);
        }
    }

    #[test]
    fn symmetric_and_alternating() {
        let s4 = generate(&[vec![1, 0, 2, 3], cycle(4)]);
        assert_eq!(describe_permutations(&s4).name, "S_4");
        let a4 = generate(&[vec![1, 2, 0, 3], vec![0, 2, 3, 1]]);
        let d = describe_permutations(&a4);
        assert_eq!((d.order, d.name.as_str()), (12, "A_4"));
        let s5 = generate(&[vec![1, 0, 2, 3, 4], cycle(5)]);
        let d = describe_permutations(&s5);
        assert_eq!((d.order, d.name.as_str()), (120, "unidentified"));
        assert_eq!(d.generators.len(), 2);
    }

    #[test]
    fn abelian_products() {
        // Z_2 x Z_4 acting on 2 + 4 points
        let g = generate(&[vec![1, 0, 2, 3, 4, 5], vec![0, 1, 3, 4, 5, 2]]);
        let d = describe_permutations(&g);
        assert!(d.abelian);
        assert_eq!(d.name, "Z_2xZ_4");
        // Klein four group
        let v = generate(&[vec![1, 0, 3, 2], vec![2, 3, 0, 1]]);
        assert_eq!(describe_permutations(&v).name, "Z_2^2");
        // Z_2 x Z_3 = Z_6
        let z6 = generate(&[vec![1, 0, 2, 3, 4], vec![0, 1, 3, 4, 2]]);
        assert_eq!(describe_permutations(&z6).name, "Z_6");
    }

    #[test]
    fn frobenius_twenty() {
        // x -> x+1 and x -> 2x on Z_5
        let g = generate(&[cycle(5), (0..5).map(|x| 2 * x % 5).collect()]);
        assert_eq!(describe_permutations(&g).name, "F_20");
    }

    #[test]
    fn trivial_group() {
        let d = describe_permutations(&[vec![0, 1, 2]]);
        assert_eq!((d.order, d.name.as_str(), d.abelian), (1, "1", true));
        assert!(d.generators.is_empty());
    }

    #[test]
    fn table_rows_are_permutations() {
        let s3 = generate(&[vec![1, 0, 2], cycle(3)]);
        let table = cayley_table(&s3).unwrap();
        for row in &table {
            let mut r = row.clone();
            r.sort();
            assert_eq!(r, (0..6).collect::<Vec<_>>());
        }
        assert!(cayley_table(&[vec![0, 1, 2], vec![1, 2, 0]]).is_none());
    }

    #[test]
    fn composition_convention() {
        let s = vec![1, 2, 0];
        let t = vec![1, 0, 2];
        // (s·t)(0) = t(s(0)) = t(1) = 0
        assert_eq!(compose(&s, &t), vec![0, 2, 1]);
        assert!(is_identity(&compose(&s, &inverse(&s))));
        assert_eq!(perm_order(&s), 3);
    }
}
