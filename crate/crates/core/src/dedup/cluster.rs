use std::collections::{HashMap, HashSet};

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Groups documents that share any band key (per band position) and returns
/// every id except the lexicographically smallest of each group. Entries
/// with no keys are never grouped; a repeated id is the same document.
pub fn cluster_and_select<I>(candidates: I) -> HashSet<String>
where
    I: IntoIterator<Item = (String, Vec<u64>)>,
{
    let mut ids: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut buckets: HashMap<(usize, u64), usize> = HashMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    for (id, keys) in candidates {
        let node = *index.entry(id.clone()).or_insert_with(|| {
            ids.push(id);
            ids.len() - 1
        });
        for (band, key) in keys.into_iter().enumerate() {
            let first = *buckets.entry((band, key)).or_insert(node);
            if first != node {
                pairs.push((first, node));
            }
        }
    }

    let mut uf = UnionFind::new(ids.len());
    for (a, b) in pairs {
        uf.union(a, b);
    }
    let mut keeper: HashMap<usize, usize> = HashMap::new();
    for node in 0..ids.len() {
        let root = uf.find(node);
        let best = keeper.entry(root).or_insert(node);
        if ids[node] < ids[*best] {
            *best = node;
        }
    }
    (0..ids.len())
        .filter(|&node| keeper[&uf.find(node)] != node)
        .map(|node| ids[node].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ids(v: &[&str]) -> HashSet<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn no_shared_keys() {
        let got = cluster_and_select(vec![("a".into(), vec![1, 2]), ("b".into(), vec![3, 4])]);
        assert!(got.is_empty());
    }

    #[test]
    fn same_key_in_different_bands_is_not_shared() {
        let got = cluster_and_select(vec![("a".into(), vec![1, 2]), ("b".into(), vec![2, 1])]);
        assert!(got.is_empty());
    }

    #[test]
    fn transitive_chain() {
        let got = cluster_and_select(vec![
            ("c".into(), vec![9, 20]),
            ("a".into(), vec![1, 10]),
            ("b".into(), vec![1, 20]),
        ]);
        assert_eq!(got, ids(&["b", "c"]));
    }

    #[test]
    fn two_disjoint_pairs() {
        let got = cluster_and_select(vec![
            ("a".into(), vec![1]),
            ("b".into(), vec![1]),
            ("c".into(), vec![2]),
            ("d".into(), vec![2]),
        ]);
        assert_eq!(got, ids(&["b", "d"]));
    }

    #[test]
    fn keyless_docs_never_merge() {
        let got = cluster_and_select(vec![("a".into(), vec![]), ("b".into(), vec![])]);
        assert!(got.is_empty());
    }

    proptest! {
        #[test]
        fn permutation_invariant(
            entries in prop::collection::vec(prop::collection::vec(0u64..6, 3), 1..25),
            rotate in 0usize..25,
        ) {
            let input: Vec<(String, Vec<u64>)> = entries
                .into_iter()
                .enumerate()
                .map(|(i, k)| (format!("doc{i:03}"), k))
                .collect();
            let mut shuffled = input.clone();
            shuffled.reverse();
            let r = rotate % shuffled.len();
            shuffled.rotate_left(r);
            prop_assert_eq!(cluster_and_select(input), cluster_and_select(shuffled));
        }
    }
}
