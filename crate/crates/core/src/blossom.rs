//! Edmonds' blossom search on plain adjacency lists.
//!
//! This is the engine shared by [`crate::matching`] (maximum matchings and
//! Gallai–Edmonds labels) and the bidirected reachability code, which runs
//! it on Tutte's f-factor gadget.

use std::collections::VecDeque;

pub(crate) const NONE: usize = usize::MAX;

pub(crate) struct Blossom {
    adj: Vec<Vec<usize>>,
    pub mate: Vec<usize>,
    // scratch
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    root_of: Vec<usize>,
    queue: VecDeque<usize>,
}

/// Outcome of a labelling pass.
pub(crate) struct Labels {
    pub even: Vec<bool>,
    pub odd: Vec<bool>,
}

/// Two different trees met along an edge; the matching was not maximum.
#[derive(Debug)]
pub(crate) struct AugmentingPathExists;

impl Blossom {
    pub fn new(adj: Vec<Vec<usize>>) -> Self {
        let n = adj.len();
        Blossom {
            adj,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            root_of: vec![NONE; n],
            queue: VecDeque::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn set_mate(&mut self, a: usize, b: usize) {
        self.mate[a] = b;
        self.mate[b] = a;
    }

    /// Matches every edge whose endpoints are both free, in adjacency order.
    pub fn greedy(&mut self) {
        for v in 0..self.len() {
            if self.mate[v] != NONE {
                continue;
            }
            for i in 0..self.adj[v].len() {
                let w = self.adj[v][i];
                if w != v && self.mate[w] == NONE {
                    self.set_mate(v, w);
                    break;
                }
            }
        }
    }

    pub fn maximize(&mut self) {
        for v in 0..self.len() {
            if self.mate[v] == NONE {
                self.augment_from(v);
            }
        }
    }

    fn reset(&mut self) {
        self.parent.fill(NONE);
        self.used.fill(false);
        self.root_of.fill(NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn contract(&mut self, v: usize, to: usize) {
        let cur = self.lca(v, to);
        self.in_blossom.fill(false);
        self.mark_path(v, cur, to);
        self.mark_path(to, cur, v);
        for i in 0..self.len() {
            if self.in_blossom[self.base[i]] {
                self.base[i] = cur;
                if !self.used[i] {
                    self.used[i] = true;
                    self.root_of[i] = self.root_of[cur];
                    self.queue.push_back(i);
                }
            }
        }
    }

    /// Grows alternating trees from `roots`. Returns the free vertex reached
    /// by an augmenting path, if any.
    fn search(&mut self, roots: &[usize]) -> Result<Option<usize>, AugmentingPathExists> {
        self.reset();
        for &r in roots {
            self.used[r] = true;
            self.root_of[r] = r;
            self.queue.push_back(r);
        }
        let single = roots.len() == 1;
        while let Some(v) = self.queue.pop_front() {
            for i in 0..self.adj[v].len() {
                let to = self.adj[v][i];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                let to_even = if self.mate[to] == NONE {
                    self.root_of[to] != NONE
                } else {
                    self.parent[self.mate[to]] != NONE
                };
                if to_even {
                    if self.root_of[to] != self.root_of[v] {
                        return Err(AugmentingPathExists);
                    }
                    self.contract(v, to);
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        if single {
                            return Ok(Some(to));
                        }
                        return Err(AugmentingPathExists);
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    self.root_of[m] = self.root_of[v];
                    self.queue.push_back(m);
                }
            }
        }
        Ok(None)
    }

    /// Single-source search from a free `root`; augments along the path
    /// found. Returns whether the matching grew.
    pub fn augment_from(&mut self, root: usize) -> bool {
        match self.search(&[root]) {
            Ok(Some(mut v)) => {
                while v != NONE {
                    let pv = self.parent[v];
                    let ppv = self.mate[pv];
                    self.set_mate(v, pv);
                    v = ppv;
                }
                true
            }
            _ => false,
        }
    }

    /// Labels vertices reachable from the free vertices `roots` by
    /// alternating paths, assuming no augmenting path exists.
    pub fn label(&mut self, roots: &[usize]) -> Result<Labels, AugmentingPathExists> {
        if roots.len() == 1 {
            if let Ok(Some(_)) = self.search(roots) {
                return Err(AugmentingPathExists);
            }
        } else {
            self.search(roots)?;
        }
        let even = self.used.clone();
        let odd = (0..self.len())
            .map(|v| !self.used[v] && self.parent[v] != NONE)
            .collect();
        Ok(Labels { even, odd })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adj(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let mut a = vec![Vec::new(); n];
        for &(u, v) in edges {
            a[u].push(v);
            a[v].push(u);
        }
        a
    }

    fn size(b: &Blossom) -> usize {
        b.mate.iter().filter(|&&m| m != NONE).count() / 2
    }

    #[test]
    fn odd_cycle_with_tail() {
        // pentagon 0..4 with pendant 5 at 0
        let e = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5)];
        let mut b = Blossom::new(adj(6, &e));
        b.maximize();
        assert_eq!(size(&b), 3);
    }

    #[test]
    fn blossom_needed() {
        // classic: augmenting path must pass through a blossom
        let e = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 1), (2, 5), (4, 6), (6, 7)];
        let mut b = Blossom::new(adj(8, &e));
        b.set_mate(1, 2);
        b.set_mate(3, 4);
        b.set_mate(6, 7);
        b.maximize();
        assert_eq!(size(&b), 4);
    }

    #[test]
    fn labels_of_a_star() {
        let mut b = Blossom::new(adj(4, &[(0, 1), (0, 2), (0, 3)]));
        b.set_mate(0, 1);
        let l = b.label(&[2, 3]).unwrap();
        assert!(l.odd[0] && l.even[1] && l.even[2] && l.even[3]);
    }
}
