//! Fill-reducing orderings for sparse Cholesky.
//!
//! Nested dissection with separators taken from the middle level of a
//! breadth-first level structure rooted at a pseudo-peripheral vertex.

use crate::discretize::SparseSymMatrix;
use std::collections::VecDeque;

const LEAF_SIZE: usize = 48;

/// Returns `perm` with `perm[new] = old`.
pub fn nested_dissection(a: &SparseSymMatrix) -> Vec<usize> {
    let n = a.n;
    let mut ctx = Ctx {
        a,
        stamp: vec![0; n],
        level: vec![usize::MAX; n],
        epoch: 0,
        order: Vec::with_capacity(n),
    };
    let all: Vec<usize> = (0..n).collect();
    let mut stack = vec![Task::Split(all)];
    while let Some(task) = stack.pop() {
        match task {
            Task::Emit(vs) => ctx.order.extend(vs),
            Task::Split(vs) => {
                if vs.len() <= LEAF_SIZE {
                    ctx.order.extend(vs);
                    continue;
                }
                match ctx.bisect(&vs) {
                    Some((left, right, sep)) => {
                        // Processed in reverse: left, right, then separator.
                        stack.push(Task::Emit(sep));
                        stack.push(Task::Split(right));
                        stack.push(Task::Split(left));
                    }
                    None => ctx.order.extend(vs),
                }
            }
        }
    }
    debug_assert_eq!(ctx.order.len(), n);
    ctx.order
}

/// Inverse permutation: `inv[old] = new`.
pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    inv
}

enum Task {
    Split(Vec<usize>),
    Emit(Vec<usize>),
}

struct Ctx<'a> {
    a: &'a SparseSymMatrix,
    stamp: Vec<u32>,
    level: Vec<usize>,
    epoch: u32,
    order: Vec<usize>,
}

impl Ctx<'_> {
    fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.a.row(v).0.iter().copied().filter(move |&w| w != v)
    }

    /// Breadth-first levels inside the current subset from `root`;
    /// returns visited vertices in order and the last level index.
    fn bfs(&mut self, root: usize, member: u32) -> (Vec<usize>, usize) {
        let mut seen = Vec::new();
        let mut queue = VecDeque::new();
        self.level[root] = 0;
        self.stamp[root] = member + 1;
        queue.push_back(root);
        let mut last = 0;
        while let Some(v) = queue.pop_front() {
            seen.push(v);
            last = self.level[v];
            let lv = self.level[v];
            let nbrs: Vec<usize> = self.neighbors(v).collect();
            for w in nbrs {
                if self.stamp[w] == member {
                    self.stamp[w] = member + 1;
                    self.level[w] = lv + 1;
                    queue.push_back(w);
                }
            }
        }
        (seen, last)
    }

    fn mark(&mut self, vs: &[usize]) -> u32 {
        self.epoch += 2;
        let m = self.epoch;
        for &v in vs {
            self.stamp[v] = m;
        }
        m
    }

    fn bisect(&mut self, vs: &[usize]) -> Option<(Vec<usize>, Vec<usize>, Vec<usize>)> {
        // Disconnected subsets: split off whole components.
        let m = self.mark(vs);
        let (comp, _) = self.bfs(vs[0], m);
        if comp.len() < vs.len() {
            let rest: Vec<usize> = vs.iter().copied().filter(|&v| self.stamp[v] == m).collect();
            return Some((comp, rest, Vec::new()));
        }

        // Pseudo-peripheral root by repeated sweeps.
        let mut root = vs[0];
        let mut depth = 0;
        for _ in 0..4 {
            let m = self.mark(vs);
            let (seen, last) = self.bfs(root, m);
            if last <= depth && depth > 0 {
                break;
            }
            depth = last;
            let candidates = seen.iter().copied().filter(|&v| self.level[v] == last);
            root = candidates
                .min_by_key(|&v| self.neighbors(v).count())
                .unwrap_or(root);
        }
        let m = self.mark(vs);
        let (seen, last) = self.bfs(root, m);
        if last < 2 {
            return None;
        }
        let mut counts = vec![0usize; last + 1];
        for &v in &seen {
            counts[self.level[v]] += 1;
        }
        let half = seen.len() / 2;
        let mut acc = 0;
        let mut mid = 1;
        for (l, &c) in counts.iter().enumerate() {
            acc += c;
            if acc >= half {
                mid = l.clamp(1, last - 1);
                break;
            }
        }
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut sep = Vec::new();
        for &v in &seen {
            match self.level[v].cmp(&mid) {
                std::cmp::Ordering::Less => left.push(v),
                std::cmp::Ordering::Greater => right.push(v),
                std::cmp::Ordering::Equal => sep.push(v),
            }
        }
        // Separator vertices without a neighbor beyond the cut join the left part.
        let mut kept = Vec::with_capacity(sep.len());
        for v in sep {
            let touches_right = self.neighbors(v).any(|w| self.level[w] == mid + 1 && self.stamp[w] == m + 1);
            if touches_right {
                kept.push(v);
            } else {
                left.push(v);
            }
        }
        Some((left, right, kept))
    }
}
