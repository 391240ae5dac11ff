//! Exact maximum clique by branch and bound with greedy-coloring bounds.

use crate::graph::UndirectedGraph;

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }
}

struct Search<'a> {
    rows: &'a [Bits],
    current: Vec<usize>,
    best: Vec<usize>,
}

impl Search<'_> {
    /// Greedy sequential coloring of `p`; returns vertices in color order
    /// with the running color count, which bounds any clique in a prefix.
    fn color_sort(&self, p: &Bits) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::new();
        let mut bounds = Vec::new();
        let mut uncolored = p.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                uncolored.clear(v);
                q.clear(v);
                q.and_not_assign(&self.rows[v]);
                order.push(v);
                bounds.push(color);
            }
        }
        (order, bounds)
    }

    fn expand(&mut self, mut p: Bits) {
        let (order, bounds) = self.color_sort(&p);
        for idx in (0..order.len()).rev() {
            if self.current.len() + bounds[idx] <= self.best.len() {
                return;
            }
            let v = order[idx];
            self.current.push(v);
            let next = p.and(&self.rows[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            p.clear(v);
        }
    }
}

/// A maximum clique of `g`, sorted ascending.
pub fn maximum_clique(g: &UndirectedGraph) -> Vec<usize> {
    let n = g.n();
    let rows: Vec<Bits> = (0..n)
        .map(|v| {
            let mut b = Bits::zeros(n);
            for &u in g.neighbors(v) {
                b.set(u);
            }
            b
        })
        .collect();
    let mut all = Bits::zeros(n);
    for v in 0..n {
        all.set(v);
    }
    let mut search = Search {
        rows: &rows,
        current: Vec::new(),
        best: Vec::new(),
    };
    if n > 0 {
        search.expand(all);
    }
    let mut best = search.best;
    best.sort_unstable();
    best
}

/// A maximum independent set of `g`, sorted ascending.
pub fn maximum_independent_set(g: &UndirectedGraph) -> Vec<usize> {
    maximum_clique(&g.complement())
}
