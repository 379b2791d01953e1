//! Maximal independent sets of a small hypergraph.
//!
//! Vertices are bit positions of a `u64`; an edge is a mask of at least two
//! vertices (singletons are allowed and simply exclude their vertex). A set is
//! independent when it contains no edge completely.

pub(crate) struct Enumeration {
    pub sets: Vec<u64>,
    pub nodes: u64,
    pub pruned: u64,
}

struct Search<'a> {
    order: Vec<usize>,
    incident: Vec<Vec<u64>>,
    free: u64,
    edges: &'a [u64],
    out: Enumeration,
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let b = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(b)
    })
}

/// Enumerates every maximal independent set over `n` vertices by branching on
/// the vertices that occur in some edge.
pub(crate) fn maximal_independent_sets(n: usize, edges: &[u64]) -> Enumeration {
    let touched = edges.iter().fold(0u64, |acc, e| acc | e) & full_mask(n);
    let mut incident = vec![Vec::new(); n];
    for &e in edges {
        for v in bits(e) {
            incident[v].push(e);
        }
    }
    let mut order: Vec<usize> = bits(touched).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(incident[v].len()));
    let mut search = Search {
        order,
        incident,
        free: full_mask(n) & !touched,
        edges,
        out: Enumeration {
            sets: Vec::new(),
            nodes: 0,
            pruned: 0,
        },
    };
    search.go(0, 0, 0);
    search.out
}

impl Search<'_> {
    /// Whether `v` would complete an edge given the included vertices `inc`.
    fn blocked(&self, v: usize, inc: u64) -> bool {
        let b = 1u64 << v;
        self.incident[v].iter().any(|&e| e & !(inc | b) == 0)
    }

    /// Every excluded vertex still has an edge whose other vertices avoid the
    /// exclusions, so it can yet be blocked.
    fn excluded_viable(&self, exc: u64) -> bool {
        bits(exc).all(|v| {
            let b = 1u64 << v;
            self.incident[v].iter().any(|&e| e & !b & exc == 0)
        })
    }

    fn go(&mut self, pos: usize, inc: u64, exc: u64) {
        self.out.nodes += 1;
        if pos == self.order.len() {
            if bits(exc).all(|v| self.blocked(v, inc)) {
                debug_assert!(self.edges.iter().all(|&e| e & !inc != 0));
                self.out.sets.push(inc | self.free);
            } else {
                self.out.pruned += 1;
            }
            return;
        }
        let v = self.order[pos];
        let b = 1u64 << v;
        if !self.blocked(v, inc) {
            self.go(pos + 1, inc | b, exc);
        }
        if self.excluded_viable(exc | b) {
            self.go(pos + 1, inc, exc | b);
        } else {
            self.out.pruned += 1;
        }
    }
}
