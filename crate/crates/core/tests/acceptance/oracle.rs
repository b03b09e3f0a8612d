//! Slow, obviously-correct reference implementations. Nothing here calls the
//! library's search, product, spill or solver code.

use std::collections::BTreeSet;

use qct_core::qcsp::{Atom, QcspSentence, Quantifier};
use qct_core::Digraph;

/// Adjacency matrix of a small digraph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Adj {
    pub n: usize,
    pub m: Vec<Vec<bool>>,
}

impl Adj {
    pub fn new(n: usize) -> Self {
        Adj {
            n,
            m: vec![vec![false; n]; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)], loops: bool) -> Self {
        let mut a = Adj::new(n);
        for &(u, v) in edges {
            a.m[u][v] = true;
        }
        if loops {
            for v in 0..n {
                a.m[v][v] = true;
            }
        }
        a
    }

    pub fn of(g: &Digraph) -> Self {
        let mut a = Adj::new(g.n());
        for u in 0..g.n() {
            for v in 0..g.n() {
                a.m[u][v] = g.has_edge(u, v);
            }
        }
        a
    }

    pub fn to_digraph(&self) -> Digraph {
        Digraph::new(self.n, self.edges(), false).expect("ids in range")
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if self.m[u][v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn induced(&self, set: &[usize]) -> Adj {
        let mut a = Adj::new(set.len());
        for (i, &u) in set.iter().enumerate() {
            for (j, &v) in set.iter().enumerate() {
                a.m[i][j] = self.m[u][v];
            }
        }
        a
    }

    pub fn reversed(&self) -> Adj {
        let mut a = Adj::new(self.n);
        for u in 0..self.n {
            for v in 0..self.n {
                a.m[v][u] = self.m[u][v];
            }
        }
        a
    }

    pub fn is_transitive_tournament(&self) -> bool {
        (0..self.n).all(|u| {
            (0..self.n).all(|v| (0..self.n).all(|w| !(self.m[u][v] && self.m[v][w]) || self.m[u][w]))
        })
    }

    /// reach[u][v]: a directed path from u to v exists.
    pub fn reach(&self) -> Vec<Vec<bool>> {
        let mut r = self.m.clone();
        for v in 0..self.n {
            r[v][v] = true;
        }
        for k in 0..self.n {
            for i in 0..self.n {
                for j in 0..self.n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        r
    }

    pub fn strongly_connected(&self) -> bool {
        self.reach().iter().all(|row| row.iter().all(|&b| b))
    }

    /// Strong components, listed by the order they appear in a topological
    /// order of the condensation.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let r = self.reach();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for v in 0..self.n {
            if let Some(c) = comps.iter_mut().find(|c| r[c[0]][v] && r[v][c[0]]) {
                c.push(v);
            } else {
                comps.push(vec![v]);
            }
        }
        // In a tournament the condensation is a chain: sort by how many
        // vertices each component reaches.
        comps.sort_by_key(|c| std::cmp::Reverse((0..self.n).filter(|&w| r[c[0]][w]).count()));
        comps
    }
}

/// All labelled reflexive tournaments on `n` vertices. Pair `(u, v)` with
/// `u < v` is bit `i` in lexicographic pair order; a set bit means `u -> v`.
pub fn labelled_tournaments(n: usize) -> impl Iterator<Item = Adj> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len()).map(move |bits| {
        let mut a = Adj::new(n);
        for v in 0..n {
            a.m[v][v] = true;
        }
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if bits >> i & 1 == 1 {
                a.m[u][v] = true;
            } else {
                a.m[v][u] = true;
            }
        }
        a
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Least relabelling of `a` over all permutations.
pub fn canonical(a: &Adj) -> Adj {
    permutations(a.n)
        .into_iter()
        .map(|p| {
            let mut b = Adj::new(a.n);
            for u in 0..a.n {
                for v in 0..a.n {
                    b.m[p[u]][p[v]] = a.m[u][v];
                }
            }
            b
        })
        .min()
        .expect("at least one permutation")
}

/// One canonical representative per isomorphism class.
pub fn tournament_classes(n: usize) -> Vec<Adj> {
    let set: BTreeSet<Adj> = labelled_tournaments(n).map(|a| canonical(&a)).collect();
    set.into_iter().collect()
}

pub fn classes_up_to(n: usize) -> Vec<Adj> {
    (1..=n).flat_map(tournament_classes).collect()
}

/// Visits every map `0..src_n -> 0..tgt.n` respecting `fixed` under which
/// each `src_edges` pair lands on an edge. Vertices are assigned in id order
/// and an edge is checked once both ends are set. `visit` returns false to
/// stop. Returns false if stopped.
pub fn homs(
    src_n: usize,
    src_edges: &[(usize, usize)],
    tgt: &Adj,
    fixed: &[Option<usize>],
    mut visit: impl FnMut(&[usize]) -> bool,
) -> bool {
    let mut due: Vec<Vec<(usize, usize)>> = vec![Vec::new(); src_n];
    for &(u, v) in src_edges {
        due[u.max(v)].push((u, v));
    }
    fn go(
        i: usize,
        map: &mut Vec<usize>,
        due: &[Vec<(usize, usize)>],
        tgt: &Adj,
        fixed: &[Option<usize>],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if i == due.len() {
            return visit(map);
        }
        let choices: Vec<usize> = match fixed.get(i).copied().flatten() {
            Some(x) => vec![x],
            None => (0..tgt.n).collect(),
        };
        for x in choices {
            map.push(x);
            let ok = due[i].iter().all(|&(u, v)| tgt.m[map[u]][map[v]]);
            if ok && !go(i + 1, map, due, tgt, fixed, visit) {
                map.pop();
                return false;
            }
            map.pop();
        }
        true
    }
    go(0, &mut Vec::new(), &due, tgt, fixed, &mut visit)
}

/// Every total map `0..n -> 0..n` by counting in base n.
pub fn all_self_maps(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(n as u32);
    (0..total).map(move |mut id| {
        let mut f = vec![0; n];
        for slot in f.iter_mut().rev() {
            *slot = id % n;
            id /= n;
        }
        f
    })
}

pub fn is_hom(a: &Adj, b: &Adj, f: &[usize]) -> bool {
    (0..a.n).all(|u| (0..a.n).all(|v| !a.m[u][v] || b.m[f[u]][f[v]]))
}

pub fn endomorphisms(a: &Adj) -> Vec<Vec<usize>> {
    all_self_maps(a.n).filter(|f| is_hom(a, a, f)).collect()
}

pub fn is_bijective(f: &[usize]) -> bool {
    let set: BTreeSet<usize> = f.iter().copied().collect();
    set.len() == f.len()
}

pub fn is_constant(f: &[usize]) -> bool {
    f.windows(2).all(|w| w[0] == w[1])
}

/// Retraction of `a` onto the vertex subset `to`, by scanning maps.
pub fn retraction(a: &Adj, to: &[usize]) -> Option<Vec<usize>> {
    let fixed: Vec<Option<usize>> = (0..a.n).map(|v| to.contains(&v).then_some(v)).collect();
    let mut found = None;
    homs(a.n, &a.edges(), a, &fixed, |f| {
        if f.iter().all(|x| to.contains(x)) {
            found = Some(f.to_vec());
            false
        } else {
            true
        }
    });
    found
}

/// The cylinder, written out from its definition: vertex `(i, j)` is
/// `j * m + i`, pendant (if any) last.
pub fn cylinder(m: usize, plus: bool) -> (usize, Vec<(usize, usize)>) {
    let id = |i: usize, j: usize| j * m + i;
    let n = m * m + usize::from(plus);
    let mut e: Vec<(usize, usize)> = (0..n).map(|v| (v, v)).collect();
    for j in 0..m {
        for i in 0..m {
            e.push((id(i, j), id((i + 1) % m, j)));
            if j + 1 < m {
                e.push((id(i, j), id(i, j + 1)));
                e.push((id(i, j + 1), id((i + 1) % m, j)));
            }
        }
    }
    if plus {
        e.push((id(0, m - 1), m * m));
    }
    (n, e)
}

/// Per designated gadget vertex (top positions in order, or the pendant),
/// the host vertices it reaches over all retractions of host + cylinder.
pub fn spill_sets(host: &Adj, cycle: &[usize], plus: bool) -> Vec<BTreeSet<usize>> {
    let m = cycle.len();
    let (n, edges) = cylinder(m, plus);
    let fixed: Vec<Option<usize>> = (0..n).map(|v| (v < m).then(|| cycle[v])).collect();
    let designated: Vec<usize> = if plus {
        vec![m * m]
    } else {
        (0..m).map(|i| (m - 1) * m + i).collect()
    };
    let mut sets = vec![BTreeSet::new(); designated.len()];
    homs(n, &edges, host, &fixed, |f| {
        for (s, &x) in sets.iter_mut().zip(&designated) {
            s.insert(f[x]);
        }
        true
    });
    sets
}

/// Plain game-tree evaluation with equality atoms and domains.
pub fn models(s: &QcspSentence, t: &Adj) -> bool {
    fn go(s: &QcspSentence, t: &Adj, values: &mut Vec<usize>) -> bool {
        let depth = values.len();
        if depth == s.var_count() {
            return s.atoms().iter().all(|a| match *a {
                Atom::Edge(x, y) => t.m[values[x]][values[y]],
                Atom::Eq(x, y) => values[x] == values[y],
            });
        }
        let choices: Vec<usize> = (0..t.n)
            .filter(|w| s.domains().get(&depth).is_none_or(|d| d.contains(w)))
            .collect();
        let mut branch = |x: usize| {
            values.push(x);
            let r = go(s, t, values);
            values.pop();
            r
        };
        match s.quantifier(depth) {
            Quantifier::Forall => {
                // A universal restricted to a proper subset is a false conjunct.
                choices.len() == t.n && choices.into_iter().all(&mut branch)
            }
            Quantifier::Exists => choices.into_iter().any(&mut branch),
        }
    }
    go(s, t, &mut Vec::new())
}

/// Adjacency of the k-th power, tuples encoded leftmost-most-significant.
pub fn power(a: &Adj, k: usize) -> Adj {
    let size = a.n.pow(k as u32);
    let digits = |mut id: usize| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = id % a.n;
            id /= a.n;
        }
        t
    };
    let mut p = Adj::new(size);
    for x in 0..size {
        let dx = digits(x);
        for y in 0..size {
            let dy = digits(y);
            p.m[x][y] = (0..k).all(|i| a.m[dx[i]][dy[i]]);
        }
    }
    p
}
