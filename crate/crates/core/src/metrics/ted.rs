//! Ordered tree edit distance with the keyroot decomposition of Zhang and
//! Shasha. Insert and delete cost 1; rename cost is supplied by the caller.

/// A tree flattened into postorder with leftmost-leaf links.
#[derive(Debug, Clone)]
pub struct OrderedTree<L> {
    labels: Vec<L>,
    leftmost: Vec<usize>,
    parent: Vec<Option<usize>>,
    keyroots: Vec<usize>,
}

impl<L> OrderedTree<L> {
    /// Flattens any tree given a child accessor and a label extractor.
    pub fn build<N>(root: &N, children: impl Fn(&N) -> &[N], mut label: impl FnMut(&N) -> L) -> Self {
        let mut labels = Vec::new();
        let mut leftmost = Vec::new();
        let mut parent = Vec::new();
        // (node, next child index, leftmost leaf once known, finished children)
        let mut stack: Vec<(&N, usize, Option<usize>, Vec<usize>)> = vec![(root, 0, None, Vec::new())];
        while let Some(top) = stack.last_mut() {
            let (node, next, lm) = (top.0, top.1, top.2);
            let kids = children(node);
            if next < kids.len() {
                top.1 += 1;
                stack.push((&kids[next], 0, None, Vec::new()));
                continue;
            }
            let (_, _, _, kids) = stack.pop().expect("stack is non-empty");
            let idx = labels.len();
            let lm = lm.unwrap_or(idx);
            labels.push(label(node));
            leftmost.push(lm);
            parent.push(None);
            for k in kids {
                parent[k] = Some(idx);
            }
            if let Some(up) = stack.last_mut() {
                if up.2.is_none() {
                    up.2 = Some(lm);
                }
                up.3.push(idx);
            }
        }
        let mut seen = vec![false; labels.len()];
        let mut keyroots = Vec::new();
        for i in (0..labels.len()).rev() {
            if !seen[leftmost[i]] {
                seen[leftmost[i]] = true;
                keyroots.push(i);
            }
        }
        keyroots.reverse();
        Self {
            labels,
            leftmost,
            parent,
            keyroots,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Labels in postorder.
    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn leftmost(&self) -> &[usize] {
        &self.leftmost
    }

    pub fn parent(&self) -> &[Option<usize>] {
        &self.parent
    }
}

#[inline(always)]
fn min2(a: f64, b: f64) -> f64 {
    if a < b {
        a
    } else {
        b
    }
}

/// An edit cost. Besides plain `f64`, `[f64; N]` runs N cost models through
/// one pass; each lane is the exact distance under its own rename costs.
pub trait Cost: Copy {
    fn splat(v: f64) -> Self;
    fn plus(self, other: Self) -> Self;
    fn least(self, other: Self) -> Self;
}

impl Cost for f64 {
    #[inline(always)]
    fn splat(v: f64) -> Self {
        v
    }
    #[inline(always)]
    fn plus(self, other: Self) -> Self {
        self + other
    }
    #[inline(always)]
    fn least(self, other: Self) -> Self {
        min2(self, other)
    }
}

impl<const N: usize> Cost for [f64; N] {
    #[inline(always)]
    fn splat(v: f64) -> Self {
        [v; N]
    }
    #[inline(always)]
    fn plus(self, other: Self) -> Self {
        std::array::from_fn(|k| self[k] + other[k])
    }
    #[inline(always)]
    fn least(self, other: Self) -> Self {
        std::array::from_fn(|k| min2(self[k], other[k]))
    }
}

/// Minimum cost of transforming `a` into `b`.
pub fn tree_edit_distance<A, B>(a: &OrderedTree<A>, b: &OrderedTree<B>, rename: impl Fn(&A, &B) -> f64) -> f64 {
    tree_edit_distance_with(a, b, rename)
}

/// Cost of turning the single node `x` into each subtree of `t`: map it onto
/// the cheapest node of the subtree and insert the rest, or delete it and
/// insert everything. Returns the distance to the subtree at each node.
fn leaf_against_all<L, C: Cost>(t: &OrderedTree<L>, rename: impl Fn(usize) -> C) -> Vec<C> {
    let mut best = vec![C::splat(f64::INFINITY); t.len()];
    (0..t.len())
        .map(|y| {
            let m = rename(y).least(best[y]);
            if let Some(p) = t.parent[y] {
                best[p] = best[p].least(m);
            }
            C::splat((y - t.leftmost[y]) as f64).plus(m.least(C::splat(2.0)))
        })
        .collect()
}

/// Working memory for [`tree_edit_distance_in`]. Reusing one across calls
/// saves faulting in fresh pages for every pair of large trees.
#[derive(Debug, Clone, Default)]
pub struct TedScratch<C> {
    tree_dist: Vec<C>,
    forest: Vec<C>,
}

/// Zhang-Shasha over any [`Cost`] with fresh working memory.
pub fn tree_edit_distance_with<A, B, C: Cost>(a: &OrderedTree<A>, b: &OrderedTree<B>, rename: impl Fn(&A, &B) -> C) -> C {
    tree_edit_distance_in(&mut TedScratch { tree_dist: Vec::new(), forest: Vec::new() }, a, b, rename)
}

/// Zhang-Shasha over any [`Cost`]. Keyroots that are leaves are settled in
/// closed form; the forest recurrence runs only for pairs of inner keyroots.
pub fn tree_edit_distance_in<A, B, C: Cost>(
    scratch: &mut TedScratch<C>,
    a: &OrderedTree<A>,
    b: &OrderedTree<B>,
    rename: impl Fn(&A, &B) -> C,
) -> C {
    let (n1, n2) = (a.len(), b.len());
    if n1 == 0 || n2 == 0 {
        return C::splat((n1 + n2) as f64);
    }
    let one = C::splat(1.0);
    // Every entry is written before it is read, so stale contents are fine.
    let tree_dist = &mut scratch.tree_dist;
    tree_dist.resize(tree_dist.len().max(n1 * n2), C::splat(0.0));
    let forest = &mut scratch.forest;
    forest.resize(forest.len().max((n1 + 1) * (n2 + 1)), C::splat(0.0));
    let leaf_a = |x: usize| a.leftmost[x] == x;
    let mut leaf_keyroot_a = vec![false; n1];
    for &i in a.keyroots.iter().filter(|&&i| leaf_a(i)) {
        leaf_keyroot_a[i] = true;
        let d = leaf_against_all(b, |y| rename(&a.labels[i], &b.labels[y]));
        tree_dist[i * n2..(i + 1) * n2].copy_from_slice(&d);
    }
    // Every node of `a` against the leaf keyroots of `b`, as one postorder
    // sweep so that all accesses run along rows. Each pending node keeps its
    // cheapest capped rename onto the leaf on a stack until its parent folds
    // it in; capping early changes nothing since the result is capped anyway.
    let leaves_b: Vec<usize> = b.keyroots.iter().copied().filter(|&j| b.leftmost[j] == j).collect();
    if !leaves_b.is_empty() {
        let mut kids = vec![0usize; n1];
        for p in a.parent.iter().flatten() {
            kids[*p] += 1;
        }
        let two = C::splat(2.0);
        let mut pending: Vec<Vec<C>> = Vec::new();
        let mut spare: Vec<Vec<C>> = Vec::new();
        for x in 0..n1 {
            let mut best = spare.pop().unwrap_or_default();
            best.clear();
            let td_row = &mut tree_dist[x * n2..(x + 1) * n2];
            // Rows of leaf keyroots are already filled; their entry stands in
            // for the rename.
            if leaf_keyroot_a[x] {
                best.extend(leaves_b.iter().map(|&j| td_row[j]));
            } else {
                best.extend(leaves_b.iter().map(|&j| rename(&a.labels[x], &b.labels[j]).least(two)));
            }
            for _ in 0..kids[x] {
                let child = pending.pop().expect("children precede their parent in postorder");
                for (m, &c) in best.iter_mut().zip(&child) {
                    *m = m.least(c);
                }
                spare.push(child);
            }
            let extra = C::splat((x - a.leftmost[x]) as f64);
            for (&j, &m) in leaves_b.iter().zip(&best) {
                td_row[j] = extra.plus(m);
            }
            pending.push(best);
        }
    }
    let inner_a: Vec<usize> = a.keyroots.iter().copied().filter(|&i| !leaf_a(i)).collect();
    let inner_b: Vec<usize> = b.keyroots.iter().copied().filter(|&j| b.leftmost[j] != j).collect();
    // Leftmost leaf of every node under each inner keyroot of `b`, relative
    // to the keyroot's own leftmost leaf.
    let offsets: Vec<Vec<usize>> =
        inner_b.iter().map(|&j| (b.leftmost[j]..=j).map(|y| b.leftmost[y] - b.leftmost[j]).collect()).collect();
    for &i in &inner_a {
        let li = a.leftmost[i];
        for (&j, q_of) in inner_b.iter().zip(&offsets) {
            let lj = b.leftmost[j];
            let (w, h) = (j - lj + 1, i - li + 1);
            // Rows packed at the pair's own width keep small pairs in cache.
            let stride = w + 1;
            for (dy, f) in forest[..=w].iter_mut().enumerate() {
                *f = C::splat(dy as f64);
            }
            for dx in 1..=h {
                let x = li + dx - 1;
                let lx = a.leftmost[x];
                let (head, tail) = forest.split_at_mut(dx * stride);
                let prev = &head[(dx - 1) * stride..dx * stride];
                let row = &mut tail[..=w];
                let td_row = &mut tree_dist[x * n2 + lj..x * n2 + j + 1];
                let mut left = C::splat(dx as f64);
                row[0] = left;
                if lx == li {
                    let label = &a.labels[x];
                    let cells = row[1..].iter_mut().zip(prev.windows(2)).zip(td_row.iter_mut()).zip(q_of);
                    for (k, (((out, up), td), &q)) in cells.enumerate() {
                        let v = if q == 0 {
                            let v = up[0].plus(rename(label, &b.labels[lj + k])).least(up[1].plus(one)).least(left.plus(one));
                            *td = v;
                            v
                        } else {
                            // Row zero of the forest holds plain insertion counts.
                            C::splat(q as f64).plus(*td).least(up[1].plus(one)).least(left.plus(one))
                        };
                        *out = v;
                        left = v;
                    }
                } else {
                    let base = &head[(lx - li) * stride..(lx - li) * stride + w];
                    let cells = row[1..].iter_mut().zip(&prev[1..]).zip(td_row.iter()).zip(q_of);
                    for (((out, &up), &td), &q) in cells {
                        // Only the last step depends on the cell to the left.
                        let v = base[q].plus(td).least(up.plus(one)).least(left.plus(one));
                        *out = v;
                        left = v;
                    }
                }
            }
        }
    }
    tree_dist[(n1 - 1) * n2 + (n2 - 1)]
}
