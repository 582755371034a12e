//! Binary decision trees grown greedily with axis-aligned threshold splits:
//! Gini impurity for class targets, squared error for numeric targets.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    pub min_samples_split: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: 12,
            min_samples_leaf: 2,
            min_samples_split: 2,
        }
    }
}

/// Training target of a tree.
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    Classes { labels: &'a [usize], n_classes: usize },
    Values(&'a [f64]),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Leaf {
    /// Majority class (lowest index on ties) and class frequencies.
    Class { class: usize, distribution: Vec<f64> },
    Value(f64),
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf(Leaf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    n_features: usize,
}

struct Builder<'a> {
    x: &'a [Vec<f64>],
    target: Target<'a>,
    params: TreeParams,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn leaf(&self, idx: &[usize]) -> Leaf {
        match self.target {
            Target::Classes { labels, n_classes } => {
                let mut counts = vec![0usize; n_classes];
                for &i in idx {
                    counts[labels[i]] += 1;
                }
                let mut class = 0;
                for (c, &k) in counts.iter().enumerate() {
                    if k > counts[class] {
                        class = c;
                    }
                }
                let n = idx.len().max(1) as f64;
                Leaf::Class {
                    class,
                    distribution: counts.iter().map(|&k| k as f64 / n).collect(),
                }
            }
            Target::Values(y) => {
                let sum: f64 = idx.iter().map(|&i| y[i]).sum();
                Leaf::Value(sum / idx.len().max(1) as f64)
            }
        }
    }

    fn is_pure(&self, idx: &[usize]) -> bool {
        match self.target {
            Target::Classes { labels, .. } => idx.iter().all(|&i| labels[i] == labels[idx[0]]),
            Target::Values(y) => idx.iter().all(|&i| y[i] == y[idx[0]]),
        }
    }

    /// Weighted impurity `n * impurity` of the node and its best split, if any.
    fn best_split(&self, idx: &[usize]) -> Option<(usize, f64)> {
        let n = idx.len();
        let min_leaf = self.params.min_samples_leaf.max(1);
        let n_features = self.x.first().map_or(0, Vec::len);
        let mut order: Vec<usize> = idx.to_vec();
        let parent_cost = self.cost_of(idx);
        let mut best: Option<(usize, f64, f64)> = None;

        for f in 0..n_features {
            order.sort_by(|&a, &b| self.x[a][f].total_cmp(&self.x[b][f]).then(a.cmp(&b)));
            let mut sweep = Sweep::new(self.target, &order);
            for k in 1..n {
                sweep.move_left(order[k - 1]);
                let (lo, hi) = (self.x[order[k - 1]][f], self.x[order[k]][f]);
                if lo == hi || k < min_leaf || n - k < min_leaf {
                    continue;
                }
                let cost = sweep.cost();
                if best.is_none_or(|(_, _, c)| cost < c) {
                    let mid = 0.5 * (lo + hi);
                    let threshold = if mid < hi { mid } else { lo };
                    best = Some((f, threshold, cost));
                }
            }
        }
        best.filter(|&(_, _, c)| c < parent_cost - 1e-12 * parent_cost.abs().max(1.0))
            .map(|(f, t, _)| (f, t))
    }

    fn cost_of(&self, idx: &[usize]) -> f64 {
        let mut sweep = Sweep::new(self.target, idx);
        for &i in idx {
            sweep.move_left(i);
        }
        sweep.left_cost()
    }

    fn grow(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf(self.leaf(&idx)));
        if depth >= self.params.max_depth
            || idx.len() < self.params.min_samples_split.max(2)
            || self.is_pure(&idx)
        {
            return id;
        }
        let Some((feature, threshold)) = self.best_split(&idx) else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) =
            idx.iter().partition(|&&i| self.x[i][feature] <= threshold);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[id] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        id
    }
}

/// Running statistics of a left/right partition during a sorted sweep.
enum Sweep<'a> {
    Gini {
        left: Vec<f64>,
        right: Vec<f64>,
        labels: &'a [usize],
        n_left: f64,
        n_right: f64,
    },
    Sse {
        y: &'a [f64],
        left: (f64, f64, f64),
        right: (f64, f64, f64),
    },
}

impl<'a> Sweep<'a> {
    fn new(target: Target<'a>, idx: &[usize]) -> Self {
        match target {
            Target::Classes { labels, n_classes } => {
                let mut right = vec![0.0; n_classes];
                for &i in idx {
                    right[labels[i]] += 1.0;
                }
                Sweep::Gini {
                    left: vec![0.0; n_classes],
                    right,
                    labels,
                    n_left: 0.0,
                    n_right: idx.len() as f64,
                }
            }
            Target::Values(y) => {
                let mut right = (0.0, 0.0, 0.0);
                for &i in idx {
                    right.0 += 1.0;
                    right.1 += y[i];
                    right.2 += y[i] * y[i];
                }
                Sweep::Sse {
                    y,
                    left: (0.0, 0.0, 0.0),
                    right,
                }
            }
        }
    }

    fn move_left(&mut self, i: usize) {
        match self {
            Sweep::Gini {
                left,
                right,
                labels,
                n_left,
                n_right,
            } => {
                let c = labels[i];
                left[c] += 1.0;
                right[c] -= 1.0;
                *n_left += 1.0;
                *n_right -= 1.0;
            }
            Sweep::Sse { y, left, right } => {
                let v = y[i];
                left.0 += 1.0;
                left.1 += v;
                left.2 += v * v;
                right.0 -= 1.0;
                right.1 -= v;
                right.2 -= v * v;
            }
        }
    }

    fn gini_cost(counts: &[f64], n: f64) -> f64 {
        if n <= 0.0 {
            return 0.0;
        }
        n - counts.iter().map(|c| c * c).sum::<f64>() / n
    }

    fn sse_cost(s: (f64, f64, f64)) -> f64 {
        if s.0 <= 0.0 {
            return 0.0;
        }
        (s.2 - s.1 * s.1 / s.0).max(0.0)
    }

    fn left_cost(&self) -> f64 {
        match self {
            Sweep::Gini { left, n_left, .. } => Self::gini_cost(left, *n_left),
            Sweep::Sse { left, .. } => Self::sse_cost(*left),
        }
    }

    fn cost(&self) -> f64 {
        match self {
            Sweep::Gini {
                left,
                right,
                n_left,
                n_right,
                ..
            } => Self::gini_cost(left, *n_left) + Self::gini_cost(right, *n_right),
            Sweep::Sse { left, right, .. } => Self::sse_cost(*left) + Self::sse_cost(*right),
        }
    }
}

impl DecisionTree {
    /// Grows a tree on the rows of `x` (row-major, equal lengths).
    ///
    /// Panics if `x` and the target differ in length, or `x` is empty.
    pub fn fit(x: &[Vec<f64>], target: Target<'_>, params: TreeParams) -> Self {
        let n = match target {
            Target::Classes { labels, .. } => labels.len(),
            Target::Values(y) => y.len(),
        };
        assert_eq!(n, x.len(), "target length must match row count");
        assert!(n > 0, "cannot grow a tree on no rows");
        let mut builder = Builder {
            x,
            target,
            params,
            nodes: Vec::new(),
        };
        builder.grow((0..n).collect(), 0);
        Self {
            nodes: builder.nodes,
            n_features: x[0].len(),
        }
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn leaf(&self, x: &[f64]) -> &Leaf {
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => id = if x[*feature] <= *threshold { *left } else { *right },
                Node::Leaf(leaf) => return leaf,
            }
        }
    }

    /// Predicted value for numeric targets, or the class index for class targets.
    pub fn predict_value(&self, x: &[f64]) -> f64 {
        match self.leaf(x) {
            Leaf::Class { class, .. } => *class as f64,
            Leaf::Value(v) => *v,
        }
    }

    pub fn predict_class(&self, x: &[f64]) -> usize {
        match self.leaf(x) {
            Leaf::Class { class, .. } => *class,
            Leaf::Value(v) => v.round().max(0.0) as usize,
        }
    }

    /// Depth of the deepest leaf (a single leaf has depth 0).
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], id: usize) -> usize {
            match &nodes[id] {
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
                Node::Leaf(_) => 0,
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf(_))).count()
    }
}
