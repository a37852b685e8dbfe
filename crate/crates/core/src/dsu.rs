//! Union-find, plus a rollback variant used by the forest enumeration.

pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] == x {
            x
        } else {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
            root
        }
    }

    /// Returns true if the edge merged two components.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        self.components -= 1;
        true
    }

    pub fn connected(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

/// Union by size without path compression so merges can be undone in LIFO
/// order.
pub struct RollbackUnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    log: Vec<(usize, usize)>,
}

impl RollbackUnionFind {
    pub fn new(n: usize) -> Self {
        RollbackUnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            log: Vec::new(),
        }
    }

    pub fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Returns true if the edge merged two components; a no-op union is not
    /// recorded in the log.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        self.log.push((small, big));
        true
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Undoes the most recent recorded union.
    pub fn rollback(&mut self) {
        let (small, big) = self.log.pop().expect("rollback without union");
        self.parent[small] = small;
        self.size[big] -= self.size[small];
    }
}
