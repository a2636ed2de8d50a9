/// Union-find with path halving. Representatives returned by [`find`] are
/// stable only after all unions; callers that need canonical class
/// representatives pick the least member index per class.
#[derive(Clone, Debug)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub fn new(len: usize) -> Self {
        DisjointSets {
            parent: (0..len).collect(),
        }
    }

    pub fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub fn union(&mut self, i: usize, j: usize) -> bool {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri == rj {
            return false;
        }
        // Keep the least index as root so representatives are canonical.
        let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
        self.parent[hi] = lo;
        true
    }

    /// Map each element to a class number; classes are numbered by first
    /// appearance in element order, which makes them canonical.
    pub fn class_numbers(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut class_of = vec![usize::MAX; n];
        let mut next = 0;
        for i in 0..n {
            let r = self.find(i);
            if class_of[r] == usize::MAX {
                class_of[r] = next;
                next += 1;
            }
            class_of[i] = class_of[r];
        }
        (class_of, next)
    }
}
