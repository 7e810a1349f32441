//! Finite binary relations as bit matrices, and the polar operators they
//! induce. Carriers are index sets `0..n` with `n <= 16`; subsets are `u32`
//! masks.

/// Hard cap on carrier sizes for subset enumeration.
pub const MAX_CARRIER: usize = 16;

/// Subset of a carrier as a bitmask.
pub type Mask = u32;

pub fn full_mask(n: usize) -> Mask {
    debug_assert!(n <= MAX_CARRIER);
    if n == 0 {
        0
    } else {
        (1u32 << n) - 1
    }
}

pub fn mask_contains(m: Mask, i: usize) -> bool {
    m & (1 << i) != 0
}

pub fn mask_iter(m: Mask) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| m & (1 << i) != 0)
}

/// A binary relation between two indexed carriers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rel {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Mask>,
}

impl Rel {
    pub fn empty(n_rows: usize, n_cols: usize) -> Rel {
        Rel {
            n_rows,
            n_cols,
            rows: vec![0; n_rows],
        }
    }

    pub fn full(n_rows: usize, n_cols: usize) -> Rel {
        Rel {
            n_rows,
            n_cols,
            rows: vec![full_mask(n_cols); n_rows],
        }
    }

    pub fn identity(n: usize) -> Rel {
        let mut r = Rel::empty(n, n);
        for i in 0..n {
            r.set(i, i, true);
        }
        r
    }

    pub fn from_rows(n_rows: usize, n_cols: usize, rows: Vec<Mask>) -> Rel {
        debug_assert_eq!(rows.len(), n_rows);
        debug_assert!(rows.iter().all(|&r| r & !full_mask(n_cols) == 0));
        Rel {
            n_rows,
            n_cols,
            rows,
        }
    }

    pub fn from_pairs(n_rows: usize, n_cols: usize, pairs: &[(usize, usize)]) -> Rel {
        let mut r = Rel::empty(n_rows, n_cols);
        for &(i, j) in pairs {
            r.set(i, j, true);
        }
        r
    }

    /// Interprets the bits of `code` row-major; used by exhaustive
    /// enumeration of all relations of a given shape.
    pub fn from_code(n_rows: usize, n_cols: usize, code: u64) -> Rel {
        let mut r = Rel::empty(n_rows, n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                if code & (1u64 << (i * n_cols + j)) != 0 {
                    r.set(i, j, true);
                }
            }
        }
        r
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] & (1 << j) != 0
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if v {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    pub fn row(&self, i: usize) -> Mask {
        self.rows[i]
    }

    pub fn col(&self, j: usize) -> Mask {
        let mut m = 0;
        for i in 0..self.n_rows {
            if self.get(i, j) {
                m |= 1 << i;
            }
        }
        m
    }

    pub fn converse(&self) -> Rel {
        let mut r = Rel::empty(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                if self.get(i, j) {
                    r.set(j, i, true);
                }
            }
        }
        r
    }

    pub fn complement(&self) -> Rel {
        let fm = full_mask(self.n_cols);
        Rel {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            rows: self.rows.iter().map(|r| !r & fm).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Rel) -> bool {
        debug_assert_eq!((self.n_rows, self.n_cols), (other.n_rows, other.n_cols));
        self.rows
            .iter()
            .zip(&other.rows)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                if self.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n_rows).all(|i| self.get(i, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self == &self.converse()
    }

    pub fn is_transitive(&self) -> bool {
        for i in 0..self.n_rows {
            for j in mask_iter(self.rows[i]) {
                // everything j reaches, i must reach
                if self.rows[j] & !self.rows[i] != 0 {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_equivalence(&self) -> bool {
        self.n_rows == self.n_cols
            && self.is_reflexive()
            && self.is_symmetric()
            && self.is_transitive()
    }
}

/// `T^(1)[U'] = { v | forall u in U'. u T v }`.
pub fn polar_right(t: &Rel, rows: Mask) -> Mask {
    let mut acc = full_mask(t.n_cols());
    for i in mask_iter(rows) {
        acc &= t.row(i);
    }
    acc
}

/// `T^(0)[V'] = { u | forall v in V'. u T v }`.
pub fn polar_left(t: &Rel, cols: Mask) -> Mask {
    let mut acc = 0;
    for i in 0..t.n_rows() {
        if t.row(i) & cols == cols {
            acc |= 1 << i;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polar_ops_on_p0() {
        // A = {a,b}, X = {x,y}, I = {(a,x),(a,y),(b,y)}
        let i = Rel::from_pairs(2, 2, &[(0, 0), (0, 1), (1, 1)]);
        assert_eq!(polar_right(&i, 0b11), 0b10); // {y}
        assert_eq!(polar_right(&i, 0), full_mask(2)); // vacuous
        assert_eq!(polar_left(&i, 0), full_mask(2));
        assert_eq!(polar_left(&i, 0b01), 0b01); // {x} -> {a}
    }

    #[test]
    fn converse_and_laws() {
        let r = Rel::from_pairs(2, 3, &[(0, 2), (1, 0)]);
        assert_eq!(r.converse().converse(), r);
        let e = Rel::from_pairs(2, 2, &[(0, 0), (1, 1), (0, 1), (1, 0)]);
        assert!(e.is_equivalence());
        let ne = Rel::from_pairs(2, 2, &[(0, 1)]);
        assert!(!ne.is_equivalence());
        assert!(ne.is_transitive());
        let nt = Rel::from_pairs(3, 3, &[(0, 1), (1, 2)]);
        assert!(!nt.is_transitive());
    }
}
