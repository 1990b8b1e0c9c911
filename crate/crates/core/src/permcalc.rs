//! Sign calculus for permutations and for the reorderings of ordered index
//! subsets that drive every boundary and product formula in the crate.
//!
//! All indices are 1-based.

use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

use crate::error::{domain, Error, Result};

/// Orientation sign, `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^k`.
    pub fn parity(k: usize) -> Sign {
        if k % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.to_i64() as f64
    }

    /// Multiply a value by this sign.
    pub fn apply<T: Neg<Output = T>>(self, x: T) -> T {
        match self {
            Sign::Plus => x,
            Sign::Minus => -x,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => f.write_str("+1"),
            Sign::Minus => f.write_str("-1"),
        }
    }
}

/// A bijection of `{1..m}` given by its image sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let m = image.len();
        if m == 0 {
            return domain("permutation must have at least one element");
        }
        let mut seen = vec![false; m];
        for &i in &image {
            if i == 0 || i > m || seen[i - 1] {
                return domain(format!("{image:?} is not a permutation of 1..{m}"));
            }
            seen[i - 1] = true;
        }
        Ok(Self { image })
    }

    pub fn identity(m: usize) -> Self {
        Self {
            image: (1..=m.max(1)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return domain("cannot compose permutations of different sizes");
        }
        Ok(Permutation {
            image: other.image.iter().map(|&i| self.image[i - 1]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.len()];
        for (pos, &v) in self.image.iter().enumerate() {
            image[v - 1] = pos + 1;
        }
        Permutation { image }
    }

    pub fn inversions(&self) -> usize {
        inversion_count(&self.image)
    }
}

/// Number of pairs `i < j` with `seq[i] > seq[j]`.
pub fn inversion_count<T: Ord>(seq: &[T]) -> usize {
    let mut count = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                count += 1;
            }
        }
    }
    count
}

/// Parity sign of a permutation, `(-1)^{inversions}`.
pub fn perm_sign(p: &Permutation) -> Sign {
    Sign::parity(p.inversions())
}

/// Strictly increasing selection `(i_1 < ... < i_m)` from `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedSubset {
    n: usize,
    indices: Vec<usize>,
}

impl OrderedSubset {
    pub fn new(n: usize, indices: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return domain("ground set size must be positive");
        }
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return domain(format!("{indices:?} is not strictly increasing"));
            }
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > n) {
            return domain(format!("index {bad} outside 1..{n}"));
        }
        Ok(Self { n, indices })
    }

    pub(crate) fn new_unchecked(n: usize, indices: Vec<usize>) -> Self {
        debug_assert!(Self::new(n, indices.clone()).is_ok());
        Self { n, indices }
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            indices: Vec::new(),
        }
    }

    /// `{1..n}` itself.
    pub fn full(n: usize) -> Self {
        Self {
            n,
            indices: (1..=n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// 1-based position of `i`, if present.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.indices.binary_search(&i).ok().map(|p| p + 1)
    }

    /// Ordered complement `I \ J`.
    pub fn complement(&self) -> OrderedSubset {
        OrderedSubset {
            n: self.n,
            indices: (1..=self.n).filter(|i| !self.contains(*i)).collect(),
        }
    }

    pub fn without(&self, i: usize) -> Result<OrderedSubset> {
        match self.indices.binary_search(&i) {
            Ok(p) => {
                let mut indices = self.indices.clone();
                indices.remove(p);
                Ok(OrderedSubset { n: self.n, indices })
            }
            Err(_) => domain(format!("{i} is not in {:?}", self.indices)),
        }
    }

    pub fn with(&self, k: usize) -> Result<OrderedSubset> {
        if k == 0 || k > self.n {
            return domain(format!("index {k} outside 1..{}", self.n));
        }
        match self.indices.binary_search(&k) {
            Ok(_) => domain(format!("{k} is already in {:?}", self.indices)),
            Err(p) => {
                let mut indices = self.indices.clone();
                indices.insert(p, k);
                Ok(OrderedSubset { n: self.n, indices })
            }
        }
    }

    /// All `m`-element ordered subsets of `{1..n}` in lexicographic order.
    pub fn all_of_size(n: usize, m: usize) -> Vec<OrderedSubset> {
        let mut out = Vec::new();
        if m > n {
            return out;
        }
        let mut cur: Vec<usize> = (1..=m).collect();
        loop {
            out.push(OrderedSubset {
                n,
                indices: cur.clone(),
            });
            // advance to the next combination
            let mut i = m;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < n - (m - 1 - i) {
                    cur[i] += 1;
                    for k in i + 1..m {
                        cur[k] = cur[k - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// All subsets of `{1..n}`, grouped by size.
    pub fn all(n: usize) -> Vec<OrderedSubset> {
        (0..=n).flat_map(|m| Self::all_of_size(n, m)).collect()
    }
}

impl fmt::Display for OrderedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Permutation of positions `1..m` that moves `j` to the end of `J` and keeps
/// the rest in order.
pub fn deletion_permutation(set: &OrderedSubset, j: usize) -> Result<Permutation> {
    let pos = set
        .position(j)
        .ok_or_else(|| Error::Domain(format!("{j} is not in {set}")))?;
    let m = set.len();
    let mut image: Vec<usize> = (1..=m).filter(|&p| p != pos).collect();
    image.push(pos);
    Permutation::new(image)
}

/// Sign of the deletion permutation of `j` from `J`: `(-1)^{m - pos(j)}`.
pub fn deletion_sign(set: &OrderedSubset, j: usize) -> Result<Sign> {
    let pos = set
        .position(j)
        .ok_or_else(|| Error::Domain(format!("{j} is not in {set}")))?;
    Ok(Sign::parity(set.len() - pos))
}

/// Permutation sorting the concatenation `(J, k)`, written on positions
/// `1..m+1`.
pub fn insertion_permutation(set: &OrderedSubset, k: usize) -> Result<Permutation> {
    let joined = set.with(k)?;
    let mut seq = set.indices().to_vec();
    seq.push(k);
    // image[p] = sorted position of seq[p]
    let image = seq
        .iter()
        .map(|v| joined.position(*v).expect("element of joined set"))
        .collect();
    Permutation::new(image)
}

/// Sign of sorting `(J, k)`: `(-1)^{#{i in J : i > k}}`.
pub fn insertion_sign(set: &OrderedSubset, k: usize) -> Result<Sign> {
    set.with(k)?;
    Ok(Sign::parity(
        set.indices().iter().filter(|&&i| i > k).count(),
    ))
}

/// Sign of sorting `(k, J)`, i.e. inserting `k` in front: `(-1)^{#{i in J : i < k}}`.
pub fn front_insertion_sign(set: &OrderedSubset, k: usize) -> Result<Sign> {
    set.with(k)?;
    Ok(Sign::parity(
        set.indices().iter().filter(|&&i| i < k).count(),
    ))
}

/// Composite sign of deleting `j` and then `k` (each moved to the end).
pub fn double_deletion_sign(set: &OrderedSubset, j: usize, k: usize) -> Result<Sign> {
    if j == k {
        return domain("double deletion needs distinct indices");
    }
    let first = deletion_sign(set, j)?;
    let second = deletion_sign(&set.without(j)?, k)?;
    Ok(first * second)
}

/// Composite sign of inserting `j` and then `k` (each appended then sorted).
pub fn double_insertion_sign(set: &OrderedSubset, j: usize, k: usize) -> Result<Sign> {
    if j == k {
        return domain("double insertion needs distinct indices");
    }
    let first = insertion_sign(set, j)?;
    let second = insertion_sign(&set.with(j)?, k)?;
    Ok(first * second)
}

/// Permutation of `{1..n}` whose image is `J` followed by its ordered complement.
pub fn split_permutation(set: &OrderedSubset) -> Permutation {
    let mut image = set.indices().to_vec();
    image.extend(set.complement().indices());
    Permutation {
        image: if image.is_empty() { vec![1] } else { image },
    }
}

/// `sgn /J,J'/`, the sign used by the cross product and the Hodge star.
pub fn split_sign(set: &OrderedSubset) -> Sign {
    // inversions of (J, J'): pairs (a in J, b in J') with a > b
    let comp = set.complement();
    let mut count = 0;
    for &a in set.indices() {
        count += comp.indices().iter().filter(|&&b| b < a).count();
    }
    Sign::parity(count)
}
