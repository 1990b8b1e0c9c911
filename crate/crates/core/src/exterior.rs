//! Multivectors over `R^n`: wedge and cross products, the lowering and raising
//! boundary maps, the induced inner product, Gram volumes and the Hodge star
//! (positive signature).
//!
//! Coefficients are stored sparsely, keyed by [`OrderedSubset`]; iteration is
//! lexicographic. The scalar type is generic so the same code runs in `f64`
//! and, for integer inputs, exactly in [`BigRational`].

use std::collections::BTreeMap;
use std::fmt::{self, Debug};
use std::ops::Neg;

use num::{BigInt, BigRational, Num, ToPrimitive};

use crate::error::{domain, Result};
use crate::permcalc::{deletion_sign, insertion_sign, split_sign, OrderedSubset};

/// Coefficient field for multivectors.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync {
    /// Approximate absolute value, used for pivoting and tolerances.
    fn magnitude(&self) -> f64;
    fn from_i64(v: i64) -> Self;
}

impl Scalar for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for BigRational {
    fn magnitude(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Grade-`m` element of `Λ^m(R^n)`.
#[derive(Clone, PartialEq)]
pub struct Multivector<S: Scalar = f64> {
    n: usize,
    grade: usize,
    coeffs: BTreeMap<OrderedSubset, S>,
}

impl<S: Scalar> Multivector<S> {
    pub fn zero(n: usize, grade: usize) -> Result<Self> {
        if n == 0 || grade > n {
            return domain(format!("grade {grade} is not valid in dimension {n}"));
        }
        Ok(Self {
            n,
            grade,
            coeffs: BTreeMap::new(),
        })
    }

    /// Unit basis element `e^{(J)}`.
    pub fn basis(set: &OrderedSubset) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(set.clone(), S::one());
        Self {
            n: set.n(),
            grade: set.len(),
            coeffs,
        }
    }

    /// Grade-0 multivector with the given value.
    pub fn scalar(n: usize, value: S) -> Self {
        let mut mv = Self {
            n,
            grade: 0,
            coeffs: BTreeMap::new(),
        };
        mv.add_term(OrderedSubset::empty(n), value);
        mv
    }

    pub fn from_terms(
        n: usize,
        grade: usize,
        terms: impl IntoIterator<Item = (OrderedSubset, S)>,
    ) -> Result<Self> {
        let mut mv = Self::zero(n, grade)?;
        for (set, v) in terms {
            if set.n() != n || set.len() != grade {
                return domain(format!("key {set} does not belong to Λ^{grade}(R^{n})"));
            }
            mv.add_term(set, v);
        }
        Ok(mv)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coeff(&self, set: &OrderedSubset) -> S {
        self.coeffs.get(set).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OrderedSubset, &S)> {
        self.coeffs.iter()
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Accumulate `v` into the coefficient at `set`, dropping exact zeros.
    pub(crate) fn add_term(&mut self, set: OrderedSubset, v: S) {
        if v.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(set);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + v;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Drop coefficients with magnitude `<= tol`.
    pub fn pruned(mut self, tol: f64) -> Self {
        self.coeffs.retain(|_, v| v.magnitude() > tol);
        self
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.grade != other.grade {
            return domain(format!(
                "mismatched spaces Λ^{}(R^{}) and Λ^{}(R^{})",
                self.grade, self.n, other.grade, other.n
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(-S::one()))
    }

    pub fn scaled(&self, factor: S) -> Self {
        let mut out = Self {
            n: self.n,
            grade: self.grade,
            coeffs: BTreeMap::new(),
        };
        for (k, v) in &self.coeffs {
            out.add_term(k.clone(), v.clone() * factor.clone());
        }
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Multivector<T> {
        let mut out = Multivector {
            n: self.n,
            grade: self.grade,
            coeffs: BTreeMap::new(),
        };
        for (k, v) in &self.coeffs {
            out.add_term(k.clone(), f(v));
        }
        out
    }

    /// `δ`: `e^{(J)} ↦ Σ_{j∈J} sgn/(J)ĵ/ e^{(J∖j)}`.
    pub fn lower_boundary(&self) -> Result<Self> {
        if self.grade == 0 {
            return domain("lower boundary of a grade-0 multivector");
        }
        let mut out = Self::zero(self.n, self.grade - 1)?;
        for (set, v) in &self.coeffs {
            for &j in set.indices() {
                let sign = deletion_sign(set, j)?;
                out.add_term(set.without(j)?, sign.apply(v.clone()));
            }
        }
        Ok(out)
    }

    /// `d`: `e^{(J)} ↦ Σ_{j∉J} sgn/(J)ǰ/ e^{(J∪j)}`.
    pub fn raise_boundary(&self) -> Result<Self> {
        if self.grade == self.n {
            return domain("raising boundary of a top-grade multivector");
        }
        let mut out = Self::zero(self.n, self.grade + 1)?;
        for (set, v) in &self.coeffs {
            for &j in set.complement().indices() {
                let sign = insertion_sign(set, j)?;
                out.add_term(set.with(j)?, sign.apply(v.clone()));
            }
        }
        Ok(out)
    }

    /// Hodge dual, positive signature: coefficient at `J'` is `sgn/J,J'/ · x_J`.
    pub fn hodge_star(&self) -> Self {
        let mut out = Self {
            n: self.n,
            grade: self.n - self.grade,
            coeffs: BTreeMap::new(),
        };
        for (set, v) in &self.coeffs {
            out.add_term(set.complement(), split_sign(set).apply(v.clone()));
        }
        out
    }

    /// Wedge with a single vector appended on the right: `x ∧ b`.
    pub fn wedge_vector(&self, b: &[S]) -> Result<Self> {
        if b.len() != self.n {
            return domain("vector length does not match dimension");
        }
        if self.grade == self.n {
            return domain("wedge with a top-grade multivector");
        }
        let mut out = Self::zero(self.n, self.grade + 1)?;
        for (set, v) in &self.coeffs {
            for &i in set.complement().indices() {
                let sign = insertion_sign(set, i)?;
                out.add_term(set.with(i)?, sign.apply(v.clone() * b[i - 1].clone()));
            }
        }
        Ok(out)
    }

    /// Contraction with a vector through the deletion permutations:
    /// `Σ b_i x_J sgn/(J)î/ e^{J∖i}`.
    pub fn interior(&self, b: &[S]) -> Result<Self> {
        if b.len() != self.n {
            return domain("vector length does not match dimension");
        }
        if self.grade == 0 {
            return domain("interior product of a grade-0 multivector");
        }
        let mut out = Self::zero(self.n, self.grade - 1)?;
        for (set, v) in &self.coeffs {
            for &i in set.indices() {
                let sign = deletion_sign(set, i)?;
                out.add_term(set.without(i)?, sign.apply(v.clone() * b[i - 1].clone()));
            }
        }
        Ok(out)
    }

    /// Lines `J: coefficient`, J comma separated, in lexicographic order.
    pub fn to_text(&self) -> String
    where
        S: fmt::Display,
    {
        let mut out = String::new();
        for (set, v) in &self.coeffs {
            let idx: Vec<String> = set.indices().iter().map(|i| i.to_string()).collect();
            out.push_str(&format!("{}: {}\n", idx.join(","), v));
        }
        out
    }
}

impl<S: Scalar> Debug for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ^{}(R^{})", self.grade, self.n)?;
        f.debug_map()
            .entries(self.coeffs.iter().map(|(k, v)| (k.to_string(), v)))
            .finish()
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Orthonormal-basis inner product `Σ_J x_J y_J`.
pub fn inner<S: Scalar>(x: &Multivector<S>, y: &Multivector<S>) -> Result<S> {
    x.check_same_space(y)?;
    let mut acc = S::zero();
    for (k, v) in &x.coeffs {
        if let Some(w) = y.coeffs.get(k) {
            acc = acc + v.clone() * w.clone();
        }
    }
    Ok(acc)
}

/// Ordered system of `m` vectors in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSystem<S: Scalar = f64> {
    n: usize,
    vectors: Vec<Vec<S>>,
}

impl<S: Scalar> VectorSystem<S> {
    pub fn new(n: usize, vectors: Vec<Vec<S>>) -> Result<Self> {
        if n == 0 {
            return domain("dimension must be positive");
        }
        if vectors.is_empty() {
            return domain("a vector system needs at least one vector");
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return domain(format!("vector of length {} in dimension {n}", v.len()));
        }
        Ok(Self { n, vectors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<S>] {
        &self.vectors
    }

    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        out.vectors.swap(a, b);
        out
    }

    /// `m × m` minor with columns `cols`.
    pub fn minor(&self, cols: &OrderedSubset) -> S {
        let rows: Vec<Vec<S>> = self
            .vectors
            .iter()
            .map(|v| cols.indices().iter().map(|&c| v[c - 1].clone()).collect())
            .collect();
        determinant(rows)
    }

    /// Gram matrix determinant `det(x^i · x^j)`.
    pub fn gram_det(&self) -> S {
        let m = self.len();
        let g: Vec<Vec<S>> = (0..m)
            .map(|i| (0..m).map(|j| dot(&self.vectors[i], &self.vectors[j])).collect())
            .collect();
        determinant(g)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.vectors
            .iter()
            .flatten()
            .map(|v| v.magnitude())
            .fold(0.0, f64::max)
    }
}

impl VectorSystem<BigRational> {
    /// Exact system from integer rows.
    pub fn from_integers(n: usize, rows: &[Vec<i64>]) -> Result<Self> {
        VectorSystem::new(
            n,
            rows.iter()
                .map(|r| r.iter().map(|&v| BigRational::from_i64(v)).collect())
                .collect(),
        )
    }
}

impl VectorSystem<f64> {
    /// Rescale every vector by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            vectors: self
                .vectors
                .iter()
                .map(|v| v.iter().map(|x| x * factor).collect())
                .collect(),
        }
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Determinant by Gaussian elimination with largest-magnitude pivoting.
/// Exact for exact scalar types.
pub fn determinant<S: Scalar>(mut a: Vec<Vec<S>>) -> S {
    let m = a.len();
    if m == 0 {
        return S::one();
    }
    let mut det = S::one();
    for col in 0..m {
        let pivot = (col..m)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&r, &s| a[r][col].magnitude().total_cmp(&a[s][col].magnitude()));
        let Some(p) = pivot else {
            return S::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pv = a[col][col].clone();
        det = det * pv.clone();
        for r in col + 1..m {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() / pv.clone();
            for c in col..m {
                let delta = factor.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - delta;
            }
        }
    }
    det
}

/// `x¹ ∧ ⋯ ∧ x^m`: coefficient at each `(J)` is the minor over columns `J`.
pub fn wedge<S: Scalar>(vs: &VectorSystem<S>) -> Result<Multivector<S>> {
    let (n, m) = (vs.n(), vs.len());
    if m > n {
        return domain(format!("{m} vectors cannot span a grade in dimension {n}"));
    }
    let mut out = Multivector::zero(n, m)?;
    for set in OrderedSubset::all_of_size(n, m) {
        let v = vs.minor(&set);
        out.add_term(set, v);
    }
    Ok(out)
}

/// `x¹ × ⋯ × x^m`: coefficient at `(J')` is `sgn/J,J'/ · minor_J`.
pub fn cross<S: Scalar>(vs: &VectorSystem<S>) -> Result<Multivector<S>> {
    let (n, m) = (vs.n(), vs.len());
    if m > n {
        return domain(format!("{m} vectors cannot span a grade in dimension {n}"));
    }
    let mut out = Multivector::zero(n, n - m)?;
    for set in OrderedSubset::all_of_size(n, m) {
        let v = split_sign(&set).apply(vs.minor(&set));
        out.add_term(set.complement(), v);
    }
    Ok(out)
}

/// Unsigned `m`-volume `sqrt|det Gram|` of the spanned parallelepiped.
pub fn gram_volume(vs: &VectorSystem<f64>) -> f64 {
    vs.gram_det().abs().sqrt()
}

/// Relative zero threshold used by [`is_dependent`].
pub const DEPENDENCE_RTOL: f64 = 1e-12;

/// Linear dependence test through the wedge product, with coefficient
/// threshold `1e-12 · (max|entry|)^m`.
pub fn is_dependent(vs: &VectorSystem<f64>) -> bool {
    if vs.len() > vs.n() {
        return true;
    }
    let scale = vs.max_abs_entry();
    let tol = DEPENDENCE_RTOL * scale.powi(vs.len() as i32);
    match wedge(vs) {
        Ok(w) => w.max_abs() <= tol,
        Err(_) => true,
    }
}

/// Exact dependence test: the wedge is identically zero.
pub fn is_dependent_exact(vs: &VectorSystem<BigRational>) -> bool {
    vs.len() > vs.n() || wedge(vs).map(|w| w.is_zero()).unwrap_or(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcalc::OrderedSubset;

    fn set(n: usize, v: &[usize]) -> OrderedSubset {
        OrderedSubset::new(n, v.to_vec()).unwrap()
    }

    fn vs(n: usize, rows: &[&[f64]]) -> VectorSystem {
        VectorSystem::new(n, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let w = wedge(&vs(3, &[&[1., 0., 0.], &[0., 1., 0.]])).unwrap();
        assert_eq!(w.nnz(), 1);
        assert_eq!(w.coeff(&set(3, &[1, 2])), 1.0);

        let w = wedge(&vs(2, &[&[1., 0.], &[1., 1.]])).unwrap();
        assert_eq!(w.coeff(&set(2, &[1, 2])), 1.0);

        let w = wedge(&vs(3, &[&[1., 2., 3.], &[2., 4., 6.]])).unwrap();
        assert!(w.is_zero());

        assert!(wedge(&vs(1, &[&[1.], &[2.]])).is_err());
    }

    #[test]
    fn cross_examples() {
        let c = cross(&vs(3, &[&[1., 0., 0.], &[0., 1., 0.]])).unwrap();
        assert_eq!(c.grade(), 1);
        assert_eq!(c.coeff(&set(3, &[3])), 1.0);
        assert_eq!(c.nnz(), 1);

        let c = cross(&vs(2, &[&[1., 0.]])).unwrap();
        assert_eq!(c.coeff(&set(2, &[2])), 1.0);

        assert!(cross(&vs(3, &[&[1., 0., 0.], &[1., 0., 0.]])).unwrap().is_zero());
    }

    #[test]
    fn lower_boundary_examples() {
        let d = Multivector::<f64>::basis(&set(2, &[1, 2])).lower_boundary().unwrap();
        assert_eq!(d.coeff(&set(2, &[1])), 1.0);
        assert_eq!(d.coeff(&set(2, &[2])), -1.0);

        let d = Multivector::<f64>::basis(&set(3, &[1])).lower_boundary().unwrap();
        assert_eq!(d.grade(), 0);
        assert_eq!(d.coeff(&OrderedSubset::empty(3)), 1.0);

        let dd = Multivector::<f64>::basis(&set(3, &[1, 2, 3]))
            .lower_boundary()
            .unwrap()
            .lower_boundary()
            .unwrap();
        assert!(dd.is_zero());

        assert!(Multivector::<f64>::scalar(2, 1.0).lower_boundary().is_err());
    }

    #[test]
    fn raise_boundary_examples() {
        let d = Multivector::<f64>::basis(&set(3, &[1])).raise_boundary().unwrap();
        assert_eq!(d.coeff(&set(3, &[1, 2])), 1.0);
        assert_eq!(d.coeff(&set(3, &[1, 3])), 1.0);
        assert_eq!(d.nnz(), 2);
        assert!(d.raise_boundary().unwrap().is_zero());

        let d = Multivector::<f64>::scalar(2, 1.0).raise_boundary().unwrap();
        assert_eq!(d.coeff(&set(2, &[1])), 1.0);
        assert_eq!(d.coeff(&set(2, &[2])), 1.0);

        assert!(Multivector::<f64>::basis(&set(2, &[1, 2])).raise_boundary().is_err());
    }

    #[test]
    fn inner_examples() {
        let e12 = Multivector::<f64>::basis(&set(2, &[1, 2]));
        assert_eq!(inner(&e12, &e12).unwrap(), 1.0);
        let zero = Multivector::<f64>::zero(2, 2).unwrap();
        assert_eq!(inner(&e12, &zero).unwrap(), 0.0);
        let e1 = Multivector::<f64>::basis(&set(2, &[1]));
        assert!(inner(&e12, &e1).is_err());
    }

    #[test]
    fn gram_volume_examples() {
        assert!((gram_volume(&vs(3, &[&[1., 0., 0.], &[0., 1., 0.]])) - 1.0).abs() < 1e-15);
        assert!((gram_volume(&vs(2, &[&[1., 0.], &[1., 1.]])) - 1.0).abs() < 1e-15);
        assert!((gram_volume(&vs(3, &[&[2., 0., 0.]])) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn hodge_examples() {
        let s = Multivector::<f64>::basis(&set(3, &[1, 2])).hodge_star();
        assert_eq!(s.coeff(&set(3, &[3])), 1.0);
        let s = Multivector::<f64>::scalar(2, 1.0).hodge_star();
        assert_eq!(s.coeff(&set(2, &[1, 2])), 1.0);
        let ss = Multivector::<f64>::basis(&set(2, &[1])).hodge_star().hodge_star();
        assert_eq!(ss.coeff(&set(2, &[1])), -1.0);
    }

    #[test]
    fn dependence_examples() {
        assert!(!is_dependent(&vs(2, &[&[1., 0.], &[0., 1.]])));
        assert!(is_dependent(&vs(2, &[&[1., 2.], &[2., 4.]])));
        assert!(is_dependent(&vs(1, &[&[1.], &[1.]])));
        let exact = VectorSystem::from_integers(2, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(is_dependent_exact(&exact));
        // scale awareness: tiny but independent
        assert!(!is_dependent(&vs(2, &[&[1e-9, 0.], &[0., 1e-9]])));
    }

    #[test]
    fn interior_and_wedge_vector() {
        let e12 = Multivector::<f64>::basis(&set(2, &[1, 2]));
        let i1 = e12.interior(&[1.0, 0.0]).unwrap();
        assert_eq!(i1.coeff(&set(2, &[2])), -1.0);
        let i2 = e12.interior(&[0.0, 1.0]).unwrap();
        assert_eq!(i2.coeff(&set(2, &[1])), 1.0);
        let e2 = Multivector::<f64>::basis(&set(2, &[2]));
        assert_eq!(e2.wedge_vector(&[1.0, 0.0]).unwrap().coeff(&set(2, &[1, 2])), -1.0);
    }

    #[test]
    fn text_serialisation() {
        let mut mv = Multivector::<f64>::zero(3, 2).unwrap();
        mv.add_term(set(3, &[2, 3]), -0.5);
        mv.add_term(set(3, &[1, 3]), 2.0);
        assert_eq!(mv.to_text(), "1,3: 2\n2,3: -0.5\n");
        assert_eq!(Multivector::<f64>::scalar(2, 1.5).to_text(), ": 1.5\n");
    }
}
