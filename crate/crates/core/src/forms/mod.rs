//! Differential forms on R^n and their pairing with parallelepipeds.

mod poly;
mod stokes;
mod surface;

pub use poly::{parse_form, write_form, Monomial, Polynomial, PolynomialForm};
pub(crate) use poly::{content_lines, expect_key, parse_table, parse_usize};
pub use stokes::{stokes_check, StokesMode, StokesReport};
pub use surface::{
    integrate_surface, integrate_surface_with, linear_volume, vector_volume, Anchor, IntegralSurface,
    SmallParallelepiped,
};

use crate::error::{domain, Error, Result};
use crate::exterior::{inner, Multivector};
use crate::permcalc::{front_insertion_sign, OrderedSubset};

/// Relative finite-difference step used when none is given.
pub const DEFAULT_REL_STEP: f64 = 1e-5;

/// A field of m-forms `a(x) = Σ a_J(x) dx^J`.
pub trait FormField: Sync {
    fn n(&self) -> usize;
    fn grade(&self) -> usize;
    fn coeff(&self, x: &[f64], set: &OrderedSubset) -> f64;

    fn eval(&self, x: &[f64]) -> Multivector {
        let terms = OrderedSubset::all_of_size(self.n(), self.grade())
            .into_iter()
            .map(|s| {
                let v = self.coeff(x, &s);
                (s, v)
            });
        Multivector::from_terms(self.n(), self.grade(), terms).expect("subsets match the form")
    }
}

impl<F: FormField + ?Sized> FormField for &F {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn grade(&self) -> usize {
        (**self).grade()
    }
    fn coeff(&self, x: &[f64], set: &OrderedSubset) -> f64 {
        (**self).coeff(x, set)
    }
}

/// A multivector read as a constant form.
impl FormField for Multivector {
    fn n(&self) -> usize {
        Multivector::n(self)
    }
    fn grade(&self) -> usize {
        Multivector::grade(self)
    }
    fn coeff(&self, _x: &[f64], set: &OrderedSubset) -> f64 {
        Multivector::coeff(self, set)
    }
}

/// Form given by a coefficient closure `(x, J) -> a_J(x)`.
pub struct FnForm<F> {
    n: usize,
    grade: usize,
    f: F,
}

impl<F> FnForm<F>
where
    F: Fn(&[f64], &OrderedSubset) -> f64 + Sync,
{
    pub fn new(n: usize, grade: usize, f: F) -> Result<Self> {
        if grade > n {
            return domain(format!("grade {grade} exceeds dimension {n}"));
        }
        Ok(FnForm { n, grade, f })
    }
}

impl<F> FormField for FnForm<F>
where
    F: Fn(&[f64], &OrderedSubset) -> f64 + Sync,
{
    fn n(&self) -> usize {
        self.n
    }
    fn grade(&self) -> usize {
        self.grade
    }
    fn coeff(&self, x: &[f64], set: &OrderedSubset) -> f64 {
        (self.f)(x, set)
    }
}

fn check_point(a: &dyn FormField, x: &[f64]) -> Result<()> {
    if x.len() != a.n() {
        return domain(format!("point has {} coordinates, form lives in R^{}", x.len(), a.n()));
    }
    Ok(())
}

/// `Σ_J a_J(x) w_J`.
pub fn contract(a: &dyn FormField, x: &[f64], w: &Multivector) -> Result<f64> {
    check_point(a, x)?;
    if w.grade() != a.grade() || w.n() != a.n() {
        return domain(format!(
            "cannot pair a {}-form on R^{} with a grade-{} multivector in R^{}",
            a.grade(),
            a.n(),
            w.grade(),
            w.n()
        ));
    }
    Ok(w.terms().map(|(s, v)| a.coeff(x, s) * v).sum())
}

/// `da(x) = Σ_J da_J ∧ dx^J`, derivatives by central differences of step `h`.
pub fn exterior_derivative(a: &dyn FormField, x: &[f64], h: f64) -> Result<Multivector> {
    check_point(a, x)?;
    if !(h > 0.0 && h.is_finite()) {
        return domain(format!("step must be positive, got {h}"));
    }
    let (n, m) = (a.n(), a.grade());
    if m == n {
        return domain("exterior derivative of a top-grade form");
    }
    let mut out = Multivector::zero(n, m + 1)?;
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    for set in OrderedSubset::all_of_size(n, m) {
        for &i in set.complement().indices() {
            xp[i - 1] = x[i - 1] + h;
            xm[i - 1] = x[i - 1] - h;
            let di = (a.coeff(&xp, &set) - a.coeff(&xm, &set)) / (2.0 * h);
            xp[i - 1] = x[i - 1];
            xm[i - 1] = x[i - 1];
            out.add_term(set.with(i)?, front_insertion_sign(&set, i)?.apply(di));
        }
    }
    Ok(out)
}

/// Step `DEFAULT_REL_STEP · max(1, |x|∞)`.
pub fn default_step(x: &[f64]) -> f64 {
    DEFAULT_REL_STEP * x.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
}

/// `⟨a(x), b(x)⟩`: contraction of the form with a vector field.
pub fn interior_product<B>(a: &dyn FormField, b: B, x: &[f64]) -> Result<Multivector>
where
    B: Fn(&[f64]) -> Vec<f64>,
{
    check_point(a, x)?;
    if a.grade() == 0 {
        return domain("interior product of a 0-form");
    }
    a.eval(x).interior(&b(x))
}

/// `a(x) ∧ b(x)` for a 1-form `b`.
pub fn wedge_1form(a: &dyn FormField, b: &dyn FormField, x: &[f64]) -> Result<Multivector> {
    check_point(a, x)?;
    if b.grade() != 1 || b.n() != a.n() {
        return domain("right factor must be a 1-form of the same dimension");
    }
    let bx: Vec<f64> = (1..=a.n())
        .map(|i| b.coeff(x, &OrderedSubset::new_unchecked(a.n(), vec![i])))
        .collect();
    a.eval(x).wedge_vector(&bx)
}

/// `|⟨da(x), Δ⟩ − ⟨a(x+Δx) − a(x), δΔ⟩|` for the (m+1)-vector built from the
/// coordinate steps `dx`. The derivative uses central differences of step
/// `‖dx‖∞`.
pub fn prop5_residual(a: &dyn FormField, x: &[f64], dx: &[f64]) -> Result<f64> {
    let h = dx.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if h == 0.0 {
        return Err(Error::Degenerate("the step vector is zero".into()));
    }
    prop5_residual_with_step(a, x, dx, h)
}

pub fn prop5_residual_with_step(a: &dyn FormField, x: &[f64], dx: &[f64], h: f64) -> Result<f64> {
    check_point(a, x)?;
    let (n, m) = (a.n(), a.grade());
    if dx.len() != n {
        return domain(format!("step vector has {} coordinates, expected {n}", dx.len()));
    }
    if m == n {
        return domain("no (m+1)-vector exists for a top-grade form");
    }
    let delta = Multivector::from_terms(
        n,
        m + 1,
        OrderedSubset::all_of_size(n, m + 1).into_iter().map(|k| {
            let v = k.indices().iter().map(|&i| dx[i - 1]).product::<f64>();
            (k, v)
        }),
    )?;
    if delta.is_zero() {
        return Err(Error::Degenerate("the step vector spans no (m+1)-vector".into()));
    }
    let lhs = inner(&exterior_derivative(a, x, h)?, &delta)?;

    let mut shifted = x.to_vec();
    let mut rhs = 0.0;
    for k in delta.terms().map(|(k, _)| k) {
        for &i in k.indices() {
            let face = k.without(i)?;
            let weight: f64 = face.indices().iter().map(|&j| dx[j - 1]).product();
            shifted[i - 1] = x[i - 1] + dx[i - 1];
            let diff = a.coeff(&shifted, &face) - a.coeff(x, &face);
            shifted[i - 1] = x[i - 1];
            rhs += front_insertion_sign(&face, i)?.apply(diff * weight);
        }
    }
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(n: usize, idx: &[usize]) -> OrderedSubset {
        OrderedSubset::new(n, idx.to_vec()).unwrap()
    }

    fn x1_dx2() -> PolynomialForm {
        PolynomialForm::new(2, 1)
            .unwrap()
            .with_component(&[2], Polynomial::from_pairs(2, &[(1.0, &[1, 0])]).unwrap())
            .unwrap()
    }

    #[test]
    fn contract_examples() {
        let vol = Multivector::basis(&OrderedSubset::full(2));
        assert_eq!(contract(&vol, &[0.3, 0.4], &vol).unwrap(), 1.0);
        let e2 = Multivector::basis(&set(2, &[2]));
        assert_eq!(contract(&x1_dx2(), &[2.0, 0.0], &e2).unwrap(), 2.0);
        assert!(contract(&x1_dx2(), &[2.0, 0.0], &vol).is_err());
        assert!(contract(&x1_dx2(), &[2.0], &e2).is_err());
    }

    #[test]
    fn contract_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = FnForm::new(4, 2, |x: &[f64], j: &OrderedSubset| {
            x[j.indices()[0] - 1].sin() + x[j.indices()[1] - 1] * x[0]
        })
        .unwrap();
        for _ in 0..50 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let rand_mv = |rng: &mut ChaCha8Rng| {
                Multivector::from_terms(
                    4,
                    2,
                    OrderedSubset::all_of_size(4, 2).into_iter().map(|s| (s, rng.gen_range(-2.0..2.0))),
                )
                .unwrap()
            };
            let w1 = rand_mv(&mut rng);
            let w2 = rand_mv(&mut rng);
            let lhs = contract(&a, &x, &w1.add(&w2).unwrap()).unwrap();
            let rhs = contract(&a, &x, &w1).unwrap() + contract(&a, &x, &w2).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_of_x1_dx2() {
        for h in [1e-2, 1e-3] {
            let da = exterior_derivative(&x1_dx2(), &[0.3, 0.7], h).unwrap();
            assert!((da.coeff(&OrderedSubset::full(2)) - 1.0).abs() < 1e-10);
        }
        let c = Multivector::basis(&set(3, &[2]));
        assert!(exterior_derivative(&c, &[1.0, 2.0, 3.0], 1e-3).unwrap().is_zero());
        assert!(exterior_derivative(&c, &[1.0, 2.0, 3.0], 0.0).is_err());
        let vol = Multivector::basis(&OrderedSubset::full(2));
        assert!(exterior_derivative(&vol, &[0.0, 0.0], 1e-3).is_err());
    }

    #[test]
    fn derivative_signs_against_analytic_curl() {
        // a = x2 x3 dx1 + sin(x1) dx3 in R^3: da = x3 dx2∧dx1 + x2 dx3∧dx1 + cos(x1) dx1∧dx3
        let a = FnForm::new(3, 1, |x: &[f64], j: &OrderedSubset| match j.indices() {
            [1] => x[1] * x[2],
            [3] => x[0].sin(),
            _ => 0.0,
        })
        .unwrap();
        let x = [0.4, -0.8, 1.3];
        let da = exterior_derivative(&a, &x, 1e-5).unwrap();
        assert!((da.coeff(&set(3, &[1, 2])) + x[2]).abs() < 1e-9);
        assert!((da.coeff(&set(3, &[1, 3])) - (x[0].cos() - x[1])).abs() < 1e-9);
        assert!(da.coeff(&set(3, &[2, 3])).abs() < 1e-9);
    }

    #[test]
    fn dd_of_exact_form_is_small() {
        // a = dφ, φ = x1² − x2²; dda computed by nesting central differences
        let dphi = FnForm::new(2, 1, |x: &[f64], j: &OrderedSubset| match j.indices() {
            [1] => 2.0 * x[0],
            _ => -2.0 * x[1],
        })
        .unwrap();
        let h = 1e-3;
        let da = |x: &[f64]| exterior_derivative(&dphi, x, h).unwrap();
        let v = da(&[0.5, 0.25]).coeff(&OrderedSubset::full(2));
        assert!(v.abs() < 1e-9);
    }

    #[test]
    fn interior_product_examples() {
        let vol = Multivector::basis(&OrderedSubset::full(2));
        let r = interior_product(&vol, |_: &[f64]| vec![1.0, 0.0], &[0.0, 0.0]).unwrap();
        assert_eq!(r.coeff(&set(2, &[2])), -1.0);
        let r = interior_product(&vol, |_: &[f64]| vec![0.0, 1.0], &[0.0, 0.0]).unwrap();
        assert_eq!(r.coeff(&set(2, &[1])), 1.0);
        let r = interior_product(&vol, |_: &[f64]| vec![0.0, 0.0], &[0.0, 0.0]).unwrap();
        assert!(r.is_zero());
        let scalar = Multivector::scalar(2, 1.0);
        assert!(interior_product(&scalar, |_: &[f64]| vec![1.0, 0.0], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn repeated_interior_product_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(2..=6);
            let m = rng.gen_range(2..=n);
            let coeffs: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let a = FnForm::new(n, m, move |x: &[f64], j: &OrderedSubset| {
                let k = j.indices().iter().sum::<usize>();
                coeffs[k % 64] * (1.0 + x[0])
            })
            .unwrap();
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let once = interior_product(&a, |_: &[f64]| b.clone(), &x).unwrap();
            let twice = once.interior(&b).unwrap();
            assert!(twice.max_abs() < 1e-12);
        }
    }

    #[test]
    fn wedge_1form_examples() {
        let dx1 = Multivector::basis(&set(2, &[1]));
        let dx2 = Multivector::basis(&set(2, &[2]));
        let x = [0.0, 0.0];
        assert_eq!(wedge_1form(&dx1, &dx2, &x).unwrap().coeff(&OrderedSubset::full(2)), 1.0);
        assert_eq!(wedge_1form(&dx2, &dx1, &x).unwrap().coeff(&OrderedSubset::full(2)), -1.0);
        let vol = Multivector::basis(&OrderedSubset::full(2));
        assert!(wedge_1form(&dx1, &vol, &x).is_err());

        let a = FnForm::new(3, 1, |x: &[f64], j: &OrderedSubset| x[j.indices()[0] - 1].powi(2) + 1.0).unwrap();
        let aa = wedge_1form(&a, &a, &[0.3, -1.2, 2.0]).unwrap();
        assert!(aa.max_abs() < 1e-15);
    }

    #[test]
    fn prop5_affine_and_constant() {
        let affine = FnForm::new(3, 1, |x: &[f64], j: &OrderedSubset| {
            let i = j.indices()[0] as f64;
            1.0 + i * x[0] - 2.0 * x[1] + 0.5 * i * x[2]
        })
        .unwrap();
        let r = prop5_residual(&affine, &[0.2, 0.3, -0.4], &[1e-2, -2e-2, 3e-2]).unwrap();
        assert!(r <= 1e-12, "{r}");
        let c = Multivector::basis(&set(3, &[1, 3]));
        assert_eq!(prop5_residual(&c, &[1.0, 1.0, 1.0], &[0.1, 0.2, 0.3]).unwrap(), 0.0);
        assert!(matches!(
            prop5_residual(&affine, &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn prop5_quadratic_shrinks() {
        let q = FnForm::new(2, 1, |x: &[f64], j: &OrderedSubset| match j.indices() {
            [1] => x[1] * x[1],
            _ => x[0] * x[0] + x[0] * x[1],
        })
        .unwrap();
        let x = [0.3, 0.6];
        let r1 = prop5_residual(&q, &x, &[1e-3, 1e-3]).unwrap();
        let r2 = prop5_residual(&q, &x, &[5e-4, 5e-4]).unwrap();
        assert!(r1 > 0.0 && r1 / r2 >= 2.0, "{r1} {r2}");
    }
}
