//! Piecewise-parallelepiped surfaces.

use rayon::prelude::*;

use super::{contract, FormField};
use crate::cubical::{Cell, CellTable, CubicalComplex};
use crate::error::{domain, Error, Result};
use crate::exterior::{cross, gram_volume, is_dependent, wedge, Multivector, VectorSystem};
use crate::permcalc::Sign;

/// An anchor point `x⁰` and `m` small edge vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallParallelepiped {
    anchor: Vec<f64>,
    edges: VectorSystem,
}

impl SmallParallelepiped {
    pub fn new(anchor: Vec<f64>, edges: VectorSystem) -> Result<Self> {
        if anchor.len() != edges.n() {
            return domain("anchor and edges live in different dimensions");
        }
        if edges.len() > edges.n() || is_dependent(&edges) {
            return Err(Error::Degenerate("parallelepiped edges are dependent".into()));
        }
        Ok(SmallParallelepiped { anchor, edges })
    }

    pub fn from_rows(anchor: &[f64], edges: &[&[f64]]) -> Result<Self> {
        let rows = edges.iter().map(|e| e.to_vec()).collect();
        Self::new(anchor.to_vec(), VectorSystem::new(anchor.len(), rows)?)
    }

    pub fn anchor(&self) -> &[f64] {
        &self.anchor
    }

    pub fn edges(&self) -> &VectorSystem {
        &self.edges
    }

    pub fn grade(&self) -> usize {
        self.edges.len()
    }

    pub fn n(&self) -> usize {
        self.edges.n()
    }

    pub fn multivector(&self) -> Multivector {
        wedge(&self.edges).expect("independent edges")
    }

    pub fn midpoint(&self) -> Vec<f64> {
        let mut x = self.anchor.clone();
        for e in self.edges.vectors() {
            for (xi, ei) in x.iter_mut().zip(e) {
                *xi += 0.5 * ei;
            }
        }
        x
    }
}

/// Finite collection of parallelepipeds of one grade.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSurface {
    n: usize,
    grade: usize,
    pieces: Vec<SmallParallelepiped>,
}

impl IntegralSurface {
    pub fn new(n: usize, grade: usize, pieces: Vec<SmallParallelepiped>) -> Result<Self> {
        if grade > n {
            return domain(format!("grade {grade} exceeds dimension {n}"));
        }
        if let Some(p) = pieces.iter().find(|p| p.n() != n || p.grade() != grade) {
            return domain(format!(
                "piece of grade {} in R^{} does not belong to a grade-{grade} surface in R^{n}",
                p.grade(),
                p.n()
            ));
        }
        Ok(IntegralSurface { n, grade, pieces })
    }

    /// Cells of grade `grade` of an embedded complex, scaled by its lattice
    /// step, each with the orientation carried by `sign`.
    pub fn from_cells(
        cx: &CubicalComplex,
        grade: usize,
        sign: impl Fn(&Cell) -> Sign,
    ) -> Result<Self> {
        let Some(e) = cx.as_embedded() else {
            return domain("surfaces need an embedded complex");
        };
        let table = cx.cell_table()?;
        Self::from_table(&table, cx.n(), e.scale(), grade, |c| Some(sign(c)))
    }

    pub(crate) fn from_table(
        table: &CellTable,
        n: usize,
        h: f64,
        grade: usize,
        sign: impl Fn(&Cell) -> Option<Sign>,
    ) -> Result<Self> {
        let mut pieces = Vec::new();
        if grade <= table.max_grade() {
            for cell in table.cells(grade) {
                let (Cell::Cube(c), Some(s)) = (cell, sign(cell)) else { continue };
                pieces.push(oriented_piece(c.anchor(h), c.axes().indices(), h, s, n)?);
            }
        }
        Self::new(n, grade, pieces)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn pieces(&self) -> &[SmallParallelepiped] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn extend(&mut self, other: IntegralSurface) -> Result<()> {
        if other.n != self.n || other.grade != self.grade {
            return domain("surfaces of different grade or dimension");
        }
        self.pieces.extend(other.pieces);
        Ok(())
    }
}

/// Axis-aligned piece with edges `h e_a`; a negative sign swaps the first two
/// edges, or for a segment starts it at the far end.
fn oriented_piece(
    mut anchor: Vec<f64>,
    axes: &[usize],
    h: f64,
    sign: Sign,
    n: usize,
) -> Result<SmallParallelepiped> {
    let mut rows: Vec<Vec<f64>> = axes
        .iter()
        .map(|&a| {
            let mut v = vec![0.0; n];
            v[a - 1] = h;
            v
        })
        .collect();
    if sign == Sign::Minus {
        match rows.len() {
            0 => return domain("cannot reverse a point"),
            1 => {
                anchor[axes[0] - 1] += h;
                rows[0][axes[0] - 1] = -h;
            }
            _ => rows.swap(0, 1),
        }
    }
    SmallParallelepiped::new(anchor, VectorSystem::new(n, rows)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Anchor {
    /// The piece's base point `x⁰`.
    #[default]
    Corner,
    Midpoint,
}

/// `Σ_i ⟨a(x⁰_i), π̄_i⟩`.
pub fn integrate_surface(a: &dyn FormField, s: &IntegralSurface) -> Result<f64> {
    integrate_surface_with(a, s, Anchor::Corner)
}

pub fn integrate_surface_with(a: &dyn FormField, s: &IntegralSurface, at: Anchor) -> Result<f64> {
    if a.grade() != s.grade || a.n() != s.n {
        return domain(format!(
            "a {}-form on R^{} cannot be integrated over a grade-{} surface in R^{}",
            a.grade(),
            a.n(),
            s.grade,
            s.n
        ));
    }
    let parts: Vec<f64> = s
        .pieces
        .par_iter()
        .map(|p| {
            let x = match at {
                Anchor::Corner => p.anchor.clone(),
                Anchor::Midpoint => p.midpoint(),
            };
            contract(a, &x, &p.multivector())
        })
        .collect::<Result<_>>()?;
    Ok(parts.iter().sum())
}

/// `Σ_i cross(edges_i)`, a multivector of grade `n − m`.
pub fn vector_volume(s: &IntegralSurface) -> Result<Multivector> {
    let mut total = Multivector::zero(s.n, s.n - s.grade)?;
    for p in &s.pieces {
        total = total.add(&cross(&p.edges)?)?;
    }
    Ok(total)
}

/// `Σ_i sqrt(Gram det(edges_i))`.
pub fn linear_volume(s: &IntegralSurface) -> f64 {
    s.pieces.iter().map(|p| gram_volume(&p.edges)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::{cube_boundary, EmbeddedComplex, ElementaryCube};
    use crate::forms::{FnForm, Polynomial, PolynomialForm};
    use crate::permcalc::OrderedSubset;
    use std::f64::consts::PI;

    fn unit_square_mesh(k: i64) -> IntegralSurface {
        let h = 1.0 / k as f64;
        let mut pieces = Vec::new();
        for i in 0..k {
            for j in 0..k {
                pieces.push(
                    SmallParallelepiped::from_rows(&[i as f64 * h, j as f64 * h], &[&[h, 0.0], &[0.0, h]])
                        .unwrap(),
                );
            }
        }
        IntegralSurface::new(2, 2, pieces).unwrap()
    }

    /// Counter-clockwise boundary of the unit square, each edge starting
    /// where the traversal enters it.
    fn square_loop(k: i64) -> IntegralSurface {
        let h = 1.0 / k as f64;
        let mut pieces = Vec::new();
        for i in 0..k {
            let t = i as f64 * h;
            pieces.push(SmallParallelepiped::from_rows(&[t, 0.0], &[&[h, 0.0]]).unwrap());
            pieces.push(SmallParallelepiped::from_rows(&[1.0, t], &[&[0.0, h]]).unwrap());
            pieces.push(SmallParallelepiped::from_rows(&[1.0 - t, 1.0], &[&[-h, 0.0]]).unwrap());
            pieces.push(SmallParallelepiped::from_rows(&[0.0, 1.0 - t], &[&[0.0, -h]]).unwrap());
        }
        IntegralSurface::new(2, 1, pieces).unwrap()
    }

    fn x1_dx2() -> PolynomialForm {
        PolynomialForm::new(2, 1)
            .unwrap()
            .with_component(&[2], Polynomial::from_pairs(2, &[(1.0, &[1, 0])]).unwrap())
            .unwrap()
    }

    #[test]
    fn constant_area_form_integrates_to_area() {
        let vol = Multivector::basis(&OrderedSubset::full(2));
        let s = unit_square_mesh(32);
        assert!((integrate_surface(&vol, &s).unwrap() - 1.0).abs() < 1e-12);
        assert!((linear_volume(&s) - 1.0).abs() < 1e-12);
        assert!((linear_volume(&unit_square_mesh(7)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn line_integral_around_the_square() {
        let s = square_loop(64);
        let v = integrate_surface(&x1_dx2(), &s).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "{v}");
        // x1 x2 dx2 integrates to 1/2; corner anchors are off by h/2
        let f = FnForm::new(2, 1, |x: &[f64], j: &OrderedSubset| if j.indices() == [2] { x[0] * x[1] } else { 0.0 })
            .unwrap();
        let e64 = (integrate_surface(&f, &square_loop(64)).unwrap() - 0.5).abs();
        let e128 = (integrate_surface(&f, &square_loop(128)).unwrap() - 0.5).abs();
        assert!((e64 - 1.0 / 128.0).abs() < 1e-12 && e64 / e128 > 1.9, "{e64} {e128}");
        let mid = integrate_surface_with(&f, &square_loop(64), Anchor::Midpoint).unwrap();
        assert!((mid - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_surface_and_grade_mismatch() {
        let empty = IntegralSurface::new(2, 1, Vec::new()).unwrap();
        assert_eq!(integrate_surface(&x1_dx2(), &empty).unwrap(), 0.0);
        assert!(integrate_surface(&x1_dx2(), &unit_square_mesh(2)).is_err());
        assert!(vector_volume(&empty).unwrap().is_zero());
        assert_eq!(linear_volume(&empty), 0.0);
    }

    #[test]
    fn swapping_edges_negates() {
        let f = FnForm::new(3, 2, |x: &[f64], j: &OrderedSubset| x[0] + j.indices()[1] as f64 * x[2])
            .unwrap();
        let p = SmallParallelepiped::from_rows(&[0.1, 0.2, 0.3], &[&[0.1, 0.0, 0.02], &[0.0, 0.1, 0.03]])
            .unwrap();
        let q = SmallParallelepiped::new(p.anchor().to_vec(), p.edges().swapped(0, 1)).unwrap();
        let s1 = IntegralSurface::new(3, 2, vec![p]).unwrap();
        let s2 = IntegralSurface::new(3, 2, vec![q]).unwrap();
        assert_eq!(integrate_surface(&f, &s1).unwrap(), -integrate_surface(&f, &s2).unwrap());
    }

    #[test]
    fn degenerate_pieces_rejected() {
        assert!(matches!(
            SmallParallelepiped::from_rows(&[0.0, 0.0], &[&[1.0, 1.0], &[2.0, 2.0]]),
            Err(Error::Degenerate(_))
        ));
        assert!(SmallParallelepiped::from_rows(&[0.0], &[&[1.0, 0.0]]).is_err());
    }

    #[test]
    fn vector_volume_examples() {
        let p = SmallParallelepiped::from_rows(&[0.0, 0.0], &[&[1.0, 0.0]]).unwrap();
        let v = vector_volume(&IntegralSurface::new(2, 1, vec![p]).unwrap()).unwrap();
        assert_eq!(v.coeff(&OrderedSubset::new(2, vec![2]).unwrap()), 1.0);

        let patch = IntegralSurface::new(
            3,
            2,
            (0..6)
                .map(|i| {
                    SmallParallelepiped::from_rows(&[i as f64, 0.0, 0.0], &[&[0.5, 0.0, 0.0], &[0.0, 0.5, 0.0]])
                        .unwrap()
                })
                .collect(),
        )
        .unwrap();
        let v = vector_volume(&patch).unwrap();
        assert_eq!(v.coeff(&OrderedSubset::new(3, vec![3]).unwrap()), 1.5);
        assert_eq!(v.nnz(), 1);

        let cx = cube_boundary();
        let table = cx.cell_table().unwrap();
        let orientation = crate::cubical::orient(&cx).unwrap();
        let s = IntegralSurface::from_table(&table, 3, 1.0, 2, |c| orientation.sign_of(c)).unwrap();
        assert_eq!(s.len(), 6);
        assert!(vector_volume(&s).unwrap().is_zero());
        assert_eq!(linear_volume(&s), 6.0);
    }

    #[test]
    fn unit_circle_length() {
        let k = 256;
        let pts: Vec<[f64; 2]> = (0..k)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / k as f64;
                [t.cos(), t.sin()]
            })
            .collect();
        let pieces = (0..k)
            .map(|i| {
                let a = pts[i];
                let b = pts[(i + 1) % k];
                SmallParallelepiped::from_rows(&a, &[&[b[0] - a[0], b[1] - a[1]]]).unwrap()
            })
            .collect();
        let len = linear_volume(&IntegralSurface::new(2, 1, pieces).unwrap());
        assert!((len - 2.0 * PI).abs() < 1e-3, "{len}");
        let single = SmallParallelepiped::from_rows(&[0.0, 0.0], &[&[3.0, 4.0]]).unwrap();
        assert_eq!(linear_volume(&IntegralSurface::new(2, 1, vec![single]).unwrap()), 5.0);
    }

    #[test]
    fn surfaces_from_complex_cells() {
        let cx: CubicalComplex = EmbeddedComplex::new(
            2,
            vec![ElementaryCube::from_parts(&[0, 0], &[1, 2]).unwrap()],
        )
        .unwrap()
        .with_scale(0.5)
        .unwrap()
        .into();
        let s = IntegralSurface::from_cells(&cx, 1, |_| Sign::Minus).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.pieces().iter().all(|p| p.edges().vectors()[0].iter().sum::<f64>() == -0.5));
        let s = IntegralSurface::from_cells(&cx, 2, |_| Sign::Plus).unwrap();
        assert_eq!(linear_volume(&s), 0.25);
    }
}
