//! Discrete Stokes identity on cubical regions.

use rayon::prelude::*;

use super::{contract, default_step, exterior_derivative, FormField};
use crate::cubical::{orient_table, Cell, CellTable, CubicalComplex, ElementaryCube, Orientation};
use crate::error::{domain, Error, Result};
use crate::exterior::Multivector;
use crate::permcalc::Sign;
use std::collections::BTreeMap;

/// How the interior side `Σ ⟨da, Δπ⟩` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StokesMode {
    /// Each cell contributes the signed sum of `a` over its own faces.
    #[default]
    Discrete,
    /// Each cell contributes `⟨da(x⁰), h^m e^axes⟩` with a central-difference `da`.
    AnalyticFd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesReport {
    pub interior: f64,
    pub boundary: f64,
    /// `interior − boundary`.
    pub difference: f64,
    pub cells: usize,
    pub boundary_faces: usize,
}

fn cube_of(cell: &Cell) -> &ElementaryCube {
    match cell {
        Cell::Cube(c) => c,
        Cell::Named(_) => unreachable!("embedded tables hold cubes"),
    }
}

/// `⟨a(x⁰), h^k e^axes⟩` for an axis-aligned cell of grade `k`.
fn pair(a: &dyn FormField, c: &ElementaryCube, h: f64) -> Result<f64> {
    let w = Multivector::basis(c.axes()).scaled(h.powi(c.grade() as i32));
    contract(a, &c.anchor(h), &w)
}

/// Compares `Σ_cells ⟨da, Δπ⟩` with `Σ_{∂ region} ⟨a, ·⟩` for an `(m−1)`-form
/// `a` on an embedded region of top grade `m`, scaled by the region's lattice
/// step. Cells are oriented consistently; the boundary carries `(−1)^m γ`,
/// which for a planar region is the counter-clockwise loop.
pub fn stokes_check(a: &dyn FormField, region: &CubicalComplex, mode: StokesMode) -> Result<StokesReport> {
    let Some(e) = region.as_embedded() else {
        return domain("Stokes check needs an embedded region");
    };
    if e.is_periodic() {
        return domain("Stokes check needs a non-periodic region");
    }
    if a.n() != e.n() {
        return domain(format!("form lives in R^{}, region in R^{}", a.n(), e.n()));
    }
    let table = region.cell_table()?;
    let Some(m) = table.top_grade() else {
        return domain("empty region");
    };
    if m == 0 || a.grade() + 1 != m {
        return domain(format!(
            "a {}-form needs a region of grade {}, found grade {m}",
            a.grade(),
            a.grade() + 1
        ));
    }
    let sigma = match orient_table(&table)? {
        Orientation::Orientable(v) => v.into_iter().map(|(_, s)| s).collect::<Vec<_>>(),
        Orientation::NonOrientable { .. } => {
            return Err(Error::Validation("region is not orientable".into()));
        }
    };
    let h = e.scale();
    let outer = Sign::parity(m);

    let interior_parts: Vec<f64> = (0..table.count(m))
        .into_par_iter()
        .map(|i| cell_term(a, &table, m, i, h, mode))
        .collect::<Result<_>>()?;
    let interior: f64 = interior_parts
        .iter()
        .zip(&sigma)
        .map(|(v, s)| s.apply(*v))
        .sum();

    let mut chain: BTreeMap<usize, i64> = BTreeMap::new();
    for (i, s) in sigma.iter().enumerate() {
        for &(f, fs) in table.faces_of(m, i) {
            *chain.entry(f).or_insert(0) += (*s * fs * outer).to_i64();
        }
    }
    chain.retain(|_, z| *z != 0);
    let faces = table.cells(m - 1);
    let boundary_parts: Vec<f64> = chain
        .par_iter()
        .map(|(&f, &z)| Ok(z as f64 * pair(a, cube_of(&faces[f]), h)?))
        .collect::<Result<_>>()?;
    let boundary: f64 = boundary_parts.iter().sum();

    Ok(StokesReport {
        interior,
        boundary,
        difference: interior - boundary,
        cells: sigma.len(),
        boundary_faces: chain.len(),
    })
}

fn cell_term(a: &dyn FormField, table: &CellTable, m: usize, i: usize, h: f64, mode: StokesMode) -> Result<f64> {
    match mode {
        StokesMode::Discrete => {
            let faces = table.cells(m - 1);
            let mut sum = 0.0;
            for &(f, s) in table.faces_of(m, i) {
                sum += s.apply(pair(a, cube_of(&faces[f]), h)?);
            }
            Ok(Sign::parity(m).apply(sum))
        }
        StokesMode::AnalyticFd => {
            let c = cube_of(&table.cells(m)[i]);
            let x = c.anchor(h);
            let da = exterior_derivative(a, &x, default_step(&x))?;
            let w = Multivector::basis(c.axes()).scaled(h.powi(m as i32));
            contract(&da, &x, &w)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::{cube_boundary, mobius_strip, torus, EmbeddedComplex};
    use crate::forms::{FnForm, Polynomial, PolynomialForm};
    use crate::permcalc::OrderedSubset;

    fn grid(k: i64, h: f64) -> CubicalComplex {
        let cubes = (0..k)
            .flat_map(|i| (0..k).map(move |j| ElementaryCube::from_parts(&[i, j], &[1, 2]).unwrap()))
            .collect();
        EmbeddedComplex::new(2, cubes).unwrap().with_scale(h).unwrap().into()
    }

    fn x1_dx2() -> PolynomialForm {
        PolynomialForm::new(2, 1)
            .unwrap()
            .with_component(&[2], Polynomial::from_pairs(2, &[(1.0, &[1, 0])]).unwrap())
            .unwrap()
    }

    #[test]
    fn discrete_mode_telescopes() {
        let r = stokes_check(&x1_dx2(), &grid(32, 1.0 / 32.0), StokesMode::Discrete).unwrap();
        assert!((r.boundary - 1.0).abs() < 1e-12);
        assert!(r.difference.abs() <= 1e-9);
        assert_eq!(r.cells, 1024);
        assert_eq!(r.boundary_faces, 128);
    }

    #[test]
    fn analytic_mode_converges_for_a_curved_integrand() {
        // x1 x2 dx1 + x1 dx2: ∬ (1 - x1) = 1/2, lower-corner error h/2
        let a = PolynomialForm::new(2, 1)
            .unwrap()
            .with_component(&[1], Polynomial::from_pairs(2, &[(1.0, &[1, 1])]).unwrap())
            .unwrap()
            .with_component(&[2], Polynomial::from_pairs(2, &[(1.0, &[1, 0])]).unwrap())
            .unwrap();
        let err = |k: i64| {
            let r = stokes_check(&a, &grid(k, 1.0 / k as f64), StokesMode::AnalyticFd).unwrap();
            (r.interior - 0.5).abs()
        };
        let (e1, e2) = (err(16), err(32));
        assert!((e1 - 1.0 / 32.0).abs() < 1e-8, "{e1}");
        assert!(e1 / e2 > 1.9);
    }

    #[test]
    fn closed_surface_has_no_boundary() {
        let c = Multivector::from_terms(3, 1, [(OrderedSubset::new(3, vec![2]).unwrap(), 3.0)]).unwrap();
        let cx = cube_boundary();
        let r = stokes_check(&c, &cx, StokesMode::Discrete).unwrap();
        assert_eq!(r.boundary, 0.0);
        assert_eq!(r.boundary_faces, 0);
        assert!(r.interior.abs() < 1e-12);
    }

    #[test]
    fn segment_is_fundamental_theorem() {
        let f = FnForm::new(1, 0, |x: &[f64], _: &OrderedSubset| x[0] * x[0]).unwrap();
        let cubes = (0..10).map(|i| ElementaryCube::from_parts(&[i], &[1]).unwrap()).collect();
        let cx: CubicalComplex = EmbeddedComplex::new(1, cubes).unwrap().with_scale(0.1).unwrap().into();
        let r = stokes_check(&f, &cx, StokesMode::Discrete).unwrap();
        assert!((r.boundary - 1.0).abs() < 1e-12);
        assert!(r.difference.abs() < 1e-12);
    }

    #[test]
    fn rejected_regions() {
        assert!(stokes_check(&x1_dx2(), &torus(), StokesMode::Discrete).is_err());
        let m = mobius_strip(3, 1);
        assert!(stokes_check(&x1_dx2(), &m, StokesMode::Discrete).is_err());
        let vol = Multivector::basis(&OrderedSubset::full(2));
        assert!(matches!(
            stokes_check(&vol, &grid(2, 0.5), StokesMode::Discrete),
            Err(Error::Domain(_))
        ));
    }
}
