//! Finite-difference diagnostics for potential flows and level sets.

mod format;

pub use format::{parse_grid, write_grid, ComponentSpec, GridBody, GridFile};

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::exterior::{inner, Multivector};
use crate::forms::IntegralSurface;
use crate::permcalc::OrderedSubset;

/// Default threshold on `|∇φ|` below which a node is excluded.
pub const DEFAULT_GRADIENT_EPS: f64 = 1e-8;

/// Regular lattice `origin + h·p`, `0 ≤ p_i < extents_i`, stored row-major
/// (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    origin: Vec<f64>,
    spacing: f64,
    extents: Vec<usize>,
    strides: Vec<usize>,
}

impl Grid {
    pub fn new(origin: Vec<f64>, spacing: f64, extents: Vec<usize>) -> Result<Self> {
        if origin.is_empty() || origin.len() != extents.len() {
            return domain("origin and extents must have the same positive length");
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return domain(format!("spacing must be positive, got {spacing}"));
        }
        if let Some(e) = extents.iter().find(|&&e| e < 3) {
            return domain(format!("every axis needs at least 3 samples, found {e}"));
        }
        let mut strides = vec![1; extents.len()];
        for i in (0..extents.len() - 1).rev() {
            strides[i] = strides[i + 1] * extents[i + 1];
        }
        Ok(Grid {
            origin,
            spacing,
            extents,
            strides,
        })
    }

    /// Grid with `k` samples per axis centred on `center`.
    pub fn centered(center: &[f64], spacing: f64, k: usize) -> Result<Self> {
        let half = (k as f64 - 1.0) / 2.0 * spacing;
        Self::new(
            center.iter().map(|c| c - half).collect(),
            spacing,
            vec![k; center.len()],
        )
    }

    pub fn n(&self) -> usize {
        self.extents.len()
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn len(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, p: &[usize]) -> usize {
        p.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    pub fn node(&self, mut idx: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|s| {
                let q = idx / s;
                idx %= s;
                q
            })
            .collect()
    }

    pub fn point(&self, p: &[usize]) -> Vec<f64> {
        p.iter()
            .zip(&self.origin)
            .map(|(&a, o)| o + a as f64 * self.spacing)
            .collect()
    }

    pub fn is_interior(&self, p: &[usize]) -> bool {
        p.iter().zip(&self.extents).all(|(&a, &e)| a >= 1 && a + 1 < e)
    }

    pub fn with_spacing(&self, spacing: f64) -> Result<Self> {
        Self::new(self.origin.clone(), spacing, self.extents.clone())
    }

    fn interior_nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_interior(&self.node(i))).collect()
    }

    /// Derivative of `values` along axis `axis` (0-based) at node `idx`:
    /// central inside, second-order one-sided at the ends.
    fn derivative(&self, values: &[f64], idx: usize, axis: usize) -> f64 {
        let p = self.node(idx)[axis];
        let s = self.strides[axis];
        let e = self.extents[axis];
        let h2 = 2.0 * self.spacing;
        if p == 0 {
            (-3.0 * values[idx] + 4.0 * values[idx + s] - values[idx + 2 * s]) / h2
        } else if p + 1 == e {
            (3.0 * values[idx] - 4.0 * values[idx - s] + values[idx - 2 * s]) / h2
        } else {
            (values[idx + s] - values[idx - s]) / h2
        }
    }
}

/// Samples of `φ` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGridField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarGridField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return domain(format!("grid has {} nodes, got {} values", grid.len(), values.len()));
        }
        Ok(ScalarGridField { grid, values })
    }

    pub fn sample(grid: Grid, f: impl Fn(&[f64]) -> f64 + Sync) -> Self {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| f(&grid.point(&grid.node(i))))
            .collect();
        ScalarGridField { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, p: &[usize]) -> f64 {
        self.values[self.grid.index(p)]
    }
}

/// Samples of the coefficients `a_j` of a 1-form.
#[derive(Debug, Clone, PartialEq)]
pub struct CovectorGridField {
    grid: Grid,
    components: Vec<Vec<f64>>,
}

impl CovectorGridField {
    pub fn new(grid: Grid, components: Vec<Vec<f64>>) -> Result<Self> {
        if components.len() != grid.n() || components.iter().any(|c| c.len() != grid.len()) {
            return domain("covector field needs one full sample array per axis");
        }
        Ok(CovectorGridField { grid, components })
    }

    pub fn sample(grid: Grid, f: impl Fn(&[f64]) -> Vec<f64> + Sync) -> Self {
        let n = grid.n();
        let nodes: Vec<Vec<f64>> = (0..grid.len())
            .into_par_iter()
            .map(|i| f(&grid.point(&grid.node(i))))
            .collect();
        let components = (0..n).map(|j| nodes.iter().map(|v| v[j]).collect()).collect();
        CovectorGridField { grid, components }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Samples of `a_j`, `j` 1-based.
    pub fn component(&self, j: usize) -> &[f64] {
        &self.components[j - 1]
    }

    pub fn at(&self, p: &[usize]) -> Vec<f64> {
        let i = self.grid.index(p);
        self.components.iter().map(|c| c[i]).collect()
    }

    fn d(&self, idx: usize, j: usize, axis: usize) -> f64 {
        self.grid.derivative(&self.components[j], idx, axis)
    }

    /// Multilinear interpolation at an arbitrary point inside the grid.
    pub fn interpolate(&self, x: &[f64]) -> Result<Vec<f64>> {
        let g = &self.grid;
        if x.len() != g.n() {
            return domain("point dimension does not match the grid");
        }
        let mut base = Vec::with_capacity(g.n());
        let mut frac = Vec::with_capacity(g.n());
        for i in 0..g.n() {
            let t = (x[i] - g.origin[i]) / g.spacing;
            let last = (g.extents[i] - 1) as f64;
            if !(-1e-9..=last + 1e-9).contains(&t) {
                return domain(format!("point {x:?} lies outside the grid"));
            }
            let b = (t.floor().max(0.0) as usize).min(g.extents[i] - 2);
            base.push(b);
            frac.push(t - b as f64);
        }
        let mut out = vec![0.0; g.n()];
        for corner in 0..1usize << g.n() {
            let mut w = 1.0;
            let mut p = base.clone();
            for i in 0..g.n() {
                if corner >> i & 1 == 1 {
                    p[i] += 1;
                    w *= frac[i];
                } else {
                    w *= 1.0 - frac[i];
                }
            }
            if w == 0.0 {
                continue;
            }
            let idx = g.index(&p);
            for (o, c) in out.iter_mut().zip(&self.components) {
                *o += w * c[idx];
            }
        }
        Ok(out)
    }
}

/// Max-norm of a nodal quantity with the node where it is attained.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub max: f64,
    /// First node (row-major order) attaining the maximum; `None` when no
    /// node was scanned.
    pub argmax: Option<Vec<usize>>,
    pub point: Option<Vec<f64>>,
}

impl Residual {
    fn from_values(grid: &Grid, vals: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in vals {
            if best.map_or(true, |(_, b)| v > b) {
                best = Some((i, v));
            }
        }
        match best {
            Some((i, v)) => {
                let p = grid.node(i);
                Residual {
                    max: v,
                    point: Some(grid.point(&p)),
                    argmax: Some(p),
                }
            }
            None => Residual {
                max: 0.0,
                argmax: None,
                point: None,
            },
        }
    }
}

/// Scalar values on a subset of the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialField {
    grid: Grid,
    values: Vec<Option<f64>>,
}

impl PartialField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn at(&self, p: &[usize]) -> Option<f64> {
        self.values[self.grid.index(p)]
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn defined(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn max_abs(&self) -> Residual {
        Residual::from_values(
            &self.grid,
            self.values.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v.abs()))),
        )
    }
}

fn scan(grid: &Grid, f: impl Fn(usize) -> f64 + Sync) -> Residual {
    let nodes = grid.interior_nodes();
    let vals: Vec<f64> = nodes.par_iter().map(|&i| f(i)).collect();
    Residual::from_values(grid, nodes.into_iter().zip(vals))
}

pub fn gradient_field(phi: &ScalarGridField) -> CovectorGridField {
    let g = &phi.grid;
    let components = (0..g.n())
        .map(|axis| {
            (0..g.len())
                .into_par_iter()
                .map(|i| g.derivative(&phi.values, i, axis))
                .collect()
        })
        .collect();
    CovectorGridField {
        grid: g.clone(),
        components,
    }
}

/// `max |∂_i a_j − ∂_j a_i|` over interior nodes and `i < j`.
pub fn closedness_residual(a: &CovectorGridField) -> Residual {
    let n = a.grid.n();
    scan(&a.grid, |idx| {
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                m = m.max((a.d(idx, j, i) - a.d(idx, i, j)).abs());
            }
        }
        m
    })
}

/// `max |Σ_j ∂_j a_j|` over interior nodes.
pub fn divergence_residual(a: &CovectorGridField) -> Residual {
    let n = a.grid.n();
    scan(&a.grid, |idx| (0..n).map(|j| a.d(idx, j, j)).sum::<f64>().abs())
}

/// `max |(a ∧ da)_{ijk}|` over interior nodes and 3-subsets; zero for `n < 3`.
pub fn holonomy_residual(a: &CovectorGridField) -> Residual {
    let n = a.grid.n();
    if n < 3 {
        return Residual::from_values(&a.grid, []);
    }
    let triples = OrderedSubset::all_of_size(n, 3);
    scan(&a.grid, |idx| {
        let da = |j: usize, k: usize| a.d(idx, k, j) - a.d(idx, j, k);
        let av = |i: usize| a.components[i][idx];
        triples
            .iter()
            .map(|t| {
                let [i, j, k] = [t.indices()[0] - 1, t.indices()[1] - 1, t.indices()[2] - 1];
                (av(i) * da(j, k) - av(j) * da(i, k) + av(k) * da(i, j)).abs()
            })
            .fold(0.0, f64::max)
    })
}

/// `(2n+1)`-point Laplacian on interior nodes.
pub fn laplacian_residual(phi: &ScalarGridField) -> PartialField {
    let g = &phi.grid;
    let h2 = g.spacing * g.spacing;
    let values = (0..g.len())
        .into_par_iter()
        .map(|idx| {
            if !g.is_interior(&g.node(idx)) {
                return None;
            }
            let c = phi.values[idx];
            Some(
                g.strides
                    .iter()
                    .map(|&s| (phi.values[idx + s] - 2.0 * c + phi.values[idx - s]) / h2)
                    .sum(),
            )
        })
        .collect();
    PartialField {
        grid: g.clone(),
        values,
    }
}

/// Normalised gradient; nodes with `|∇φ| < eps` are excluded and hold zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitField {
    pub field: CovectorGridField,
    /// Excluded node indices in row-major order.
    pub excluded: Vec<usize>,
}

impl UnitField {
    pub fn is_excluded(&self, idx: usize) -> bool {
        self.excluded.binary_search(&idx).is_ok()
    }
}

pub fn unit_field(phi: &ScalarGridField, eps: f64) -> UnitField {
    let mut field = gradient_field(phi);
    let g = &phi.grid;
    let mut excluded = Vec::new();
    for idx in 0..g.len() {
        let norm = field.components.iter().map(|c| c[idx] * c[idx]).sum::<f64>().sqrt();
        for c in field.components.iter_mut() {
            c[idx] = if norm < eps { 0.0 } else { c[idx] / norm };
        }
        if norm < eps {
            excluded.push(idx);
        }
    }
    UnitField { field, excluded }
}

/// `H = −(1/n) div(∇φ/|∇φ|)` on interior nodes whose stencil avoids
/// excluded nodes.
pub fn mean_curvature(phi: &ScalarGridField, eps: f64) -> PartialField {
    let u = unit_field(phi, eps);
    let g = &phi.grid;
    let n = g.n();
    let values = (0..g.len())
        .into_par_iter()
        .map(|idx| {
            if !g.is_interior(&g.node(idx)) || u.is_excluded(idx) {
                return None;
            }
            if g.strides.iter().any(|&s| u.is_excluded(idx + s) || u.is_excluded(idx - s)) {
                return None;
            }
            let div: f64 = (0..n).map(|j| u.field.d(idx, j, j)).sum();
            Some(-div / n as f64)
        })
        .collect();
    PartialField {
        grid: g.clone(),
        values,
    }
}

/// `Σ_i ⟨⋆n(x⁰_i), π̄_i⟩` with the unit normal interpolated from the nodal
/// gradient at each anchor.
pub fn level_set_area(phi: &ScalarGridField, s: &IntegralSurface, eps: f64) -> Result<f64> {
    let n = phi.grid.n();
    if s.n() != n || s.grade() + 1 != n {
        return domain(format!(
            "level sets in R^{n} are meshed by grade-{} pieces, got grade {} in R^{}",
            n.saturating_sub(1),
            s.grade(),
            s.n()
        ));
    }
    let grad = gradient_field(phi);
    let parts: Vec<f64> = s
        .pieces()
        .par_iter()
        .map(|p| {
            let v = grad.interpolate(p.anchor())?;
            let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm < eps {
                return Err(Error::Degenerate(format!(
                    "gradient vanishes at anchor {:?}",
                    p.anchor()
                )));
            }
            let normal = Multivector::from_terms(
                n,
                1,
                (1..=n).map(|i| (OrderedSubset::new_unchecked(n, vec![i]), v[i - 1] / norm)),
            )?;
            inner(&normal.hodge_star(), &p.multivector())
        })
        .collect::<Result<_>>()?;
    Ok(parts.iter().sum())
}
