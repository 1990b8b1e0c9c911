//! Oriented cubical cell complexes and their integer chain complexes.
//!
//! Two input modes share one compiled representation ([`CellTable`]):
//! embedded complexes of elementary cubes on `Z^n` (optionally periodic per
//! axis) and abstract complexes given by explicit signed incidences.

mod catalog;
mod format;
mod homology;
mod orient;
mod snf;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{domain, Error, Result};
use crate::permcalc::{deletion_sign, OrderedSubset, Sign};

pub use catalog::{
    cube_boundary, mobius_strip, projective_plane, single_segment, solid_square, torus,
};
pub use format::{parse_complex, write_complex};
pub use homology::{homology, HomologyGroup, HomologyResult};
pub use orient::{orient, validate_complex, Diagnostics, Orientation};
pub(crate) use orient::orient_table;
pub use snf::{smith_normal_form, IntMatrix};

/// Axis-aligned lattice cell: `base + Σ_{a∈axes} t_a e_a`, `0 ≤ t_a ≤ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementaryCube {
    axes: OrderedSubset,
    base: Vec<i64>,
}

impl ElementaryCube {
    pub fn new(base: Vec<i64>, axes: OrderedSubset) -> Result<Self> {
        if base.len() != axes.n() {
            return domain(format!(
                "base has {} coordinates but axes live in dimension {}",
                base.len(),
                axes.n()
            ));
        }
        Ok(Self { axes, base })
    }

    /// Convenience constructor from raw axis indices.
    pub fn from_parts(base: &[i64], axes: &[usize]) -> Result<Self> {
        Self::new(base.to_vec(), OrderedSubset::new(base.len(), axes.to_vec())?)
    }

    pub fn n(&self) -> usize {
        self.base.len()
    }

    pub fn grade(&self) -> usize {
        self.axes.len()
    }

    pub fn base(&self) -> &[i64] {
        &self.base
    }

    pub fn axes(&self) -> &OrderedSubset {
        &self.axes
    }

    /// Reduce base coordinates modulo the per-axis periods (0 = not periodic).
    pub fn reduced(&self, moduli: &[u64]) -> ElementaryCube {
        let base = self
            .base
            .iter()
            .zip(moduli.iter().chain(std::iter::repeat(&0)))
            .map(|(&b, &p)| if p > 0 { b.rem_euclid(p as i64) } else { b })
            .collect();
        ElementaryCube {
            axes: self.axes.clone(),
            base,
        }
    }

    /// The `2m` signed facets: for each spanned axis `a`, the lower face with
    /// sign `sgn/(axes)â/` and the upper face (base shifted along `a`) with the
    /// opposite sign. Listed by removed axis from last to first, lower first.
    pub fn faces(&self) -> Result<Vec<(Sign, ElementaryCube)>> {
        if self.grade() == 0 {
            return domain("a vertex has no faces");
        }
        let mut out = Vec::with_capacity(2 * self.grade());
        for &a in self.axes.indices().iter().rev() {
            let sign = deletion_sign(&self.axes, a)?;
            let axes = self.axes.without(a)?;
            let lower = ElementaryCube {
                axes: axes.clone(),
                base: self.base.clone(),
            };
            let mut upper_base = self.base.clone();
            upper_base[a - 1] += 1;
            let upper = ElementaryCube {
                axes,
                base: upper_base,
            };
            out.push((sign, lower));
            out.push((-sign, upper));
        }
        Ok(out)
    }

    /// All cells of the closure (the cube and every face of every face).
    pub fn closure(&self) -> Vec<ElementaryCube> {
        let mut out = Vec::new();
        let axes = self.axes.indices();
        for sub in 0u64..(1 << axes.len()) {
            // choose which spanned axes stay spanned; the rest are fixed at 0 or 1
            let kept: Vec<usize> = axes
                .iter()
                .enumerate()
                .filter(|(i, _)| sub >> i & 1 == 1)
                .map(|(_, &a)| a)
                .collect();
            let fixed: Vec<usize> = axes
                .iter()
                .enumerate()
                .filter(|(i, _)| sub >> i & 1 == 0)
                .map(|(_, &a)| a)
                .collect();
            for offs in 0u64..(1 << fixed.len()) {
                let mut base = self.base.clone();
                for (i, &a) in fixed.iter().enumerate() {
                    base[a - 1] += (offs >> i & 1) as i64;
                }
                out.push(ElementaryCube {
                    axes: OrderedSubset::new_unchecked(self.n(), kept.clone()),
                    base,
                });
            }
        }
        out
    }

    /// Whitespace-free name, e.g. `0,1:1,2` (base, then spanned axes).
    pub fn token(&self) -> String {
        let base: Vec<String> = self.base.iter().map(|b| b.to_string()).collect();
        let axes: Vec<String> = self.axes.indices().iter().map(|a| a.to_string()).collect();
        format!("{}:{}", base.join(","), axes.join(","))
    }

    /// Lower corner scaled by the lattice step `h`.
    pub fn anchor(&self, h: f64) -> Vec<f64> {
        self.base.iter().map(|&b| b as f64 * h).collect()
    }
}

impl fmt::Display for ElementaryCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base: Vec<String> = self.base.iter().map(|b| b.to_string()).collect();
        let axes: Vec<String> = self.axes.indices().iter().map(|a| a.to_string()).collect();
        write!(f, "[{} : {}]", base.join(" "), axes.join(" "))
    }
}

/// Embedded complex: the closure of a list of elementary cubes.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedComplex {
    n: usize,
    moduli: Option<Vec<u64>>,
    scale: Option<f64>,
    cubes: Vec<ElementaryCube>,
}

impl EmbeddedComplex {
    pub fn new(n: usize, cubes: Vec<ElementaryCube>) -> Result<Self> {
        if n == 0 {
            return domain("dimension must be positive");
        }
        if let Some(c) = cubes.iter().find(|c| c.n() != n) {
            return domain(format!("cube {c} does not live in dimension {n}"));
        }
        Ok(Self {
            n,
            moduli: None,
            scale: None,
            cubes,
        })
    }

    pub fn with_moduli(mut self, moduli: Vec<u64>) -> Result<Self> {
        if moduli.len() != self.n {
            return domain(format!("{} periods given for dimension {}", moduli.len(), self.n));
        }
        self.moduli = Some(moduli);
        Ok(self)
    }

    pub fn with_scale(mut self, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return domain("scale must be a positive finite number");
        }
        self.scale = Some(h);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cubes(&self) -> &[ElementaryCube] {
        &self.cubes
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.moduli.clone().unwrap_or_else(|| vec![0; self.n])
    }

    pub fn declared_moduli(&self) -> Option<&[u64]> {
        self.moduli.as_deref()
    }

    pub fn is_periodic(&self) -> bool {
        self.moduli().iter().any(|&p| p > 0)
    }

    /// Physical edge length of a unit lattice step (default 1).
    pub fn scale(&self) -> f64 {
        self.scale.unwrap_or(1.0)
    }

    pub fn declared_scale(&self) -> Option<f64> {
        self.scale
    }

    /// Split every cube in two along `axis` (lattice coordinates along that
    /// axis are doubled; periods too). The scale is left alone, so this is a
    /// combinatorial move; see [`EmbeddedComplex::refine`] for the geometric one.
    pub fn subdivide(&self, axis: usize) -> Result<EmbeddedComplex> {
        if axis == 0 || axis > self.n {
            return domain(format!("axis {axis} outside 1..{}", self.n));
        }
        let mut cubes = Vec::new();
        for c in &self.cubes {
            let mut base = c.base.clone();
            base[axis - 1] *= 2;
            let first = ElementaryCube {
                axes: c.axes.clone(),
                base: base.clone(),
            };
            cubes.push(first);
            if c.axes.contains(axis) {
                base[axis - 1] += 1;
                cubes.push(ElementaryCube {
                    axes: c.axes.clone(),
                    base,
                });
            }
        }
        let moduli = self.moduli.as_ref().map(|m| {
            let mut m = m.clone();
            m[axis - 1] *= 2;
            m
        });
        Ok(EmbeddedComplex {
            n: self.n,
            moduli,
            scale: self.scale,
            cubes,
        })
    }

    /// Subdivide along every axis and halve the scale: same region, lattice
    /// step `h/2`.
    pub fn refine(&self) -> Result<EmbeddedComplex> {
        let mut out = self.clone();
        for axis in 1..=self.n {
            out = out.subdivide(axis)?;
        }
        out.scale = Some(self.scale() / 2.0);
        Ok(out)
    }
}

/// One cell of an abstract complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractCell {
    pub grade: usize,
    pub id: String,
}

/// `face` occurs in the boundary of `cell` with `sign`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incidence {
    pub cell: String,
    pub sign: Sign,
    pub face: String,
}

/// Complex given by explicit cells and signed incidences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractComplex {
    n: usize,
    cells: Vec<AbstractCell>,
    incidences: Vec<Incidence>,
}

impl AbstractComplex {
    pub fn new(n: usize, cells: Vec<AbstractCell>, incidences: Vec<Incidence>) -> Self {
        Self {
            n,
            cells,
            incidences,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[AbstractCell] {
        &self.cells
    }

    pub fn incidences(&self) -> &[Incidence] {
        &self.incidences
    }
}

/// A cubical cell complex in either input mode.
#[derive(Debug, Clone, PartialEq)]
pub enum CubicalComplex {
    Embedded(EmbeddedComplex),
    Abstract(AbstractComplex),
}

impl From<EmbeddedComplex> for CubicalComplex {
    fn from(c: EmbeddedComplex) -> Self {
        CubicalComplex::Embedded(c)
    }
}

impl From<AbstractComplex> for CubicalComplex {
    fn from(c: AbstractComplex) -> Self {
        CubicalComplex::Abstract(c)
    }
}

/// Cell identity in a compiled complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Cube(ElementaryCube),
    Named(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Cube(c) => c.fmt(f),
            Cell::Named(s) => f.write_str(s),
        }
    }
}

/// Cells per grade in canonical order, with the raw (unsummed) signed face
/// lists of every cell.
#[derive(Debug, Clone)]
pub struct CellTable {
    cells: Vec<Vec<Cell>>,
    faces: Vec<Vec<Vec<(usize, Sign)>>>,
    index: HashMap<Cell, (usize, usize)>,
}

impl CellTable {
    /// Highest grade holding a cell, `None` for the empty complex.
    pub fn top_grade(&self) -> Option<usize> {
        (0..self.cells.len()).rev().find(|&k| !self.cells[k].is_empty())
    }

    pub fn cells(&self, grade: usize) -> &[Cell] {
        self.cells.get(grade).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, grade: usize) -> usize {
        self.cells(grade).len()
    }

    pub fn max_grade(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    /// Raw signed faces of cell `i` of grade `k` (indices into grade `k-1`).
    pub fn faces_of(&self, grade: usize, i: usize) -> &[(usize, Sign)] {
        &self.faces[grade][i]
    }

    pub fn lookup(&self, cell: &Cell) -> Option<(usize, usize)> {
        self.index.get(cell).copied()
    }

    /// Summed incidence coefficients of cell `i` of grade `k`.
    pub fn boundary_of(&self, grade: usize, i: usize) -> BTreeMap<usize, i64> {
        let mut out = BTreeMap::new();
        for &(f, s) in self.faces_of(grade, i) {
            *out.entry(f).or_insert(0) += s.to_i64();
        }
        out.retain(|_, v| *v != 0);
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..self.cells.len())
            .map(|k| if k % 2 == 0 { 1 } else { -1 } * self.count(k) as i64)
            .sum()
    }
}

impl CubicalComplex {
    pub fn n(&self) -> usize {
        match self {
            CubicalComplex::Embedded(c) => c.n,
            CubicalComplex::Abstract(c) => c.n,
        }
    }

    pub fn is_abstract(&self) -> bool {
        matches!(self, CubicalComplex::Abstract(_))
    }

    pub fn as_embedded(&self) -> Option<&EmbeddedComplex> {
        match self {
            CubicalComplex::Embedded(c) => Some(c),
            CubicalComplex::Abstract(_) => None,
        }
    }

    /// Compile to canonical cell lists and incidences. Fails on references to
    /// unknown cells or grade mismatches in abstract mode.
    pub fn cell_table(&self) -> Result<CellTable> {
        match self {
            CubicalComplex::Embedded(c) => Ok(compile_embedded(c)),
            CubicalComplex::Abstract(c) => compile_abstract(c),
        }
    }

    /// Split every cube along `axis`; abstract complexes cannot be subdivided.
    pub fn subdivide(&self, axis: usize) -> Result<CubicalComplex> {
        match self {
            CubicalComplex::Embedded(c) => Ok(c.subdivide(axis)?.into()),
            CubicalComplex::Abstract(_) => {
                domain("abstract complexes carry no geometry to subdivide")
            }
        }
    }
}

fn compile_embedded(cx: &EmbeddedComplex) -> CellTable {
    let moduli = cx.moduli();
    let mut all: BTreeSet<ElementaryCube> = BTreeSet::new();
    for c in &cx.cubes {
        for f in c.closure() {
            all.insert(f.reduced(&moduli));
        }
    }
    let top = all.iter().map(|c| c.grade()).max().unwrap_or(0);
    let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); top + 1];
    for c in all {
        cells[c.grade()].push(Cell::Cube(c));
    }
    let index = build_index(&cells);
    let faces = cells
        .iter()
        .map(|grade_cells| {
            grade_cells
                .iter()
                .map(|cell| match cell {
                    Cell::Cube(c) if c.grade() > 0 => c
                        .faces()
                        .expect("positive grade")
                        .into_iter()
                        .map(|(s, f)| {
                            let key = Cell::Cube(f.reduced(&moduli));
                            (index[&key].1, s)
                        })
                        .collect(),
                    _ => Vec::new(),
                })
                .collect()
        })
        .collect();
    CellTable {
        cells,
        faces,
        index,
    }
}

fn compile_abstract(cx: &AbstractComplex) -> Result<CellTable> {
    let top = cx.cells.iter().map(|c| c.grade).max().unwrap_or(0);
    let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); top + 1];
    let mut seen = BTreeSet::new();
    for c in &cx.cells {
        if !seen.insert(c.id.clone()) {
            return Err(Error::Validation(format!("duplicate cell id {}", c.id)));
        }
        cells[c.grade].push(Cell::Named(c.id.clone()));
    }
    let index = build_index(&cells);
    let mut faces: Vec<Vec<Vec<(usize, Sign)>>> =
        cells.iter().map(|g| vec![Vec::new(); g.len()]).collect();
    for inc in &cx.incidences {
        let &(g, i) = index
            .get(&Cell::Named(inc.cell.clone()))
            .ok_or_else(|| Error::Validation(format!("unknown cell {}", inc.cell)))?;
        let &(fg, fi) = index
            .get(&Cell::Named(inc.face.clone()))
            .ok_or_else(|| Error::Validation(format!("unknown face {}", inc.face)))?;
        if fg + 1 != g {
            return Err(Error::Validation(format!(
                "face {} of grade {fg} cannot bound {} of grade {g}",
                inc.face, inc.cell
            )));
        }
        faces[g][i].push((fi, inc.sign));
    }
    Ok(CellTable {
        cells,
        faces,
        index,
    })
}

fn build_index(cells: &[Vec<Cell>]) -> HashMap<Cell, (usize, usize)> {
    cells
        .iter()
        .enumerate()
        .flat_map(|(g, v)| v.iter().enumerate().map(move |(i, c)| (c.clone(), (g, i))))
        .collect()
}

/// Formal ℤ-combination of cells of one grade.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntegerChain {
    grade: usize,
    terms: BTreeMap<Cell, i64>,
}

impl IntegerChain {
    pub fn new(grade: usize) -> Self {
        Self {
            grade,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(grade: usize, terms: impl IntoIterator<Item = (Cell, i64)>) -> Self {
        let mut ch = Self::new(grade);
        for (c, z) in terms {
            ch.add(c, z);
        }
        ch
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn add(&mut self, cell: Cell, z: i64) {
        if z == 0 {
            return;
        }
        let e = self.terms.entry(cell.clone()).or_insert(0);
        *e += z;
        if *e == 0 {
            self.terms.remove(&cell);
        }
    }

    pub fn coeff(&self, cell: &Cell) -> i64 {
        self.terms.get(cell).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Cell, &i64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Linear extension of the face map to chains, with identified cells merged.
pub fn boundary_chain(ch: &IntegerChain, cx: &CubicalComplex) -> Result<IntegerChain> {
    let table = cx.cell_table()?;
    boundary_chain_in(ch, &table, cx)
}

pub(crate) fn boundary_chain_in(
    ch: &IntegerChain,
    table: &CellTable,
    cx: &CubicalComplex,
) -> Result<IntegerChain> {
    let mut out = IntegerChain::new(ch.grade.saturating_sub(1));
    if ch.is_zero() {
        return Ok(out);
    }
    if ch.grade == 0 {
        return Ok(out);
    }
    for (cell, &z) in &ch.terms {
        let key = normalise_cell(cell, cx);
        let (g, i) = table
            .lookup(&key)
            .ok_or_else(|| Error::Domain(format!("cell {cell} is not in the complex")))?;
        if g != ch.grade {
            return domain(format!("cell {cell} has grade {g}, chain has grade {}", ch.grade));
        }
        for &(f, s) in table.faces_of(g, i) {
            out.add(table.cells(g - 1)[f].clone(), s.to_i64() * z);
        }
    }
    Ok(out)
}

fn normalise_cell(cell: &Cell, cx: &CubicalComplex) -> Cell {
    match (cell, cx) {
        (Cell::Cube(c), CubicalComplex::Embedded(e)) => Cell::Cube(c.reduced(&e.moduli())),
        _ => cell.clone(),
    }
}

/// Incidence matrix of `∂_k`: rows are `(k-1)`-cells, columns `k`-cells.
pub fn boundary_matrix(cx: &CubicalComplex, k: usize) -> Result<IntMatrix> {
    let table = cx.cell_table()?;
    boundary_matrix_in(&table, k)
}

pub(crate) fn boundary_matrix_in(table: &CellTable, k: usize) -> Result<IntMatrix> {
    let top = table.top_grade().unwrap_or(0);
    if k == 0 || k > top {
        return domain(format!("boundary grade {k} outside 1..{top}"));
    }
    let mut m = IntMatrix::zeros(table.count(k - 1), table.count(k));
    for j in 0..table.count(k) {
        for (i, v) in table.boundary_of(k, j) {
            m.set(i, j, v);
        }
    }
    Ok(m)
}

/// Quotient of an embedded complex under a cell identification. `identify`
/// maps a cell to its representative with a relative orientation, or `None`
/// if the cell represents itself. The result is in abstract mode.
pub fn quotient(
    cx: &EmbeddedComplex,
    identify: impl Fn(&ElementaryCube) -> Option<(Sign, ElementaryCube)>,
) -> Result<AbstractComplex> {
    let table = compile_embedded(cx);
    let rep = |c: &ElementaryCube| identify(c).unwrap_or((Sign::Plus, c.clone()));
    let mut cells = Vec::new();
    let mut incidences = Vec::new();
    for g in 0..=table.max_grade() {
        for cell in table.cells(g) {
            let Cell::Cube(c) = cell else { unreachable!() };
            let (s, r) = rep(c);
            if r != *c {
                continue;
            }
            if s != Sign::Plus {
                return domain(format!("representative {c} maps to itself with a flip"));
            }
            cells.push(AbstractCell {
                grade: g,
                id: c.token(),
            });
            if g > 0 {
                for (fs, f) in c.faces()? {
                    let (rs, r) = rep(&f.reduced(&cx.moduli()));
                    incidences.push(Incidence {
                        cell: c.token(),
                        sign: fs * rs,
                        face: r.token(),
                    });
                }
            }
        }
    }
    Ok(AbstractComplex::new(cx.n, cells, incidences))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(base: &[i64], axes: &[usize]) -> ElementaryCube {
        ElementaryCube::from_parts(base, axes).unwrap()
    }

    #[test]
    fn square_faces_match_sign_table() {
        let f = cube(&[0, 0], &[1, 2]).faces().unwrap();
        let expect = vec![
            (Sign::Plus, cube(&[0, 0], &[1])),
            (Sign::Minus, cube(&[0, 1], &[1])),
            (Sign::Minus, cube(&[0, 0], &[2])),
            (Sign::Plus, cube(&[1, 0], &[2])),
        ];
        assert_eq!(f, expect);
    }

    #[test]
    fn segment_faces() {
        let f = cube(&[0], &[1]).faces().unwrap();
        assert_eq!(
            f,
            vec![(Sign::Plus, cube(&[0], &[])), (Sign::Minus, cube(&[1], &[]))]
        );
        assert!(cube(&[0], &[]).faces().is_err());
    }

    #[test]
    fn gamma_gamma_of_three_cube_is_empty() {
        let c = cube(&[0, 0, 0], &[1, 2, 3]);
        let mut acc: BTreeMap<ElementaryCube, i64> = BTreeMap::new();
        for (s1, f) in c.faces().unwrap() {
            for (s2, g) in f.faces().unwrap() {
                *acc.entry(g).or_insert(0) += (s1 * s2).to_i64();
            }
        }
        assert!(acc.values().all(|&v| v == 0));
    }

    #[test]
    fn closure_counts() {
        for m in 0..=6 {
            let axes: Vec<usize> = (1..=m).collect();
            let n = m.max(1);
            let c = cube(&vec![0; n], &axes);
            let cl = c.closure();
            let count = |g: usize| cl.iter().filter(|c| c.grade() == g).count();
            assert_eq!(count(0), 1 << m);
            if m >= 1 {
                assert_eq!(count(m - 1), 2 * m);
                assert_eq!(count(1), m * (1 << (m - 1)));
            }
            assert_eq!(cl.len(), 3usize.pow(m as u32));
        }
    }

    #[test]
    fn boundary_of_cube_surface_vanishes() {
        let cx = cube_boundary();
        let table = cx.cell_table().unwrap();
        let mut ch = IntegerChain::new(2);
        // Def. 3 orientation: the surface chain is γ(π³)
        for (s, f) in cube(&[0, 0, 0], &[1, 2, 3]).faces().unwrap() {
            ch.add(Cell::Cube(f), s.to_i64());
        }
        assert_eq!(ch.len(), 6);
        let b = boundary_chain_in(&ch, &table, &cx).unwrap();
        assert!(b.is_zero());
    }

    #[test]
    fn periodic_square_has_no_boundary() {
        let cx = torus();
        let ch = IntegerChain::from_terms(2, [(Cell::Cube(cube(&[0, 0], &[1, 2])), 1)]);
        assert!(boundary_chain(&ch, &cx).unwrap().is_zero());
        // unreduced coordinates are identified too
        let ch = IntegerChain::from_terms(2, [(Cell::Cube(cube(&[3, -2], &[1, 2])), 1)]);
        assert!(boundary_chain(&ch, &cx).unwrap().is_zero());
    }

    #[test]
    fn boundary_chain_edge_cases() {
        let cx = solid_square();
        assert!(boundary_chain(&IntegerChain::new(2), &cx).unwrap().is_zero());
        let bad = IntegerChain::from_terms(2, [(Cell::Cube(cube(&[5, 5], &[1, 2])), 1)]);
        assert!(matches!(boundary_chain(&bad, &cx), Err(Error::Domain(_))));
    }

    #[test]
    fn segment_boundary_matrix() {
        let m = boundary_matrix(&single_segment(), 1).unwrap();
        assert_eq!(m.to_rows(), vec![vec![1], vec![-1]]);
        assert!(boundary_matrix(&single_segment(), 2).is_err());
        assert!(boundary_matrix(&single_segment(), 0).is_err());
    }

    #[test]
    fn torus_boundary_matrices_vanish() {
        let cx = torus();
        let d2 = boundary_matrix(&cx, 2).unwrap();
        assert_eq!((d2.rows(), d2.cols()), (2, 1));
        assert!(d2.is_zero());
        let d1 = boundary_matrix(&cx, 1).unwrap();
        assert_eq!((d1.rows(), d1.cols()), (1, 2));
        assert!(d1.is_zero());
    }

    #[test]
    fn subdivision_doubles_split_cells() {
        let cx = solid_square().as_embedded().unwrap().clone();
        let sub = cx.subdivide(1).unwrap();
        assert_eq!(sub.cubes().len(), 2);
        let t = CubicalComplex::from(sub).cell_table().unwrap();
        assert_eq!((t.count(0), t.count(1), t.count(2)), (6, 7, 2));
    }

    #[test]
    fn refinement_halves_the_step() {
        let cx = solid_square().as_embedded().unwrap().clone().with_scale(0.5).unwrap();
        let r = cx.refine().unwrap();
        assert_eq!(r.cubes().len(), 4);
        assert_eq!(r.scale(), 0.25);
        assert_eq!(cx.subdivide(2).unwrap().scale(), 0.5);
    }
}
