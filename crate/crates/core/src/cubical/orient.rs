use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{Cell, CellTable, CubicalComplex};
use crate::error::{Error, Result};
use crate::permcalc::Sign;

/// Result of trying to orient the top-grade cells coherently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Orientation {
    /// One sign per top cell, in canonical order.
    Orientable(Vec<(Cell, Sign)>),
    /// Cells forming a closed chain of adjacencies around which no
    /// consistent choice of signs exists.
    NonOrientable { witness: Vec<Cell> },
}

impl Orientation {
    pub fn is_orientable(&self) -> bool {
        matches!(self, Orientation::Orientable(_))
    }

    pub fn sign_of(&self, cell: &Cell) -> Option<Sign> {
        match self {
            Orientation::Orientable(v) => v.iter().find(|(c, _)| c == cell).map(|(_, s)| *s),
            Orientation::NonOrientable { .. } => None,
        }
    }
}

/// Raw incidences of top cells on each `(m-1)`-face.
fn cofaces(table: &CellTable, top: usize) -> Vec<Vec<(usize, Sign)>> {
    let mut out = vec![Vec::new(); table.count(top - 1)];
    for c in 0..table.count(top) {
        for &(f, s) in table.faces_of(top, c) {
            out[f].push((c, s));
        }
    }
    out
}

/// Assign `±1` to every top cell so that each shared `(m-1)`-face receives
/// opposite induced orientations from its two cofaces.
pub fn orient(cx: &CubicalComplex) -> Result<Orientation> {
    let table = cx.cell_table()?;
    orient_table(&table)
}

pub(crate) fn orient_table(table: &CellTable) -> Result<Orientation> {
    let Some(top) = table.top_grade() else {
        return Ok(Orientation::Orientable(Vec::new()));
    };
    let cells = table.cells(top);
    if top == 0 {
        return Ok(Orientation::Orientable(
            cells.iter().map(|c| (c.clone(), Sign::Plus)).collect(),
        ));
    }
    // adjacency: (neighbour, relation) meaning σ(nb) = relation · σ(self)
    let mut adj: Vec<Vec<(usize, Sign)>> = vec![Vec::new(); cells.len()];
    for (f, inc) in cofaces(table, top).into_iter().enumerate() {
        match inc.as_slice() {
            [] | [_] => {}
            [(c1, s1), (c2, s2)] => {
                if c1 == c2 {
                    if s1 == s2 {
                        return Ok(Orientation::NonOrientable {
                            witness: vec![cells[*c1].clone()],
                        });
                    }
                    continue;
                }
                let rel = -(*s1 * *s2);
                adj[*c1].push((*c2, rel));
                adj[*c2].push((*c1, rel));
            }
            more => {
                return Err(Error::NotManifold {
                    face: table.cells(top - 1)[f].to_string(),
                    count: more.len(),
                })
            }
        }
    }
    let mut sigma: Vec<Option<Sign>> = vec![None; cells.len()];
    let mut parent: Vec<Option<usize>> = vec![None; cells.len()];
    for root in 0..cells.len() {
        if sigma[root].is_some() {
            continue;
        }
        sigma[root] = Some(Sign::Plus);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let su = sigma[u].expect("visited");
            for &(v, rel) in &adj[u] {
                let want = rel * su;
                match sigma[v] {
                    None => {
                        sigma[v] = Some(want);
                        parent[v] = Some(u);
                        queue.push_back(v);
                    }
                    Some(sv) if sv != want => {
                        let witness = cycle_through(&parent, u, v)
                            .into_iter()
                            .map(|i| cells[i].clone())
                            .collect();
                        return Ok(Orientation::NonOrientable { witness });
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(Orientation::Orientable(
        cells
            .iter()
            .cloned()
            .zip(sigma.into_iter().map(|s| s.expect("all visited")))
            .collect(),
    ))
}

/// Tree path `u → lca → v`; together with the edge `v–u` it closes a cycle.
fn cycle_through(parent: &[Option<usize>], u: usize, v: usize) -> Vec<usize> {
    let ancestors = |mut x: usize| {
        let mut path = vec![x];
        while let Some(p) = parent[x] {
            path.push(p);
            x = p;
        }
        path
    };
    let pu = ancestors(u);
    let pv = ancestors(v);
    let in_pv: BTreeSet<usize> = pv.iter().copied().collect();
    let lca_pos = pu.iter().position(|x| in_pv.contains(x)).unwrap_or(pu.len() - 1);
    let lca = pu[lca_pos];
    let mut cycle: Vec<usize> = pu[..=lca_pos].to_vec();
    let v_to_lca = pv.iter().position(|&x| x == lca).unwrap_or(pv.len() - 1);
    cycle.extend(pv[..v_to_lca].iter().rev());
    cycle
}

/// Structural report on a complex. Never fails.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diagnostics {
    pub top_grade: Option<usize>,
    pub cell_counts: Vec<usize>,
    pub duplicate_cells: Vec<String>,
    /// Unknown references, grade mismatches, malformed incidences.
    pub structural_errors: Vec<String>,
    /// `(m-1)`-faces met by more than two top cells, with their coface count.
    pub over_shared_faces: Vec<(String, usize)>,
    /// Cells whose boundary's boundary is nonzero.
    pub boundary_defects: Vec<String>,
    /// Top cells form one chain through shared `(m-1)`-faces.
    pub connected: bool,
    pub components: usize,
}

impl Diagnostics {
    /// Duplicates, structural errors and `δδ ≠ 0` make a complex unusable.
    pub fn is_valid(&self) -> bool {
        self.duplicate_cells.is_empty()
            && self.structural_errors.is_empty()
            && self.boundary_defects.is_empty()
    }

    pub fn is_manifold(&self) -> bool {
        self.over_shared_faces.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.duplicate_cells.is_empty() {
            parts.push(format!("duplicate cells: {}", self.duplicate_cells.join(", ")));
        }
        parts.extend(self.structural_errors.iter().cloned());
        if !self.boundary_defects.is_empty() {
            parts.push(format!(
                "boundary of boundary nonzero at: {}",
                self.boundary_defects.join(", ")
            ));
        }
        if !self.over_shared_faces.is_empty() {
            let faces: Vec<String> = self
                .over_shared_faces
                .iter()
                .map(|(f, c)| format!("{f} ({c} cofaces)"))
                .collect();
            parts.push(format!("over-shared faces: {}", faces.join(", ")));
        }
        if parts.is_empty() {
            "ok".to_string()
        } else {
            parts.join("; ")
        }
    }
}

pub fn validate_complex(cx: &CubicalComplex) -> Diagnostics {
    let mut diag = Diagnostics::default();
    match cx {
        CubicalComplex::Embedded(e) => {
            let moduli = e.moduli();
            let mut seen = BTreeSet::new();
            for c in e.cubes() {
                if !seen.insert(c.reduced(&moduli)) {
                    diag.duplicate_cells.push(c.to_string());
                }
            }
        }
        CubicalComplex::Abstract(a) => {
            let mut grades = BTreeMap::new();
            for c in a.cells() {
                if grades.insert(c.id.clone(), c.grade).is_some() {
                    diag.duplicate_cells.push(c.id.clone());
                }
                if c.grade > a.n() {
                    diag.structural_errors
                        .push(format!("cell {} has grade {} > dim {}", c.id, c.grade, a.n()));
                }
            }
            for inc in a.incidences() {
                match (grades.get(&inc.cell), grades.get(&inc.face)) {
                    (None, _) => diag.structural_errors.push(format!("unknown cell {}", inc.cell)),
                    (_, None) => diag.structural_errors.push(format!("unknown face {}", inc.face)),
                    (Some(g), Some(fg)) if fg + 1 != *g => diag.structural_errors.push(format!(
                        "face {} of grade {fg} cannot bound {} of grade {g}",
                        inc.face, inc.cell
                    )),
                    _ => {}
                }
            }
        }
    }
    if !diag.duplicate_cells.is_empty() && cx.is_abstract() {
        return diag;
    }
    let table = match cx.cell_table() {
        Ok(t) => t,
        Err(e) => {
            if diag.structural_errors.is_empty() {
                diag.structural_errors.push(e.to_string());
            }
            return diag;
        }
    };
    diag.top_grade = table.top_grade();
    diag.cell_counts = (0..=table.max_grade()).map(|k| table.count(k)).collect();

    for k in 2..=table.max_grade() {
        for i in 0..table.count(k) {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(f, s) in table.faces_of(k, i) {
                for &(g, t) in table.faces_of(k - 1, f) {
                    *acc.entry(g).or_insert(0) += (s * t).to_i64();
                }
            }
            if acc.values().any(|&v| v != 0) {
                diag.boundary_defects.push(table.cells(k)[i].to_string());
            }
        }
    }

    let Some(top) = diag.top_grade else {
        diag.connected = true;
        return diag;
    };
    let n_top = table.count(top);
    let mut uf = UnionFind::new(n_top);
    if top > 0 {
        for (f, inc) in cofaces(&table, top).into_iter().enumerate() {
            if inc.len() > 2 {
                diag.over_shared_faces
                    .push((table.cells(top - 1)[f].to_string(), inc.len()));
            }
            for w in inc.windows(2) {
                uf.union(w[0].0, w[1].0);
            }
        }
    }
    diag.components = uf.components();
    diag.connected = diag.components <= 1;
    diag
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = x;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::{
        cube_boundary, mobius_strip, solid_square, AbstractCell, AbstractComplex,
        ElementaryCube, EmbeddedComplex, Incidence,
    };

    /// Brute-force oracle: try every ±1 assignment.
    fn orientable_by_enumeration(cx: &CubicalComplex) -> bool {
        let table = cx.cell_table().unwrap();
        let top = table.top_grade().unwrap();
        let n = table.count(top);
        (0u32..1 << n).any(|mask| {
            let sigma = |c: usize| if mask >> c & 1 == 1 { -1 } else { 1 };
            let mut acc = vec![0i64; table.count(top - 1)];
            let mut touched = vec![0usize; table.count(top - 1)];
            for c in 0..n {
                for &(f, s) in table.faces_of(top, c) {
                    acc[f] += sigma(c) * s.to_i64();
                    touched[f] += 1;
                }
            }
            acc.iter().zip(&touched).all(|(&a, &t)| t < 2 || a == 0)
        })
    }

    #[test]
    fn cube_surface_orients_and_cancels() {
        let cx = cube_boundary();
        let o = orient(&cx).unwrap();
        let Orientation::Orientable(signs) = &o else {
            panic!("cube boundary must be orientable")
        };
        assert_eq!(signs.len(), 6);
        // every edge cancels in the oriented sum
        let table = cx.cell_table().unwrap();
        let mut acc = vec![0i64; table.count(1)];
        for (i, (_, s)) in signs.iter().enumerate() {
            for &(f, t) in table.faces_of(2, i) {
                acc[f] += (*s * t).to_i64();
            }
        }
        assert_eq!(acc.len(), 12);
        assert!(acc.iter().all(|&v| v == 0));
        assert!(orientable_by_enumeration(&cx));
    }

    #[test]
    fn mobius_is_not_orientable() {
        let cx = mobius_strip(3, 1);
        assert!(!orientable_by_enumeration(&cx));
        match orient(&cx).unwrap() {
            Orientation::NonOrientable { witness } => assert_eq!(witness.len(), 3),
            o => panic!("expected witness, got {o:?}"),
        }
    }

    #[test]
    fn solid_square_is_plus() {
        let o = orient(&solid_square()).unwrap();
        match o {
            Orientation::Orientable(v) => {
                assert_eq!(v.len(), 1);
                assert_eq!(v[0].1, Sign::Plus);
            }
            _ => panic!(),
        }
    }

    fn three_squares_on_an_edge() -> CubicalComplex {
        let c = |b: &[i64], a: &[usize]| ElementaryCube::from_parts(b, a).unwrap();
        EmbeddedComplex::new(
            3,
            vec![c(&[0, 0, 0], &[1, 2]), c(&[0, 0, 0], &[1, 3]), c(&[0, -1, 0], &[1, 2])],
        )
        .unwrap()
        .with_moduli(vec![0, 0, 0])
        .unwrap()
        .into()
    }

    #[test]
    fn three_cofaces_is_not_a_manifold() {
        // the three squares share the edge [0 0 0 : 1]
        let cx = three_squares_on_an_edge();
        assert!(matches!(orient(&cx), Err(Error::NotManifold { count: 3, .. })));
        let d = validate_complex(&cx);
        assert!(d.is_valid());
        assert!(!d.is_manifold());
    }

    #[test]
    fn disjoint_squares_are_disconnected() {
        let c = |b: &[i64]| ElementaryCube::from_parts(b, &[1, 2]).unwrap();
        let cx: CubicalComplex = EmbeddedComplex::new(2, vec![c(&[0, 0]), c(&[5, 5])])
            .unwrap()
            .into();
        let d = validate_complex(&cx);
        assert!(!d.connected);
        assert_eq!(d.components, 2);
    }

    #[test]
    fn cube_surface_passes_all_checks() {
        let d = validate_complex(&cube_boundary());
        assert!(d.is_valid() && d.is_manifold() && d.connected);
        assert_eq!(d.cell_counts, vec![8, 12, 6]);
    }

    #[test]
    fn corrupted_sign_is_flagged() {
        let cx = solid_square();
        let CubicalComplex::Abstract(a) = crate::cubical::quotient(
            cx.as_embedded().unwrap(),
            |_| None,
        )
        .map(CubicalComplex::from)
        .unwrap() else {
            unreachable!()
        };
        assert!(validate_complex(&a.clone().into()).is_valid());
        let mut incs = a.incidences().to_vec();
        let i = incs.iter().position(|inc| inc.cell.ends_with(":1,2")).unwrap();
        incs[i].sign = -incs[i].sign;
        let bad: CubicalComplex = AbstractComplex::new(a.n(), a.cells().to_vec(), incs).into();
        let d = validate_complex(&bad);
        assert!(!d.is_valid());
        assert_eq!(d.boundary_defects.len(), 1);
    }

    #[test]
    fn unknown_references_are_reported() {
        let cx: CubicalComplex = AbstractComplex::new(
            1,
            vec![AbstractCell {
                grade: 1,
                id: "e".into(),
            }],
            vec![Incidence {
                cell: "e".into(),
                sign: Sign::Plus,
                face: "v".into(),
            }],
        )
        .into();
        let d = validate_complex(&cx);
        assert!(!d.is_valid());
        assert!(d.summary().contains("unknown face v"));
    }
}
