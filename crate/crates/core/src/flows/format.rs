//! Grid file format.
//!
//! ```text
//! dim 2
//! origin 0 0
//! spacing 0.1
//! extents 5 5
//! values
//! 0 0.1 0.2 ...        # row-major, last axis fastest
//! ```
//!
//! Instead of `values` a scalar field may be given as `poly <table>` lines
//! (monomials as in form files), and a covector field as `covector`
//! followed by one `component j values` or `component j poly <table>` block
//! per axis.

use super::{CovectorGridField, Grid, ScalarGridField};
use crate::error::{Error, Result};
use crate::forms::{content_lines, expect_key, parse_table, parse_usize, Polynomial};

#[derive(Debug, Clone, PartialEq)]
pub enum ComponentSpec {
    Values(Vec<f64>),
    Poly(Polynomial),
}

impl ComponentSpec {
    fn realise(&self, grid: &Grid) -> Result<Vec<f64>> {
        match self {
            ComponentSpec::Values(v) => {
                if v.len() != grid.len() {
                    return Err(Error::Validation(format!(
                        "grid has {} nodes, got {} values",
                        grid.len(),
                        v.len()
                    )));
                }
                Ok(v.clone())
            }
            ComponentSpec::Poly(p) => Ok(ScalarGridField::sample(grid.clone(), |x| p.eval(x)).values),
        }
    }

    fn is_poly(&self) -> bool {
        matches!(self, ComponentSpec::Poly(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridBody {
    Scalar(ComponentSpec),
    Covector(Vec<ComponentSpec>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFile {
    pub grid: Grid,
    pub body: GridBody,
}

impl GridFile {
    pub fn is_scalar(&self) -> bool {
        matches!(self.body, GridBody::Scalar(_))
    }

    /// Same field on a grid with a different spacing; only polynomial
    /// fields can be resampled.
    pub fn with_spacing(&self, h: f64) -> Result<GridFile> {
        let all_poly = match &self.body {
            GridBody::Scalar(c) => c.is_poly(),
            GridBody::Covector(cs) => cs.iter().all(ComponentSpec::is_poly),
        };
        if !all_poly {
            return Err(Error::Validation("only polynomial fields can be resampled".into()));
        }
        Ok(GridFile {
            grid: self.grid.with_spacing(h)?,
            body: self.body.clone(),
        })
    }

    pub fn scalar(&self) -> Result<ScalarGridField> {
        match &self.body {
            GridBody::Scalar(c) => ScalarGridField::new(self.grid.clone(), c.realise(&self.grid)?),
            GridBody::Covector(_) => Err(Error::Validation("expected a scalar field, found a covector field".into())),
        }
    }

    pub fn covector(&self) -> Result<CovectorGridField> {
        match &self.body {
            GridBody::Covector(cs) => CovectorGridField::new(
                self.grid.clone(),
                cs.iter().map(|c| c.realise(&self.grid)).collect::<Result<_>>()?,
            ),
            GridBody::Scalar(_) => Err(Error::Validation("expected a covector field, found a scalar field".into())),
        }
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn floats(toks: &[&str], line: usize) -> Result<Vec<f64>> {
    toks.iter()
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(line, 1, format!("expected a number, found `{t}`")))
        })
        .collect()
}

enum Block {
    None,
    ScalarValues(Vec<f64>),
    ScalarPoly(Polynomial),
    Covector(Vec<Option<ComponentSpec>>, Option<usize>),
}

pub fn parse_grid(text: &str) -> Result<GridFile> {
    let mut lines = content_lines(text).peekable();
    let (no, args) = expect_key(&mut lines, "dim", 0)?;
    let [n] = args[..] else {
        return Err(err(no, 1, "`dim` takes exactly one integer"));
    };
    let n = parse_usize(n, no, "a positive dimension")?;
    if n == 0 {
        return Err(err(no, 1, "dimension must be positive"));
    }
    let (no, args) = expect_key(&mut lines, "origin", no)?;
    if args.len() != n {
        return Err(err(no, 1, format!("`origin` needs {n} coordinates")));
    }
    let origin = floats(&args, no)?;
    let (no, args) = expect_key(&mut lines, "spacing", no)?;
    let [h] = args[..] else {
        return Err(err(no, 1, "`spacing` takes exactly one number"));
    };
    let h = floats(&[h], no)?[0];
    let (no, args) = expect_key(&mut lines, "extents", no)?;
    if args.len() != n {
        return Err(err(no, 1, format!("`extents` needs {n} counts")));
    }
    let extents = args
        .iter()
        .map(|t| parse_usize(t, no, "a sample count"))
        .collect::<Result<Vec<_>>>()?;
    let grid = Grid::new(origin, h, extents).map_err(|e| err(no, 1, e.to_string()))?;

    let mut block = Block::None;
    let mut last = no;
    for (no, line) in lines {
        last = no;
        let trimmed = line.trim_start();
        let col = line.len() - trimmed.len() + 1;
        let mut toks = trimmed.split_whitespace();
        let head = toks.next().expect("content lines are nonblank");
        match (&mut block, head) {
            (Block::None, "values") => block = Block::ScalarValues(Vec::new()),
            (Block::None | Block::ScalarPoly(_), "poly") => {
                let at = line.len() - trimmed.len() + 4;
                let p = parse_table(n, line, at, no)?;
                block = match std::mem::replace(&mut block, Block::None) {
                    Block::ScalarPoly(mut q) => {
                        q = Polynomial::new(n, q.terms().iter().chain(p.terms()).cloned().collect())?;
                        Block::ScalarPoly(q)
                    }
                    _ => Block::ScalarPoly(p),
                };
            }
            (Block::None, "covector") => block = Block::Covector(vec![None; n], None),
            (Block::Covector(specs, current), "component") => {
                let rest: Vec<&str> = toks.collect();
                let (Some(j), Some(kind)) = (rest.first(), rest.get(1)) else {
                    return Err(err(no, col, "expected `component <j> values|poly ...`"));
                };
                let j = parse_usize(j, no, "a component index")?;
                if j == 0 || j > n || specs[j - 1].is_some() {
                    return Err(err(no, col, format!("component {j} is out of range or repeated")));
                }
                match *kind {
                    "values" => {
                        specs[j - 1] = Some(ComponentSpec::Values(floats(&rest[2..], no)?));
                        *current = Some(j - 1);
                    }
                    "poly" => {
                        let at = line.find("poly").expect("token present") + 4;
                        specs[j - 1] = Some(ComponentSpec::Poly(parse_table(n, line, at, no)?));
                        *current = None;
                    }
                    other => return Err(err(no, col, format!("unknown component kind `{other}`"))),
                }
            }
            (Block::ScalarValues(v), _) => v.extend(floats(&trimmed.split_whitespace().collect::<Vec<_>>(), no)?),
            (Block::Covector(specs, Some(j)), _) => {
                let Some(ComponentSpec::Values(v)) = specs[*j].as_mut() else {
                    unreachable!("current block holds values")
                };
                v.extend(floats(&trimmed.split_whitespace().collect::<Vec<_>>(), no)?);
            }
            (_, other) => return Err(err(no, col, format!("unexpected `{other}`"))),
        }
    }
    let body = match block {
        Block::None => return Err(err(last + 1, 1, "missing field data")),
        Block::ScalarValues(v) => GridBody::Scalar(ComponentSpec::Values(v)),
        Block::ScalarPoly(p) => GridBody::Scalar(ComponentSpec::Poly(p)),
        Block::Covector(specs, _) => {
            let mut out = Vec::with_capacity(n);
            for (j, s) in specs.into_iter().enumerate() {
                out.push(s.ok_or_else(|| err(last + 1, 1, format!("missing component {}", j + 1)))?);
            }
            GridBody::Covector(out)
        }
    };
    let file = GridFile { grid, body };
    // surface value-count mismatches as validation errors early
    match &file.body {
        GridBody::Scalar(c) => {
            c.realise(&file.grid)?;
        }
        GridBody::Covector(cs) => {
            for c in cs {
                c.realise(&file.grid)?;
            }
        }
    }
    Ok(file)
}

pub fn write_grid(f: &GridFile) -> String {
    let g = &f.grid;
    let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = format!(
        "dim {}\norigin {}\nspacing {}\nextents {}\n",
        g.n(),
        join(g.origin()),
        g.spacing(),
        g.extents().iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
    );
    let write_values = |out: &mut String, v: &[f64]| {
        let row = *g.extents().last().expect("n >= 1");
        for chunk in v.chunks(row) {
            out.push_str(&join(chunk));
            out.push('\n');
        }
    };
    match &f.body {
        GridBody::Scalar(ComponentSpec::Values(v)) => {
            out.push_str("values\n");
            write_values(&mut out, v);
        }
        GridBody::Scalar(ComponentSpec::Poly(p)) => out.push_str(&format!("poly {p}\n")),
        GridBody::Covector(cs) => {
            out.push_str("covector\n");
            for (j, c) in cs.iter().enumerate() {
                match c {
                    ComponentSpec::Values(v) => {
                        out.push_str(&format!("component {} values\n", j + 1));
                        write_values(&mut out, v);
                    }
                    ComponentSpec::Poly(p) => out.push_str(&format!("component {} poly {p}\n", j + 1)),
                }
            }
        }
    }
    out
}
