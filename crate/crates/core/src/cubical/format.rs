//! Text format for complexes.
//!
//! ```text
//! dim 2
//! periodic 1 1          # optional, 0 = not periodic
//! scale 0.25            # optional lattice step for region files
//! cube 0 0 : 1 2        # base coordinates, then spanned axes
//! ```
//!
//! Abstract mode replaces `cube` lines by `cell <grade> <id>` lines followed
//! by `face <id> <sign> <face-id>` lines. Blank lines and `#` comments are
//! ignored; [`write_complex`] emits the canonical form, which parses back to
//! the same text.

use super::{AbstractCell, AbstractComplex, CubicalComplex, ElementaryCube, EmbeddedComplex, Incidence};
use crate::error::{Error, Result};
use crate::permcalc::{OrderedSubset, Sign};

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: line[..s].chars().count() + 1,
        });
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: &Token<'_>, line: usize, what: &str) -> Result<T> {
    tok.text
        .parse()
        .map_err(|_| err(line, tok.column, format!("expected {what}, found `{}`", tok.text)))
}

fn parse_sign(tok: &Token<'_>, line: usize) -> Result<Sign> {
    match tok.text {
        "1" | "+1" | "+" => Ok(Sign::Plus),
        "-1" | "-" => Ok(Sign::Minus),
        other => Err(err(line, tok.column, format!("expected sign +1 or -1, found `{other}`"))),
    }
}

enum Body {
    Unknown,
    Cubes(Vec<ElementaryCube>),
    Cells(Vec<AbstractCell>, Vec<Incidence>),
}

pub fn parse_complex(text: &str) -> Result<CubicalComplex> {
    let mut dim: Option<usize> = None;
    let mut moduli: Option<Vec<u64>> = None;
    let mut scale: Option<f64> = None;
    let mut body = Body::Unknown;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(head) = toks.first() else { continue };
        let args = &toks[1..];
        if head.text != "dim" && dim.is_none() {
            return Err(err(line_no, head.column, "expected `dim <n>` before anything else"));
        }
        match head.text {
            "dim" => {
                if dim.is_some() {
                    return Err(err(line_no, head.column, "duplicate `dim` line"));
                }
                let [n] = args else {
                    return Err(err(line_no, head.column, "`dim` takes exactly one integer"));
                };
                let n: usize = parse_num(n, line_no, "a positive integer")?;
                if n == 0 {
                    return Err(err(line_no, args[0].column, "dimension must be positive"));
                }
                dim = Some(n);
            }
            "periodic" => {
                let n = dim.unwrap_or(0);
                if args.len() != n {
                    return Err(err(line_no, head.column, format!("`periodic` needs {n} periods")));
                }
                if moduli.is_some() || !matches!(body, Body::Unknown) {
                    return Err(err(line_no, head.column, "`periodic` must precede the cells and appear once"));
                }
                moduli = Some(
                    args.iter()
                        .map(|t| parse_num(t, line_no, "a nonnegative period"))
                        .collect::<Result<_>>()?,
                );
            }
            "scale" => {
                let [h] = args else {
                    return Err(err(line_no, head.column, "`scale` takes exactly one number"));
                };
                if scale.is_some() || !matches!(body, Body::Unknown) {
                    return Err(err(line_no, head.column, "`scale` must precede the cells and appear once"));
                }
                let v: f64 = parse_num(h, line_no, "a positive number")?;
                if !(v > 0.0 && v.is_finite()) {
                    return Err(err(line_no, h.column, "scale must be positive and finite"));
                }
                scale = Some(v);
            }
            "cube" => {
                let n = dim.unwrap_or(0);
                let cubes = match &mut body {
                    Body::Unknown => {
                        body = Body::Cubes(Vec::new());
                        match &mut body {
                            Body::Cubes(c) => c,
                            _ => unreachable!(),
                        }
                    }
                    Body::Cubes(c) => c,
                    Body::Cells(..) => {
                        return Err(err(line_no, head.column, "cannot mix `cube` and `cell` lines"))
                    }
                };
                let colon = args
                    .iter()
                    .position(|t| t.text == ":")
                    .ok_or_else(|| err(line_no, head.column, "missing `:` between base and axes"))?;
                if colon != n {
                    return Err(err(line_no, head.column, format!("cube base needs {n} coordinates")));
                }
                let base: Vec<i64> = args[..colon]
                    .iter()
                    .map(|t| parse_num(t, line_no, "an integer coordinate"))
                    .collect::<Result<_>>()?;
                let axes: Vec<usize> = args[colon + 1..]
                    .iter()
                    .map(|t| parse_num(t, line_no, "an axis index"))
                    .collect::<Result<_>>()?;
                let axes = OrderedSubset::new(n, axes).map_err(|e| {
                    err(line_no, args.get(colon + 1).map_or(head.column, |t| t.column), e.to_string())
                })?;
                cubes.push(ElementaryCube::new(base, axes)?);
            }
            "cell" | "face" => {
                if matches!(body, Body::Cubes(_)) {
                    return Err(err(line_no, head.column, "cannot mix `cube` and `cell` lines"));
                }
                if matches!(body, Body::Unknown) {
                    body = Body::Cells(Vec::new(), Vec::new());
                }
                let Body::Cells(cells, incs) = &mut body else { unreachable!() };
                if head.text == "cell" {
                    let [g, id] = args else {
                        return Err(err(line_no, head.column, "expected `cell <grade> <id>`"));
                    };
                    if !incs.is_empty() {
                        return Err(err(line_no, head.column, "`cell` lines must precede `face` lines"));
                    }
                    cells.push(AbstractCell {
                        grade: parse_num(g, line_no, "a grade")?,
                        id: id.text.to_string(),
                    });
                } else {
                    let [id, sign, face] = args else {
                        return Err(err(line_no, head.column, "expected `face <id> <sign> <face-id>`"));
                    };
                    incs.push(Incidence {
                        cell: id.text.to_string(),
                        sign: parse_sign(sign, line_no)?,
                        face: face.text.to_string(),
                    });
                }
            }
            other => {
                return Err(err(line_no, head.column, format!("unknown directive `{other}`")));
            }
        }
    }

    let n = dim.ok_or_else(|| err(last_line.max(1), 1, "missing `dim` line"))?;
    match body {
        Body::Cells(cells, incs) => {
            if moduli.is_some() || scale.is_some() {
                return Err(err(1, 1, "`periodic` and `scale` apply to cube complexes only"));
            }
            Ok(AbstractComplex::new(n, cells, incs).into())
        }
        Body::Cubes(cubes) => build_embedded(n, cubes, moduli, scale),
        Body::Unknown => build_embedded(n, Vec::new(), moduli, scale),
    }
}

fn build_embedded(
    n: usize,
    cubes: Vec<ElementaryCube>,
    moduli: Option<Vec<u64>>,
    scale: Option<f64>,
) -> Result<CubicalComplex> {
    let mut cx = EmbeddedComplex::new(n, cubes)?;
    if let Some(m) = moduli {
        cx = cx.with_moduli(m)?;
    }
    if let Some(h) = scale {
        cx = cx.with_scale(h)?;
    }
    Ok(cx.into())
}

/// Canonical text form.
pub fn write_complex(cx: &CubicalComplex) -> String {
    let mut out = format!("dim {}\n", cx.n());
    match cx {
        CubicalComplex::Embedded(e) => {
            if let Some(m) = e.declared_moduli() {
                let m: Vec<String> = m.iter().map(|p| p.to_string()).collect();
                out.push_str(&format!("periodic {}\n", m.join(" ")));
            }
            if let Some(h) = e.declared_scale() {
                out.push_str(&format!("scale {h}\n"));
            }
            for c in e.cubes() {
                let base: Vec<String> = c.base().iter().map(|b| b.to_string()).collect();
                let mut line = format!("cube {} :", base.join(" "));
                for a in c.axes().indices() {
                    line.push_str(&format!(" {a}"));
                }
                out.push_str(&line);
                out.push('\n');
            }
        }
        CubicalComplex::Abstract(a) => {
            for c in a.cells() {
                out.push_str(&format!("cell {} {}\n", c.grade, c.id));
            }
            for inc in a.incidences() {
                out.push_str(&format!("face {} {} {}\n", inc.cell, inc.sign, inc.face));
            }
        }
    }
    out
}
