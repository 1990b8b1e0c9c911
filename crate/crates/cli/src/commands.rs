use std::fs;
use std::path::Path;

use parcel_core::cubical::{homology as compute_homology, orient as compute_orient, parse_complex, validate_complex, CubicalComplex, Orientation};
use parcel_core::flows::{
    closedness_residual, divergence_residual, gradient_field, holonomy_residual, laplacian_residual,
    mean_curvature, parse_grid, CovectorGridField, GridBody, Residual,
};
use parcel_core::forms::{parse_form, stokes_check, StokesMode};
use parcel_core::frameworks::{
    elementary_graph, parse_framework, pi1_trivial, sum_graph, surface_complex, validate_framework, Composition,
    FrameworkInput, FrameworkSum,
};
use parcel_core::Error;

use crate::report::Report;
use crate::Mode;

pub struct Failure {
    pub code: u8,
    pub message: String,
    pub report: Option<Report>,
}

type Outcome = Result<Report, Failure>;

fn failure(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
        report: None,
    }
}

/// Exit status for a library error: 2 parse, 3 semantic, 4 degenerate.
fn from_error(source: &str, e: Error) -> Failure {
    match e {
        Error::Parse { line, column, message } => failure(2, format!("{source}:{line}:{column}: {message}")),
        Error::Degenerate(_) => failure(4, format!("{source}: {e}")),
        Error::Domain(_) | Error::Validation(_) | Error::NotManifold { .. } => failure(3, format!("{source}: {e}")),
    }
}

fn read(path: &Path) -> Result<(String, String), Failure> {
    let label = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| failure(2, format!("{label}: cannot read: {e}")))?;
    Ok((label, text))
}

fn load_complex(path: &Path, report: &mut Report) -> Result<(String, CubicalComplex), Failure> {
    let (label, text) = read(path)?;
    report.input(&label, text.as_bytes());
    let cx = parse_complex(&text).map_err(|e| from_error(&label, e))?;
    Ok((label, cx))
}

fn sci(v: f64) -> String {
    format!("{v:.6e}")
}

fn coords(p: &[f64]) -> String {
    p.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(",")
}

fn describe(cx: &CubicalComplex) -> String {
    match cx.as_embedded() {
        None => "abstract".into(),
        Some(e) if e.is_periodic() => "embedded, periodic".into(),
        Some(_) => "embedded".into(),
    }
}

pub fn homology(path: &Path) -> Outcome {
    let mut report = Report::new(format!("homology {}", path.display()));
    let (label, cx) = load_complex(path, &mut report)?;
    let diag = validate_complex(&cx);
    if !diag.is_valid() {
        report.field("status", "invalid");
        report.field("diagnostics", diag.summary());
        return Err(Failure {
            report: Some(report),
            ..failure(3, format!("{label}: validation failed: {}", diag.summary()))
        });
    }
    let h = compute_homology(&cx).map_err(|e| from_error(&label, e))?;
    let table = cx.cell_table().map_err(|e| from_error(&label, e))?;
    report.field("dimension", cx.n());
    report.field("complex", describe(&cx));
    let rows = h
        .groups
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let torsion = if g.torsion.is_empty() {
                "-".to_string()
            } else {
                g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
            };
            vec![k.to_string(), table.count(k).to_string(), g.betti.to_string(), torsion, g.to_string()]
        })
        .collect();
    report.table("grade", &["grade", "cells", "betti", "torsion", "group"], rows);
    report.text("");
    report.field("homology", &h);
    report.field("euler", h.euler_characteristic());
    Ok(report)
}

pub fn orient(path: &Path) -> Outcome {
    let mut report = Report::new(format!("orient {}", path.display()));
    let (label, cx) = load_complex(path, &mut report)?;
    let o = compute_orient(&cx).map_err(|e| from_error(&label, e))?;
    match o {
        Orientation::Orientable(cells) => {
            report.field("status", "ORIENTABLE");
            report.field("top cells", cells.len());
            let rows = cells
                .iter()
                .enumerate()
                .map(|(i, (c, s))| vec![i.to_string(), c.to_string(), s.to_string()])
                .collect();
            report.table("cell", &["#", "cell", "sign"], rows);
        }
        Orientation::NonOrientable { witness } => {
            report.field("status", "NONORIENTABLE");
            report.field("witness length", witness.len());
            let rows = witness
                .iter()
                .enumerate()
                .map(|(i, c)| vec![i.to_string(), c.to_string()])
                .collect();
            report.table("witness", &["step", "cell"], rows);
        }
    }
    Ok(report)
}

pub fn stokes(form: &Path, region: &Path, mode: Mode, h: Option<f64>, tol: f64, refine: usize) -> Outcome {
    let mut report = Report::new(format!("stokes {} {}", form.display(), region.display()));
    let (form_label, text) = read(form)?;
    report.input(&form_label, text.as_bytes());
    let a = parse_form(&text).map_err(|e| from_error(&form_label, e))?;
    let (label, cx) = load_complex(region, &mut report)?;
    let Some(mut e) = cx.as_embedded().cloned() else {
        return Err(failure(3, format!("{label}: stokes needs an embedded region")));
    };
    if let Some(h) = h {
        e = e.with_scale(h).map_err(|err| from_error(&label, err))?;
    }
    let mode_name = match mode {
        Mode::Discrete => "discrete",
        Mode::Analytic => "analytic",
    };
    let core_mode = match mode {
        Mode::Discrete => StokesMode::Discrete,
        Mode::Analytic => StokesMode::AnalyticFd,
    };
    report.field("mode", mode_name);
    report.field("form grade", parcel_core::forms::FormField::grade(&a));
    report.field("tolerance", sci(tol));
    let mut rows = Vec::new();
    let mut prev: Option<f64> = None;
    let mut first = None;
    for level in 0..=refine {
        if level > 0 {
            e = e.refine().map_err(|err| from_error(&label, err))?;
        }
        let r = stokes_check(&a, &e.clone().into(), core_mode).map_err(|err| from_error(&label, err))?;
        let ratio = match prev {
            Some(p) if r.difference != 0.0 => format!("{:.3}", p.abs() / r.difference.abs()),
            _ => "-".into(),
        };
        prev = Some(r.difference);
        first.get_or_insert(r);
        rows.push(vec![
            level.to_string(),
            sci(e.scale()),
            r.cells.to_string(),
            r.boundary_faces.to_string(),
            sci(r.interior),
            sci(r.boundary),
            sci(r.difference),
            ratio,
        ]);
    }
    let r = first.expect("at least one level");
    report.field("interior", sci(r.interior));
    report.field("boundary", sci(r.boundary));
    report.field("difference", sci(r.difference));
    report.field("status", if r.difference.abs() <= tol { "ok" } else { "exceeds tolerance" });
    if refine > 0 {
        report.table(
            "level",
            &["level", "h", "cells", "faces", "interior", "boundary", "difference", "ratio"],
            rows,
        );
    }
    Ok(report)
}

fn residual_row(name: &str, r: &Residual, tol: f64) -> Vec<String> {
    let node = r
        .argmax
        .as_ref()
        .map(|p| p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
        .unwrap_or_else(|| "-".into());
    let point = r.point.as_deref().map(coords).unwrap_or_else(|| "-".into());
    let status = if r.max <= tol { "ok" } else { "exceeds" };
    vec![name.to_string(), sci(r.max), node, point, status.to_string()]
}

fn covector_checks(a: &CovectorGridField, checks: &[&str], tol: f64, rows: &mut Vec<Vec<String>>) {
    for &c in checks {
        let r = match c {
            "closedness" => closedness_residual(a),
            "divergence" => divergence_residual(a),
            "holonomy" => holonomy_residual(a),
            _ => continue,
        };
        rows.push(residual_row(c, &r, tol));
    }
}

const KNOWN_CHECKS: [&str; 5] = ["laplacian", "closedness", "divergence", "holonomy", "curvature"];

pub fn flow(path: &Path, checks: &[String], h: Option<f64>, tol: f64, eps: f64) -> Outcome {
    let mut report = Report::new(format!("flow {}", path.display()));
    let (label, text) = read(path)?;
    report.input(&label, text.as_bytes());
    let mut file = parse_grid(&text).map_err(|e| from_error(&label, e))?;
    if let Some(h) = h {
        file = file.with_spacing(h).map_err(|e| from_error(&label, e))?;
    }
    let scalar = matches!(file.body, GridBody::Scalar(_));
    let mut selected: Vec<&str> = checks.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    if selected.is_empty() {
        selected = if scalar {
            vec!["laplacian", "closedness"]
        } else {
            vec!["closedness", "divergence", "holonomy"]
        };
    }
    for c in &selected {
        if !KNOWN_CHECKS.contains(c) {
            return Err(failure(3, format!("unknown check `{c}`; expected one of {}", KNOWN_CHECKS.join(", "))));
        }
        if !scalar && matches!(*c, "laplacian" | "curvature") {
            return Err(failure(3, format!("{label}: check `{c}` needs a scalar field")));
        }
    }
    let grid = file.grid.clone();
    report.field("field", if scalar { "scalar" } else { "covector" });
    report.field("dimension", grid.n());
    report.field("spacing", sci(grid.spacing()));
    report.field(
        "extents",
        grid.extents().iter().map(|e| e.to_string()).collect::<Vec<_>>().join("x"),
    );
    report.field("tolerance", sci(tol));
    let mut rows = Vec::new();
    let mut curvature = None;
    if scalar {
        let phi = file.scalar().map_err(|e| from_error(&label, e))?;
        let grad = gradient_field(&phi);
        for &c in &selected {
            match c {
                "laplacian" => rows.push(residual_row(c, &laplacian_residual(&phi).max_abs(), tol)),
                "curvature" => {
                    let hc = mean_curvature(&phi, eps);
                    if hc.defined() == 0 {
                        return Err(failure(4, format!("{label}: gradient below {eps:e} at every interior node")));
                    }
                    curvature = Some(hc);
                }
                _ => covector_checks(&grad, &[c], tol, &mut rows),
            }
        }
    } else {
        let a = file.covector().map_err(|e| from_error(&label, e))?;
        covector_checks(&a, &selected, tol, &mut rows);
    }
    if !rows.is_empty() {
        report.table("residual", &["check", "max", "node", "point", "status"], rows);
    }
    if let Some(hc) = curvature {
        report.text("");
        report.field("curvature nodes", format!("{}/{}", hc.defined(), grid.len()));
        // the line through the grid centre along the first axis
        let mid: Vec<usize> = grid.extents().iter().map(|e| e / 2).collect();
        let rows = (0..grid.extents()[0])
            .filter_map(|i| {
                let mut p = mid.clone();
                p[0] = i;
                let v = hc.at(&p)?;
                let x = grid.point(&p);
                let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
                Some(vec![i.to_string(), coords(&x), format!("{r:.6}"), sci(v)])
            })
            .collect();
        report.table("curvature", &["i", "point", "|x|", "H"], rows);
    }
    Ok(report)
}

const ARGS: &str = "<args>";

fn parse_sum(expr: &str) -> Result<FrameworkSum, Failure> {
    FrameworkSum::parse(expr).map_err(|e| from_error(ARGS, e))
}

pub fn framework_build(expr: &str, list_edges: bool) -> Outcome {
    let mut report = Report::new(format!("framework build {expr}"));
    let sum = parse_sum(expr)?;
    let g = if sum.is_sphere() {
        let c = Composition::new(vec![sum.n()]).map_err(|e| from_error(ARGS, e))?;
        elementary_graph(&c)
    } else {
        sum_graph(&sum).map_err(|e| from_error(ARGS, e))?
    };
    let diag = validate_framework(&g);
    report.field("framework", &sum);
    report.field("n", sum.n());
    report.field("vertices", g.vertex_count());
    report.field("edges", g.edge_count());
    report.field("valid", if diag.is_valid() { "yes" } else { "no" });
    if list_edges {
        let rows = g
            .edges()
            .iter()
            .map(|(u, v, k)| vec![u.to_string(), v.to_string(), k.to_string()])
            .collect();
        report.table("edge", &["u", "v", "class"], rows);
    }
    Ok(report)
}

pub fn framework_sum(expr: &str) -> Outcome {
    let mut report = Report::new(format!("framework sum {expr}"));
    let sum = parse_sum(expr)?;
    report.field("n", sum.n());
    report.field("sum", &sum);
    report.field("terms", sum.term_count());
    let rows: Vec<Vec<String>> = sum
        .terms()
        .map(|(c, k)| vec![c.to_string(), k.to_string()])
        .collect();
    if !rows.is_empty() {
        report.table("term", &["composition", "multiplicity"], rows);
    }
    Ok(report)
}

pub fn framework_pi1(expr: &str) -> Outcome {
    let mut report = Report::new(format!("framework pi1 {expr}"));
    let sum = parse_sum(expr)?;
    report.field("sum", &sum);
    report.field("pi1", if pi1_trivial(&sum) { "trivial" } else { "nontrivial" });
    Ok(report)
}

pub fn framework_surface(expr: &str) -> Outcome {
    let mut report = Report::new(format!("framework surface {expr}"));
    let sum = parse_sum(expr)?;
    let terms = sum.expanded();
    let c = match terms.as_slice() {
        [] => Composition::new(vec![sum.n()]).map_err(|e| from_error(ARGS, e))?,
        [c] => c.clone(),
        _ => return Err(failure(3, format!("surface takes a single composition, got {sum}"))),
    };
    let cx = surface_complex(&c);
    let CubicalComplex::Abstract(ab) = &cx else {
        unreachable!("surface complexes are abstract")
    };
    report.field("composition", &c);
    report.field("cells", ab.cells().len());
    let rows = ab
        .cells()
        .iter()
        .map(|cell| vec![cell.grade.to_string(), cell.id.clone()])
        .collect();
    report.table("cell", &["grade", "id"], rows);
    Ok(report)
}

pub fn framework_validate(path: &Path) -> Outcome {
    let mut report = Report::new(format!("framework validate {}", path.display()));
    let (label, text) = read(path)?;
    report.input(&label, text.as_bytes());
    let input = parse_framework(&text).map_err(|e| from_error(&label, e))?;
    let g = match input {
        FrameworkInput::Sum(s) => {
            report.field("sum", &s);
            sum_graph(&s).map_err(|e| from_error(&label, e))?
        }
        FrameworkInput::Graph(g) => g,
    };
    let diag = validate_framework(&g);
    report.field("n", g.n());
    report.field("vertices", g.vertex_count());
    report.field("edges", g.edge_count());
    if diag.is_valid() {
        report.field("status", "valid");
        Ok(report)
    } else {
        report.field("status", "invalid");
        report.field("diagnostics", diag.summary());
        Err(Failure {
            report: Some(report),
            ..failure(3, format!("{label}: {}", diag.summary()))
        })
    }
}
