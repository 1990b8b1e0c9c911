//! Small named complexes used throughout the tests, benches and docs.

use super::{quotient, CubicalComplex, ElementaryCube, EmbeddedComplex};
use crate::permcalc::Sign;

fn cube(base: &[i64], axes: &[usize]) -> ElementaryCube {
    ElementaryCube::from_parts(base, axes).expect("catalog cube")
}

/// The unit interval `[0,1]` with its two end points.
pub fn single_segment() -> CubicalComplex {
    EmbeddedComplex::new(1, vec![cube(&[0], &[1])])
        .expect("segment")
        .into()
}

/// The closed unit square (contractible).
pub fn solid_square() -> CubicalComplex {
    EmbeddedComplex::new(2, vec![cube(&[0, 0], &[1, 2])])
        .expect("square")
        .into()
}

/// The six faces of the unit 3-cube, a cubical 2-sphere.
pub fn cube_boundary() -> CubicalComplex {
    let mut cubes = Vec::new();
    for axis in 1..=3usize {
        let span: Vec<usize> = (1..=3).filter(|&a| a != axis).collect();
        for offset in 0..=1 {
            let mut base = vec![0; 3];
            base[axis - 1] = offset;
            cubes.push(cube(&base, &span));
        }
    }
    EmbeddedComplex::new(3, cubes).expect("cube boundary").into()
}

/// One unit square with both axes periodic of period 1.
pub fn torus() -> CubicalComplex {
    EmbeddedComplex::new(2, vec![cube(&[0, 0], &[1, 2])])
        .and_then(|c| c.with_moduli(vec![1, 1]))
        .expect("torus")
        .into()
}

/// A strip of `segments × width` unit squares whose ends are glued with a
/// flip (abstract mode).
pub fn mobius_strip(segments: usize, width: usize) -> CubicalComplex {
    assert!(segments >= 1 && width >= 1);
    let (len, w) = (segments as i64, width as i64);
    let mut cubes = Vec::new();
    for i in 0..len {
        for j in 0..w {
            cubes.push(cube(&[i, j], &[1, 2]));
        }
    }
    let grid = EmbeddedComplex::new(2, cubes).expect("strip");
    quotient(&grid, |c| {
        let b = c.base();
        if b[0] != len {
            return None;
        }
        match c.grade() {
            0 => Some((Sign::Plus, cube(&[0, w - b[1]], &[]))),
            1 => Some((Sign::Minus, cube(&[0, w - b[1] - 1], &[2]))),
            _ => None,
        }
    })
    .expect("mobius quotient")
    .into()
}

/// `size × size` square with antipodal boundary points identified (abstract
/// mode); its first homology is `ℤ/2`.
pub fn projective_plane(size: usize) -> CubicalComplex {
    assert!(size >= 1);
    let s = size as i64;
    let mut cubes = Vec::new();
    for i in 0..s {
        for j in 0..s {
            cubes.push(cube(&[i, j], &[1, 2]));
        }
    }
    let grid = EmbeddedComplex::new(2, cubes).expect("disc");
    quotient(&grid, |c| {
        let (x, y) = (c.base()[0], c.base()[1]);
        let axes = c.axes().indices();
        match axes {
            [] if x == s && y > 0 => Some((Sign::Plus, cube(&[0, s - y], &[]))),
            [] if y == s && x < s => Some((Sign::Plus, cube(&[s - x, 0], &[]))),
            [2] if x == s => Some((Sign::Minus, cube(&[0, s - y - 1], &[2]))),
            [1] if y == s => Some((Sign::Minus, cube(&[s - x - 1, 0], &[1]))),
            _ => None,
        }
    })
    .expect("projective plane quotient")
    .into()
}
