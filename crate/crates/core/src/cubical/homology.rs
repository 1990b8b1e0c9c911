use std::fmt;

use super::snf::smith_normal_form;
use super::{boundary_matrix_in, validate_complex, CubicalComplex};
use crate::error::{Error, Result};

/// One homology group `ℤ^betti ⊕ ⊕ ℤ/t`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HomologyGroup {
    pub betti: usize,
    /// Torsion coefficients `> 1`, each dividing the next.
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

/// Homology groups `H_0 … H_top`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HomologyResult {
    pub groups: Vec<HomologyGroup>,
}

impl HomologyResult {
    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    pub fn has_torsion(&self) -> bool {
        self.groups.iter().any(|g| !g.torsion.is_empty())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .enumerate()
            .map(|(k, g)| if k % 2 == 0 { 1 } else { -1 } * g.betti as i64)
            .sum()
    }
}

impl fmt::Display for HomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .groups
            .iter()
            .enumerate()
            .map(|(k, g)| format!("H{k}={g}"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Integral homology from Smith normal forms of the boundary matrices.
/// `∂_0` is the zero map, so `H_0` of a point is `ℤ`.
pub fn homology(cx: &CubicalComplex) -> Result<HomologyResult> {
    let diag = validate_complex(cx);
    if !diag.is_valid() {
        return Err(Error::Validation(diag.summary()));
    }
    let table = cx.cell_table()?;
    let Some(top) = table.top_grade() else {
        return Ok(HomologyResult::default());
    };
    // factors[k] = invariant factors of ∂_k, k = 1..=top
    let mut factors: Vec<Vec<u64>> = vec![Vec::new(); top + 2];
    for k in 1..=top {
        factors[k] = smith_normal_form(&boundary_matrix_in(&table, k)?);
    }
    let groups = (0..=top)
        .map(|k| {
            let rank_out = factors[k].len();
            let rank_in = factors[k + 1].len();
            HomologyGroup {
                betti: table.count(k) - rank_out - rank_in,
                torsion: factors[k + 1].iter().copied().filter(|&d| d > 1).collect(),
            }
        })
        .collect();
    Ok(HomologyResult { groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::{
        cube_boundary, mobius_strip, projective_plane, single_segment, solid_square, torus,
    };

    #[test]
    fn desk_table() {
        assert_eq!(homology(&solid_square()).unwrap().betti(), vec![1, 0, 0]);
        assert_eq!(homology(&cube_boundary()).unwrap().betti(), vec![1, 0, 1]);
        assert_eq!(homology(&torus()).unwrap().betti(), vec![1, 2, 1]);
        assert_eq!(homology(&single_segment()).unwrap().betti(), vec![1, 0]);
        assert_eq!(homology(&mobius_strip(3, 1)).unwrap().betti(), vec![1, 1, 0]);
    }

    #[test]
    fn projective_plane_has_two_torsion() {
        let h = homology(&projective_plane(2)).unwrap();
        assert_eq!(h.betti(), vec![1, 0, 0]);
        assert_eq!(h.groups[1].torsion, vec![2]);
        assert_eq!(h.to_string(), "H0=Z H1=Z/2 H2=0");
    }

    #[test]
    fn display_forms() {
        assert_eq!(homology(&torus()).unwrap().to_string(), "H0=Z H1=Z^2 H2=Z");
        assert_eq!(homology(&cube_boundary()).unwrap().to_string(), "H0=Z H1=0 H2=Z");
    }
}
