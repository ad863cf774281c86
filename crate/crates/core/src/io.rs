//! JSON file formats shared with the command-line tool.
//!
//! * Frames: `{"ambient_dim": d, "entries": [{"basis": [[..], ..], "weight": w}]}`
//!   where `basis` lists the `k` basis columns, each of length `d`.
//! * Generators: a list of `d × d` matrices, each a list of rows.
//! * Complex lines: a list of length-`2d` arrays `[re_1, im_1, re_2, im_2, ..]`.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::constructions::ComplexLineSet;
use crate::error::{FrameError, Result};
use crate::frame::{FrameEntry, WeightedFrame};
use crate::gram::{orthonormalize, Subspace};

/// Largest entrywise change the reader accepts when re-orthonormalizing a basis.
pub const MAX_BASIS_CORRECTION: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameFile {
    pub ambient_dim: usize,
    pub entries: Vec<EntryFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntryFile {
    pub basis: Vec<Vec<f64>>,
    pub weight: f64,
}

impl From<&WeightedFrame> for FrameFile {
    fn from(frame: &WeightedFrame) -> Self {
        let entries = frame
            .entries()
            .iter()
            .map(|e| EntryFile {
                basis: e.subspace.basis().column_iter().map(|c| c.iter().copied().collect()).collect(),
                weight: e.weight,
            })
            .collect();
        FrameFile { ambient_dim: frame.ambient_dim(), entries }
    }
}

impl FrameFile {
    /// Validates and re-orthonormalizes every basis. Returns the frame and the
    /// largest correction that was applied.
    pub fn into_frame(self) -> Result<(WeightedFrame, f64)> {
        let d = self.ambient_dim;
        let mut worst: f64 = 0.0;
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in self.entries {
            for c in &e.basis {
                if c.len() != d {
                    return Err(FrameError::LengthMismatch { expected: d, found: c.len() });
                }
            }
            let k = e.basis.len();
            if k == 0 || k >= d {
                return Err(FrameError::Dimension(format!("basis of {k} columns in R^{d}")));
            }
            let raw = DMatrix::from_fn(d, k, |i, j| e.basis[j][i]);
            let q = orthonormalize(raw.clone())?;
            let correction = (&q - &raw).amax();
            if correction > MAX_BASIS_CORRECTION {
                return Err(FrameError::BasisCorrection(correction));
            }
            worst = worst.max(correction);
            entries.push(FrameEntry { subspace: Subspace::new(q)?, weight: e.weight });
        }
        Ok((WeightedFrame::new(d, entries)?, worst))
    }
}

pub fn frame_to_json(frame: &WeightedFrame) -> String {
    serde_json::to_string_pretty(&FrameFile::from(frame)).expect("frame serializes")
}

pub fn frame_from_json(text: &str) -> Result<WeightedFrame> {
    frame_from_json_with_correction(text).map(|(f, _)| f)
}

pub fn frame_from_json_with_correction(text: &str) -> Result<(WeightedFrame, f64)> {
    let file: FrameFile = serde_json::from_str(text)?;
    file.into_frame()
}

pub fn read_frame(path: impl AsRef<Path>) -> Result<WeightedFrame> {
    frame_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_frame(path: impl AsRef<Path>, frame: &WeightedFrame) -> Result<()> {
    std::fs::write(path, frame_to_json(frame))?;
    Ok(())
}

/// Parses a list of square row-major matrices of equal size.
pub fn generators_from_json(text: &str) -> Result<Vec<DMatrix<f64>>> {
    let raw: Vec<Vec<Vec<f64>>> = serde_json::from_str(text)?;
    let d = raw.first().map(|m| m.len()).unwrap_or(0);
    raw.into_iter()
        .map(|rows| {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(FrameError::Dimension(format!("generators must all be {d} x {d}")));
            }
            Ok(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
        })
        .collect()
}

pub fn generators_to_json(gens: &[DMatrix<f64>]) -> String {
    let raw: Vec<Vec<Vec<f64>>> = gens
        .iter()
        .map(|g| g.row_iter().map(|r| r.iter().copied().collect()).collect())
        .collect();
    serde_json::to_string_pretty(&raw).expect("matrices serialize")
}

pub fn complex_lines_from_json(text: &str) -> Result<ComplexLineSet> {
    let raw: Vec<Vec<f64>> = serde_json::from_str(text)?;
    ComplexLineSet::new(raw)
}

pub fn complex_lines_to_json(lines: &ComplexLineSet) -> String {
    serde_json::to_string_pretty(lines.vectors()).expect("vectors serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::tests::mercedes;

    #[test]
    fn frame_json_layout_is_column_lists() {
        let text = frame_to_json(&mercedes());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["ambient_dim"], 2);
        assert_eq!(v["entries"].as_array().unwrap().len(), 3);
        assert_eq!(v["entries"][0]["basis"].as_array().unwrap().len(), 1);
        assert_eq!(v["entries"][0]["basis"][0].as_array().unwrap().len(), 2);
    }

    #[test]
    fn round_trip_needs_no_correction() {
        let (back, corr) = frame_from_json_with_correction(&frame_to_json(&mercedes())).unwrap();
        assert!(corr <= 1e-10);
        for (a, b) in back.subspaces().zip(mercedes().subspaces()) {
            assert!(a.same_as(b));
        }
    }

    #[test]
    fn reader_rejects_bad_bases() {
        let sloppy = r#"{"ambient_dim": 2, "entries": [{"basis": [[2.0, 0.0]], "weight": 1.0}]}"#;
        assert!(matches!(frame_from_json(sloppy), Err(FrameError::BasisCorrection(_))));
        let slightly_off = r#"{"ambient_dim": 2, "entries": [{"basis": [[1.0000000001, 0.0]], "weight": 1.0}]}"#;
        assert!(frame_from_json(slightly_off).is_ok());
        let wrong_len = r#"{"ambient_dim": 3, "entries": [{"basis": [[1.0, 0.0]], "weight": 1.0}]}"#;
        assert!(matches!(frame_from_json(wrong_len), Err(FrameError::LengthMismatch { .. })));
        let bad_weight = r#"{"ambient_dim": 2, "entries": [{"basis": [[1.0, 0.0]], "weight": 0.0}]}"#;
        assert!(matches!(frame_from_json(bad_weight), Err(FrameError::NonPositiveWeight(_))));
        assert!(matches!(frame_from_json("{"), Err(FrameError::Json(_))));
    }

    #[test]
    fn generator_files_are_row_major() {
        let g = generators_from_json("[[[0.0, -1.0], [1.0, 0.0]]]").unwrap();
        assert_eq!(g[0][(0, 1)], -1.0);
        assert_eq!(generators_from_json(&generators_to_json(&g)).unwrap(), g);
        assert!(generators_from_json("[[[1.0, 0.0]]]").is_err());
    }
}
