use crate::scalar::Complex;

use super::{conflict, Cbba, EvidenceError, Frame};

/// One feasible grid point of the conflict surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub x: f64,
    pub y: f64,
    pub k_abs: f64,
}

const FEASIBILITY_TOL: f64 = 1e-9;

/// Conflict magnitude `|K|` between `m1 = {A: x+yi, B: (1-x)-yi}` and the
/// fixed `m2 = {A: 0.5+0.5i, B: 0.5-0.5i}` over the grid
/// `x, y = -1, -1+step, ...` within `[-1, 1]`.
///
/// Points violating either feasibility condition `x^2+y^2 <= 1` or
/// `(1-x)^2+y^2 <= 1` are omitted. Rows are emitted in ascending `x`,
/// then ascending `y`.
pub fn conflict_surface(grid_step: f64) -> Result<Vec<SurfacePoint>, EvidenceError> {
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return Err(EvidenceError::BadGridStep);
    }
    let frame = Frame::new(["A", "B"]).expect("static frame");
    let m2 = Cbba::from_labels(
        frame.clone(),
        &[
            (&["A"], Complex::new(0.5, 0.5)),
            (&["B"], Complex::new(0.5, -0.5)),
        ],
    )
    .expect("static masses");

    let axis: Vec<f64> = {
        let mut v = Vec::new();
        let mut i = 0u32;
        loop {
            let t = -1.0 + f64::from(i) * grid_step;
            if t > 1.0 + 1e-12 {
                break;
            }
            v.push(t.min(1.0));
            i += 1;
        }
        v
    };

    let mut rows = Vec::new();
    for &x in &axis {
        for &y in &axis {
            if x * x + y * y > 1.0 + FEASIBILITY_TOL {
                continue;
            }
            if (1.0 - x) * (1.0 - x) + y * y > 1.0 + FEASIBILITY_TOL {
                continue;
            }
            let m1 = Cbba::from_labels(
                frame.clone(),
                &[
                    (&["A"], Complex::new(x, y)),
                    (&["B"], Complex::new(1.0 - x, -y)),
                ],
            )
            .expect("labels are in frame");
            let report = conflict(&m1, &m2)?;
            rows.push(SurfacePoint { x, y, k_abs: report.k_abs });
        }
    }
    Ok(rows)
}
