//! Plain-text grid dump.

use std::fmt::Write;

use crate::field::LinearizationField;
use crate::grid::FieldGrid;
use crate::verify::VerifyReport;

/// Header of [`dump_grid`]; one row per node follows, whitespace separated.
pub const DUMP_HEADER: &str = "# x y s t z L1_11 L1_12 L1_22 L2_11 L2_12 L2_22 fgh p1";

/// One row per node, rows ordered by `y` then `x`. Missing values print as `nan`
/// (`p1` is undefined on the two-node boundary layer).
pub fn dump_grid(grid: &FieldGrid, field: Option<&LinearizationField>, report: Option<&VerifyReport>) -> String {
    let mut out = String::new();
    writeln!(out, "# grid n={} h={} center=({}, {})", grid.n(), grid.spec.h, grid.center.0, grid.center.1).unwrap();
    writeln!(out, "{DUMP_HEADER}").unwrap();
    let n = grid.n();
    for j in 0..n {
        for i in 0..n {
            let k = grid.index(i, j);
            let (x, y) = grid.coords(i, j);
            let t = grid.t.as_ref().map_or(f64::NAN, |v| v[k]);
            let z = grid.z.as_ref().map_or(f64::NAN, |v| v[k]);
            let l = field.map_or([f64::NAN; 6], |f| f.components[k]);
            let p1 = report.and_then(|r| r.p1_nodes[k]).unwrap_or(f64::NAN);
            write!(out, "{x:.6} {y:.6} {:.15e} {t:.15e} {z:.15e}", grid.s[k]).unwrap();
            for c in l {
                write!(out, " {c:.15e}").unwrap();
            }
            writeln!(out, " {:.3e} {p1:.3e}", grid.slopes[k].fgh).unwrap();
        }
    }
    out
}
