//! Adaptive Simpson quadrature with an explicit panel budget.

use serde::{Deserialize, Serialize};

/// Absolute tolerance shared out across panels in proportion to their width.
pub const ABS_TOL: f64 = 1e-13;

/// Hard cap on accepted panels.
pub const MAX_PANELS: usize = 1 << 20;

const INITIAL_PANELS: usize = 16;

/// A quadrature value with its error estimate and the number of panels used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> QuadratureResult
where
    F: Fn(f64) -> f64,
{
    if b <= a {
        return QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            panels: 0,
        };
    }
    let width = b - a;
    let mut stack: Vec<Panel> = (0..INITIAL_PANELS)
        .map(|k| {
            let pa = a + width * k as f64 / INITIAL_PANELS as f64;
            let pb = if k + 1 == INITIAL_PANELS {
                b
            } else {
                a + width * (k + 1) as f64 / INITIAL_PANELS as f64
            };
            let (fa, fm, fb) = (f(pa), f(0.5 * (pa + pb)), f(pb));
            Panel {
                a: pa,
                b: pb,
                fa,
                fm,
                fb,
                whole: simpson(pa, pb, fa, fm, fb),
            }
        })
        .collect();

    let mut value = 0.0;
    let mut err = 0.0;
    let mut panels = 0usize;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let (lm, rm) = (0.5 * (p.a + m), 0.5 * (m + p.b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let diff = left + right - p.whole;
        let local_tol = tol * (p.b - p.a) / width;
        let budget_left = panels + stack.len() + 2 >= MAX_PANELS;
        if diff.abs() <= 15.0 * local_tol || budget_left || m <= p.a || m >= p.b {
            value += left + right + diff / 15.0;
            err += diff.abs() / 15.0;
            panels += 1;
        } else {
            stack.push(Panel {
                a: p.a,
                b: m,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                whole: left,
            });
            stack.push(Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
            });
        }
    }
    QuadratureResult {
        value,
        abs_error_estimate: err,
        panels,
    }
}
