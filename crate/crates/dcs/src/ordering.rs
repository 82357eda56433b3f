//! Ordering of phase-space axes by the h-function.
//!
//! The 2^n axis labels split into strips of constant h, with C(n,k)
//! elements in the strip h = k. Within a strip the tie-break is
//! ascending discrete-log exponent, which fixes a deterministic layout
//! (the strip interiors carry no intrinsic order).

use std::sync::Arc;

use thiserror::Error;

use crate::gf2n::{FieldElement, FieldSpec};
use crate::quasidist::{self, QuasiError};
use crate::states::StateVector;

#[derive(Debug, Error)]
pub enum OrderingError {
    #[error("symmetrize requires an h-ascending axis with no recentering shift")]
    NotHAscending,
    #[error(transparent)]
    Quasi(#[from] QuasiError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseScheme {
    HAscending,
    HSymmetric,
}

/// A permutation of the 2^n field elements laying out one grid axis,
/// together with the scheme that produced it and any recentering shift.
#[derive(Debug, Clone)]
pub struct AxisOrder {
    labels: Vec<FieldElement>,
    base: BaseScheme,
    shift: FieldElement,
}

impl AxisOrder {
    pub fn labels(&self) -> &[FieldElement] {
        &self.labels
    }

    pub fn base(&self) -> BaseScheme {
        self.base
    }

    pub fn shift(&self) -> FieldElement {
        self.shift
    }

    pub fn scheme_name(&self) -> String {
        let base = match self.base {
            BaseScheme::HAscending => "h_ascending",
            BaseScheme::HSymmetric => "h_symmetric",
        };
        if self.shift.is_zero() {
            base.to_string()
        } else {
            format!("{base}+recenter")
        }
    }

    /// Grid position of a given label.
    pub fn position_of(&self, label: FieldElement) -> usize {
        self.labels.iter().position(|&l| l == label).expect("label in axis")
    }

    /// Position of the distribution peak: index 0 for the h-ascending
    /// layout, the center cell 2^{n-1} for the symmetrized one.
    pub fn peak_position(&self, field: &FieldSpec) -> usize {
        match self.base {
            BaseScheme::HAscending => 0,
            BaseScheme::HSymmetric => field.size() / 2,
        }
    }

    pub fn label_strings(&self, field: &FieldSpec) -> Vec<String> {
        self.labels.iter().map(|&l| field.label(l)).collect()
    }
}

/// Sort key inside a strip: the discrete-log exponent, with zero first
/// overall (it is the only h = 0 element).
fn strip_key(field: &FieldSpec, e: FieldElement) -> (u32, u32) {
    (field.h(e), field.log_of(e).unwrap_or(0))
}

/// Lays out one axis according to the requested scheme.
pub fn order_axis(field: &Arc<FieldSpec>, scheme: BaseScheme) -> AxisOrder {
    let mut labels: Vec<FieldElement> = field.elements().collect();
    labels.sort_by_key(|&e| strip_key(field, e));
    let ascending = AxisOrder {
        labels,
        base: BaseScheme::HAscending,
        shift: FieldElement::ZERO,
    };
    match scheme {
        BaseScheme::HAscending => ascending,
        BaseScheme::HSymmetric => symmetrize(&ascending, field).expect("fresh h-ascending axis"),
    }
}

/// Shifts every label by γ so that the hump of D(γ,δ)|ξ⟩ lands where
/// the fiducial's sat: position i shows the label (ascending[i] + total
/// shift). Applying the same γ twice undoes the recentering.
pub fn recenter(order: &AxisOrder, field: &FieldSpec, gamma: FieldElement) -> AxisOrder {
    AxisOrder {
        labels: order
            .labels
            .iter()
            .map(|&l| field.add(l, gamma))
            .collect(),
        base: order.base,
        shift: field.add(order.shift, gamma),
    }
}

/// Redistributes each h-strip on both sides of the principal peak, which
/// moves to the center cell 2^{n-1}. Strips alternate right/left starting
/// right, so an odd leftover lands right of center; when one side runs
/// out of room the remainder spills to the other.
pub fn symmetrize(order: &AxisOrder, field: &FieldSpec) -> Result<AxisOrder, OrderingError> {
    if order.base != BaseScheme::HAscending || !order.shift.is_zero() {
        return Err(OrderingError::NotHAscending);
    }
    let size = field.size();
    let right_cap = size / 2 - 1;
    let left_cap = size / 2;
    let mut right: Vec<FieldElement> = Vec::with_capacity(right_cap);
    let mut left: Vec<FieldElement> = Vec::with_capacity(left_cap);
    let mut go_right = true;
    for &e in order.labels.iter().skip(1) {
        let side_right = if go_right {
            right.len() < right_cap
        } else {
            !(left.len() < left_cap)
        };
        if side_right {
            right.push(e);
        } else {
            left.push(e);
        }
        go_right = !go_right;
    }
    debug_assert_eq!(left.len(), left_cap);
    debug_assert_eq!(right.len(), right_cap);
    let mut labels = Vec::with_capacity(size);
    labels.extend(left.iter().rev());
    labels.push(FieldElement::ZERO);
    labels.extend(right.iter());
    Ok(AxisOrder {
        labels,
        base: BaseScheme::HSymmetric,
        shift: FieldElement::ZERO,
    })
}

/// Positions and heights of the two tallest local maxima of the ordered
/// Q grid of a state.
#[derive(Debug, Clone)]
pub struct TwoHumpReport {
    pub primary: (usize, usize, f64),
    pub secondary: (usize, usize, f64),
    /// Euclidean distance between the two maxima in grid coordinates.
    pub separation: f64,
    pub grid_side: usize,
}

/// Scans the h-ordered Q grid of ψ for local maxima (cells not exceeded
/// by any 8-neighborhood cell) and reports the two tallest.
pub fn two_hump_layout_check(psi: &StateVector, theta: f64) -> Result<TwoHumpReport, OrderingError> {
    let field = psi.field();
    let q = quasidist::q_function(psi, theta)?;
    let axis = order_axis(field, BaseScheme::HAscending);
    let side = field.size();
    let cell = |i: usize, j: usize| q.value(axis.labels[i], axis.labels[j]);
    let mut maxima: Vec<(usize, usize, f64)> = Vec::new();
    for i in 0..side {
        for j in 0..side {
            let v = cell(i, j);
            let mut is_max = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= side as i64 || nj >= side as i64 {
                        continue;
                    }
                    if cell(ni as usize, nj as usize) > v {
                        is_max = false;
                    }
                }
            }
            if is_max {
                maxima.push((i, j, v));
            }
        }
    }
    maxima.sort_by(|a, b| b.2.total_cmp(&a.2));
    let primary = maxima[0];
    let secondary = *maxima.get(1).unwrap_or(&primary);
    let dx = primary.0 as f64 - secondary.0 as f64;
    let dy = primary.1 as f64 - secondary.1 as f64;
    Ok(TwoHumpReport {
        primary,
        secondary,
        separation: (dx * dx + dy * dy).sqrt(),
        grid_side: side,
    })
}
