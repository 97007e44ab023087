//! Forward reachability for discrete-time piecewise quadratic-affine
//! systems: x_{k+1} = f_m(x_k) whenever x_k lies in the guard polyhedron of
//! mode m. One step is guard-cut, map, union over modes — all exact, so the
//! computed sets are the exact reachable sets.
//!
//! Internally the engine keeps a list of binary-free pieces instead of
//! iterating on the materialized union: the switching encoding of the union
//! multiplies factor counts by a constant every step, so feeding unions
//! back into the loop blows up exponentially while the piece list grows
//! only with the number of guard crossings. The materialized per-step union
//! is still produced for output; [`step`] exposes the literal
//! single-set recursion for small instances.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{dim_err, HpzError};
use crate::feasibility::leaf_provably_empty;
use crate::nonlinear::{quadratic_map, quadratic_map_leaf, QuadraticAffineMap};
use crate::ops::{polyhedron_intersection, union, Halfspace};
use crate::set::HybridPolynomialZonotope;

/// Finite intersection of halfspaces.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyhedron {
    pub halfspaces: Vec<Halfspace>,
}

impl Polyhedron {
    pub fn new(halfspaces: Vec<Halfspace>) -> Self {
        Polyhedron { halfspaces }
    }

    /// The whole space (no constraints).
    pub fn universe() -> Self {
        Polyhedron { halfspaces: vec![] }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x, tol))
    }
}

/// One mode: dynamics valid on its guard region.
#[derive(Clone, Debug, PartialEq)]
pub struct Mode {
    pub guard: Polyhedron,
    pub dynamics: QuadraticAffineMap,
}

/// Piecewise quadratic-affine discrete-time system.
#[derive(Clone, Debug, PartialEq)]
pub struct PwnaModel {
    pub modes: Vec<Mode>,
}

impl PwnaModel {
    pub fn new(modes: Vec<Mode>) -> Result<Self, HpzError> {
        let model = PwnaModel { modes };
        model.validate()?;
        Ok(model)
    }

    /// State dimension (output of every mode's dynamics).
    pub fn dim(&self) -> usize {
        self.modes.first().map_or(0, |m| m.dynamics.output_dim())
    }

    /// Input dimension: what each dynamics map consumes beyond the state
    /// (state and input are stacked, state first).
    pub fn input_dim(&self) -> usize {
        self.modes
            .first()
            .map_or(0, |m| m.dynamics.input_dim() - m.dynamics.output_dim().min(m.dynamics.input_dim()))
    }

    pub fn validate(&self) -> Result<(), HpzError> {
        let n = self.dim();
        let n_in = self.modes.first().map_or(0, |m| m.dynamics.input_dim());
        if n_in < n {
            return Err(dim_err(
                "mode dynamics",
                n,
                n_in,
                "dynamics must consume at least the state",
            ));
        }
        for mode in &self.modes {
            if mode.dynamics.input_dim() != n_in || mode.dynamics.output_dim() != n {
                return Err(dim_err(
                    "mode dynamics",
                    n,
                    mode.dynamics.output_dim(),
                    "all modes must share input and output dimensions",
                ));
            }
            for h in &mode.guard.halfspaces {
                if h.normal.len() != n {
                    return Err(dim_err(
                        "guard normal",
                        n,
                        h.normal.len(),
                        "must match state dimension",
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Per-step bookkeeping of the piece-list engine.
#[derive(Clone, Debug, PartialEq)]
pub struct StepDiagnostics {
    pub step: usize,
    /// Pieces carried into the next step.
    pub pieces: usize,
    /// Mode/piece combinations discarded as provably empty.
    pub dropped_empty: usize,
    pub max_generators: usize,
    pub max_factors: usize,
    pub max_constraints: usize,
    /// Wall time of this step in milliseconds (only with `std`).
    pub millis: Option<f64>,
}

/// Output of [`reach`]: per-step sets (exact, materialized unions), the
/// underlying binary-free pieces, and diagnostics. Index 0 is step 1.
#[derive(Clone, Debug)]
pub struct ReachResult {
    pub initial: HybridPolynomialZonotope,
    pub sets: Vec<HybridPolynomialZonotope>,
    pub pieces: Vec<Vec<HybridPolynomialZonotope>>,
    pub diagnostics: Vec<StepDiagnostics>,
}

fn split_into_leaves(
    z: &HybridPolynomialZonotope,
    leaf_cap_log2: u32,
) -> Result<Vec<HybridPolynomialZonotope>, HpzError> {
    let leaves = z.leaf_count_checked(leaf_cap_log2)?;
    (0..leaves)
        .map(|idx| z.fix_binary(&z.binary_assignment(idx)))
        .collect()
}

fn advance_piece(
    model: &PwnaModel,
    piece: &HybridPolynomialZonotope,
    input_pieces: &[HybridPolynomialZonotope],
    next: &mut Vec<HybridPolynomialZonotope>,
    dropped: &mut usize,
) -> Result<(), HpzError> {
    for mode in &model.modes {
        let guarded = polyhedron_intersection(piece, &mode.guard.halfspaces)?;
        if leaf_provably_empty(&guarded) {
            *dropped += 1;
            continue;
        }
        if input_pieces.is_empty() {
            next.push(quadratic_map_leaf(&mode.dynamics, &guarded)?);
        } else {
            for u in input_pieces {
                let stacked = crate::ops::cartesian_product(&guarded, u)?;
                next.push(quadratic_map_leaf(&mode.dynamics, &stacked)?);
            }
        }
    }
    Ok(())
}

fn union_of(pieces: &[HybridPolynomialZonotope]) -> Result<HybridPolynomialZonotope, HpzError> {
    let mut acc = pieces[0].clone();
    for p in &pieces[1..] {
        acc = union(&acc, p)?;
    }
    Ok(acc)
}

/// Exact reachability over `steps` steps with the piece-list engine.
/// `input` is an optional per-step disturbance/control set: each mode map
/// then consumes the stacked vector (state, input).
pub fn reach(
    model: &PwnaModel,
    x0: &HybridPolynomialZonotope,
    input: Option<&HybridPolynomialZonotope>,
    steps: usize,
    leaf_cap_log2: u32,
) -> Result<ReachResult, HpzError> {
    model.validate()?;
    if x0.dim() != model.dim() {
        return Err(dim_err("initial set", model.dim(), x0.dim(), "must match state dimension"));
    }
    let input_pieces = match input {
        None => {
            if model.input_dim() != 0 {
                return Err(dim_err("input set", model.input_dim(), 0, "model dynamics expect an input"));
            }
            Vec::new()
        }
        Some(u) => {
            if u.dim() != model.input_dim() {
                return Err(dim_err("input set", model.input_dim(), u.dim(), "must match dynamics input arity"));
            }
            let mut ps = split_into_leaves(u, leaf_cap_log2)?;
            ps.retain(|p| !leaf_provably_empty(p));
            ps
        }
    };
    let mut pieces = split_into_leaves(x0, leaf_cap_log2)?;
    pieces.retain(|p| !leaf_provably_empty(p));
    if pieces.is_empty() {
        return Err(HpzError::AllModesEmpty { step: 0 });
    }
    let mut result = ReachResult {
        initial: x0.clone(),
        sets: Vec::with_capacity(steps),
        pieces: Vec::with_capacity(steps),
        diagnostics: Vec::with_capacity(steps),
    };
    for k in 1..=steps {
        #[cfg(feature = "std")]
        let t0 = std::time::Instant::now();
        let mut next = Vec::new();
        let mut dropped = 0usize;
        for piece in &pieces {
            advance_piece(model, piece, &input_pieces, &mut next, &mut dropped)?;
        }
        if next.is_empty() {
            return Err(HpzError::AllModesEmpty { step: k });
        }
        result.sets.push(union_of(&next)?);
        #[cfg(feature = "std")]
        let millis = Some(t0.elapsed().as_secs_f64() * 1e3);
        #[cfg(not(feature = "std"))]
        let millis = None;
        result.diagnostics.push(StepDiagnostics {
            step: k,
            pieces: next.len(),
            dropped_empty: dropped,
            max_generators: next.iter().map(|p| p.num_generators()).max().unwrap_or(0),
            max_factors: next.iter().map(|p| p.num_factors()).max().unwrap_or(0),
            max_constraints: next.iter().map(|p| p.num_constraints()).max().unwrap_or(0),
            millis,
        });
        result.pieces.push(next.clone());
        pieces = next;
    }
    Ok(result)
}

/// The literal single-set recursion: guard-cut the whole set, map it, union
/// the mode images. Exact but exponentially growing under iteration; only
/// suitable for a handful of steps.
pub fn step(
    model: &PwnaModel,
    z: &HybridPolynomialZonotope,
    input: Option<&HybridPolynomialZonotope>,
    step_index: usize,
    leaf_cap_log2: u32,
) -> Result<HybridPolynomialZonotope, HpzError> {
    model.validate()?;
    let cap = leaf_cap_log2;
    let mut images = Vec::new();
    for mode in &model.modes {
        let guarded = polyhedron_intersection(z, &mode.guard.halfspaces)?;
        if crate::feasibility::is_provably_empty(&guarded, cap)? {
            continue;
        }
        let fed = match input {
            None => guarded,
            Some(u) => crate::ops::cartesian_product(&guarded, u)?,
        };
        images.push(quadratic_map(&mode.dynamics, &fed, cap)?);
    }
    if images.is_empty() {
        return Err(HpzError::AllModesEmpty { step: step_index });
    }
    union_of(&images)
}
