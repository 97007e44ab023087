//! JSON model files: schema, parsing with field-path errors, and
//! conversion into the library types.

use std::path::Path;

use serde::{Deserialize, Serialize};

use hpz_core::{
    ExpMat, Halfspace, HybridPolynomialZonotope, Mat, Mode, Polyhedron, PwnaModel,
    QuadraticAffineMap, SampleParams,
};

use crate::error::CliError;

/// Top-level model document.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub state_dim: usize,
    pub horizon: usize,
    pub modes: Vec<ModeSpec>,
    pub initial_set: SetSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_set: Option<SetSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub guard: GuardSpec,
    /// One quadratic-form matrix per state coordinate.
    pub quadratic: Vec<Vec<Vec<f64>>>,
    pub linear: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GuardSpec {
    #[serde(rename = "L")]
    pub l: Vec<Vec<f64>>,
    pub rho: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    pub center: Vec<f64>,
    pub generators: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binary_generators: Option<Vec<Vec<f64>>>,
    /// Row k gives the exponents of factor k across all generators; omitted
    /// means identity (plain zonotope factors).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<ConstraintSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSpec {
    #[serde(rename = "A_c")]
    pub a_c: Vec<Vec<f64>>,
    #[serde(rename = "A_b", default, skip_serializing_if = "Option::is_none")]
    pub a_b: Option<Vec<Vec<f64>>>,
    pub b: Vec<f64>,
    #[serde(rename = "R")]
    pub r: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SamplingSpec {
    #[serde(default = "default_grid_res")]
    pub grid_res: usize,
    #[serde(default = "default_max_points")]
    pub max_points: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_grid_res() -> usize {
    7
}

fn default_max_points() -> usize {
    4000
}

impl Default for SamplingSpec {
    fn default() -> Self {
        SamplingSpec {
            grid_res: default_grid_res(),
            max_points: default_max_points(),
            seed: 0,
        }
    }
}

impl SamplingSpec {
    pub fn to_params(&self) -> SampleParams {
        SampleParams::new(self.grid_res, self.max_points, self.seed)
    }
}

fn rect(rows: &[Vec<f64>], field: &str) -> Result<Mat, CliError> {
    let width = rows.first().map_or(0, |r| r.len());
    for (i, r) in rows.iter().enumerate() {
        if r.len() != width {
            return Err(CliError::Dimension {
                field: format!("{}[{}]", field, i),
                expected: width,
                found: r.len(),
            });
        }
    }
    Ok(Mat::from_rows(rows))
}

fn rect_u32(rows: &[Vec<u32>], field: &str) -> Result<ExpMat, CliError> {
    let width = rows.first().map_or(0, |r| r.len());
    for (i, r) in rows.iter().enumerate() {
        if r.len() != width {
            return Err(CliError::Dimension {
                field: format!("{}[{}]", field, i),
                expected: width,
                found: r.len(),
            });
        }
    }
    Ok(ExpMat::from_rows(rows))
}

fn expect(field: &str, expected: usize, found: usize) -> Result<(), CliError> {
    if expected == found {
        Ok(())
    } else {
        Err(CliError::Dimension {
            field: field.to_string(),
            expected,
            found,
        })
    }
}

impl SetSpec {
    pub fn to_set(&self, dim: usize, field: &str) -> Result<HybridPolynomialZonotope, CliError> {
        expect(&format!("{}.center", field), dim, self.center.len())?;
        let g_c = rect(&self.generators, &format!("{}.generators", field))?;
        if g_c.cols() > 0 {
            expect(&format!("{}.generators", field), dim, g_c.rows())?;
        }
        let n_g = g_c.cols();
        let g_b = match &self.binary_generators {
            Some(rows) => {
                let m = rect(rows, &format!("{}.binary_generators", field))?;
                expect(&format!("{}.binary_generators", field), dim, m.rows())?;
                m
            }
            None => Mat::zeros(dim, 0),
        };
        let e = match &self.exponents {
            Some(rows) => {
                let m = rect_u32(rows, &format!("{}.exponents", field))?;
                expect(&format!("{}.exponents (columns)", field), n_g, m.cols())?;
                m
            }
            None => ExpMat::identity(n_g),
        };
        let n_e = e.rows();
        let (a_c, a_b, b, r) = match &self.constraints {
            Some(cs) => {
                let a_c = rect(&cs.a_c, &format!("{}.constraints.A_c", field))?;
                let n_c = cs.b.len();
                if a_c.cols() > 0 {
                    expect(&format!("{}.constraints.A_c (rows)", field), n_c, a_c.rows())?;
                }
                let a_b = match &cs.a_b {
                    Some(rows) => {
                        let m = rect(rows, &format!("{}.constraints.A_b", field))?;
                        if m.cols() > 0 {
                            expect(&format!("{}.constraints.A_b (rows)", field), n_c, m.rows())?;
                            expect(
                                &format!("{}.constraints.A_b (columns)", field),
                                g_b.cols(),
                                m.cols(),
                            )?;
                        }
                        m
                    }
                    None => Mat::zeros(n_c, 0),
                };
                let r = rect_u32(&cs.r, &format!("{}.constraints.R", field))?;
                expect(&format!("{}.constraints.R (rows)", field), n_e, r.rows())?;
                expect(&format!("{}.constraints.R (columns)", field), a_c.cols(), r.cols())?;
                (a_c, a_b, cs.b.clone(), r)
            }
            None => (Mat::zeros(0, 0), Mat::zeros(0, 0), vec![], ExpMat::zeros(n_e, 0)),
        };
        HybridPolynomialZonotope::new(self.center.clone(), g_c, g_b, e, a_c, a_b, b, r)
            .map_err(CliError::Core)
    }

    /// Serialization of a library set (inverse of [`to_set`]).
    pub fn from_set(z: &HybridPolynomialZonotope) -> SetSpec {
        let mat_rows = |m: &Mat| (0..m.rows()).map(|i| m.row(i).to_vec()).collect::<Vec<_>>();
        let exp_rows = |m: &ExpMat| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect::<Vec<u32>>())
                .collect::<Vec<_>>()
        };
        let constraints = if z.num_constraints() > 0 {
            Some(ConstraintSpec {
                a_c: mat_rows(z.constraint_generators()),
                a_b: if z.binary_constraints().cols() > 0 {
                    Some(mat_rows(z.binary_constraints()))
                } else {
                    None
                },
                b: z.constraint_offsets().to_vec(),
                r: exp_rows(z.constraint_exponents()),
            })
        } else {
            None
        };
        SetSpec {
            center: z.center().to_vec(),
            generators: mat_rows(z.continuous_generators()),
            binary_generators: if z.binary_generators().cols() > 0 {
                Some(mat_rows(z.binary_generators()))
            } else {
                None
            },
            exponents: Some(exp_rows(z.exponents())),
            constraints,
        }
    }
}

impl ModeSpec {
    fn to_mode(&self, n_x: usize, n_in: usize, field: &str) -> Result<Mode, CliError> {
        let l = rect(&self.guard.l, &format!("{}.guard.L", field))?;
        expect(&format!("{}.guard.rho", field), l.rows(), self.guard.rho.len())?;
        let mut halfspaces = Vec::with_capacity(l.rows());
        for i in 0..l.rows() {
            expect(&format!("{}.guard.L[{}]", field, i), n_x, l.cols())?;
            halfspaces.push(Halfspace::new(l.row(i).to_vec(), self.guard.rho[i]));
        }
        expect(&format!("{}.quadratic (count)", field), n_x, self.quadratic.len())?;
        let mut q = Vec::with_capacity(n_x);
        for (r, rows) in self.quadratic.iter().enumerate() {
            let m = rect(rows, &format!("{}.quadratic[{}]", field, r))?;
            expect(&format!("{}.quadratic[{}] (rows)", field, r), n_in, m.rows())?;
            expect(&format!("{}.quadratic[{}] (columns)", field, r), n_in, m.cols())?;
            q.push(m);
        }
        let a = rect(&self.linear, &format!("{}.linear", field))?;
        expect(&format!("{}.linear (rows)", field), n_x, a.rows())?;
        expect(&format!("{}.linear (columns)", field), n_in, a.cols())?;
        expect(&format!("{}.offset", field), n_x, self.offset.len())?;
        Ok(Mode {
            guard: Polyhedron::new(halfspaces),
            dynamics: QuadraticAffineMap::new(q, a, self.offset.clone()).map_err(CliError::Core)?,
        })
    }
}

/// Everything a run needs, converted and validated.
#[derive(Clone, Debug)]
pub struct LoadedModel {
    pub model: PwnaModel,
    pub initial: HybridPolynomialZonotope,
    pub input: Option<HybridPolynomialZonotope>,
    pub horizon: usize,
    pub sampling: SamplingSpec,
}

impl ModelFile {
    pub fn to_loaded(&self) -> Result<LoadedModel, CliError> {
        if self.modes.is_empty() {
            return Err(CliError::Schema {
                field: "modes".into(),
                message: "at least one mode is required".into(),
            });
        }
        if self.state_dim == 0 {
            return Err(CliError::Schema {
                field: "state_dim".into(),
                message: "state dimension must be positive".into(),
            });
        }
        let n_x = self.state_dim;
        let input = self
            .input_set
            .as_ref()
            .map(|s| {
                let dim = s.center.len();
                s.to_set(dim, "input_set")
            })
            .transpose()?;
        let n_in = n_x + input.as_ref().map_or(0, |u| u.dim());
        let modes = self
            .modes
            .iter()
            .enumerate()
            .map(|(i, m)| m.to_mode(n_x, n_in, &format!("modes[{}]", i)))
            .collect::<Result<Vec<_>, _>>()?;
        let model = PwnaModel::new(modes).map_err(CliError::Core)?;
        let initial = self.initial_set.to_set(n_x, "initial_set")?;
        Ok(LoadedModel {
            model,
            initial,
            input,
            horizon: self.horizon,
            sampling: self.sampling.clone().unwrap_or_default(),
        })
    }
}

pub fn parse_model_str(text: &str) -> Result<ModelFile, CliError> {
    serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            CliError::Schema {
                field: format!("line {} column {}", e.line(), e.column()),
                message: e.to_string(),
            }
        } else {
            CliError::Parse { message: e.to_string() }
        }
    })
}

pub fn parse_model(path: &Path) -> Result<ModelFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_model_str(&text)
}

pub fn write_model(file: &ModelFile) -> String {
    serde_json::to_string_pretty(file).expect("model serialization cannot fail")
}
