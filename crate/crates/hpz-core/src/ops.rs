//! Closed-form set operations. Every operation here is exact: the result
//! represents precisely the mathematical image/combination of its operands,
//! with no overapproximation. Each constructor is paired with a witness
//! helper that maps operand factor assignments to a feasible assignment of
//! the constructed set evaluating to the expected point; the tests (and the
//! sampling cross-checks downstream) lean on those.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{dim_err, HpzError};
use crate::matrix::{fabs, ExpMat, Mat};
use crate::set::{FactorAssignment, HybridPolynomialZonotope};

/// The halfspace { x | normal^T x <= offset }.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Self {
        Halfspace { normal, offset }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        let s: f64 = self.normal.iter().zip(x).map(|(a, b)| a * b).sum();
        s <= self.offset + tol
    }
}

/// Image under x -> M x. Only the generator blocks move; the factor space
/// and constraints are untouched.
pub fn linear_map(m: &Mat, z: &HybridPolynomialZonotope) -> Result<HybridPolynomialZonotope, HpzError> {
    if m.cols() != z.dim() {
        return Err(dim_err("linear map cols", z.dim(), m.cols(), "must match set dimension"));
    }
    let n = m.rows();
    let g_c = if z.num_generators() > 0 {
        m.matmul(z.continuous_generators())
    } else {
        Mat::zeros(n, 0)
    };
    let g_b = if z.binary_generators().cols() > 0 {
        m.matmul(z.binary_generators())
    } else {
        Mat::zeros(n, 0)
    };
    HybridPolynomialZonotope::new(
        m.mul_vec(z.center()),
        g_c,
        g_b,
        z.exponents().clone(),
        z.constraint_generators().clone(),
        z.binary_constraints().clone(),
        z.constraint_offsets().to_vec(),
        z.constraint_exponents().clone(),
    )
}

/// Minkowski sum. Factor spaces are kept independent, so both exponent
/// matrices go block-diagonal and the constraints simply stack.
pub fn minkowski_sum(
    z1: &HybridPolynomialZonotope,
    z2: &HybridPolynomialZonotope,
) -> Result<HybridPolynomialZonotope, HpzError> {
    if z1.dim() != z2.dim() {
        return Err(dim_err("minkowski sum", z1.dim(), z2.dim(), "operand dimensions differ"));
    }
    let c = z1
        .center()
        .iter()
        .zip(z2.center())
        .map(|(a, b)| a + b)
        .collect();
    let mut b = z1.constraint_offsets().to_vec();
    b.extend_from_slice(z2.constraint_offsets());
    HybridPolynomialZonotope::new(
        c,
        Mat::hstack(&[z1.continuous_generators(), z2.continuous_generators()]),
        Mat::hstack(&[z1.binary_generators(), z2.binary_generators()]),
        ExpMat::block_diag(&[z1.exponents(), z2.exponents()]),
        Mat::block_diag(&[z1.constraint_generators(), z2.constraint_generators()]),
        Mat::block_diag(&[z1.binary_constraints(), z2.binary_constraints()]),
        b,
        ExpMat::block_diag(&[z1.constraint_exponents(), z2.constraint_exponents()]),
    )
}

/// Cartesian product: stacked state spaces, independent factor spaces.
pub fn cartesian_product(
    z1: &HybridPolynomialZonotope,
    z2: &HybridPolynomialZonotope,
) -> Result<HybridPolynomialZonotope, HpzError> {
    let mut c = z1.center().to_vec();
    c.extend_from_slice(z2.center());
    let mut b = z1.constraint_offsets().to_vec();
    b.extend_from_slice(z2.constraint_offsets());
    // Generator blocks go block-diagonal, but degenerate 0-column blocks
    // must still contribute their state rows.
    let n1 = z1.dim();
    let n2 = z2.dim();
    let pad = |g: &Mat, rows: usize| -> Mat {
        if g.cols() == 0 {
            Mat::zeros(rows, 0)
        } else {
            g.clone()
        }
    };
    HybridPolynomialZonotope::new(
        c,
        Mat::block_diag(&[&pad(z1.continuous_generators(), n1), &pad(z2.continuous_generators(), n2)]),
        Mat::block_diag(&[&pad(z1.binary_generators(), n1), &pad(z2.binary_generators(), n2)]),
        ExpMat::block_diag(&[z1.exponents(), z2.exponents()]),
        Mat::block_diag(&[z1.constraint_generators(), z2.constraint_generators()]),
        Mat::block_diag(&[z1.binary_constraints(), z2.binary_constraints()]),
        b,
        ExpMat::block_diag(&[z1.constraint_exponents(), z2.constraint_exponents()]),
    )
}

/// Witness for [`minkowski_sum`] and [`cartesian_product`]: operand
/// assignments simply concatenate.
pub fn product_assignment(a1: &FactorAssignment, a2: &FactorAssignment) -> FactorAssignment {
    a1.concat(a2)
}

/// Generalized intersection { x in Z1 | M x in Z2 }. The factors of Z2
/// become fresh factors of the result carried by zero generator columns;
/// new constraint rows tie M(point of Z1) to (point of Z2).
pub fn generalized_intersection(
    z1: &HybridPolynomialZonotope,
    z2: &HybridPolynomialZonotope,
    m: &Mat,
) -> Result<HybridPolynomialZonotope, HpzError> {
    if m.cols() != z1.dim() {
        return Err(dim_err("intersection map cols", z1.dim(), m.cols(), "must match Z1 dimension"));
    }
    if m.rows() != z2.dim() {
        return Err(dim_err("intersection map rows", z2.dim(), m.rows(), "must match Z2 dimension"));
    }
    let n = z1.dim();
    let p = z2.dim();
    let (e1, e2) = (z1.num_factors(), z2.num_factors());
    let (g1, g2) = (z1.num_generators(), z2.num_generators());
    let (q1, q2) = (z1.num_constraint_generators(), z2.num_constraint_generators());
    let (nc1, nc2) = (z1.num_constraints(), z2.num_constraints());
    let (nb1, nb2) = (z1.num_binary(), z2.num_binary());

    let g_c = Mat::hstack(&[z1.continuous_generators(), &Mat::zeros(n, e2)]);
    let g_b = Mat::hstack(&[z1.binary_generators(), &Mat::zeros(n, nb2)]);
    let e = ExpMat::block_diag(&[z1.exponents(), &ExpMat::identity(e2)]);

    let mg_c = if g1 > 0 { m.matmul(z1.continuous_generators()) } else { Mat::zeros(p, 0) };
    let mg_b = if nb1 > 0 { m.matmul(z1.binary_generators()) } else { Mat::zeros(p, 0) };

    // A_c row blocks: Z1 constraints | Z2 constraints | coupling rows.
    // Columns: q1 | q2 | g1 | g2.
    let n_q = q1 + q2 + g1 + g2;
    let mut a_c = Mat::zeros(nc1 + nc2 + p, n_q);
    for i in 0..nc1 {
        for j in 0..q1 {
            a_c.set(i, j, z1.constraint_generators().get(i, j));
        }
    }
    for i in 0..nc2 {
        for j in 0..q2 {
            a_c.set(nc1 + i, q1 + j, z2.constraint_generators().get(i, j));
        }
    }
    for i in 0..p {
        for j in 0..g1 {
            a_c.set(nc1 + nc2 + i, q1 + q2 + j, mg_c.get(i, j));
        }
        for j in 0..g2 {
            a_c.set(nc1 + nc2 + i, q1 + q2 + g1 + j, -z2.continuous_generators().get(i, j));
        }
    }

    let mut a_b = Mat::zeros(nc1 + nc2 + p, nb1 + nb2);
    for i in 0..nc1 {
        for j in 0..z1.binary_constraints().cols() {
            a_b.set(i, j, z1.binary_constraints().get(i, j));
        }
    }
    for i in 0..nc2 {
        for j in 0..z2.binary_constraints().cols() {
            a_b.set(nc1 + i, nb1 + j, z2.binary_constraints().get(i, j));
        }
    }
    for i in 0..p {
        for j in 0..nb1 {
            a_b.set(nc1 + nc2 + i, j, mg_b.get(i, j));
        }
        for j in 0..nb2 {
            a_b.set(nc1 + nc2 + i, nb1 + j, -z2.binary_generators().get(i, j));
        }
    }

    let mc = m.mul_vec(z1.center());
    let mut b = z1.constraint_offsets().to_vec();
    b.extend_from_slice(z2.constraint_offsets());
    for i in 0..p {
        b.push(z2.center()[i] - mc[i]);
    }

    // R columns: R1 | R2 | E1 | E2, factor rows ordered (Z1 factors, Z2
    // factors).
    let mut r = ExpMat::zeros(e1 + e2, n_q);
    for k in 0..e1 {
        for j in 0..q1 {
            r.set(k, j, z1.constraint_exponents().get(k, j));
        }
        for j in 0..g1 {
            r.set(k, q1 + q2 + j, z1.exponents().get(k, j));
        }
    }
    for k in 0..e2 {
        for j in 0..q2 {
            r.set(e1 + k, q1 + j, z2.constraint_exponents().get(k, j));
        }
        for j in 0..g2 {
            r.set(e1 + k, q1 + q2 + g1 + j, z2.exponents().get(k, j));
        }
    }

    HybridPolynomialZonotope::new(z1.center().to_vec(), g_c, g_b, e, a_c, a_b, b, r)
}

/// Plain intersection Z1 with Z2 (identity map).
pub fn intersection(
    z1: &HybridPolynomialZonotope,
    z2: &HybridPolynomialZonotope,
) -> Result<HybridPolynomialZonotope, HpzError> {
    generalized_intersection(z1, z2, &Mat::identity(z1.dim()))
}

/// Witness for [`generalized_intersection`]: a point x with assignment `a1`
/// in Z1 such that M x has assignment `a2` in Z2 lives in the intersection
/// under the concatenated assignment.
pub fn intersection_assignment(a1: &FactorAssignment, a2: &FactorAssignment) -> FactorAssignment {
    a1.concat(a2)
}

/// Scalar bound data for a linear functional over the relaxed set; shared
/// between the halfspace cut and its witness.
fn functional_profile(
    z: &HybridPolynomialZonotope,
    h: &Halfspace,
    m: Option<&Mat>,
) -> Result<(Vec<f64>, f64, Vec<f64>, Vec<f64>, f64), HpzError> {
    let w = match m {
        Some(m) => {
            if m.rows() != h.normal.len() {
                return Err(dim_err("halfspace map rows", h.normal.len(), m.rows(), "must match normal length"));
            }
            if m.cols() != z.dim() {
                return Err(dim_err("halfspace map cols", z.dim(), m.cols(), "must match set dimension"));
            }
            m.vec_mul(&h.normal)
        }
        None => {
            if h.normal.len() != z.dim() {
                return Err(dim_err("halfspace normal", z.dim(), h.normal.len(), "must match set dimension"));
            }
            h.normal.clone()
        }
    };
    let wc: f64 = w.iter().zip(z.center()).map(|(a, b)| a * b).sum();
    let wg_c = if z.num_generators() > 0 {
        z.continuous_generators().vec_mul(&w)
    } else {
        vec![]
    };
    let wg_b = if z.binary_generators().cols() > 0 {
        z.binary_generators().vec_mul(&w)
    } else {
        vec![]
    };
    let lower = wc - wg_c.iter().map(|x| fabs(*x)).sum::<f64>() - wg_b.iter().map(|x| fabs(*x)).sum::<f64>();
    Ok((w, wc, wg_c, wg_b, lower))
}

/// Intersection with the halfspace { y | normal^T y <= offset }, applied to
/// M x (identity when `m` is None). Adds one slack factor that sweeps
/// normal^T M x across [lower bound, offset]; when even the relaxed set
/// lies strictly beyond the halfspace the intersection is empty and the
/// canonical empty set is returned (the slack construction would otherwise
/// manufacture spurious boundary points).
pub fn halfspace_intersection(
    z: &HybridPolynomialZonotope,
    h: &Halfspace,
    m: Option<&Mat>,
) -> Result<HybridPolynomialZonotope, HpzError> {
    let (_, wc, wg_c, wg_b, lower) = functional_profile(z, h, m)?;
    let n = z.dim();
    if h.offset < lower {
        return Ok(HybridPolynomialZonotope::empty(n));
    }
    let n_e = z.num_factors();
    let n_g = z.num_generators();
    let n_q = z.num_constraint_generators();
    let n_c = z.num_constraints();
    let half_span = 0.5 * (h.offset - lower);
    let mid = 0.5 * (h.offset + lower);

    let g_c = Mat::hstack(&[z.continuous_generators(), &Mat::zeros(n, 1)]);
    let e = ExpMat::block_diag(&[z.exponents(), &ExpMat::identity(1)]);

    // New constraint row: sum_i (w^T G_c)_i monom_i + w^T G_b xi_b
    //                     - half_span * xi_f = mid - w^T c.
    let mut a_c = Mat::zeros(n_c + 1, n_q + n_g + 1);
    for i in 0..n_c {
        for j in 0..n_q {
            a_c.set(i, j, z.constraint_generators().get(i, j));
        }
    }
    for j in 0..n_g {
        a_c.set(n_c, n_q + j, wg_c[j]);
    }
    a_c.set(n_c, n_q + n_g, -half_span);

    let nb = z.num_binary();
    let mut a_b = Mat::zeros(n_c + 1, nb);
    for i in 0..n_c {
        for j in 0..z.binary_constraints().cols() {
            a_b.set(i, j, z.binary_constraints().get(i, j));
        }
    }
    for (j, &v) in wg_b.iter().enumerate() {
        a_b.set(n_c, j, v);
    }

    let mut b = z.constraint_offsets().to_vec();
    b.push(mid - wc);

    let mut r = ExpMat::zeros(n_e + 1, n_q + n_g + 1);
    for k in 0..n_e {
        for j in 0..n_q {
            r.set(k, j, z.constraint_exponents().get(k, j));
        }
        for j in 0..n_g {
            r.set(k, n_q + j, z.exponents().get(k, j));
        }
    }
    r.set(n_e, n_q + n_g, 1);

    HybridPolynomialZonotope::new(
        z.center().to_vec(),
        g_c,
        z.binary_generators().clone(),
        e,
        a_c,
        a_b,
        b,
        r,
    )
}

/// Witness for [`halfspace_intersection`]: extends an assignment of the
/// original set with the slack value that satisfies the new constraint row.
/// Returns None when the point violates the halfspace (no witness exists).
pub fn halfspace_assignment(
    z: &HybridPolynomialZonotope,
    a: &FactorAssignment,
    h: &Halfspace,
    m: Option<&Mat>,
) -> Result<Option<FactorAssignment>, HpzError> {
    let (w, _, _, _, lower) = functional_profile(z, h, m)?;
    let x = z.evaluate(a)?;
    let s: f64 = w.iter().zip(&x).map(|(a, b)| a * b).sum();
    if s > h.offset {
        return Ok(None);
    }
    let xi_f = if h.offset > lower {
        ((2.0 * s - (h.offset + lower)) / (h.offset - lower)).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    let mut xi_c = a.xi_c.clone();
    xi_c.push(xi_f);
    Ok(Some(FactorAssignment { xi_c, xi_b: a.xi_b.clone() }))
}

/// Sequential cut with every halfspace of a polyhedron.
pub fn polyhedron_intersection(
    z: &HybridPolynomialZonotope,
    halfspaces: &[Halfspace],
) -> Result<HybridPolynomialZonotope, HpzError> {
    let mut out = z.clone();
    for h in halfspaces {
        out = halfspace_intersection(&out, h, None)?;
    }
    Ok(out)
}

/// Shape data of a compacted union operand, shared between [`union`] and
/// the witness helpers so indices line up exactly.
struct UnionLayout {
    e1: usize,
    e2: usize,
    b1: usize,
    b2: usize,
}

impl UnionLayout {
    fn n_r(&self) -> usize {
        self.e1 + self.e2 + self.b1 + self.b2
    }
}

fn union_operands(
    z1: &HybridPolynomialZonotope,
    z2: &HybridPolynomialZonotope,
) -> Result<
    (
        HybridPolynomialZonotope,
        HybridPolynomialZonotope,
        Vec<usize>,
        Vec<usize>,
        UnionLayout,
    ),
    HpzError,
> {
    if z1.dim() != z2.dim() {
        return Err(dim_err("union", z1.dim(), z2.dim(), "operand dimensions differ"));
    }
    // The switching construction requires every exponent column to contain a
    // positive entry (fixing a side nulls the other side's monomials by
    // driving its factors to zero); compaction guarantees that.
    let (z1c, rows1) = z1.compact_with_rows();
    let (z2c, rows2) = z2.compact_with_rows();
    let layout = UnionLayout {
        e1: z1c.num_factors(),
        e2: z2c.num_factors(),
        b1: z1c.num_binary(),
        b2: z2c.num_binary(),
    };
    Ok((z1c, z2c, rows1, rows2, layout))
}

/// Exact union of two sets of equal dimension. One extra binary factor
/// selects the side; slack-padded linear rows force the deselected side's
/// continuous factors to zero and its constraint rows to triviality.
/// Operands are compacted internally first.
pub fn union(
    z1: &HybridPolynomialZonotope,
    z2: &HybridPolynomialZonotope,
) -> Result<HybridPolynomialZonotope, HpzError> {
    let (z1, z2, _, _, l) = union_operands(z1, z2)?;
    let n = z1.dim();
    let (e1, e2, b1, b2) = (l.e1, l.e2, l.b1, l.b2);
    let n_r = l.n_r();
    let two_nr = 2 * n_r;
    let (q1, q2) = (z1.num_constraint_generators(), z2.num_constraint_generators());
    let (nc1, nc2) = (z1.num_constraints(), z2.num_constraints());

    let ones = |k: usize| vec![1.0; k];
    let gb1_sum = if b1 > 0 { z1.binary_generators().mul_vec(&ones(b1)) } else { vec![0.0; n] };
    let gb2_sum = if b2 > 0 { z2.binary_generators().mul_vec(&ones(b2)) } else { vec![0.0; n] };
    let ab1_sum = if b1 > 0 { z1.binary_constraints().mul_vec(&ones(b1)) } else { vec![0.0; nc1] };
    let ab2_sum = if b2 > 0 { z2.binary_constraints().mul_vec(&ones(b2)) } else { vec![0.0; nc2] };

    let c: Vec<f64> = (0..n)
        .map(|i| 0.5 * (z1.center()[i] + z2.center()[i] + gb1_sum[i] + gb2_sum[i]))
        .collect();
    let gb_hat: Vec<f64> = (0..n)
        .map(|i| 0.5 * (z1.center()[i] - z2.center()[i] - gb1_sum[i] + gb2_sum[i]))
        .collect();

    let g_c = Mat::hstack(&[
        z1.continuous_generators(),
        z2.continuous_generators(),
        &Mat::zeros(n, two_nr),
    ]);
    let g_b = Mat::hstack(&[
        z1.binary_generators(),
        z2.binary_generators(),
        &Mat::column(&gb_hat),
    ]);
    let e = ExpMat::block_diag(&[z1.exponents(), z2.exponents(), &ExpMat::identity(two_nr)]);

    // Coupling rows, in eight contiguous groups; each row owns one slack
    // factor with coefficient +1. Group / size / content:
    //   (a) e1:  +xi_c1 + slack + 1/2 xi_br = 1/2
    //   (b) e1:  -xi_c1 + slack + 1/2 xi_br = 1/2
    //   (c) e2:  +xi_c2 + slack - 1/2 xi_br = 1/2
    //   (d) e2:  -xi_c2 + slack - 1/2 xi_br = 1/2
    //   (e) b1:  1/2 xi_b1 + slack + 1/2 xi_br = 0
    //   (f) b1: -1/2 xi_b1 + slack + 1/2 xi_br = 1
    //   (g) b2:  1/2 xi_b2 + slack - 1/2 xi_br = 0
    //   (h) b2: -1/2 xi_b2 + slack - 1/2 xi_br = 1
    let n_q = q1 + q2 + e1 + e2 + two_nr;
    let n_c_total = nc1 + nc2 + two_nr;
    let mut a_c = Mat::zeros(n_c_total, n_q);
    for i in 0..nc1 {
        for j in 0..q1 {
            a_c.set(i, j, z1.constraint_generators().get(i, j));
        }
    }
    for i in 0..nc2 {
        for j in 0..q2 {
            a_c.set(nc1 + i, q1 + j, z2.constraint_generators().get(i, j));
        }
    }
    let row0 = nc1 + nc2;
    let lin0 = q1 + q2; // first linear (xi_c1 | xi_c2) column
    let slack0 = q1 + q2 + e1 + e2; // first slack column
    for j in 0..e1 {
        a_c.set(row0 + j, lin0 + j, 1.0); // (a)
        a_c.set(row0 + e1 + j, lin0 + j, -1.0); // (b)
    }
    for j in 0..e2 {
        a_c.set(row0 + 2 * e1 + j, lin0 + e1 + j, 1.0); // (c)
        a_c.set(row0 + 2 * e1 + e2 + j, lin0 + e1 + j, -1.0); // (d)
    }
    for j in 0..two_nr {
        a_c.set(row0 + j, slack0 + j, 1.0);
    }

    let br_col = b1 + b2;
    let mut a_b = Mat::zeros(n_c_total, b1 + b2 + 1);
    for i in 0..nc1 {
        for j in 0..z1.binary_constraints().cols() {
            a_b.set(i, j, z1.binary_constraints().get(i, j));
        }
        a_b.set(i, br_col, 0.5 * (-ab1_sum[i] - z1.constraint_offsets()[i]));
    }
    for i in 0..nc2 {
        for j in 0..z2.binary_constraints().cols() {
            a_b.set(nc1 + i, b1 + j, z2.binary_constraints().get(i, j));
        }
        a_b.set(nc1 + i, br_col, 0.5 * (z2.constraint_offsets()[i] + ab2_sum[i]));
    }
    let bin0 = row0 + 2 * e1 + 2 * e2; // first (e)-group row
    for j in 0..b1 {
        a_b.set(bin0 + j, j, 0.5); // (e)
        a_b.set(bin0 + b1 + j, j, -0.5); // (f)
    }
    for j in 0..b2 {
        a_b.set(bin0 + 2 * b1 + j, b1 + j, 0.5); // (g)
        a_b.set(bin0 + 2 * b1 + b2 + j, b1 + j, -0.5); // (h)
    }
    // xi_br column of the coupling rows: +1/2 for Z1-side groups (a, b, e,
    // f), -1/2 for Z2-side groups (c, d, g, h).
    for j in 0..e1 {
        a_b.set(row0 + j, br_col, 0.5);
        a_b.set(row0 + e1 + j, br_col, 0.5);
    }
    for j in 0..e2 {
        a_b.set(row0 + 2 * e1 + j, br_col, -0.5);
        a_b.set(row0 + 2 * e1 + e2 + j, br_col, -0.5);
    }
    for j in 0..b1 {
        a_b.set(bin0 + j, br_col, 0.5);
        a_b.set(bin0 + b1 + j, br_col, 0.5);
    }
    for j in 0..b2 {
        a_b.set(bin0 + 2 * b1 + j, br_col, -0.5);
        a_b.set(bin0 + 2 * b1 + b2 + j, br_col, -0.5);
    }

    let mut b = Vec::with_capacity(n_c_total);
    for i in 0..nc1 {
        b.push(0.5 * (z1.constraint_offsets()[i] - ab1_sum[i]));
    }
    for i in 0..nc2 {
        b.push(0.5 * (z2.constraint_offsets()[i] - ab2_sum[i]));
    }
    b.extend(core::iter::repeat(0.5).take(2 * e1 + 2 * e2));
    b.extend(core::iter::repeat(0.0).take(b1));
    b.extend(core::iter::repeat(1.0).take(b1));
    b.extend(core::iter::repeat(0.0).take(b2));
    b.extend(core::iter::repeat(1.0).take(b2));

    // R: factor rows ordered (xi_c1, xi_c2, slacks); constraint-generator
    // columns ordered (R1 | R2 | linear xi_c columns | slack columns). The
    // linear and slack columns carry plain degree-1 exponents.
    let n_e_total = e1 + e2 + two_nr;
    let mut r = ExpMat::zeros(n_e_total, n_q);
    for k in 0..e1 {
        for j in 0..q1 {
            r.set(k, j, z1.constraint_exponents().get(k, j));
        }
        r.set(k, lin0 + k, 1);
    }
    for k in 0..e2 {
        for j in 0..q2 {
            r.set(e1 + k, q1 + j, z2.constraint_exponents().get(k, j));
        }
        r.set(e1 + k, lin0 + e1 + k, 1);
    }
    for k in 0..two_nr {
        r.set(e1 + e2 + k, slack0 + k, 1);
    }

    HybridPolynomialZonotope::new(c, g_c, g_b, e, a_c, a_b, b, r)
}

fn select(values: &[f64], keep: &[usize]) -> Vec<f64> {
    keep.iter().map(|&k| values[k]).collect()
}

fn union_assignment(
    z1: &HybridPolynomialZonotope,
    z2: &HybridPolynomialZonotope,
    a: &FactorAssignment,
    left: bool,
) -> Result<FactorAssignment, HpzError> {
    let (z1c, z2c, rows1, rows2, l) = union_operands(z1, z2)?;
    let own = if left { &z1c } else { &z2c };
    let rows = if left { &rows1 } else { &rows2 };
    if a.xi_c.len() != (if left { z1.num_factors() } else { z2.num_factors() })
        || a.xi_b.len() != own.num_binary()
    {
        return Err(HpzError::LengthMismatch {
            context: "union operand assignment",
            expected: own.num_factors(),
            found: a.xi_c.len(),
        });
    }
    let xi_own = select(&a.xi_c, rows);
    let (e1, e2, b1, b2) = (l.e1, l.e2, l.b1, l.b2);
    let mut xi_c = Vec::with_capacity(e1 + e2 + 2 * l.n_r());
    let mut slack = Vec::with_capacity(2 * l.n_r());
    if left {
        xi_c.extend_from_slice(&xi_own);
        xi_c.extend(core::iter::repeat(0.0).take(e2));
        slack.extend(xi_own.iter().map(|x| -x)); // (a)
        slack.extend(xi_own.iter().copied()); // (b)
        slack.extend(core::iter::repeat(1.0).take(2 * e2)); // (c), (d)
        slack.extend(a.xi_b.iter().map(|x| -0.5 - 0.5 * x)); // (e)
        slack.extend(a.xi_b.iter().map(|x| 0.5 + 0.5 * x)); // (f)
        slack.extend(core::iter::repeat(1.0).take(2 * b2)); // (g), (h)
    } else {
        xi_c.extend(core::iter::repeat(0.0).take(e1));
        xi_c.extend_from_slice(&xi_own);
        slack.extend(core::iter::repeat(1.0).take(2 * e1)); // (a), (b)
        slack.extend(xi_own.iter().map(|x| -x)); // (c)
        slack.extend(xi_own.iter().copied()); // (d)
        slack.extend(core::iter::repeat(1.0).take(2 * b1)); // (e), (f)
        slack.extend(a.xi_b.iter().map(|x| -0.5 - 0.5 * x)); // (g)
        slack.extend(a.xi_b.iter().map(|x| 0.5 + 0.5 * x)); // (h)
    }
    xi_c.extend(slack);
    let mut xi_b = Vec::with_capacity(b1 + b2 + 1);
    if left {
        xi_b.extend_from_slice(&a.xi_b);
        xi_b.extend(core::iter::repeat(-1.0).take(b2));
        xi_b.push(1.0);
    } else {
        xi_b.extend(core::iter::repeat(-1.0).take(b1));
        xi_b.extend_from_slice(&a.xi_b);
        xi_b.push(-1.0);
    }
    Ok(FactorAssignment { xi_c, xi_b })
}

/// Witness for [`union`] from the Z1 side: maps an assignment of (the
/// uncompacted) Z1 to an assignment of union(Z1, Z2) with equal value.
pub fn union_assignment_left(
    z1: &HybridPolynomialZonotope,
    z2: &HybridPolynomialZonotope,
    a1: &FactorAssignment,
) -> Result<FactorAssignment, HpzError> {
    union_assignment(z1, z2, a1, true)
}

/// Witness for [`union`] from the Z2 side.
pub fn union_assignment_right(
    z1: &HybridPolynomialZonotope,
    z2: &HybridPolynomialZonotope,
    a2: &FactorAssignment,
) -> Result<FactorAssignment, HpzError> {
    union_assignment(z1, z2, a2, false)
}
