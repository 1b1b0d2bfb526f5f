//! Jordan spectral decomposition, functional calculus and operator spectra.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{Element, Simple, VOperator};
use crate::error::{JordanError, Result};
use crate::tol;

/// Eigenvalues of `x` with a complete orthogonal system of idempotents.
#[derive(Debug, Clone)]
pub struct SpectralData {
    /// Distinct eigenvalues, ascending (after cluster merging).
    pub eigenvalues: Vec<f64>,
    /// `frame[i]` is the idempotent belonging to `eigenvalues[i]`.
    pub frame: Vec<Element>,
    /// Rank of each idempotent.
    pub multiplicities: Vec<usize>,
}

impl SpectralData {
    /// `sum_i f(lambda_i) e_i`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Element {
        let alg = self.frame[0].algebra();
        self.eigenvalues.iter().zip(&self.frame).fold(Element::zero(alg), |acc, (&l, e)| &acc + &e.scale(f(l)))
    }

    pub fn reconstruct(&self) -> Element {
        self.map(|l| l)
    }

    /// Eigenvalues repeated according to multiplicity.
    pub fn with_multiplicity(&self) -> Vec<f64> {
        self.eigenvalues.iter().zip(&self.multiplicities).flat_map(|(&l, &m)| std::iter::repeat_n(l, m)).collect()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }
}

struct Piece {
    lambda: f64,
    /// Idempotent coordinates on its own block only.
    block: usize,
    coords: Vec<f64>,
}

fn real_block_matrix(m: &crate::algebra::CMatrix) -> DMatrix<f64> {
    m.map(|z| z.re)
}

fn block_pieces(x: &Element, with_vectors: bool) -> Vec<Piece> {
    let alg = x.algebra();
    let mut pieces = Vec::new();
    for (bi, b) in alg.blocks().iter().enumerate() {
        let xs = b.slice(x.as_slice());
        match b.simple {
            Simple::Matrix { complex: false, n } => {
                let m = real_block_matrix(&b.to_matrix(xs));
                if !with_vectors {
                    for l in m.symmetric_eigenvalues().iter() {
                        pieces.push(Piece { lambda: *l, block: bi, coords: Vec::new() });
                    }
                    continue;
                }
                let eig = SymmetricEigen::new(m);
                for k in 0..n {
                    let v = eig.eigenvectors.column(k);
                    let p = (v * v.transpose()).map(|r| Complex64::new(r, 0.0));
                    let mut c = vec![0.0; b.dim];
                    b.write_matrix(&p, &mut c);
                    pieces.push(Piece { lambda: eig.eigenvalues[k], block: bi, coords: c });
                }
            }
            Simple::Matrix { complex: true, n } => {
                let m = b.to_matrix(xs);
                if !with_vectors {
                    for l in m.symmetric_eigenvalues().iter() {
                        pieces.push(Piece { lambda: *l, block: bi, coords: Vec::new() });
                    }
                    continue;
                }
                let eig = SymmetricEigen::new(m);
                for k in 0..n {
                    let v = eig.eigenvectors.column(k);
                    let p = v * v.adjoint();
                    let mut c = vec![0.0; b.dim];
                    b.write_matrix(&p, &mut c);
                    pieces.push(Piece { lambda: eig.eigenvalues[k], block: bi, coords: c });
                }
            }
            Simple::Spin { d: 1 } => {
                pieces.push(Piece { lambda: xs[0], block: bi, coords: vec![1.0] });
            }
            Simple::Spin { d } => {
                let s = xs[0];
                let r = xs[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
                let mut dir = vec![0.0; d - 1];
                if r > 0.0 {
                    dir.iter_mut().zip(&xs[1..]).for_each(|(o, v)| *o = v / r);
                } else {
                    dir[0] = 1.0;
                }
                for sign in [-1.0, 1.0] {
                    let mut c = vec![0.5; 1];
                    c.extend(dir.iter().map(|v| 0.5 * sign * v));
                    pieces.push(Piece { lambda: s + sign * r, block: bi, coords: c });
                }
            }
        }
    }
    pieces.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    pieces
}

/// Ascending Jordan eigenvalues with multiplicity, without cluster merging.
pub(crate) fn raw_eigenvalues(x: &Element) -> Vec<f64> {
    block_pieces(x, false).into_iter().map(|p| p.lambda).collect()
}

/// Spectral decomposition `x = sum_i lambda_i e_i`.
///
/// Eigenvalues within `1e-7 * max(1, |x|)` of their neighbour are fused and
/// the corresponding idempotents summed.
pub fn spectral_decompose(x: &Element) -> SpectralData {
    let alg = x.algebra();
    let pieces = block_pieces(x, true);
    let scale = pieces.iter().fold(1.0_f64, |m, p| m.max(p.lambda.abs()));
    let gap = tol::CLUSTER * scale;

    let mut eigenvalues = Vec::new();
    let mut frame: Vec<Vec<f64>> = Vec::new();
    let mut multiplicities = Vec::new();
    let mut sums: Vec<f64> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for p in pieces {
        if eigenvalues.is_empty() || p.lambda - prev > gap {
            eigenvalues.push(p.lambda);
            sums.push(0.0);
            frame.push(vec![0.0; alg.dim()]);
            multiplicities.push(0);
        }
        let k = eigenvalues.len() - 1;
        sums[k] += p.lambda;
        multiplicities[k] += 1;
        let b = &alg.blocks()[p.block];
        for (o, c) in b.slice_mut(&mut frame[k]).iter_mut().zip(&p.coords) {
            *o += c;
        }
        prev = p.lambda;
    }
    for (l, (s, m)) in eigenvalues.iter_mut().zip(sums.iter().zip(&multiplicities)) {
        *l = s / *m as f64;
    }
    let frame = frame.into_iter().map(|c| Element::new(alg, c).expect("finite idempotent")).collect();
    SpectralData { eigenvalues, frame, multiplicities }
}

/// Scalar functions available to the functional calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarFn {
    Sqrt,
    Log,
    Exp,
    Inv,
    ChiPlus,
    ChiMinus,
    Abs,
}

impl std::str::FromStr for ScalarFn {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ScalarFn::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown function {s:?}; expected sqrt, log, exp, inv, chi_plus, chi_minus or abs"))
    }
}

impl ScalarFn {
    pub const ALL: [ScalarFn; 7] = [
        ScalarFn::Sqrt,
        ScalarFn::Log,
        ScalarFn::Exp,
        ScalarFn::Inv,
        ScalarFn::ChiPlus,
        ScalarFn::ChiMinus,
        ScalarFn::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScalarFn::Sqrt => "sqrt",
            ScalarFn::Log => "log",
            ScalarFn::Exp => "exp",
            ScalarFn::Inv => "inv",
            ScalarFn::ChiPlus => "chi_plus",
            ScalarFn::ChiMinus => "chi_minus",
            ScalarFn::Abs => "abs",
        }
    }

    fn eval(self, l: f64) -> f64 {
        match self {
            ScalarFn::Sqrt => l.sqrt(),
            ScalarFn::Log => l.ln(),
            ScalarFn::Exp => l.exp(),
            ScalarFn::Inv => l.recip(),
            ScalarFn::ChiPlus => f64::from(u8::from(l > 0.0)),
            ScalarFn::ChiMinus => f64::from(u8::from(l < 0.0)),
            ScalarFn::Abs => l.abs(),
        }
    }
}

/// `f(x) = sum_i f(lambda_i) e_i` for a tagged scalar function.
pub fn apply_function(x: &Element, f: ScalarFn) -> Result<Element> {
    let sd = spectral_decompose(x);
    let scale = sd.eigenvalues.iter().fold(1.0_f64, |m, l| m.max(l.abs()));
    let offending = match f {
        ScalarFn::Sqrt | ScalarFn::Log => sd.eigenvalues.iter().find(|&&l| l <= tol::TOL),
        ScalarFn::Inv | ScalarFn::ChiPlus | ScalarFn::ChiMinus => {
            sd.eigenvalues.iter().find(|&&l| l.abs() <= tol::INVERTIBILITY * scale)
        }
        ScalarFn::Exp | ScalarFn::Abs => None,
    };
    if let Some(&eigenvalue) = offending {
        return Err(JordanError::DomainViolation { function: f.name(), eigenvalue });
    }
    Ok(sd.map(|l| f.eval(l)))
}

pub fn sqrt(x: &Element) -> Result<Element> {
    apply_function(x, ScalarFn::Sqrt)
}

pub fn log(x: &Element) -> Result<Element> {
    apply_function(x, ScalarFn::Log)
}

pub fn exp(x: &Element) -> Element {
    apply_function(x, ScalarFn::Exp).expect("exp is entire")
}

pub fn abs(x: &Element) -> Element {
    apply_function(x, ScalarFn::Abs).expect("abs is total")
}

fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// All `dim V` eigenvalues of an operator, sorted by real then imaginary part.
pub fn operator_spectrum(t: &VOperator) -> Vec<Complex64> {
    let m = t.matrix();
    if m.is_empty() {
        return Vec::new();
    }
    let n = m.nrows();
    let scale = m.amax().max(1.0);
    // unbounded QR iteration can stall on highly symmetric matrices; shifted retries break the cycle
    for shift in [0.0, 0.1234, -0.3711, 0.6532, -1.3307] {
        let c = shift * scale;
        let shifted = m + DMatrix::identity(n, n) * c;
        if let Some(schur) = nalgebra::Schur::try_new(shifted, f64::EPSILON, 200 * n) {
            let mut v: Vec<Complex64> = schur.complex_eigenvalues().iter().map(|z| z - c).collect();
            sort_complex(&mut v);
            return v;
        }
    }
    vec![Complex64::new(f64::NAN, f64::NAN); n]
}

/// Ascending eigenvalues of the symmetric part of an operator.
///
/// For operators that are self-adjoint for the trace form (`L_x`, `U_x`,
/// Pierce projections) this is their spectrum.
pub fn symmetric_spectrum(t: &VOperator) -> Vec<f64> {
    let m = t.matrix();
    let sym = (m + m.transpose()) * 0.5;
    let mut v: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Endpoint gaps between the convex hulls of `sigma(L_x)` and `sigma(x)`.
///
/// Returns `(min sigma(L_x) - min sigma(x), max sigma(L_x) - max sigma(x))`.
pub fn hull_check(x: &Element) -> (f64, f64) {
    let sl = symmetric_spectrum(&x.l_op());
    let sx = x.eigenvalues();
    (sl[0] - sx[0], sl[sl.len() - 1] - sx[sx.len() - 1])
}

/// Compare two real multisets after sorting; `None` when lengths differ.
pub fn multiset_distance(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    Some(a.iter().zip(&b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs())))
}
