//! Operators on `Herm(n)`: congruences `A -> T A T^dagger`, recovery of the
//! implementer, the two components of `Aut`, and the lift `k -> s(k)`.

use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::algebra::{Algebra, CMatrix, Element, VOperator};
use crate::cone::in_cone;
use crate::error::{JordanError, Result};
use crate::sample;
use crate::spectral;
use crate::structure::{is_automorphism, str_lie_residual, StrElement};
use crate::tol;

const ONE: Complex64 = Complex::new(1.0, 0.0);
const I: Complex64 = Complex::new(0.0, 1.0);

/// `A -> T A T^dagger`, or `A -> T conj(A) T^dagger` when `conjugate` is set.
#[derive(Debug, Clone)]
pub struct ImplementingMap {
    pub t: CMatrix,
    pub conjugate: bool,
    pub phase_normalized: bool,
}

impl ImplementingMap {
    pub fn to_operator(&self) -> Result<VOperator> {
        congruence_op(&self.t, self.conjugate)
    }
}

/// Connected component of `Aut(Herm(n))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AutComponent {
    Unitary,
    Antiunitary,
}

/// Output of [`lift_automorphism`]: `s = e^Z W` implements `k` (or `j o k`).
#[derive(Debug, Clone)]
pub struct AutLift {
    pub z: CMatrix,
    pub w: CMatrix,
    pub s: CMatrix,
    pub xi_index: usize,
    /// `k = j o Ad_s` with `j` the transpose map.
    pub conjugated: bool,
}

impl AutLift {
    pub fn implementer(&self) -> ImplementingMap {
        if self.conjugated {
            ImplementingMap { t: self.s.map(|z| z.conj()), conjugate: true, phase_normalized: false }
        } else {
            ImplementingMap { t: self.s.clone(), conjugate: false, phase_normalized: false }
        }
    }
}

/// Sign component of `g` in `Str(Herm(n)) = G(Omega) u -G(Omega)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrComponent {
    Plus,
    Minus,
}

pub(crate) fn herm_size(alg: &Algebra) -> Result<usize> {
    alg.herm_size().ok_or_else(|| JordanError::UnsupportedAlgebra(format!("{alg} is not herm:n")))
}

fn to_mat(x: &Element) -> CMatrix {
    x.to_matrix().expect("matrix algebra")
}

fn from_mat(alg: &Algebra, m: &CMatrix) -> Element {
    Element::from_matrix(alg, m).expect("finite matrix")
}

fn unit_vector(n: usize, i: usize) -> CMatrix {
    let mut v = CMatrix::zeros(n, 1);
    v[(i, 0)] = ONE;
    v
}

fn matrix_unit(n: usize, a: usize, b: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(a, b)] = ONE;
    m
}

fn is_singular(t: &CMatrix) -> bool {
    if t.is_empty() {
        return true;
    }
    let sv = t.clone().svd(false, false).singular_values;
    let max = sv.max();
    !(max > 0.0) || !(sv.min() > 1e-12 * max) || !t.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Congruence by `T`, as an operator on `Herm(n)`.
pub fn congruence_op(t: &CMatrix, conjugate: bool) -> Result<VOperator> {
    if t.nrows() != t.ncols() {
        return Err(JordanError::DimensionMismatch { expected: t.nrows(), got: t.ncols() });
    }
    if is_singular(t) {
        return Err(JordanError::SingularMatrix);
    }
    let alg = Algebra::herm(t.nrows())?;
    let td = t.adjoint();
    Ok(VOperator::from_fn(&alg, |a| {
        let m = to_mat(a);
        let m = if conjugate { m.map(|z| z.conj()) } else { m };
        from_mat(&alg, &(t * m * &td))
    }))
}

/// The transpose map `j`, which is entrywise conjugation on `Herm(n)`.
pub fn transpose_map(n: usize) -> VOperator {
    congruence_op(&CMatrix::identity(n, n), true).expect("identity is invertible")
}

/// Complex-linear extension of `k` to all `n x n` matrices.
pub fn complexify(k: &VOperator, m: &CMatrix) -> CMatrix {
    let alg = k.algebra();
    let a = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let b = (m - m.adjoint()) * Complex64::new(0.0, -0.5);
    let ka = to_mat(&k.apply(&from_mat(alg, &a)));
    let kb = to_mat(&k.apply(&from_mat(alg, &b)));
    ka + kb * I
}

/// Multiply `T` by a phase so that its first entry of modulus above
/// `1e-6 |T|` (row-major) is real and positive.
pub fn phase_normalize(t: &CMatrix) -> CMatrix {
    let thresh = 1e-6 * t.norm();
    for r in 0..t.nrows() {
        for c in 0..t.ncols() {
            let z = t[(r, c)];
            if z.norm() > thresh {
                return t * (z.conj() / z.norm());
            }
        }
    }
    t.clone()
}

/// Classify `k` by testing `k^C(XY)` against `k^C(X) k^C(Y)` and `k^C(Y) k^C(X)`
/// on the pair `X = E_01`, `Y = E_10`.
pub fn aut_component(k: &VOperator) -> Result<AutComponent> {
    let n = herm_size(k.algebra())?;
    if !is_automorphism(k) {
        return Err(JordanError::NotAutomorphism);
    }
    if n == 1 {
        return Ok(AutComponent::Unitary);
    }
    let x = matrix_unit(n, 0, 1);
    let y = matrix_unit(n, 1, 0);
    let kxy = complexify(k, &(&x * &y));
    let (kx, ky) = (complexify(k, &x), complexify(k, &y));
    let hom = (&kxy - &kx * &ky).norm();
    let anti = (&kxy - &ky * &kx).norm();
    let gap = (&kx * &ky - &ky * &kx).norm();
    if !(gap > 1e-6) {
        return Err(JordanError::UndecidableWitness);
    }
    if hom < anti {
        Ok(AutComponent::Unitary)
    } else {
        Ok(AutComponent::Antiunitary)
    }
}

/// `Q diag(f(t_ii)) Q^dagger` from a complex Schur form of a normal matrix.
fn normal_function(m: &CMatrix, f: impl Fn(Complex64) -> Complex64) -> CMatrix {
    let (q, t) = schur_form(m);
    let d = CMatrix::from_diagonal(&t.diagonal().map(f));
    &q * d * q.adjoint()
}

fn eigen_phases(m: &CMatrix) -> Vec<Complex64> {
    schur_form(m).1.diagonal().iter().copied().collect()
}

/// Complex Schur form with a bounded iteration count; shifted retries on stalls.
fn schur_form(m: &CMatrix) -> (CMatrix, CMatrix) {
    let n = m.nrows();
    let scale = m.iter().fold(1.0_f64, |a, z| a.max(z.norm()));
    for shift in [Complex64::new(0.0, 0.0), Complex64::new(0.1234, 0.0517), Complex64::new(-0.3711, 0.2213)] {
        let c = shift * scale;
        if let Some(schur) = nalgebra::Schur::try_new(m + CMatrix::identity(n, n) * c, f64::EPSILON, 200 * n.max(1)) {
            let (q, t) = schur.unpack();
            return (q, t - CMatrix::identity(n, n) * c);
        }
    }
    let nan = CMatrix::from_element(n, n, Complex64::new(f64::NAN, f64::NAN));
    (nan.clone(), nan)
}

/// Lift an automorphism near `Id` (or near `j`) to `s = e^Z W` with `k = Ad_s`
/// (respectively `k = j o Ad_s`).
pub fn lift_automorphism(k: &VOperator, xi_index: usize) -> Result<AutLift> {
    let alg = k.algebra().clone();
    let n = herm_size(&alg)?;
    if xi_index >= n {
        return Err(JordanError::DimensionMismatch { expected: n, got: xi_index });
    }
    let component = aut_component(k)?;
    let id = VOperator::identity(&alg);
    let j = transpose_map(n);
    let to_identity = (k - &id).op_norm();
    let to_transpose = (k - &j).op_norm();
    let (k, conjugated) = match component {
        AutComponent::Unitary if to_identity < 1.0 => (k.clone(), false),
        AutComponent::Antiunitary if to_transpose < 1.0 => (j.compose(k), true),
        _ => return Err(JordanError::OutOfNeighborhood { to_identity, to_transpose }),
    };

    let xi = unit_vector(n, xi_index);
    let p = &xi * xi.adjoint();
    let eye = CMatrix::identity(n, n);
    let eps_p = &p * Complex64::new(2.0, 0.0) - &eye;
    let kp = to_mat(&k.apply(&from_mat(&alg, &p)));
    let eps_kp = &kp * Complex64::new(2.0, 0.0) - &eye;
    let m = eps_kp * eps_p;
    if eigen_phases(&m).iter().any(|t| (t + ONE).norm() < 1e-8) {
        return Err(JordanError::OutOfNeighborhood { to_identity, to_transpose });
    }
    let z = normal_function(&m, |t| t.ln() * 0.5);
    let z = (&z - z.adjoint()) * Complex64::new(0.5, 0.0);
    let ez = normal_function(&m, |t| t.sqrt());
    let emz = ez.adjoint();

    let ez_xi = &ez * &xi;
    let mut w = CMatrix::zeros(n, n);
    for b in 0..n {
        let eta_xi = &unit_vector(n, b) * xi.adjoint();
        let col = &emz * complexify(&k, &eta_xi) * &ez_xi;
        w.set_column(b, &col.column(0));
    }
    let s = &ez * &w;

    let unitary_defect = (w.adjoint() * &w - &eye).norm();
    let implemented = congruence_op(&s, false)?;
    let residual = implemented.max_abs_diff(&k).max(unitary_defect);
    if !(residual <= tol::MEMBERSHIP) {
        return Err(JordanError::LiftFailure { residual });
    }
    Ok(AutLift { z, w, s, xi_index, conjugated })
}

/// Unitary `U`, up to phase, with `k = Ad_U` for `k` in the unitary component.
///
/// Reads `u_a conj(U_bc)` from `k^C(E_ac) e_b`, where `b` maximizes `|U_bc|`.
fn unitary_from_columns(k: &VOperator, n: usize) -> CMatrix {
    let kc = complexify(k, &matrix_unit(n, 0, 0));
    let b = (0..n).max_by(|&i, &j| kc[(i, i)].re.total_cmp(&kc[(j, j)].re)).expect("n >= 1");
    let norm = kc[(b, b)].re.max(f64::MIN_POSITIVE).sqrt();
    let mut u = CMatrix::zeros(n, n);
    for a in 0..n {
        let col = complexify(k, &matrix_unit(n, a, 0)).column(b) / Complex64::new(norm, 0.0);
        u.set_column(a, &col);
    }
    u
}

/// Implementer `T` of `g` in `G(Omega)`: `g(A) = T A T^dagger` or `T conj(A) T^dagger`.
///
/// `T = X U` with `X = sqrt(g(1))` and `U` read off the automorphism `U_X^{-1} g`.
pub fn recover_implementer(g: &StrElement) -> Result<ImplementingMap> {
    let alg = g.algebra().clone();
    let n = herm_size(&alg)?;
    if !in_cone(&g.g1) {
        return Err(JordanError::NotConePreserving);
    }
    let x = spectral::sqrt(&g.g1)?;
    let k = x.u_op().inverse()?.compose(&g.g);
    let component = aut_component(&k)?;
    let (u, conjugate) = match component {
        AutComponent::Unitary => (unitary_from_columns(&k, n), false),
        AutComponent::Antiunitary => {
            let v = unitary_from_columns(&transpose_map(n).compose(&k), n);
            (v.map(|z| z.conj()), true)
        }
    };
    let t = phase_normalize(&(to_mat(&x) * u));
    let map = ImplementingMap { t, conjugate, phase_normalized: true };
    let residual = map.to_operator()?.max_abs_diff(&g.g) / g.g.norm().max(1.0);
    if !(residual <= tol::MEMBERSHIP) {
        return Err(JordanError::LiftFailure { residual });
    }
    Ok(map)
}

/// Real basis of trace-free skew-Hermitian `n x n` matrices (`n^2 - 1` elements).
fn su_basis(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(n * n - 1);
    for j in 0..n.saturating_sub(1) {
        let mut m = CMatrix::zeros(n, n);
        m[(j, j)] = I;
        m[(n - 1, n - 1)] = -I;
        out.push(m);
    }
    for a in 0..n {
        for b in a + 1..n {
            let mut m = CMatrix::zeros(n, n);
            m[(a, b)] = ONE;
            m[(b, a)] = -ONE;
            out.push(m.clone());
            m[(a, b)] = I;
            m[(b, a)] = I;
            out.push(m);
        }
    }
    out
}

/// `Z` skew-Hermitian and trace-free with `D = [Z, .]`.
pub fn derivation_to_skew(d: &VOperator) -> Result<CMatrix> {
    let alg = d.algebra().clone();
    let n = herm_size(&alg)?;
    let scale = d.norm().max(1.0);
    let d1 = d.apply(&Element::unit(&alg));
    if !(d1.coord_norm() <= tol::MEMBERSHIP * scale) {
        return Err(JordanError::NotDerivation(format!("D(1) has norm {:e}", d1.coord_norm())));
    }
    let lie = str_lie_residual(d);
    if !(lie <= tol::MEMBERSHIP) {
        return Err(JordanError::NotDerivation(format!("str residual {lie:e}")));
    }
    let basis = su_basis(n);
    let dim = alg.dim();
    if basis.is_empty() {
        return Ok(CMatrix::zeros(n, n));
    }
    let mut a = DMatrix::zeros(dim * dim, basis.len());
    for (k, zk) in basis.iter().enumerate() {
        let ad = VOperator::from_fn(&alg, |x| {
            let m = to_mat(x);
            from_mat(&alg, &(zk * &m - &m * zk))
        });
        for (r, v) in ad.matrix().iter().enumerate() {
            a[(r, k)] = *v;
        }
    }
    let rhs = nalgebra::DVector::from_column_slice(d.matrix().as_slice());
    let coeffs = a.clone().svd(true, true).solve(&rhs, 1e-12).map_err(|_| JordanError::SingularMatrix)?;
    let residual = (&a * &coeffs - &rhs).amax() / scale;
    if !(residual <= tol::MEMBERSHIP) {
        return Err(JordanError::InconsistentSolve { residual });
    }
    Ok(basis.iter().zip(coeffs.iter()).fold(CMatrix::zeros(n, n), |acc, (b, &c)| acc + b * Complex64::new(c, 0.0)))
}

/// `T` with `H(A) = T A + A T^dagger`, namely `T = H(1)/2 + Z`.
pub fn str_as_lr(h: &VOperator) -> Result<CMatrix> {
    herm_size(h.algebra())?;
    let residual = str_lie_residual(h);
    if !(residual <= tol::MEMBERSHIP) {
        return Err(JordanError::NotInLieAlgebra { residual });
    }
    let u = h.apply(&Element::unit(h.algebra()));
    let z = derivation_to_skew(&(h - &u.l_op()))?;
    Ok(to_mat(&u) * Complex64::new(0.5, 0.0) + z)
}

/// `H(A) = T A + A T^dagger` as an operator.
pub fn lr_op(t: &CMatrix) -> Result<VOperator> {
    let alg = Algebra::herm(t.nrows())?;
    let td = t.adjoint();
    Ok(VOperator::from_fn(&alg, |a| {
        let m = to_mat(a);
        from_mat(&alg, &(t * &m + &m * &td))
    }))
}

pub fn str_two_components(g: &StrElement) -> Result<StrComponent> {
    herm_size(g.algebra())?;
    let plus = in_cone(&g.g1);
    let minus = in_cone(&g.g1.scale(-1.0));
    match (plus, minus) {
        (true, false) => Ok(StrComponent::Plus),
        (false, true) => Ok(StrComponent::Minus),
        _ => Err(JordanError::Inconsistent(format!(
            "g(1) has spectrum [{:e}, {:e}]",
            spectral::spectral_decompose(&g.g1).min(),
            spectral::spectral_decompose(&g.g1).max()
        ))),
    }
}

/// Real dimension of `{H : H satisfies the str identity}`, from the nullity of the
/// linearized constraint probed on the basis and all sums `e_i + e_j`.
pub fn str_dimension(alg: &Algebra) -> usize {
    let dim = alg.dim();
    let basis: Vec<Element> = (0..dim).map(|i| Element::basis(alg, i)).collect();
    let mut probes: Vec<Element> = basis.clone();
    for i in 0..dim {
        for j in i + 1..dim {
            probes.push(&basis[i] + &basis[j]);
        }
    }
    let unknowns = dim * dim;
    let mut gram = DMatrix::<f64>::zeros(unknowns, unknowns);
    let mut rows = DMatrix::<f64>::zeros(dim * dim, unknowns);
    for x in &probes {
        let ux = x.u_op();
        for c in 0..dim {
            for r in 0..dim {
                let mut m = DMatrix::zeros(dim, dim);
                m[(r, c)] = 1.0;
                let h = VOperator::new(alg, m).expect("finite");
                let hbar = crate::structure::lie_conjugate(&h);
                let hx = h.apply(x);
                let val =
                    &(&x.u_bilinear(&hx).expect("same algebra").scale(2.0) - &h.compose(&ux)) + &ux.compose(&hbar);
                rows.column_mut(c * dim + r).copy_from_slice(val.matrix().as_slice());
            }
        }
        gram += rows.transpose() * &rows;
    }
    let eig = gram.symmetric_eigenvalues();
    let max = eig.amax().max(1.0);
    eig.iter().filter(|&&l| l <= 1e-10 * max).count()
}

/// Result of the greedy walk from `Id` toward the transpose map.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectivityProbe {
    pub steps: usize,
    pub initial_distance: f64,
    pub min_distance: f64,
    /// Some visited automorphism was classified as antiunitary.
    pub crossed: bool,
}

/// Walk `k_{m+1} = Ad_{exp(K)} k_m` with small random skew `K`, greedily choosing
/// the candidate closest to `j` in operator norm.
pub fn connectivity_probe(
    n: usize,
    steps: usize,
    candidates: usize,
    step_size: f64,
    seed: u64,
) -> Result<ConnectivityProbe> {
    let alg = Algebra::herm(n)?;
    let j = transpose_map(n);
    let mut rng = sample::rng(seed);
    let mut k = VOperator::identity(&alg);
    let initial_distance = (&k - &j).op_norm();
    let mut min_distance = initial_distance;
    let mut crossed = false;
    for _ in 0..steps {
        let mut best: Option<(f64, VOperator)> = None;
        for _ in 0..candidates {
            let z = sample::skew_hermitian(n, step_size * rng.random::<f64>(), &mut rng);
            let u = normal_function(&z, |t| t.exp());
            let cand = congruence_op(&u, false)?.compose(&k);
            let d = (&cand - &j).op_norm();
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, cand));
            }
        }
        let (d, cand) = best.expect("at least one candidate");
        min_distance = min_distance.min(d);
        if n > 1 && aut_component(&cand)? == AutComponent::Antiunitary {
            crossed = true;
        }
        k = cand;
    }
    Ok(ConnectivityProbe { steps, initial_distance, min_distance, crossed })
}

/// Random element of the unitary component: congruence by a Haar unitary.
pub fn random_unitary_aut(n: usize, rng: &mut impl Rng) -> (CMatrix, VOperator) {
    let u = sample::unitary(n, rng);
    let k = congruence_op(&u, false).expect("unitary is invertible");
    (u, k)
}

/// `exp(Z)` for skew-Hermitian `Z`.
pub fn skew_exp(z: &CMatrix) -> CMatrix {
    normal_function(z, |t| t.exp())
}

/// `[Z, .]` on `Herm(n)`.
pub fn ad_op(z: &CMatrix) -> Result<VOperator> {
    let alg = Algebra::herm(z.nrows())?;
    Ok(VOperator::from_fn(&alg, |a| {
        let m = to_mat(a);
        from_mat(&alg, &(z * &m - &m * z))
    }))
}

/// `min_l |a - l b|` over unit-modulus `l`.
pub fn phase_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let inner: Complex64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let l = if inner.norm() > 0.0 { inner / inner.norm() } else { ONE };
    (a - b * l).norm()
}
