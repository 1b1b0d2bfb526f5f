//! Seeded random sampling of elements, cone points and automorphisms.
//!
//! Coordinates are independent standard normals; cone samples are `x^2 + 0.1`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{Algebra, CMatrix, Element, Simple, VOperator};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `trial` of the generator seeded by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> SampleRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(trial);
    r
}

pub fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn element(alg: &Algebra, rng: &mut impl Rng) -> Element {
    Element::new(alg, (0..alg.dim()).map(|_| normal(rng)).collect()).expect("finite sample")
}

/// `x^2 + 0.1 * 1` for a random `x`.
pub fn cone_point(alg: &Algebra, rng: &mut impl Rng) -> Element {
    element(alg, rng).square().add_unit(0.1)
}

/// Random element whose eigenvalues are all at least `margin` away from zero.
pub fn invertible(alg: &Algebra, margin: f64, rng: &mut impl Rng) -> Element {
    loop {
        let x = element(alg, rng);
        if x.eigenvalues().iter().all(|l| l.abs() > margin) {
            return x;
        }
    }
}

pub fn complex_gaussian(n: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| Complex64::new(normal(rng), normal(rng)))
}

/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
pub fn unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    let qr = complex_gaussian(n, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-distributed orthogonal matrix.
pub fn orthogonal(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| normal(rng));
    let (mut q, r) = g.qr().unpack();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Skew-Hermitian matrix with Gaussian entries scaled by `scale`.
pub fn skew_hermitian(n: usize, scale: f64, rng: &mut impl Rng) -> CMatrix {
    let g = complex_gaussian(n, rng);
    (&g - g.adjoint()) * Complex64::new(0.5 * scale, 0.0)
}

/// Operator on one block built from a map on its matrices, padded into `dim V`.
fn block_matrix_op(alg: &Algebra, block: usize, f: impl Fn(&CMatrix) -> CMatrix) -> DMatrix<f64> {
    let b = &alg.blocks()[block];
    let mut m = DMatrix::zeros(b.dim, b.dim);
    let mut e = vec![0.0; b.dim];
    let mut out = vec![0.0; b.dim];
    for i in 0..b.dim {
        e[i] = 1.0;
        let image = f(&b.to_matrix(&e));
        b.write_matrix(&image, &mut out);
        for r in 0..b.dim {
            m[(r, i)] = out[r];
        }
        e[i] = 0.0;
    }
    m
}

fn local_automorphism(alg: &Algebra, block: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let b = &alg.blocks()[block];
    match b.simple {
        Simple::Matrix { n, complex: false } => {
            let o = orthogonal(n, rng).map(|v| Complex64::new(v, 0.0));
            block_matrix_op(alg, block, |a| &o * a * o.adjoint())
        }
        Simple::Matrix { n, complex: true } => {
            let u = unitary(n, rng);
            let flip = rng.random_bool(0.5);
            block_matrix_op(alg, block, |a| {
                let a = if flip { a.transpose() } else { a.clone() };
                &u * a * u.adjoint()
            })
        }
        Simple::Spin { d } => {
            let mut m = DMatrix::zeros(d, d);
            m[(0, 0)] = 1.0;
            if d > 1 {
                let q = orthogonal(d - 1, rng);
                m.view_mut((1, 1), (d - 1, d - 1)).copy_from(&q);
            }
            m
        }
    }
}

/// Random automorphism: a random automorphism on every simple summand, then a
/// random permutation among isomorphic summands.
pub fn automorphism(alg: &Algebra, rng: &mut impl Rng) -> VOperator {
    let blocks = alg.blocks();
    let mut target: Vec<usize> = (0..blocks.len()).collect();
    // shuffle within each isomorphism class
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        match classes.iter_mut().find(|c| blocks[c[0]].simple == b.simple) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    for class in &classes {
        let mut perm = class.clone();
        perm.shuffle(rng);
        for (&from, &to) in class.iter().zip(&perm) {
            target[from] = to;
        }
    }
    let mut m = DMatrix::zeros(alg.dim(), alg.dim());
    for (i, b) in blocks.iter().enumerate() {
        let local = local_automorphism(alg, i, rng);
        let t = &blocks[target[i]];
        m.view_mut((t.offset, b.offset), (b.dim, b.dim)).copy_from(&local);
    }
    VOperator::new(alg, m).expect("finite automorphism")
}

/// Random derivation: `[K, .]` on matrix summands, `(s, u) -> (0, K u)` on spin factors.
pub fn derivation(alg: &Algebra, scale: f64, rng: &mut impl Rng) -> VOperator {
    let mut m = DMatrix::zeros(alg.dim(), alg.dim());
    for (i, b) in alg.blocks().iter().enumerate() {
        let local = match b.simple {
            Simple::Matrix { n, complex } => {
                let k = if complex {
                    skew_hermitian(n, scale, rng)
                } else {
                    let g = DMatrix::from_fn(n, n, |_, _| normal(rng));
                    ((&g - g.transpose()) * (0.5 * scale)).map(|v| Complex64::new(v, 0.0))
                };
                block_matrix_op(alg, i, |a| &k * a - a * &k)
            }
            Simple::Spin { d } => {
                let mut m = DMatrix::zeros(d, d);
                if d > 2 {
                    let g = DMatrix::from_fn(d - 1, d - 1, |_, _| normal(rng));
                    let k = (&g - g.transpose()) * (0.5 * scale);
                    m.view_mut((1, 1), (d - 1, d - 1)).copy_from(&k);
                }
                m
            }
        };
        m.view_mut((b.offset, b.offset), (b.dim, b.dim)).copy_from(&local);
    }
    VOperator::new(alg, m).expect("finite derivation")
}

/// A uniformly chosen central projection.
pub fn central_projection(alg: &Algebra, rng: &mut impl Rng) -> Element {
    let all = crate::structure::central_projections(alg);
    all[rng.random_range(0..all.len())].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraKind;

    #[test]
    fn unitary_and_orthogonal_are_unitary() {
        let mut r = rng(3);
        let u = unitary(4, &mut r);
        assert!((u.adjoint() * &u - CMatrix::identity(4, 4)).norm() < 1e-13);
        let o = orthogonal(5, &mut r);
        assert!((o.transpose() * &o - DMatrix::identity(5, 5)).norm() < 1e-13);
    }

    #[test]
    fn automorphisms_are_multiplicative_and_unital() {
        let mut r = rng(11);
        for kind in ["sym:3", "herm:3", "spin:5", "sym:2+sym:2+spin:3"] {
            let alg = Algebra::new(kind.parse::<AlgebraKind>().unwrap()).unwrap();
            for _ in 0..5 {
                let k = automorphism(&alg, &mut r);
                let one = Element::unit(&alg);
                assert!(k.apply(&one).max_abs_diff(&one) < 1e-13, "{kind}");
                let x = element(&alg, &mut r);
                let y = element(&alg, &mut r);
                let lhs = k.apply(&x.jordan(&y).unwrap());
                let rhs = k.apply(&x).jordan(&k.apply(&y)).unwrap();
                assert!(lhs.max_abs_diff(&rhs) < 1e-12, "{kind}");
            }
        }
    }

    #[test]
    fn derivations_satisfy_leibniz() {
        let mut r = rng(5);
        for kind in ["sym:3", "herm:2", "spin:4", "sym:2+herm:2"] {
            let alg = Algebra::new(kind.parse::<AlgebraKind>().unwrap()).unwrap();
            let d = derivation(&alg, 1.0, &mut r);
            let x = element(&alg, &mut r);
            let y = element(&alg, &mut r);
            let lhs = d.apply(&x.jordan(&y).unwrap());
            let rhs = &d.apply(&x).jordan(&y).unwrap() + &x.jordan(&d.apply(&y)).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-12, "{kind}");
            assert!(d.apply(&Element::unit(&alg)).coord_norm() < 1e-13);
        }
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let alg = Algebra::herm(3).unwrap();
        let a = cone_point(&alg, &mut rng(9));
        let b = cone_point(&alg, &mut rng(9));
        assert_eq!(a, b);
    }
}
