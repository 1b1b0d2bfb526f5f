use serde::Serialize;

use crate::algebra::{Algebra, Element, Simple, VOperator};
use crate::error::{JordanError, Result};
use crate::tol;

/// The three Pierce projections of an idempotent `p` (with `p' = 1 - p`).
#[derive(Debug, Clone)]
pub struct PierceDecomposition {
    /// `U_p`, projection onto the 1-eigenspace of `L_p`.
    pub p1: VOperator,
    /// `U_{p'}`, projection onto the 0-eigenspace of `L_p`.
    pub p0: VOperator,
    /// `2 U_{p,p'}`, projection onto the 1/2-eigenspace of `L_p`.
    pub phalf: VOperator,
    pub dims: PierceDims,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PierceDims {
    pub one: usize,
    pub zero: usize,
    pub half: usize,
}

pub(crate) fn idempotent_defect(p: &Element) -> f64 {
    p.square().max_abs_diff(p)
}

fn projection_rank(p: &VOperator) -> usize {
    p.matrix().trace().round().max(0.0) as usize
}

pub fn pierce_decompose(p: &Element) -> Result<PierceDecomposition> {
    let defect = idempotent_defect(p);
    if !(defect <= tol::MEMBERSHIP * p.coord_norm().max(1.0)) {
        return Err(JordanError::NotIdempotent { defect });
    }
    let pc = p.add_unit(-1.0).scale(-1.0);
    let p1 = p.u_op();
    let p0 = pc.u_op();
    let phalf = p.u_bilinear(&pc)?.scale(2.0);
    let dims = PierceDims { one: projection_rank(&p1), zero: projection_rank(&p0), half: projection_rank(&phalf) };
    Ok(PierceDecomposition { p1, p0, phalf, dims })
}

impl PierceDecomposition {
    /// Largest defect among idempotency, mutual orthogonality and completeness.
    pub fn defect(&self) -> f64 {
        let alg = self.p1.algebra();
        let id = VOperator::identity(alg);
        let ps = [&self.p1, &self.p0, &self.phalf];
        let mut worst = (&(&(self.p1.clone()) + &self.p0) + &self.phalf).max_abs_diff(&id);
        for (i, a) in ps.iter().enumerate() {
            worst = worst.max(a.compose(a).max_abs_diff(a));
            for b in &ps[i + 1..] {
                worst = worst.max(a.compose(b).matrix().amax());
                worst = worst.max(b.compose(a).matrix().amax());
            }
        }
        worst
    }
}

/// Residuals of the elementary identities for an idempotent `p`:
/// `U_eps = 8L_p^2 - 8L_p + 1 = 1 - 4U_{p,p'}`, `U_p - U_{p'} = 2L_p - 1 = L_eps`,
/// `2U_{p,p'} = 4L_p(1 - L_p)`, `L_eps L_p(1 - L_p) = 0`, `L_eps U_{p,p'} = 0`,
/// `L_eps^2 = 1 - 2U_{p,p'}`.
pub fn idempotent_identities(p: &Element) -> Vec<(&'static str, f64)> {
    let alg = p.algebra();
    let id = VOperator::identity(alg);
    let pc = p.add_unit(-1.0).scale(-1.0);
    let eps = &p.scale(2.0) - &Element::unit(alg);
    let lp = p.l_op();
    let lp2 = lp.compose(&lp);
    let one_minus_lp = &id - &lp;
    let upp = p.u_bilinear(&pc).expect("same algebra");
    let leps = eps.l_op();
    let ueps = eps.u_op();

    let a1 = &(&lp2.scale(8.0) - &lp.scale(8.0)) + &id;
    let a2 = &id - &upp.scale(4.0);
    let b1 = &p.u_op() - &pc.u_op();
    let b2 = &lp.scale(2.0) - &id;
    let c = lp.compose(&one_minus_lp).scale(4.0);
    let d = leps.compose(&lp).compose(&one_minus_lp);
    let e = leps.compose(&upp);
    let f = &id - &upp.scale(2.0);
    vec![
        ("a: U_eps = 8L_p^2 - 8L_p + 1", ueps.max_abs_diff(&a1)),
        ("a: U_eps = 1 - 4U_{p,p'}", ueps.max_abs_diff(&a2)),
        ("b: U_p - U_p' = 2L_p - 1", b1.max_abs_diff(&b2)),
        ("b: 2L_p - 1 = L_eps", b2.max_abs_diff(&leps)),
        ("c: 2U_{p,p'} = 4L_p(1 - L_p)", upp.scale(2.0).max_abs_diff(&c)),
        ("d: L_eps L_p (1 - L_p) = 0", d.matrix().amax()),
        ("e: L_eps U_{p,p'} = 0", e.matrix().amax()),
        ("f: L_eps^2 = 1 - 2U_{p,p'}", leps.compose(&leps).max_abs_diff(&f)),
    ]
}

/// Largest commutator `|[L_p, L_{e_i}]|` over the basis.
pub fn centrality_defect(p: &Element) -> f64 {
    let alg = p.algebra();
    let lp = p.l_op();
    (0..alg.dim()).map(|i| lp.commutator(&Element::basis(alg, i).l_op()).matrix().amax()).fold(0.0, f64::max)
}

/// `p` is a central projection: idempotent and `L_p` commutes with every `L_z`.
pub fn is_central(p: &Element) -> bool {
    idempotent_defect(p) <= tol::MEMBERSHIP * p.coord_norm().max(1.0) && centrality_defect(p) <= tol::CENTRALITY
}

/// Minimal central idempotents, one per simple summand (two for `spin:2`,
/// which is isomorphic to `R + R`).
pub fn central_atoms(alg: &Algebra) -> Vec<Element> {
    let mut atoms = Vec::new();
    for b in alg.blocks() {
        let mut pieces: Vec<Vec<f64>> = Vec::new();
        match b.simple {
            Simple::Spin { d: 2 } => {
                pieces.push(vec![0.5, 0.5]);
                pieces.push(vec![0.5, -0.5]);
            }
            Simple::Matrix { n, .. } => {
                let mut c = vec![0.0; b.dim];
                c[..n].fill(1.0);
                pieces.push(c);
            }
            Simple::Spin { d } => {
                let mut c = vec![0.0; d];
                c[0] = 1.0;
                pieces.push(c);
            }
        }
        for piece in pieces {
            let mut c = vec![0.0; alg.dim()];
            b.slice_mut(&mut c).copy_from_slice(&piece);
            atoms.push(Element::new(alg, c).expect("finite"));
        }
    }
    atoms
}

/// All `2^m` central projections, where `m` is the number of central atoms.
///
/// Index bit `i` selects atom `i`; index 0 is `0` and the last index is `1`.
pub fn central_projections(alg: &Algebra) -> Vec<Element> {
    let atoms = central_atoms(alg);
    (0..1usize << atoms.len())
        .map(|mask| {
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(Element::zero(alg), |acc, (_, a)| &acc + a)
        })
        .collect()
}

/// `S_p = 2L_p - 1 = L_{eps_p}`.
pub fn central_symmetry_op(p: &Element) -> VOperator {
    let eps = &p.scale(2.0) - &Element::unit(p.algebra());
    eps.l_op()
}
