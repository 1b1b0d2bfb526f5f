use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{JordanError, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Which finite-dimensional JB-algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    /// Real symmetric `n x n` matrices.
    SymReal(usize),
    /// Complex Hermitian `n x n` matrices.
    HermComplex(usize),
    /// Spin factor `R (+) R^{d-1}`.
    SpinFactor(usize),
    DirectSum(Vec<AlgebraKind>),
}

impl AlgebraKind {
    pub fn dim(&self) -> usize {
        match self {
            AlgebraKind::SymReal(n) => n * (n + 1) / 2,
            AlgebraKind::HermComplex(n) => n * n,
            AlgebraKind::SpinFactor(d) => *d,
            AlgebraKind::DirectSum(parts) => parts.iter().map(AlgebraKind::dim).sum(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            AlgebraKind::SymReal(0) | AlgebraKind::HermComplex(0) | AlgebraKind::SpinFactor(0) => {
                Err(JordanError::UnsupportedAlgebra(format!("{self}: size must be positive")))
            }
            AlgebraKind::DirectSum(parts) if parts.is_empty() => {
                Err(JordanError::UnsupportedAlgebra("empty direct sum".into()))
            }
            AlgebraKind::DirectSum(parts) => parts.iter().try_for_each(AlgebraKind::validate),
            _ => Ok(()),
        }
    }

    fn flatten_into(&self, out: &mut Vec<Simple>) {
        match self {
            AlgebraKind::SymReal(n) => out.push(Simple::Matrix { n: *n, complex: false }),
            AlgebraKind::HermComplex(n) => out.push(Simple::Matrix { n: *n, complex: true }),
            AlgebraKind::SpinFactor(d) => out.push(Simple::Spin { d: *d }),
            AlgebraKind::DirectSum(parts) => parts.iter().for_each(|p| p.flatten_into(out)),
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::SymReal(n) => write!(f, "sym:{n}"),
            AlgebraKind::HermComplex(n) => write!(f, "herm:{n}"),
            AlgebraKind::SpinFactor(d) => write!(f, "spin:{d}"),
            AlgebraKind::DirectSum(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    if matches!(p, AlgebraKind::DirectSum(_)) {
                        write!(f, "({p})")?;
                    } else {
                        write!(f, "{p}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for AlgebraKind {
    type Err = JordanError;

    /// Accepts `sym:N`, `herm:N`, `spin:D` and `+`-joined sums such as `sym:2+sym:3`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || JordanError::UnsupportedAlgebra(format!("cannot parse algebra `{s}`"));
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        let parts: Vec<&str> = s.split('+').map(str::trim).collect();
        if parts.len() > 1 {
            let summands = parts.iter().map(|p| p.parse()).collect::<Result<Vec<_>>>()?;
            return Ok(AlgebraKind::DirectSum(summands));
        }
        let s = s.trim_start_matches('(').trim_end_matches(')');
        let (tag, size) = s.split_once(':').ok_or_else(bad)?;
        let size: usize = size.trim().parse().map_err(|_| bad())?;
        let kind = match tag.trim().to_ascii_lowercase().as_str() {
            "sym" => AlgebraKind::SymReal(size),
            "herm" => AlgebraKind::HermComplex(size),
            "spin" => AlgebraKind::SpinFactor(size),
            _ => return Err(bad()),
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// A simple summand after flattening nested direct sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Simple {
    Matrix { n: usize, complex: bool },
    Spin { d: usize },
}

#[derive(Debug, Clone)]
pub(crate) struct Block {
    pub simple: Simple,
    pub offset: usize,
    pub dim: usize,
    /// For matrix blocks: `(i, j, imaginary)` per basis vector.
    pub entries: Vec<(usize, usize, bool)>,
    basis_l: OnceLock<Vec<DMatrix<f64>>>,
}

#[derive(Debug)]
struct Inner {
    kind: AlgebraKind,
    dim: usize,
    blocks: Vec<Block>,
    unit: Vec<f64>,
}

/// A finite-dimensional JB-algebra together with its fixed real basis.
///
/// Matrix summands use the basis `E_ii`, then `(E_ij + E_ji)/sqrt 2` for
/// `i < j`, then (Hermitian only) `i(E_ij - E_ji)/sqrt 2`; it is orthonormal
/// for `<a, b> = tr(ab)`. Spin factors use the coordinates `(s, u)` directly.
/// Cloning is cheap.
#[derive(Debug, Clone)]
pub struct Algebra(Arc<Inner>);

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.kind.fmt(f)
    }
}

impl Algebra {
    pub fn new(kind: AlgebraKind) -> Result<Self> {
        kind.validate()?;
        let mut simples = Vec::new();
        kind.flatten_into(&mut simples);
        let mut offset = 0;
        let blocks: Vec<Block> = simples
            .into_iter()
            .map(|simple| {
                let (dim, entries) = match simple {
                    Simple::Matrix { n, complex } => {
                        let mut entries: Vec<_> = (0..n).map(|i| (i, i, false)).collect();
                        for i in 0..n {
                            for j in i + 1..n {
                                entries.push((i, j, false));
                            }
                        }
                        if complex {
                            for i in 0..n {
                                for j in i + 1..n {
                                    entries.push((i, j, true));
                                }
                            }
                        }
                        (entries.len(), entries)
                    }
                    Simple::Spin { d } => (d, Vec::new()),
                };
                let block = Block { simple, offset, dim, entries, basis_l: OnceLock::new() };
                offset += dim;
                block
            })
            .collect();
        let dim = offset;
        debug_assert_eq!(dim, kind.dim());
        let mut unit = vec![0.0; dim];
        for b in &blocks {
            match b.simple {
                Simple::Matrix { n, .. } => unit[b.offset..b.offset + n].fill(1.0),
                Simple::Spin { .. } => unit[b.offset] = 1.0,
            }
        }
        Ok(Algebra(Arc::new(Inner { kind, dim, blocks, unit })))
    }

    pub fn sym(n: usize) -> Result<Self> {
        Self::new(AlgebraKind::SymReal(n))
    }

    pub fn herm(n: usize) -> Result<Self> {
        Self::new(AlgebraKind::HermComplex(n))
    }

    pub fn spin(d: usize) -> Result<Self> {
        Self::new(AlgebraKind::SpinFactor(d))
    }

    pub fn sum(parts: Vec<AlgebraKind>) -> Result<Self> {
        Self::new(AlgebraKind::DirectSum(parts))
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.0.kind
    }

    /// Real dimension of `V`.
    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub(crate) fn blocks(&self) -> &[Block] {
        &self.0.blocks
    }

    pub(crate) fn unit_coords(&self) -> &[f64] {
        &self.0.unit
    }

    /// Number of simple summands after flattening.
    pub fn summand_count(&self) -> usize {
        self.0.blocks.len()
    }

    /// Rank (size of a Jordan frame).
    pub fn rank(&self) -> usize {
        self.0.blocks.iter().map(Block::rank).sum()
    }

    /// `Some(n)` when this is a single matrix algebra over the complex numbers.
    pub fn herm_size(&self) -> Option<usize> {
        match self.0.blocks.as_slice() {
            [Block { simple: Simple::Matrix { n, complex: true }, .. }] => Some(*n),
            _ => None,
        }
    }

    /// Human-readable label of basis vector `i`.
    pub fn basis_label(&self, i: usize) -> String {
        let (bi, block) = self
            .0
            .blocks
            .iter()
            .enumerate()
            .find(|(_, b)| i >= b.offset && i < b.offset + b.dim)
            .expect("basis index out of range");
        let local = i - block.offset;
        let prefix = if self.0.blocks.len() > 1 { format!("[{bi}]") } else { String::new() };
        match block.simple {
            Simple::Matrix { .. } => {
                let (r, c, imag) = block.entries[local];
                let (r, c) = (r + 1, c + 1);
                if r == c {
                    format!("{prefix}E{r}{c}")
                } else if imag {
                    format!("{prefix}i(E{r}{c}-E{c}{r})/sqrt2")
                } else {
                    format!("{prefix}(E{r}{c}+E{c}{r})/sqrt2")
                }
            }
            Simple::Spin { .. } if local == 0 => format!("{prefix}s"),
            Simple::Spin { .. } => format!("{prefix}u{local}"),
        }
    }
}

impl Block {
    /// Local multiplication matrices `L_{e_k}` for the block basis.
    pub fn basis_l(&self) -> &[DMatrix<f64>] {
        self.basis_l.get_or_init(|| {
            let mut e = vec![0.0; self.dim];
            let mut f = vec![0.0; self.dim];
            let mut col = vec![0.0; self.dim];
            (0..self.dim)
                .map(|k| {
                    e[k] = 1.0;
                    let mut m = DMatrix::zeros(self.dim, self.dim);
                    for j in 0..self.dim {
                        f[j] = 1.0;
                        self.product(&e, &f, &mut col);
                        m.set_column(j, &nalgebra::DVector::from_column_slice(&col));
                        f[j] = 0.0;
                    }
                    e[k] = 0.0;
                    m
                })
                .collect()
        })
    }

    pub fn rank(&self) -> usize {
        match self.simple {
            Simple::Matrix { n, .. } => n,
            Simple::Spin { d: 1 } => 1,
            Simple::Spin { .. } => 2,
        }
    }

    pub fn slice<'a>(&self, coords: &'a [f64]) -> &'a [f64] {
        &coords[self.offset..self.offset + self.dim]
    }

    pub fn slice_mut<'a>(&self, coords: &'a mut [f64]) -> &'a mut [f64] {
        &mut coords[self.offset..self.offset + self.dim]
    }

    /// Matrix of a block's coordinates. Only valid for matrix blocks.
    pub fn to_matrix(&self, c: &[f64]) -> CMatrix {
        let Simple::Matrix { n, .. } = self.simple else { unreachable!("spin block has no matrix form") };
        let mut m = CMatrix::zeros(n, n);
        for (&(i, j, imag), &v) in self.entries.iter().zip(c) {
            if i == j {
                m[(i, i)] += Complex64::new(v, 0.0);
            } else if imag {
                let z = Complex64::new(0.0, v / SQRT_2);
                m[(i, j)] += z;
                m[(j, i)] -= z;
            } else {
                let z = Complex64::new(v / SQRT_2, 0.0);
                m[(i, j)] += z;
                m[(j, i)] += z;
            }
        }
        m
    }

    /// Coordinates of the Hermitian part of `m`.
    pub fn write_matrix(&self, m: &CMatrix, out: &mut [f64]) {
        for (&(i, j, imag), o) in self.entries.iter().zip(out.iter_mut()) {
            *o = if i == j {
                m[(i, i)].re
            } else {
                let h = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                if imag {
                    SQRT_2 * h.im
                } else {
                    SQRT_2 * h.re
                }
            };
        }
    }

    /// Jordan product on one block.
    pub fn product(&self, a: &[f64], b: &[f64], out: &mut [f64]) {
        match self.simple {
            Simple::Matrix { complex: false, n } => {
                // real symmetric path avoids complex arithmetic
                let am = self.to_real_matrix(a, n);
                let bm = self.to_real_matrix(b, n);
                let ab = &am * &bm;
                let sym = (&ab + ab.transpose()) * 0.5;
                self.write_real_matrix(&sym, out);
            }
            Simple::Matrix { complex: true, .. } => {
                let am = self.to_matrix(a);
                let bm = self.to_matrix(b);
                let ab = &am * &bm;
                let jordan = (&ab + ab.adjoint()) * Complex64::new(0.5, 0.0);
                self.write_matrix(&jordan, out);
            }
            Simple::Spin { .. } => {
                let (s, u) = (a[0], &a[1..]);
                let (t, w) = (b[0], &b[1..]);
                out[0] = s * t + u.iter().zip(w).map(|(x, y)| x * y).sum::<f64>();
                for k in 1..a.len() {
                    out[k] = s * w[k - 1] + t * u[k - 1];
                }
            }
        }
    }

    fn to_real_matrix(&self, c: &[f64], n: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        for (&(i, j, _), &v) in self.entries.iter().zip(c) {
            if i == j {
                m[(i, i)] = v;
            } else {
                m[(i, j)] = v / SQRT_2;
                m[(j, i)] = v / SQRT_2;
            }
        }
        m
    }

    fn write_real_matrix(&self, m: &DMatrix<f64>, out: &mut [f64]) {
        for (&(i, j, _), o) in self.entries.iter().zip(out.iter_mut()) {
            *o = if i == j { m[(i, i)] } else { SQRT_2 * 0.5 * (m[(i, j)] + m[(j, i)]) };
        }
    }

    /// Trace form on one block. Spin factors use `2(st + <u, w>)`.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        match self.simple {
            Simple::Matrix { .. } => dot,
            Simple::Spin { .. } => 2.0 * dot,
        }
    }
}
