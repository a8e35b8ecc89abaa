//! Generalized Gell-Mann matrices and collective spin operators on a
//! single logical qudit.
//!
//! Flat indices follow a fixed enumeration:
//!
//! | range                         | kind          | order                          |
//! |-------------------------------|---------------|--------------------------------|
//! | `0`                           | `M_0 ∝ I`     |                                |
//! | `1 ..= d(d-1)/2`              | symmetric     | pairs `(i, j)`, `i < j`, lexicographic |
//! | `d(d-1)/2 + 1 ..= d(d-1)`     | antisymmetric | column `j` ascending, row `i` descending |
//! | `d(d-1) + 1 ..= d² - 1`       | diagonal      | level `k = 1 ..= d-1`          |
//!
//! With this ordering the adjacent-pair matrices that build the spin
//! operators land on `½(2d(k-1) - k² + k + 2)`, `d(d-1)/2 + k(k-1)/2 + 1`
//! and `d(d-1) + k`.

use crate::{CMatrix, Complex64, Error, Result};
use serde::Serialize;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which family a Gell-Mann matrix belongs to, with its defining pair or level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GellMannLabel {
    Identity,
    /// `E_ij + E_ji`, `row < col`.
    Symmetric { row: usize, col: usize },
    /// `-i E_ij + i E_ji`, `row < col`.
    Antisymmetric { row: usize, col: usize },
    /// `sqrt(2/(k(k+1))) (Σ_{m<k} E_mm - k E_kk)`.
    Diagonal { level: usize },
}

/// A `d × d` matrix stored as its nonzero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseMatrix {
    pub fn new(dim: usize, entries: Vec<(usize, usize, Complex64)>) -> Self {
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        self.entries
            .iter()
            .filter(|(r, c, _)| r == c)
            .map(|&(_, _, v)| v)
            .sum()
    }

    /// `Tr(self · other)` without densifying either side.
    pub fn trace_product(&self, other: &SparseMatrix) -> Complex64 {
        let mut acc = ZERO;
        for &(r, c, v) in &self.entries {
            for &(r2, c2, w) in &other.entries {
                if c == r2 && c2 == r {
                    acc += v * w;
                }
            }
        }
        acc
    }
}

/// The ordered operator basis `{M_0, …, M_{d²-1}}` for one component.
#[derive(Clone, Debug)]
pub struct HermitianBasis {
    d: usize,
    elements: Vec<SparseMatrix>,
    labels: Vec<GellMannLabel>,
}

impl HermitianBasis {
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of elements, `d²` including `M_0`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, index: usize) -> &SparseMatrix {
        &self.elements[index]
    }

    pub fn elements(&self) -> &[SparseMatrix] {
        &self.elements
    }

    /// The traceless generators `M_1 … M_{d²-1}`.
    pub fn generators(&self) -> &[SparseMatrix] {
        &self.elements[1..]
    }

    pub fn label(&self, index: usize) -> GellMannLabel {
        self.labels[index]
    }

    pub fn dense(&self, index: usize) -> CMatrix {
        self.elements[index].to_dense()
    }

    /// Flat index of a labelled element in this basis.
    pub fn index_of(&self, label: GellMannLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Scale of `M_0 = m0 · I`.
    pub fn identity_scale(&self) -> f64 {
        identity_scale(self.d)
    }

    /// Reorders the generators by `perm` (a permutation of `0..d²-1`,
    /// applied to indices `1..d²`); `M_0` stays in front.
    pub fn permuted(&self, perm: &[usize]) -> Result<HermitianBasis> {
        let n = self.elements.len() - 1;
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::InvalidIndex(format!(
                "permutation has length {}, expected {n}",
                perm.len()
            )));
        }
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidIndex(format!("not a permutation of 0..{n}")));
            }
            seen[p] = true;
        }
        let mut elements = vec![self.elements[0].clone()];
        let mut labels = vec![self.labels[0]];
        for &p in perm {
            elements.push(self.elements[p + 1].clone());
            labels.push(self.labels[p + 1]);
        }
        Ok(HermitianBasis {
            d: self.d,
            elements,
            labels,
        })
    }
}

fn identity_scale(d: usize) -> f64 {
    1.0 / ((d * (d - 1)) as f64 / 2.0).sqrt()
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension { d })
    } else {
        Ok(())
    }
}

fn element_for(d: usize, label: GellMannLabel) -> SparseMatrix {
    let entries = match label {
        GellMannLabel::Identity => {
            let s = Complex64::from(identity_scale(d));
            (0..d).map(|k| (k, k, s)).collect()
        }
        GellMannLabel::Symmetric { row, col } => vec![(row, col, ONE), (col, row, ONE)],
        GellMannLabel::Antisymmetric { row, col } => vec![(row, col, -I), (col, row, I)],
        GellMannLabel::Diagonal { level } => {
            let s = (2.0 / (level * (level + 1)) as f64).sqrt();
            let mut e: Vec<_> = (0..level).map(|m| (m, m, Complex64::from(s))).collect();
            e.push((level, level, Complex64::from(-(level as f64) * s)));
            e
        }
    };
    SparseMatrix::new(d, entries)
}

fn labels_in_order(d: usize) -> Vec<GellMannLabel> {
    let mut labels = Vec::with_capacity(d * d);
    labels.push(GellMannLabel::Identity);
    for row in 0..d {
        for col in row + 1..d {
            labels.push(GellMannLabel::Symmetric { row, col });
        }
    }
    for col in 1..d {
        for row in (0..col).rev() {
            labels.push(GellMannLabel::Antisymmetric { row, col });
        }
    }
    for level in 1..d {
        labels.push(GellMannLabel::Diagonal { level });
    }
    labels
}

/// Builds the full Gell-Mann basis for a `d`-level component.
pub fn build_gellmann(d: usize) -> Result<HermitianBasis> {
    check_dim(d)?;
    let labels = labels_in_order(d);
    let elements = labels.iter().map(|&l| element_for(d, l)).collect();
    Ok(HermitianBasis { d, elements, labels })
}

/// Closed-form flat index of a labelled Gell-Mann matrix.
pub fn gm_index(d: usize, label: GellMannLabel) -> Result<usize> {
    check_dim(d)?;
    let bad = || Error::InvalidIndex(format!("{label:?} out of range for d = {d}"));
    match label {
        GellMannLabel::Identity => Ok(0),
        GellMannLabel::Symmetric { row, col } => {
            if row >= col || col >= d {
                return Err(bad());
            }
            Ok(row * d - row * (row + 1) / 2 + (col - row - 1) + 1)
        }
        GellMannLabel::Antisymmetric { row, col } => {
            if row >= col || col >= d {
                return Err(bad());
            }
            Ok(d * (d - 1) / 2 + col * (col - 1) / 2 + (col - 1 - row) + 1)
        }
        GellMannLabel::Diagonal { level } => {
            if level == 0 || level >= d {
                return Err(bad());
            }
            Ok(d * (d - 1) + level)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinConvention {
    /// `a†b + b†a`, …; integer spectrum `N, N-2, …, -N`.
    Schwinger,
    /// Schwinger / 2, the standard spin-`N/2` matrices.
    SpinJ,
}

#[derive(Clone, Debug)]
pub struct SpinOperatorTriple {
    pub d: usize,
    pub sx: CMatrix,
    pub sy: CMatrix,
    pub sz: CMatrix,
    pub convention: SpinConvention,
}

impl SpinOperatorTriple {
    pub fn components(&self) -> [&CMatrix; 3] {
        [&self.sx, &self.sy, &self.sz]
    }
}

/// Collective pseudo-spin operators in the `|k) = |N-k, k>` basis.
pub fn schwinger_ops(d: usize, convention: SpinConvention) -> Result<SpinOperatorTriple> {
    check_dim(d)?;
    let n = (d - 1) as f64;
    let scale = match convention {
        SpinConvention::Schwinger => 1.0,
        SpinConvention::SpinJ => 0.5,
    };
    let mut sx = CMatrix::zeros(d, d);
    let mut sy = CMatrix::zeros(d, d);
    let mut sz = CMatrix::zeros(d, d);
    for k in 1..d {
        let amp = scale * ((k * (d - k)) as f64).sqrt();
        sx[(k - 1, k)] = Complex64::from(amp);
        sx[(k, k - 1)] = Complex64::from(amp);
        sy[(k - 1, k)] = -I * amp;
        sy[(k, k - 1)] = I * amp;
    }
    for k in 0..d {
        sz[(k, k)] = Complex64::from(scale * (n - 2.0 * k as f64));
    }
    Ok(SpinOperatorTriple {
        d,
        sx,
        sy,
        sz,
        convention,
    })
}

/// Spin-`j` operators written as weighted sums of `N = d-1` Gell-Mann matrices each.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpinDecomposition {
    pub d: usize,
    pub x: Vec<(usize, f64)>,
    pub y: Vec<(usize, f64)>,
    pub z: Vec<(usize, f64)>,
}

impl SpinDecomposition {
    /// Sums the weighted Gell-Mann matrices back into `(S^x, S^y, S^z)`.
    pub fn assemble(&self, basis: &HermitianBasis) -> [CMatrix; 3] {
        let sum = |terms: &[(usize, f64)]| {
            let mut m = CMatrix::zeros(self.d, self.d);
            for &(idx, w) in terms {
                for &(r, c, v) in basis.element(idx).entries() {
                    m[(r, c)] += v * w;
                }
            }
            m
        };
        [sum(&self.x), sum(&self.y), sum(&self.z)]
    }
}

pub fn spin_gellmann_decomposition(d: usize) -> Result<SpinDecomposition> {
    check_dim(d)?;
    let mut x = Vec::with_capacity(d - 1);
    let mut y = Vec::with_capacity(d - 1);
    let mut z = Vec::with_capacity(d - 1);
    for k in 1..d {
        let off = 0.5 * ((k * (d - k)) as f64).sqrt();
        x.push((
            gm_index(d, GellMannLabel::Symmetric { row: k - 1, col: k })?,
            off,
        ));
        y.push((
            gm_index(d, GellMannLabel::Antisymmetric { row: k - 1, col: k })?,
            off,
        ));
        z.push((
            gm_index(d, GellMannLabel::Diagonal { level: k })?,
            0.5 * ((k * (k + 1)) as f64 / 2.0).sqrt(),
        ));
    }
    Ok(SpinDecomposition { d, x, y, z })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub matrix: String,
    pub max_abs_error: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixReport {
    pub checks: Vec<IdentityCheck>,
}

impl AppendixReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub const IDENTITY_TOL: f64 = 1e-12;

/// Compares the eight spin-1 polynomial expressions with `build_gellmann(3)`
/// and fails on the first mismatch.
pub fn verify_appendix_identities() -> Result<AppendixReport> {
    let report = appendix_identity_checks()?;
    if let Some(bad) = report.checks.iter().find(|c| !c.passed) {
        return Err(Error::IdentityViolation {
            matrix: bad.matrix.clone(),
            max_abs_error: bad.max_abs_error,
        });
    }
    Ok(report)
}

/// Same comparison as [`verify_appendix_identities`] but reports all eight.
pub fn appendix_identity_checks() -> Result<AppendixReport> {
    let basis = build_gellmann(3)?;
    let s = schwinger_ops(3, SpinConvention::SpinJ)?;
    let (x, y, z) = (&s.sx, &s.sy, &s.sz);
    let r2 = std::f64::consts::SQRT_2;
    let r3 = 3f64.sqrt();
    let xz = x * z + z * x;
    let yz = y * z + z * y;
    let x2 = x * x;
    let y2 = y * y;
    let z2 = z * z;

    let expressions: [CMatrix; 8] = [
        (x + &xz) / Complex64::from(r2),
        &x2 - &y2,
        (x - &xz) / Complex64::from(r2),
        (y + &yz) / Complex64::from(r2),
        (y - &yz) / Complex64::from(r2),
        x * y + y * x,
        (z + &z2 * Complex64::from(2.0) - &x2 - &y2) * Complex64::from(0.5),
        (z * Complex64::from(3.0) + &z2 * Complex64::from(2.0) + &x2 + &y2)
            / Complex64::from(2.0 * r3),
    ];

    let mut checks = Vec::with_capacity(8);
    for (i, expr) in expressions.iter().enumerate() {
        let err = max_abs_diff(expr, &basis.dense(i + 1));
        checks.push(IdentityCheck {
            matrix: format!("M_{}", i + 1),
            max_abs_error: err,
            passed: err < IDENTITY_TOL,
        });
    }
    Ok(AppendixReport { checks })
}

/// `M_8` written with `-2(S^z)^2`; the `+2(S^z)^2` form equals `diag(3,1,0)/√3`.
pub fn m8_alternate_check() -> Result<IdentityCheck> {
    let basis = build_gellmann(3)?;
    let s = schwinger_ops(3, SpinConvention::SpinJ)?;
    let (x, y, z) = (&s.sx, &s.sy, &s.sz);
    let expr = (z * Complex64::from(3.0) - z * z * Complex64::from(2.0) + x * x + y * y)
        / Complex64::from(2.0 * 3f64.sqrt());
    let err = max_abs_diff(&expr, &basis.dense(8));
    Ok(IdentityCheck {
        matrix: "M_8 (-2 S_z^2)".into(),
        max_abs_error: err,
        passed: err < IDENTITY_TOL,
    })
}
