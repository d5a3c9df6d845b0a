//! Problem definition and Hamiltonian action.
//!
//! H = Σᵢ bⁱ sᶻᵢ − ½ Σᵢⱼ (vˣⁱʲ sˣᵢsˣⱼ + vʸⁱʲ sʸᵢsʸⱼ + vᶻⁱʲ sᶻᵢsᶻⱼ)
//!
//! with symmetric coupling matrices of arbitrary range. The symmetric double
//! sum counts each unordered pair i<j twice, so the matrix-free action uses
//! weight −1 per pair and −½ for the i=j self-energy terms (allowed only for
//! s ≥ 1). Off-diagonal work is organized through
//! Σ_{μ=x,y} vμ sμᵢ sμⱼ = Σ_{ν=±} vν (s⁺ᵢ s^{−ν}ⱼ + s⁻ᵢ s^{ν}ⱼ), vν = (vˣ ± vʸ)/4.

use crate::basis::{HilbertSpace, Parity};
use crate::spin::SpinValue;
use nalgebra::DMatrix;
use thiserror::Error;

/// Chain geometry used by the convenience constructors.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Topology {
    Open,
    Cyclic,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("state length {got} does not match Hilbert-space dimension {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("total dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("model text parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Per-axis symmetric coupling matrices (energy units).
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingTensor {
    pub vx: DMatrix<f64>,
    pub vy: DMatrix<f64>,
    pub vz: DMatrix<f64>,
}

impl CouplingTensor {
    pub fn zeros(n: usize) -> Self {
        Self {
            vx: DMatrix::zeros(n, n),
            vy: DMatrix::zeros(n, n),
            vz: DMatrix::zeros(n, n),
        }
    }

    /// First-neighbor chain with scalar couplings on every bond.
    pub fn first_neighbor(n: usize, topology: Topology, vx: f64, vy: f64, vz: f64) -> Self {
        let mut c = Self::zeros(n);
        let mut bond = |i: usize, j: usize| {
            c.vx[(i, j)] = vx;
            c.vx[(j, i)] = vx;
            c.vy[(i, j)] = vy;
            c.vy[(j, i)] = vy;
            c.vz[(i, j)] = vz;
            c.vz[(j, i)] = vz;
        };
        for i in 0..n - 1 {
            bond(i, i + 1);
        }
        if topology == Topology::Cyclic && n > 2 {
            bond(n - 1, 0);
        }
        c
    }

    pub fn n(&self) -> usize {
        self.vx.nrows()
    }

    /// Set one symmetric entry on an axis, mirroring (j, i).
    pub fn set(&mut self, axis: Axis, i: usize, j: usize, value: f64) {
        let m = match axis {
            Axis::X => &mut self.vx,
            Axis::Y => &mut self.vy,
            Axis::Z => &mut self.vz,
        };
        m[(i, j)] = value;
        m[(j, i)] = value;
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "vx",
            Axis::Y => "vy",
            Axis::Z => "vz",
        }
    }
}

/// Transverse field per site (energy units).
#[derive(Clone, Debug, PartialEq)]
pub struct FieldProfile(pub Vec<f64>);

impl FieldProfile {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn uniform(n: usize, b: f64) -> Self {
        Self(vec![b; n])
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.iter().map(|b| b * factor).collect())
    }
}

/// A full problem instance: spins, couplings and fields.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub spins: Vec<SpinValue>,
    pub couplings: CouplingTensor,
    pub fields: FieldProfile,
}

/// One invariant violation found by [`ModelSpec::validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    SizeMismatch { member: &'static str, got: usize, want: usize },
    AsymmetricCoupling { axis: Axis, i: usize, j: usize },
    SelfEnergyOnLowSpin { axis: Axis, site: usize },
    NonFiniteCoupling { axis: Axis, i: usize, j: usize },
    NonFiniteField { site: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::SizeMismatch { member, got, want } => {
                write!(f, "{member} has length {got}, expected {want}")
            }
            Violation::AsymmetricCoupling { axis, i, j } => {
                write!(f, "{} not symmetric at pair ({i}, {j})", axis.label())
            }
            Violation::SelfEnergyOnLowSpin { axis, site } => {
                write!(f, "{} self-energy at site {site} requires s ≥ 1", axis.label())
            }
            Violation::NonFiniteCoupling { axis, i, j } => {
                write!(f, "{} not finite at ({i}, {j})", axis.label())
            }
            Violation::NonFiniteField { site } => write!(f, "field not finite at site {site}"),
        }
    }
}

impl ModelSpec {
    pub fn new(spins: Vec<SpinValue>, couplings: CouplingTensor, fields: FieldProfile) -> Self {
        Self { spins, couplings, fields }
    }

    pub fn n_sites(&self) -> usize {
        self.spins.len()
    }

    pub fn hilbert_space(&self) -> HilbertSpace {
        HilbertSpace::new(self.spins.iter().map(|s| s.dim()).collect())
    }

    pub fn with_fields(&self, fields: FieldProfile) -> ModelSpec {
        ModelSpec { spins: self.spins.clone(), couplings: self.couplings.clone(), fields }
    }

    /// Check all structural invariants; returns every violation found.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.spins.len();
        let mut out = Vec::new();
        for (m, label) in [
            (&self.couplings.vx, "vx"),
            (&self.couplings.vy, "vy"),
            (&self.couplings.vz, "vz"),
        ] {
            if m.nrows() != n || m.ncols() != n {
                out.push(Violation::SizeMismatch { member: label, got: m.nrows(), want: n });
            }
        }
        if self.fields.0.len() != n {
            out.push(Violation::SizeMismatch { member: "fields", got: self.fields.0.len(), want: n });
        }
        if !out.is_empty() {
            return out;
        }
        for (axis, m) in [
            (Axis::X, &self.couplings.vx),
            (Axis::Y, &self.couplings.vy),
            (Axis::Z, &self.couplings.vz),
        ] {
            for i in 0..n {
                for j in 0..n {
                    if !m[(i, j)].is_finite() && i <= j {
                        out.push(Violation::NonFiniteCoupling { axis, i, j });
                    }
                }
                for j in i + 1..n {
                    if m[(i, j)] != m[(j, i)] {
                        out.push(Violation::AsymmetricCoupling { axis, i, j });
                    }
                }
                if m[(i, i)] != 0.0 && self.spins[i].twice() < 2 {
                    out.push(Violation::SelfEnergyOnLowSpin { axis, site: i });
                }
            }
        }
        for (i, b) in self.fields.0.iter().enumerate() {
            if !b.is_finite() {
                out.push(Violation::NonFiniteField { site: i });
            }
        }
        out
    }

    /// H·psi through the matrix-free action (allocating convenience).
    pub fn apply_h(&self, psi: &[f64]) -> Result<Vec<f64>, ModelError> {
        let action = HamiltonianAction::new(self);
        let mut out = vec![0.0; action.dim()];
        action.apply(psi, &mut out)?;
        Ok(out)
    }

    /// Dense Hamiltonian, built by applying the matrix-free action to every
    /// basis vector. Refuses dimensions above `cap` (default 4096 via
    /// [`ModelSpec::dense_h`]).
    pub fn dense_h_capped(&self, cap: usize) -> Result<DMatrix<f64>, ModelError> {
        let action = HamiltonianAction::new(self);
        let dim = action.dim();
        if dim > cap {
            return Err(ModelError::DimensionCap { dim, cap });
        }
        let mut h = DMatrix::zeros(dim, dim);
        let mut e = vec![0.0; dim];
        let mut col = vec![0.0; dim];
        for x in 0..dim {
            e[x] = 1.0;
            col.fill(0.0);
            action.apply(&e, &mut col)?;
            for r in 0..dim {
                h[(r, x)] = col[r];
            }
            e[x] = 0.0;
        }
        Ok(h)
    }

    pub fn dense_h(&self) -> Result<DMatrix<f64>, ModelError> {
        self.dense_h_capped(DENSE_CAP_DEFAULT)
    }

    /// Basis indices of one parity sector.
    pub fn parity_sector(&self, parity: Parity) -> Vec<usize> {
        self.hilbert_space().sector(parity)
    }
}

/// Default cap for the dense-oracle path.
pub const DENSE_CAP_DEFAULT: usize = 4096;

struct PairTerm {
    site_i: usize,
    site_j: usize,
    /// −v₊ = −(vx+vy)/4, coefficient of s⁺ᵢs⁻ⱼ + s⁻ᵢs⁺ⱼ
    w_flip: f64,
    /// −v₋ = −(vx−vy)/4, coefficient of s⁺ᵢs⁺ⱼ + s⁻ᵢs⁻ⱼ
    w_pair: f64,
}

struct SelfTerm {
    site: usize,
    /// −½·(vx−vy)/4, coefficient of s⁺s⁺ + s⁻s⁻ (k → k±2)
    w_pair: f64,
}

/// Precompiled matrix-free H·psi. Pure and reentrant; all state is read-only
/// after construction.
pub struct HamiltonianAction {
    space: HilbertSpace,
    diag: Vec<f64>,
    pairs: Vec<PairTerm>,
    selfs: Vec<SelfTerm>,
    /// raise_coeff[site][k] = √((k+1)(2s−k)); last entry unused.
    raise: Vec<Vec<f64>>,
}

impl HamiltonianAction {
    pub fn new(spec: &ModelSpec) -> Self {
        let space = spec.hilbert_space();
        let n = spec.n_sites();
        let dim = space.total_dim();
        let c = &spec.couplings;

        let raise: Vec<Vec<f64>> = spec
            .spins
            .iter()
            .map(|s| (0..s.dim() - 1).map(|k| s.raise_coeff(k)).collect())
            .collect();

        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v_plus = (c.vx[(i, j)] + c.vy[(i, j)]) / 4.0;
                let v_minus = (c.vx[(i, j)] - c.vy[(i, j)]) / 4.0;
                if v_plus != 0.0 || v_minus != 0.0 {
                    pairs.push(PairTerm {
                        site_i: i,
                        site_j: j,
                        w_flip: -v_plus,
                        w_pair: -v_minus,
                    });
                }
            }
        }

        let mut selfs = Vec::new();
        for i in 0..n {
            let v_minus = (c.vx[(i, i)] - c.vy[(i, i)]) / 4.0;
            if v_minus != 0.0 {
                selfs.push(SelfTerm { site: i, w_pair: -0.5 * v_minus });
            }
        }

        // Diagonal part: fields, vz (pair and self), and the diagonal piece
        // s⁺s⁻ + s⁻s⁺ of the self-energy x/y terms.
        let mut diag = vec![0.0; dim];
        let mut m = vec![0.0f64; n]; // sz eigenvalues of the current digits
        for (x, digits) in space.iter_digits().enumerate() {
            for i in 0..n {
                m[i] = spec.spins[i].sz_value(digits[i]);
            }
            let mut e = 0.0;
            for i in 0..n {
                e += spec.fields.0[i] * m[i];
                for j in i + 1..n {
                    e -= c.vz[(i, j)] * m[i] * m[j];
                }
                e -= 0.5 * c.vz[(i, i)] * m[i] * m[i];
                let v_plus_self = (c.vx[(i, i)] + c.vy[(i, i)]) / 4.0;
                if v_plus_self != 0.0 {
                    let k = digits[i];
                    let up = if k + 1 < spec.spins[i].dim() { raise[i][k] } else { 0.0 };
                    let down = if k > 0 { raise[i][k - 1] } else { 0.0 };
                    e -= 0.5 * v_plus_self * (up * up + down * down);
                }
            }
            diag[x] = e;
        }

        Self { space, diag, pairs, selfs, raise }
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    /// out += H·psi. `out` must be zeroed by the caller when a plain product
    /// is wanted.
    pub fn apply(&self, psi: &[f64], out: &mut [f64]) -> Result<(), ModelError> {
        let dim = self.dim();
        if psi.len() != dim || out.len() != dim {
            return Err(ModelError::DimensionMismatch { got: psi.len(), want: dim });
        }

        for x in 0..dim {
            out[x] += self.diag[x] * psi[x];
        }

        let dims = self.space.local_dims();
        let strides = self.space.strides();
        for term in &self.pairs {
            let (i, j) = (term.site_i, term.site_j);
            let (di, dj) = (dims[i], dims[j]);
            let (sti, stj) = (strides[i], strides[j]);
            let (ri, rj) = (&self.raise[i], &self.raise[j]);
            for x in 0..dim {
                let a = psi[x];
                if a == 0.0 {
                    continue;
                }
                let ki = x / sti % di;
                let kj = x / stj % dj;
                // s⁺ᵢ s⁻ⱼ
                if term.w_flip != 0.0 {
                    if ki + 1 < di && kj > 0 {
                        out[x + sti - stj] += term.w_flip * ri[ki] * rj[kj - 1] * a;
                    }
                    if ki > 0 && kj + 1 < dj {
                        out[x - sti + stj] += term.w_flip * ri[ki - 1] * rj[kj] * a;
                    }
                }
                // s⁺ᵢ s⁺ⱼ and s⁻ᵢ s⁻ⱼ
                if term.w_pair != 0.0 {
                    if ki + 1 < di && kj + 1 < dj {
                        out[x + sti + stj] += term.w_pair * ri[ki] * rj[kj] * a;
                    }
                    if ki > 0 && kj > 0 {
                        out[x - sti - stj] += term.w_pair * ri[ki - 1] * rj[kj - 1] * a;
                    }
                }
            }
        }

        for term in &self.selfs {
            let i = term.site;
            let (di, sti) = (dims[i], strides[i]);
            let ri = &self.raise[i];
            for x in 0..dim {
                let a = psi[x];
                if a == 0.0 {
                    continue;
                }
                let ki = x / sti % di;
                if ki + 2 < di {
                    out[x + 2 * sti] += term.w_pair * ri[ki] * ri[ki + 1] * a;
                }
                if ki >= 2 {
                    out[x - 2 * sti] += term.w_pair * ri[ki - 1] * ri[ki - 2] * a;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Flat text format: one record per line, 0-based site indices.
//   spin i 2s
//   field i value
//   vx i j value      (likewise vy, vz; symmetric entry set on both sides)
// Unspecified fields/couplings are zero. '#' starts a comment.
// ---------------------------------------------------------------------------

impl ModelSpec {
    pub fn parse_text(text: &str) -> Result<ModelSpec, ModelError> {
        struct Rec<'a> {
            line: usize,
            kind: &'a str,
            args: Vec<&'a str>,
        }
        let mut recs = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut it = body.split_whitespace();
            let kind = it.next().unwrap();
            recs.push(Rec { line, kind, args: it.collect() });
        }

        let parse_usize = |tok: &str, line: usize| -> Result<usize, ModelError> {
            tok.parse().map_err(|_| ModelError::Parse { line, msg: format!("bad index `{tok}`") })
        };
        let parse_f64 = |tok: &str, line: usize| -> Result<f64, ModelError> {
            tok.parse().map_err(|_| ModelError::Parse { line, msg: format!("bad value `{tok}`") })
        };

        // first pass: find n
        let mut n = 0usize;
        for r in &recs {
            let sites = match r.kind {
                "spin" | "field" => 1,
                "vx" | "vy" | "vz" => 2,
                other => {
                    return Err(ModelError::Parse {
                        line: r.line,
                        msg: format!("unknown record `{other}`"),
                    })
                }
            };
            if r.args.len() != sites + 1 {
                return Err(ModelError::Parse {
                    line: r.line,
                    msg: format!("`{}` expects {} arguments", r.kind, sites + 1),
                });
            }
            for tok in &r.args[..sites] {
                n = n.max(parse_usize(tok, r.line)? + 1);
            }
        }
        if n == 0 {
            return Err(ModelError::Parse { line: 0, msg: "no records".into() });
        }

        let mut spins: Vec<Option<SpinValue>> = vec![None; n];
        let mut couplings = CouplingTensor::zeros(n);
        let mut fields = FieldProfile::zeros(n);
        for r in &recs {
            match r.kind {
                "spin" => {
                    let i = parse_usize(r.args[0], r.line)?;
                    let ts = parse_usize(r.args[1], r.line)? as u32;
                    let s = SpinValue::from_twice(ts).ok_or_else(|| ModelError::Parse {
                        line: r.line,
                        msg: format!("invalid spin 2s = {ts} at site {i}"),
                    })?;
                    spins[i] = Some(s);
                }
                "field" => {
                    let i = parse_usize(r.args[0], r.line)?;
                    fields.0[i] = parse_f64(r.args[1], r.line)?;
                }
                axis @ ("vx" | "vy" | "vz") => {
                    let i = parse_usize(r.args[0], r.line)?;
                    let j = parse_usize(r.args[1], r.line)?;
                    let v = parse_f64(r.args[2], r.line)?;
                    let a = match axis {
                        "vx" => Axis::X,
                        "vy" => Axis::Y,
                        _ => Axis::Z,
                    };
                    couplings.set(a, i, j, v);
                }
                _ => unreachable!(),
            }
        }
        let spins = spins
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| ModelError::Parse {
                    line: 0,
                    msg: format!("missing `spin {i} <2s>` record"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ModelSpec::new(spins, couplings, fields))
    }

    /// Emit the flat text form; zero entries are omitted, coupling entries
    /// are written once with i ≤ j.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let n = self.n_sites();
        let mut out = String::new();
        for (i, s) in self.spins.iter().enumerate() {
            writeln!(out, "spin {i} {}", s.twice()).unwrap();
        }
        for (i, b) in self.fields.0.iter().enumerate() {
            if *b != 0.0 {
                writeln!(out, "field {i} {b}").unwrap();
            }
        }
        for (axis, m) in [
            (Axis::X, &self.couplings.vx),
            (Axis::Y, &self.couplings.vy),
            (Axis::Z, &self.couplings.vz),
        ] {
            for i in 0..n {
                for j in i..n {
                    if m[(i, j)] != 0.0 {
                        writeln!(out, "{} {i} {j} {}", axis.label(), m[(i, j)]).unwrap();
                    }
                }
            }
        }
        out
    }
}
