//! Deformation profiles for two-mode dressed bosonic operators.
//!
//! A profile supplies the squared dressing `f²` that multiplies the bare
//! ladder operators. Two shapes exist:
//!
//! * **entangled**: one joint function `f²(nₐ, n_b)` of both occupations;
//! * **separable**: independent per-mode factors `fₐ²(n)`, `f_b²(n)`.
//!
//! Built-in profiles:
//!
//! * `Identity`: `f² ≡ 1` (undeformed; usable in either shape);
//! * `SelfCollision`: `fₐ²(n) = f_b²(n) = κ·n + (1 − κ)`, intra-mode
//!   collisions with rate `κ`;
//! * `CrossCollision`: `f²(nₐ, n_b) = κ·(nₐ + n_b) + (1 − κ)`, inter-mode
//!   collisions; depends on the occupations only through their sum;
//! * `QOscillator`: `f²(n) = sinh(λn) / (n·sinh λ)` for `n ≥ 1` and
//!   `f²(0) = λ / sinh λ`, the smooth `n → 0` continuation of the same ratio.
//!
//! Custom profiles are supplied as rules (inline tables or functions) and are
//! evaluated eagerly into cached tables at validation time, so later lattice
//! access is a plain load and never re-runs user code.
//!
//! Every profile must be validated over the occupation range it will serve:
//! nonnegativity and finiteness are checked cell by cell, and exchange
//! symmetry is a *declaration* that validation verifies exactly — it is never
//! inferred from values.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Joint rule for a custom entangled profile.
#[derive(Clone)]
pub enum EntangledRule {
    /// Inline table `values[na][nb]`; must cover the validated range.
    Table(Vec<Vec<f64>>),
    /// Arbitrary total function of both occupations.
    Function(Arc<dyn Fn(usize, usize) -> f64 + Send + Sync>),
}

impl EntangledRule {
    pub fn from_fn(f: impl Fn(usize, usize) -> f64 + Send + Sync + 'static) -> Self {
        Self::Function(Arc::new(f))
    }

    fn eval(&self, na: usize, nb: usize) -> Option<f64> {
        match self {
            Self::Table(rows) => rows.get(na)?.get(nb).copied(),
            Self::Function(f) => Some(f(na, nb)),
        }
    }
}

impl fmt::Debug for EntangledRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Table(rows) => write!(f, "Table({} rows)", rows.len()),
            Self::Function(_) => write!(f, "Function"),
        }
    }
}

/// Single-mode rule for a custom separable profile.
#[derive(Clone)]
pub enum ModeRule {
    /// Inline row `values[n]`; must cover the validated range.
    Table(Vec<f64>),
    /// Arbitrary total function of one occupation.
    Function(Arc<dyn Fn(usize) -> f64 + Send + Sync>),
}

impl ModeRule {
    pub fn from_fn(f: impl Fn(usize) -> f64 + Send + Sync + 'static) -> Self {
        Self::Function(Arc::new(f))
    }

    fn eval(&self, n: usize) -> Option<f64> {
        match self {
            Self::Table(row) => row.get(n).copied(),
            Self::Function(f) => Some(f(n)),
        }
    }
}

impl fmt::Debug for ModeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Table(row) => write!(f, "Table({} entries)", row.len()),
            Self::Function(_) => write!(f, "Function"),
        }
    }
}

/// Declarative description of a deformation profile, prior to validation.
#[derive(Debug, Clone)]
pub enum DeformationSpec {
    /// Undeformed modes, `f² ≡ 1`.
    Identity,
    /// Intra-mode collisional dressing, `fₐ² = f_b² = κ·n + (1 − κ)`.
    SelfCollision { kappa: f64 },
    /// Inter-mode collisional dressing, `f² = κ·(nₐ + n_b) + (1 − κ)`.
    CrossCollision { kappa: f64 },
    /// Nonlinear spectrum `f²(n) = sinh(λn)/(n·sinh λ)`, `f²(0) = λ/sinh λ`.
    QOscillator { lambda: f64 },
    /// User-supplied joint profile. `symmetric` is the caller's declaration of
    /// exchange symmetry and is verified exactly during validation.
    CustomEntangled { rule: EntangledRule, symmetric: bool },
    /// User-supplied per-mode profile. `symmetric` declares `fₐ = f_b` and is
    /// verified exactly during validation.
    CustomSeparable { fa: ModeRule, fb: ModeRule, symmetric: bool },
}

/// Which mode a per-mode check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

/// One validation failure, with enough position information to locate it.
#[derive(Debug, Clone)]
pub enum Violation {
    /// Joint value below zero.
    Negative { na: usize, nb: usize, value: f64 },
    /// Joint value NaN or infinite.
    NonFinite { na: usize, nb: usize, value: f64 },
    /// Per-mode value below zero.
    NegativeMode { mode: Mode, n: usize, value: f64 },
    /// Per-mode value NaN or infinite.
    NonFiniteMode { mode: Mode, n: usize, value: f64 },
    /// Declared exchange symmetry broken: `f²(na,nb) ≠ f²(nb,na)`.
    AsymmetricPair { na: usize, nb: usize, ab: f64, ba: f64 },
    /// Declared `fₐ = f_b` broken at occupation `n`.
    ModeMismatch { n: usize, fa: f64, fb: f64 },
    /// Profile parameter outside its domain.
    BadParameter(String),
    /// Inline table does not cover the validated range.
    TableTooSmall { needed: usize, got: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Negative { na, nb, value } => {
                write!(f, "f²({na},{nb}) = {value} is negative")
            }
            Self::NonFinite { na, nb, value } => {
                write!(f, "f²({na},{nb}) = {value} is not finite")
            }
            Self::NegativeMode { mode, n, value } => {
                write!(f, "f²_{mode:?}({n}) = {value} is negative")
            }
            Self::NonFiniteMode { mode, n, value } => {
                write!(f, "f²_{mode:?}({n}) = {value} is not finite")
            }
            Self::AsymmetricPair { na, nb, ab, ba } => {
                write!(f, "declared symmetric but f²({na},{nb}) = {ab} ≠ f²({nb},{na}) = {ba}")
            }
            Self::ModeMismatch { n, fa, fb } => {
                write!(f, "declared fₐ = f_b but fₐ²({n}) = {fa} ≠ f_b²({n}) = {fb}")
            }
            Self::BadParameter(msg) => write!(f, "{msg}"),
            Self::TableTooSmall { needed, got } => {
                write!(f, "table covers {got} occupations, range needs {needed}")
            }
        }
    }
}

/// Outcome of validating a profile over `[0, n_max + 1]` per occupation.
///
/// The checked range extends one step past `n_max` because the diagonal
/// Hamiltonian at occupation `n` reads the profile at `n + 1`.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// Requested working range; cells up to `n_max + 1` were checked.
    pub n_max: usize,
    /// Whether the profile factorises into per-mode dressings.
    pub separable: bool,
    /// The caller's symmetry declaration (verified when `true`).
    pub declared_symmetric: bool,
    /// First violations found, capped at [`ValidationReport::MAX_RECORDED`].
    pub violations: Vec<Violation>,
    /// Total number of violations, including unrecorded ones.
    pub total_violations: usize,
}

impl ValidationReport {
    pub const MAX_RECORDED: usize = 16;

    pub fn passed(&self) -> bool {
        self.total_violations == 0
    }

    /// Compact human-readable digest of the recorded violations.
    pub fn summary(&self) -> String {
        if self.passed() {
            return format!("ok over [0, {}]²", self.n_max + 1);
        }
        let shown: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        let mut s = format!("{} violation(s): {}", self.total_violations, shown.join("; "));
        if self.total_violations > self.violations.len() {
            s.push_str("; …");
        }
        s
    }

    fn push(&mut self, v: Violation) {
        if self.violations.len() < Self::MAX_RECORDED {
            self.violations.push(v);
        }
        self.total_violations += 1;
    }
}

/// Validated, immutable deformation profile ready for lattice evaluation.
///
/// Construction goes through [`DeformationSpec::validated`]; every value the
/// Hamiltonian can touch within the validated range has been checked for
/// finiteness and nonnegativity, and declared symmetry has been verified
/// exactly. Custom rules are frozen into tables here, so evaluation is
/// side-effect free and safe for concurrent reads.
#[derive(Debug, Clone)]
pub struct Deformation {
    form: ProfileForm,
    n_max: usize,
    symmetric: bool,
}

#[derive(Debug, Clone)]
enum ProfileForm {
    Identity,
    SelfCollision { kappa: f64 },
    CrossCollision { kappa: f64 },
    QOscillator { lambda: f64, sinh_lambda: f64 },
    Entangled { side: usize, values: Arc<Vec<f64>> },
    Separable { fa: Arc<Vec<f64>>, fb: Arc<Vec<f64>> },
}

impl DeformationSpec {
    /// Whether this profile factorises into per-mode dressings.
    /// `Identity` does (with unit factors) while also admitting a joint form.
    pub fn separable(&self) -> bool {
        matches!(
            self,
            Self::Identity
                | Self::SelfCollision { .. }
                | Self::QOscillator { .. }
                | Self::CustomSeparable { .. }
        )
    }

    /// The exchange-symmetry declaration. Built-ins are symmetric by
    /// construction; customs carry the caller's flag.
    pub fn declared_symmetric(&self) -> bool {
        match self {
            Self::Identity
            | Self::SelfCollision { .. }
            | Self::CrossCollision { .. }
            | Self::QOscillator { .. } => true,
            Self::CustomEntangled { symmetric, .. } => *symmetric,
            Self::CustomSeparable { symmetric, .. } => *symmetric,
        }
    }

    /// Check the profile over `[0, n_max + 1]` in each occupation: parameter
    /// domains, finiteness, nonnegativity, table coverage, and — when declared
    /// — exact exchange symmetry. Returns the full report; nothing is cached.
    pub fn validate(&self, n_max: usize) -> ValidationReport {
        let mut report = ValidationReport {
            n_max,
            separable: self.separable(),
            declared_symmetric: self.declared_symmetric(),
            violations: Vec::new(),
            total_violations: 0,
        };
        let hi = n_max + 1;

        match self {
            Self::Identity => {}
            Self::SelfCollision { kappa } => {
                if !kappa.is_finite() {
                    report.push(Violation::BadParameter(format!("kappa = {kappa} is not finite")));
                    return report;
                }
                for n in 0..=hi {
                    check_mode_value(&mut report, Mode::A, n, self_collision_f2(*kappa, n));
                }
            }
            Self::CrossCollision { kappa } => {
                if !kappa.is_finite() {
                    report.push(Violation::BadParameter(format!("kappa = {kappa} is not finite")));
                    return report;
                }
                // The joint value depends only on nₐ + n_b, so sweeping the sum
                // covers every cell of the square.
                for s in 0..=2 * hi {
                    let value = cross_collision_f2(*kappa, s);
                    let (na, nb) = (s.min(hi), s - s.min(hi));
                    check_joint_value(&mut report, na, nb, value);
                }
            }
            Self::QOscillator { lambda } => {
                if !(lambda.is_finite() && *lambda > 0.0) {
                    report.push(Violation::BadParameter(format!(
                        "lambda = {lambda} must be a positive finite real"
                    )));
                    return report;
                }
                let sinh_lambda = lambda.sinh();
                for n in 0..=hi {
                    check_mode_value(&mut report, Mode::A, n, q_oscillator_f2(*lambda, sinh_lambda, n));
                }
            }
            Self::CustomEntangled { rule, symmetric } => {
                if let EntangledRule::Table(rows) = rule {
                    let got = rows.iter().map(|r| r.len()).min().unwrap_or(0).min(rows.len());
                    if got < hi + 1 {
                        report.push(Violation::TableTooSmall { needed: hi + 1, got });
                        return report;
                    }
                }
                for na in 0..=hi {
                    for nb in 0..=hi {
                        match rule.eval(na, nb) {
                            Some(v) => check_joint_value(&mut report, na, nb, v),
                            None => {
                                report.push(Violation::TableTooSmall { needed: hi + 1, got: na.max(nb) });
                                return report;
                            }
                        }
                    }
                }
                if *symmetric {
                    for na in 0..=hi {
                        for nb in na + 1..=hi {
                            let ab = rule.eval(na, nb).unwrap_or(f64::NAN);
                            let ba = rule.eval(nb, na).unwrap_or(f64::NAN);
                            if !(ab == ba) {
                                report.push(Violation::AsymmetricPair { na, nb, ab, ba });
                            }
                        }
                    }
                }
            }
            Self::CustomSeparable { fa, fb, symmetric } => {
                for (mode, rule) in [(Mode::A, fa), (Mode::B, fb)] {
                    if let ModeRule::Table(row) = rule {
                        if row.len() < hi + 1 {
                            report.push(Violation::TableTooSmall { needed: hi + 1, got: row.len() });
                            return report;
                        }
                    }
                    for n in 0..=hi {
                        match rule.eval(n) {
                            Some(v) => check_mode_value(&mut report, mode, n, v),
                            None => {
                                report.push(Violation::TableTooSmall { needed: hi + 1, got: n });
                                return report;
                            }
                        }
                    }
                }
                if *symmetric {
                    for n in 0..=hi {
                        let va = fa.eval(n).unwrap_or(f64::NAN);
                        let vb = fb.eval(n).unwrap_or(f64::NAN);
                        if !(va == vb) {
                            report.push(Violation::ModeMismatch { n, fa: va, fb: vb });
                        }
                    }
                }
            }
        }
        report
    }

    /// Validate over `[0, n_max + 1]` and freeze into an evaluator.
    /// Custom rules are materialised into tables; built-ins keep their closed
    /// forms. Fails with the report digest if any check failed.
    pub fn validated(&self, n_max: usize) -> Result<Deformation> {
        let report = self.validate(n_max);
        if !report.passed() {
            return Err(Error::ValidationFailed(report.summary()));
        }
        let hi = n_max + 1;
        let form = match self {
            Self::Identity => ProfileForm::Identity,
            Self::SelfCollision { kappa } => ProfileForm::SelfCollision { kappa: *kappa },
            Self::CrossCollision { kappa } => ProfileForm::CrossCollision { kappa: *kappa },
            Self::QOscillator { lambda } => ProfileForm::QOscillator {
                lambda: *lambda,
                sinh_lambda: lambda.sinh(),
            },
            Self::CustomEntangled { rule, .. } => {
                let side = hi + 1;
                let mut values = Vec::with_capacity(side * side);
                for na in 0..side {
                    for nb in 0..side {
                        values.push(rule.eval(na, nb).expect("extent verified by validation"));
                    }
                }
                ProfileForm::Entangled { side, values: Arc::new(values) }
            }
            Self::CustomSeparable { fa, fb, .. } => {
                let cache = |rule: &ModeRule| -> Vec<f64> {
                    (0..=hi).map(|n| rule.eval(n).expect("extent verified by validation")).collect()
                };
                ProfileForm::Separable { fa: Arc::new(cache(fa)), fb: Arc::new(cache(fb)) }
            }
        };
        Ok(Deformation { form, n_max, symmetric: self.declared_symmetric() })
    }
}

impl Deformation {
    /// Upper end of the validated working range; profile values are available
    /// for occupations up to `n_max + 1`.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Verified exchange-symmetry declaration.
    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    /// Whether per-mode factors `fₐ²`, `f_b²` exist.
    pub fn separable(&self) -> bool {
        matches!(
            self.form,
            ProfileForm::Identity
                | ProfileForm::SelfCollision { .. }
                | ProfileForm::QOscillator { .. }
                | ProfileForm::Separable { .. }
        )
    }

    /// Whether a joint `f²(nₐ, n_b)` exists.
    pub fn supports_joint(&self) -> bool {
        matches!(
            self.form,
            ProfileForm::Identity | ProfileForm::CrossCollision { .. } | ProfileForm::Entangled { .. }
        )
    }

    /// Joint profile value `f²(nₐ, n_b)`.
    ///
    /// Errors with `SeparableMisuse` when the profile only defines per-mode
    /// factors, and `NegativeDeformation` should a negative value ever slip
    /// through (unreachable within the validated range).
    pub fn f_squared(&self, na: usize, nb: usize) -> Result<f64> {
        if !self.supports_joint() {
            return Err(Error::SeparableMisuse(
                "joint f²(na, nb) requested from a per-mode profile".into(),
            ));
        }
        self.assert_range(na.max(nb));
        let v = self.joint(na, nb);
        if v < 0.0 {
            return Err(Error::NegativeDeformation { na, nb, value: v });
        }
        Ok(v)
    }

    /// Mode-a dressing `fₐ²(n)`; errors with `SeparableMisuse` for jointly
    /// entangled profiles.
    pub fn f_squared_a(&self, n: usize) -> Result<f64> {
        self.per_mode(Mode::A, n)
    }

    /// Mode-b dressing `f_b²(n)`; errors with `SeparableMisuse` for jointly
    /// entangled profiles.
    pub fn f_squared_b(&self, n: usize) -> Result<f64> {
        self.per_mode(Mode::B, n)
    }

    fn per_mode(&self, mode: Mode, n: usize) -> Result<f64> {
        if !self.separable() {
            return Err(Error::SeparableMisuse(
                "per-mode f² requested from a jointly entangled profile".into(),
            ));
        }
        self.assert_range(n);
        let v = match mode {
            Mode::A => self.mode_a(n),
            Mode::B => self.mode_b(n),
        };
        if v < 0.0 {
            return Err(Error::NegativeDeformation { na: n, nb: n, value: v });
        }
        Ok(v)
    }

    fn assert_range(&self, n: usize) {
        assert!(
            n <= self.n_max + 1,
            "occupation {n} outside validated range [0, {}]",
            self.n_max + 1
        );
    }

    /// Joint value for profiles validated to support it.
    pub(crate) fn joint(&self, na: usize, nb: usize) -> f64 {
        match &self.form {
            ProfileForm::Identity => 1.0,
            ProfileForm::CrossCollision { kappa } => cross_collision_f2(*kappa, na + nb),
            ProfileForm::Entangled { side, values } => values[na * side + nb],
            _ => unreachable!("joint access is guarded by supports_joint"),
        }
    }

    /// Mode-a value for profiles validated to be separable.
    pub(crate) fn mode_a(&self, n: usize) -> f64 {
        match &self.form {
            ProfileForm::Identity => 1.0,
            ProfileForm::SelfCollision { kappa } => self_collision_f2(*kappa, n),
            ProfileForm::QOscillator { lambda, sinh_lambda } => {
                q_oscillator_f2(*lambda, *sinh_lambda, n)
            }
            ProfileForm::Separable { fa, .. } => fa[n],
            _ => unreachable!("per-mode access is guarded by separable"),
        }
    }

    /// Mode-b value for profiles validated to be separable.
    pub(crate) fn mode_b(&self, n: usize) -> f64 {
        match &self.form {
            ProfileForm::Separable { fb, .. } => fb[n],
            _ => self.mode_a(n),
        }
    }
}

fn self_collision_f2(kappa: f64, n: usize) -> f64 {
    kappa * n as f64 + (1.0 - kappa)
}

fn cross_collision_f2(kappa: f64, s: usize) -> f64 {
    kappa * s as f64 + (1.0 - kappa)
}

fn q_oscillator_f2(lambda: f64, sinh_lambda: f64, n: usize) -> f64 {
    if n == 0 {
        lambda / sinh_lambda
    } else {
        (lambda * n as f64).sinh() / (n as f64 * sinh_lambda)
    }
}

fn check_joint_value(report: &mut ValidationReport, na: usize, nb: usize, value: f64) {
    if !value.is_finite() {
        report.push(Violation::NonFinite { na, nb, value });
    } else if value < 0.0 {
        report.push(Violation::Negative { na, nb, value });
    }
}

fn check_mode_value(report: &mut ValidationReport, mode: Mode, n: usize, value: f64) {
    if !value.is_finite() {
        report.push(Violation::NonFiniteMode { mode, n, value });
    } else if value < 0.0 {
        report.push(Violation::NegativeMode { mode, n, value });
    }
}
