//! Number-diagonal two-mode Hamiltonians built from a deformation profile.
//!
//! With dressed ladder operators `Â = â·f(n̂ₐ, n̂_b)` (and likewise for mode
//! b), the symmetrised free Hamiltonian `½(ÂÂ† + Â†Â) + ½(B̂B̂† + B̂†B̂)` is
//! diagonal in the joint Fock basis. Its eigenvalue at occupation `(nₐ, n_b)`
//! is, for a jointly entangled profile,
//!
//! ```text
//! ℋ(nₐ,n_b) = ½[(nₐ+n_b)·f²(nₐ,n_b) + (nₐ+1)·f²(nₐ+1,n_b) + (n_b+1)·f²(nₐ,n_b+1)]
//! ```
//!
//! and, for a separable profile,
//!
//! ```text
//! ℋ(nₐ,n_b) = ½[nₐ·fₐ²(nₐ) + (nₐ+1)·fₐ²(nₐ+1) + n_b·f_b²(n_b) + (n_b+1)·f_b²(n_b+1)]
//! ```
//!
//! These defining forms are always evaluated as stated; algebraic
//! simplifications available for specific profiles are used only as test
//! oracles elsewhere.
//!
//! The interference fringe of two equal-amplitude coherent states evolves
//! through the phase exponent
//!
//! ```text
//! E(nₐ,n_b) = ℋ(nₐ,n_b+1) − ℋ(nₐ+1,n_b),
//! ```
//!
//! the energy mismatch between the two one-quantum transfer paths that
//! connect the same pair of occupations.

use std::fmt;
use std::sync::Arc;

use crate::deformation::Deformation;
use crate::error::{Error, Result};

/// Which defining form of the diagonal energy is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HamiltonianForm {
    /// Joint profile `f²(nₐ, n_b)`.
    Entangled,
    /// Per-mode profiles `fₐ²(n)`, `f_b²(n)`.
    Separable,
}

type Shift = Arc<dyn Fn(usize, usize) -> f64 + Send + Sync>;

/// Diagonal Hamiltonian over the validated occupation range of its profile.
///
/// Immutable after construction and cheap to clone; evaluation is pure, so
/// concurrent reads are safe.
#[derive(Clone)]
pub struct DiagonalHamiltonian {
    deformation: Deformation,
    form: HamiltonianForm,
    shift: Option<Shift>,
}

impl fmt::Debug for DiagonalHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiagonalHamiltonian")
            .field("deformation", &self.deformation)
            .field("form", &self.form)
            .field("shift", &self.shift.as_ref().map(|_| "…"))
            .finish()
    }
}

impl DiagonalHamiltonian {
    /// Pair a validated profile with an explicit form. Errors with
    /// `SeparableMisuse` when the profile cannot supply that form.
    pub fn new(deformation: Deformation, form: HamiltonianForm) -> Result<Self> {
        match form {
            HamiltonianForm::Entangled if !deformation.supports_joint() => {
                return Err(Error::SeparableMisuse(
                    "entangled Hamiltonian form requires a joint profile".into(),
                ));
            }
            HamiltonianForm::Separable if !deformation.separable() => {
                return Err(Error::SeparableMisuse(
                    "separable Hamiltonian form requires per-mode profiles".into(),
                ));
            }
            _ => {}
        }
        Ok(Self { deformation, form, shift: None })
    }

    /// Pick the natural form for the profile: entangled whenever a joint
    /// `f²` exists, separable otherwise. (For `Identity` the two forms agree.)
    pub fn for_deformation(deformation: Deformation) -> Self {
        let form = if deformation.supports_joint() {
            HamiltonianForm::Entangled
        } else {
            HamiltonianForm::Separable
        };
        Self { deformation, form, shift: None }
    }

    /// Add a diagnostic term `ℋ ↦ ℋ + shift(nₐ, n_b)`.
    ///
    /// This is a validation hook, not physics: shifts depending only on
    /// `nₐ + n_b` must leave the phase exponent unchanged (invariance check),
    /// while mode-asymmetric shifts corrupt it on one evaluation route only
    /// and must be caught by the series/state-vector cross-check.
    pub fn with_diagonal_shift(
        mut self,
        shift: impl Fn(usize, usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.shift = Some(Arc::new(shift));
        self
    }

    pub fn deformation(&self) -> &Deformation {
        &self.deformation
    }

    pub fn form(&self) -> HamiltonianForm {
        self.form
    }

    /// Diagonal energy `ℋ(nₐ, n_b)`.
    ///
    /// Valid for occupations up to the profile's validated `n_max`; the
    /// defining form reads the profile one step above each argument.
    pub fn h_diag(&self, na: usize, nb: usize) -> f64 {
        assert!(
            na <= self.deformation.n_max() && nb <= self.deformation.n_max(),
            "occupation ({na},{nb}) outside validated range [0, {}]²",
            self.deformation.n_max()
        );
        let base = match self.form {
            HamiltonianForm::Entangled => {
                let d = &self.deformation;
                let t_diag = ((na + nb) as f64) * d.joint(na, nb);
                let up_a = d.joint(na + 1, nb);
                let up_b = d.joint(na, nb + 1);
                // The two raised-occupation terms are grouped before t_diag and
                // factored when their profile values coincide bitwise. This
                // keeps ℋ exactly exchange-symmetric for symmetric profiles
                // and makes the phase exponent vanish identically whenever f²
                // depends on the occupations only through their sum.
                let raised = if up_a == up_b {
                    (((na + 1) + (nb + 1)) as f64) * up_a
                } else {
                    ((na + 1) as f64) * up_a + ((nb + 1) as f64) * up_b
                };
                0.5 * (t_diag + raised)
            }
            HamiltonianForm::Separable => {
                // Per-mode grouping: each mode's pair of terms is summed first,
                // so exchanging (nₐ, n_b) under fₐ = f_b permutes two addends
                // of a commutative sum and ℋ stays exactly symmetric.
                let d = &self.deformation;
                let ga = (na as f64) * d.mode_a(na) + ((na + 1) as f64) * d.mode_a(na + 1);
                let gb = (nb as f64) * d.mode_b(nb) + ((nb + 1) as f64) * d.mode_b(nb + 1);
                0.5 * (ga + gb)
            }
        };
        match &self.shift {
            Some(s) => base + s(na, nb),
            None => base,
        }
    }

    /// Phase exponent `E(nₐ, n_b) = ℋ(nₐ, n_b+1) − ℋ(nₐ+1, n_b)`, evaluated
    /// exactly as that difference of diagonal energies.
    ///
    /// Valid for occupations up to `n_max − 1` of the profile's range.
    pub fn phase_exponent(&self, na: usize, nb: usize) -> f64 {
        self.h_diag(na, nb + 1) - self.h_diag(na + 1, nb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::{DeformationSpec, EntangledRule};
    use crate::numerics::ulp;

    fn entangled(spec: DeformationSpec, n_max: usize) -> DiagonalHamiltonian {
        DiagonalHamiltonian::new(spec.validated(n_max).unwrap(), HamiltonianForm::Entangled).unwrap()
    }

    fn separable(spec: DeformationSpec, n_max: usize) -> DiagonalHamiltonian {
        DiagonalHamiltonian::new(spec.validated(n_max).unwrap(), HamiltonianForm::Separable).unwrap()
    }

    #[test]
    fn identity_ground_cell_is_one() {
        let h = entangled(DeformationSpec::Identity, 8);
        assert_eq!(h.h_diag(0, 0), 1.0);
    }

    #[test]
    fn identity_forms_agree_exactly() {
        let he = entangled(DeformationSpec::Identity, 12);
        let hs = separable(DeformationSpec::Identity, 12);
        for na in 0..=12 {
            for nb in 0..=12 {
                let expected = (na + nb + 1) as f64;
                assert_eq!(he.h_diag(na, nb), expected);
                assert_eq!(hs.h_diag(na, nb), expected);
            }
        }
    }

    #[test]
    fn self_collision_matches_quadratic_spectrum() {
        // For fₐ² = f_b² = κn + (1−κ) the defining form sums to
        // nₐ + n_b + 1 + κ(nₐ² + n_b²); with dyadic κ both sides are exact.
        let kappa = 0.25;
        let h = separable(DeformationSpec::SelfCollision { kappa }, 16);
        assert_eq!(h.h_diag(2, 1), 5.25);
        for na in 0..=16 {
            for nb in 0..=16 {
                let expected = (na + nb + 1) as f64 + kappa * ((na * na + nb * nb) as f64);
                assert_eq!(h.h_diag(na, nb), expected, "at ({na},{nb})");
            }
        }
    }

    #[test]
    fn cross_collision_defining_form_value() {
        // Direct substitution at (1,1), κ = 0.1:
        // ½[2·f²(1,1) + 2·f²(2,1) + 2·f²(1,2)] = ½[2·1.1 + 4·1.2] = 3.5.
        let h = entangled(DeformationSpec::CrossCollision { kappa: 0.1 }, 8);
        let v = h.h_diag(1, 1);
        assert!((v - 3.5).abs() <= 4.0 * ulp(3.5), "ℋ(1,1) = {v}");
    }

    #[test]
    fn self_collision_phase_exponent_closed_form() {
        let h = separable(DeformationSpec::SelfCollision { kappa: 0.25 }, 8);
        assert_eq!(h.phase_exponent(1, 4), 1.5);
    }

    #[test]
    fn sum_dependent_profiles_have_exactly_zero_exponent() {
        for kappa in [0.05, 0.1, 0.37, 0.5, 0.93] {
            let h = entangled(DeformationSpec::CrossCollision { kappa }, 65);
            for na in 0..=64 {
                for nb in 0..=64 {
                    assert_eq!(h.phase_exponent(na, nb), 0.0, "κ={kappa} at ({na},{nb})");
                }
            }
        }
        let h = entangled(DeformationSpec::Identity, 65);
        for na in 0..=64 {
            for nb in 0..=64 {
                assert_eq!(h.phase_exponent(na, nb), 0.0);
            }
        }
    }

    #[test]
    fn entangled_form_rejects_separable_profile() {
        let d = DeformationSpec::SelfCollision { kappa: 0.2 }.validated(4).unwrap();
        assert!(matches!(
            DiagonalHamiltonian::new(d, HamiltonianForm::Entangled),
            Err(Error::SeparableMisuse(_))
        ));
    }

    #[test]
    fn separable_form_rejects_entangled_profile() {
        let d = DeformationSpec::CrossCollision { kappa: 0.2 }.validated(4).unwrap();
        assert!(matches!(
            DiagonalHamiltonian::new(d, HamiltonianForm::Separable),
            Err(Error::SeparableMisuse(_))
        ));
    }

    #[test]
    fn natural_form_selection() {
        let c = DiagonalHamiltonian::for_deformation(
            DeformationSpec::CrossCollision { kappa: 0.2 }.validated(4).unwrap(),
        );
        assert_eq!(c.form(), HamiltonianForm::Entangled);
        let s = DiagonalHamiltonian::for_deformation(
            DeformationSpec::QOscillator { lambda: 0.5 }.validated(4).unwrap(),
        );
        assert_eq!(s.form(), HamiltonianForm::Separable);
    }

    #[test]
    fn mode_asymmetric_shift_displaces_exponent_by_constant() {
        let base = separable(DeformationSpec::SelfCollision { kappa: 0.25 }, 8);
        let shifted = base.clone().with_diagonal_shift(|na, _| na as f64);
        for na in 0..=7 {
            for nb in 0..=7 {
                // ℋ + nₐ moves E by (nₐ) − (nₐ+1) = −1.
                let d = shifted.phase_exponent(na, nb) - base.phase_exponent(na, nb);
                assert_eq!(d, -1.0, "at ({na},{nb})");
            }
        }
    }

    #[test]
    fn symmetric_table_gives_exactly_antisymmetric_exponent() {
        let side = 12;
        let rows: Vec<Vec<f64>> = (0..side)
            .map(|i| {
                (0..side)
                    .map(|j| {
                        let (lo, hi) = (i.min(j) as f64, i.max(j) as f64);
                        0.3 + 0.17 * lo + 0.05 * hi * hi
                    })
                    .collect()
            })
            .collect();
        let h = entangled(
            DeformationSpec::CustomEntangled { rule: EntangledRule::Table(rows), symmetric: true },
            side - 2,
        );
        for na in 0..side - 2 {
            for nb in 0..side - 2 {
                let e = h.phase_exponent(na, nb);
                let swapped = h.phase_exponent(nb, na);
                assert_eq!(e, -swapped, "at ({na},{nb})");
            }
        }
    }
}
