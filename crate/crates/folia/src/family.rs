//! One-parameter polynomial families and the sampled equireduction check:
//! Milnor-number constancy at the origin plus equality of the canonical
//! doubly-weighted arrowed dual-tree hashes. Sampling gives evidence, not a
//! proof, and the report says so.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use crate::dual::{dual_tree_hash, unfold};
use crate::error::Error;
use crate::field::{FieldDescriptor, FieldElem};
use crate::milnor::{milnor_number, Milnor};
use crate::poly1::Poly1;
use crate::poly2::{OneForm, Poly2};
use crate::rat::fmt_rat;
use crate::reduction::{reduce, Config};

/// Bivariate polynomial whose coefficients are polynomials in one parameter t
/// over the rationals.
#[derive(Clone, Debug)]
pub struct FamPoly {
    pub terms: BTreeMap<(u32, u32), Poly1>,
}

impl FamPoly {
    pub fn zero() -> FamPoly {
        FamPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Poly1) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn specialize(&self, field: &Arc<FieldDescriptor>, t0: &BigRational) -> Poly2 {
        let te = FieldElem::from_rational(field, t0.clone());
        let mut out = Poly2::zero(field);
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, c.eval(&te));
        }
        out
    }
}

/// η = A(x, y; t) dx + B(x, y; t) dy with polynomial dependence on t.
#[derive(Clone, Debug)]
pub struct OneFormFamily {
    pub a: FamPoly,
    pub b: FamPoly,
}

impl OneFormFamily {
    /// Exact substitution of a rational parameter value.
    pub fn specialize(&self, t0: &BigRational) -> OneForm {
        let field = FieldDescriptor::rationals();
        OneForm::new(
            self.a.specialize(&field, t0),
            self.b.specialize(&field, t0),
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum SampleVerdict {
    Pass,
    MuDrop { base: usize, sample: usize },
    TreeMismatch { base_hash: String, sample_hash: String },
    ReductionError { message: String },
}

impl std::fmt::Display for SampleVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SampleVerdict::Pass => write!(f, "pass"),
            SampleVerdict::MuDrop { base, sample } => {
                write!(f, "μ drop {} → {}", base, sample)
            }
            SampleVerdict::TreeMismatch { .. } => write!(f, "dual trees differ"),
            SampleVerdict::ReductionError { message } => write!(f, "{}", message),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    /// Per-sample verdicts in the sample order given.
    pub samples: Vec<(String, SampleVerdict)>,
    pub equisingular_at_samples: bool,
    /// The check is sampling evidence, never a proof.
    pub disclaimer: &'static str,
}

pub const DEFAULT_SAMPLES: [(i64, i64); 3] = [(1, 8), (1, 16), (1, 32)];

/// Per sample t₀: (i) the Milnor number at the origin of the specialization
/// must equal the base value; (ii) the canonical hash of the doubly-weighted
/// arrowed dual tree must match the base tree's. A dicritical sample is
/// itself a failure witness.
pub fn equising_sample_check(
    family: &OneFormFamily,
    samples: &[BigRational],
    config: &Config,
) -> std::result::Result<FamilyReport, Error> {
    let zero = BigRational::from_integer(0.into());
    let base_form = family.specialize(&zero);
    let base_mu = milnor_number(&base_form.a, &base_form.b, config.milnor_cap);
    let Milnor::Finite(base_mu) = base_mu else {
        return Err(Error::NotIsolatedSingularity(
            "base member of the family".into(),
        ));
    };
    let base_tree = reduce(&base_form, config)?;
    let base_hash = format!("{:016x}", dual_tree_hash(&unfold(&base_tree)));

    let mut rows = Vec::new();
    let mut all_pass = true;
    for t0 in samples {
        let label = fmt_rat(t0);
        let form = family.specialize(t0);
        let verdict = check_one(&form, base_mu, &base_hash, config);
        if !matches!(verdict, SampleVerdict::Pass) {
            all_pass = false;
        }
        rows.push((label, verdict));
    }
    Ok(FamilyReport {
        samples: rows,
        equisingular_at_samples: all_pass,
        disclaimer: "sampling check: evidence of equisingularity, not a proof",
    })
}

fn check_one(
    form: &OneForm,
    base_mu: usize,
    base_hash: &str,
    config: &Config,
) -> SampleVerdict {
    let mu = match milnor_number(&form.a, &form.b, config.milnor_cap) {
        Milnor::Finite(m) => m,
        Milnor::NotIsolated => {
            return SampleVerdict::ReductionError {
                message: "singular locus leaves the origin section".into(),
            }
        }
        Milnor::CapExceeded => {
            return SampleVerdict::ReductionError {
                message: "Milnor stabilization cap exceeded".into(),
            }
        }
    };
    if mu != base_mu {
        return SampleVerdict::MuDrop {
            base: base_mu,
            sample: mu,
        };
    }
    match reduce(form, config) {
        Ok(tree) => {
            let h = format!("{:016x}", dual_tree_hash(&unfold(&tree)));
            if h == base_hash {
                SampleVerdict::Pass
            } else {
                SampleVerdict::TreeMismatch {
                    base_hash: base_hash.to_string(),
                    sample_hash: h,
                }
            }
        }
        Err(e) => SampleVerdict::ReductionError {
            message: format!("{}", e),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn q() -> Arc<FieldDescriptor> {
        FieldDescriptor::rationals()
    }

    fn tpoly(coeffs: &[i64]) -> Poly1 {
        Poly1::from_coeffs(
            &q(),
            coeffs.iter().map(|&c| FieldElem::from_int(&q(), c)).collect(),
        )
    }

    /// η₁ = x dy + y(y − t) dx = (y² − ty) dx + x dy.
    fn eta1() -> OneFormFamily {
        let mut a = FamPoly::zero();
        a.add_term(0, 2, tpoly(&[1]));
        a.add_term(0, 1, tpoly(&[0, -1])); // −t·y
        let mut b = FamPoly::zero();
        b.add_term(1, 0, tpoly(&[1]));
        OneFormFamily { a, b }
    }

    #[test]
    fn specialize_examples() {
        let f = eta1();
        let at0 = f.specialize(&int(0));
        // x dy + y² dx
        assert_eq!(at0.a.coeff(0, 2).to_rational(), Some(int(1)));
        assert!(at0.a.coeff(0, 1).is_zero());
        let at1 = f.specialize(&int(1));
        assert_eq!(at1.a.coeff(0, 1).to_rational(), Some(int(-1)));
    }

    #[test]
    fn eta1_fails_with_mu_drop() {
        let report =
            equising_sample_check(&eta1(), &[int(1), rat(1, 2)], &Config::default()).unwrap();
        assert!(!report.equisingular_at_samples);
        for (_, v) in &report.samples {
            match v {
                SampleVerdict::MuDrop { base: 2, sample: 1 } => {}
                other => panic!("{:?}", other),
            }
            assert_eq!(format!("{}", v), "μ drop 2 → 1");
        }
    }

    #[test]
    fn constant_cusp_family_passes() {
        let mut a = FamPoly::zero();
        a.add_term(2, 0, tpoly(&[-3]));
        let mut b = FamPoly::zero();
        b.add_term(0, 1, tpoly(&[2]));
        let fam = OneFormFamily { a, b };
        let report =
            equising_sample_check(&fam, &[int(1), int(2), int(3)], &Config::default()).unwrap();
        assert!(report.equisingular_at_samples);
    }

    #[test]
    fn node_family_tree_mismatch() {
        // d(y² − x³ − t·x²): cusp at t = 0, node for t ≠ 0
        let mut a = FamPoly::zero();
        a.add_term(2, 0, tpoly(&[-3]));
        a.add_term(1, 0, tpoly(&[0, -2])); // −2t·x
        let mut b = FamPoly::zero();
        b.add_term(0, 1, tpoly(&[2]));
        let fam = OneFormFamily { a, b };
        let report = equising_sample_check(&fam, &[int(1)], &Config::default()).unwrap();
        assert!(!report.equisingular_at_samples);
        // μ already separates the node (μ=1) from the cusp (μ=2)
        match &report.samples[0].1 {
            SampleVerdict::MuDrop { base: 2, sample: 1 } => {}
            other => panic!("{:?}", other),
        }
    }
}
