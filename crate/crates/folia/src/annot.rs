//! The annotations file: user-supplied holonomy and first-integral facts
//! that the machine cannot compute. JSON, keyed by the stable ids printed by
//! the reduce subcommand ("p5", "D3").

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localclass::{FirstIntegral, Provenance};
use crate::reduction::ReductionTree;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Holonomy {
    Finite { order: u64 },
    CommutativeInfinite,
    NonCommutative,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorAnnot {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holonomy: Option<Holonomy>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingAnnot {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_integral: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_holonomy_periodic: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transverse_symmetry_weight: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub green_edge_index: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub green_edge_correction: Option<bool>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Annotations {
    #[serde(default)]
    pub divisors: BTreeMap<String, DivisorAnnot>,
    #[serde(default)]
    pub singularities: BTreeMap<String, SingAnnot>,
}

impl Annotations {
    pub fn empty() -> Annotations {
        Annotations::default()
    }

    pub fn from_json(text: &str) -> Result<Annotations> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn divisor(&self, comp_rep: usize) -> Option<&DivisorAnnot> {
        self.divisors.get(&format!("D{}", comp_rep + 1))
    }

    pub fn singularity(&self, point_rep: usize) -> Option<&SingAnnot> {
        self.singularities.get(&format!("p{}", point_rep))
    }

    /// Referenced ids must exist; annotated attributes may only fill
    /// computed Unknowns, never contradict certified values.
    pub fn validate(&self, tree: &ReductionTree) -> Result<()> {
        for key in self.divisors.keys() {
            let ok = key
                .strip_prefix('D')
                .and_then(|n| n.parse::<usize>().ok())
                .map(|n| n >= 1 && n <= tree.comps.len())
                .unwrap_or(false);
            if !ok {
                return Err(Error::UnknownAnnotationId(key.clone()));
            }
        }
        for (key, annot) in &self.singularities {
            let id = key
                .strip_prefix('p')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| {
                    tree.points
                        .get(n)
                        .map(|p| tree.classifications.contains_key(&p.id))
                        .unwrap_or(false)
                });
            let Some(id) = id else {
                return Err(Error::UnknownAnnotationId(key.clone()));
            };
            let rec = &tree.classifications[&id];
            if let Some(fi) = annot.first_integral {
                match &rec.first_integral {
                    (FirstIntegral::Yes { .. }, Provenance::Certified) if !fi => {
                        return Err(Error::AnnotationConflict { id: key.clone() })
                    }
                    (FirstIntegral::No, Provenance::Certified) if fi => {
                        return Err(Error::AnnotationConflict { id: key.clone() })
                    }
                    _ => {}
                }
            }
            if let Some(p) = annot.weak_holonomy_periodic {
                use crate::localclass::Periodicity;
                match rec.weak_periodic {
                    (Periodicity::Yes, Provenance::Certified) if !p => {
                        return Err(Error::AnnotationConflict { id: key.clone() })
                    }
                    (Periodicity::No, Provenance::Certified) if p => {
                        return Err(Error::AnnotationConflict { id: key.clone() })
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}
