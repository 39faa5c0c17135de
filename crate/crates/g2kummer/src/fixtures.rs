//! Fixture documents: the JSON wire format for orbifolds, resolution choices
//! and the shipped example catalogue, plus loading with cross-validation
//! against the exact group computations.

use crate::ale::roots::{AdeKind, RootSystem};
use crate::ale::{CurveKind, DeformationPoint};
use crate::bieberbach::GroupDescription;
use crate::g2form::G2Form;
use crate::linalg::IMat;
use crate::orbifold::{
    local_model, preserves_phi, singular_components, symmetry_action_on_components, AffineMap7,
    CrystalGroupR7,
};
use crate::pipeline::{
    count_equivariant_mechanism, count_orbifold_mechanism, ComponentData, ComponentKAction,
    ComponentResolution, CountReport, CurveChoice, Mechanism,
};
use crate::quat::ImVec;
use crate::rat::{Rat, Q};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("group data: {0}")]
    Group(#[from] crate::bieberbach::BieberbachError),
    #[error("orbifold data: {0}")]
    Orbifold(#[from] crate::orbifold::OrbifoldError),
    #[error("pipeline: {0}")]
    Pipeline(#[from] crate::pipeline::PipelineError),
    #[error("deformation data: {0}")]
    Ale(#[from] crate::ale::AleError),
    #[error("fixture inconsistency: {0}")]
    Inconsistent(String),
    #[error("duplicate fixture tag {0}")]
    DuplicateTag(String),
    #[error("fixture has no global group")]
    NoGlobalGroup,
}

/// An affine isometry of `T^7` on the wire.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineMapDoc {
    pub linear: Vec<Vec<i64>>,
    pub translation: Vec<Q>,
}

impl AffineMapDoc {
    pub fn to_map(&self) -> Result<AffineMap7, FixtureError> {
        let lin = IMat::from_rows(&self.linear);
        let mut t = [Rat::from_integer(0); 7];
        for (i, q) in self.translation.iter().enumerate() {
            t[i] = q.to_rat();
        }
        Ok(AffineMap7::new(lin, t)?)
    }

    pub fn from_map(m: &AffineMap7) -> Self {
        AffineMapDoc {
            linear: (0..7)
                .map(|r| (0..7).map(|c| m.linear.at(r, c)).collect())
                .collect(),
            translation: m.translation.iter().map(|&r| r.into()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlobalDoc {
    pub generators: Vec<AffineMapDoc>,
    /// the extra symmetry generating the group K
    pub symmetry: Option<AffineMapDoc>,
    /// index of the stratum carrying the resolution data
    pub resolved_stratum: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RhoDoc {
    /// induced rotation on `Im H` in the lattice basis
    pub matrix: Vec<Vec<i64>>,
    /// e.g. "[-iqi]"
    pub display: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentDoc {
    pub id: String,
    pub copies: usize,
    pub gamma: AdeKind,
    pub group: GroupDescription,
    pub rho: Vec<RhoDoc>,
    pub rho_trivial_on_lattice: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveDoc {
    pub axis: [i64; 3],
    pub length: Q,
    pub kind: CurveKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolutionDoc {
    pub component: String,
    /// columns of the deformation point as rational triples
    pub zeta: Vec<Vec<Q>>,
    pub curves: Vec<CurveDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KComponentDoc {
    pub component: String,
    pub lambda: Vec<Vec<Vec<i64>>>,
    pub kappa: Vec<Vec<Vec<i64>>>,
    /// verified against the global group when one is present
    pub fixes_component: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KActionDoc {
    pub per_component: Vec<KComponentDoc>,
}

/// A complete example document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureDoc {
    pub tag: String,
    pub title: String,
    /// expected per-resolution-entry lower bounds
    pub expected_counts: Vec<usize>,
    pub mechanism: Mechanism,
    #[serde(default)]
    pub global: Option<GlobalDoc>,
    pub components: Vec<ComponentDoc>,
    pub resolution: Vec<ResolutionDoc>,
    #[serde(default)]
    pub k_action: Option<KActionDoc>,
}

/// A fixture converted to pipeline inputs, with validation notes.
#[derive(Debug)]
pub struct LoadedFixture {
    pub doc: FixtureDoc,
    pub components: Vec<ComponentData>,
    pub resolutions: Vec<ComponentResolution>,
    pub k_actions: Vec<ComponentKAction>,
    pub global: Option<(CrystalGroupR7, Option<AffineMap7>)>,
    /// cross-checks performed during loading
    pub notes: Vec<String>,
}

fn triple(q: &[Q]) -> ImVec {
    ImVec::new(q[0].to_rat(), q[1].to_rat(), q[2].to_rat())
}

pub fn parse_fixture(json: &str) -> Result<FixtureDoc, FixtureError> {
    Ok(serde_json::from_str(json)?)
}

pub fn load_fixture(path: &Path) -> Result<LoadedFixture, FixtureError> {
    let text = std::fs::read_to_string(path)?;
    let doc = parse_fixture(&text)?;
    realise_fixture(doc)
}

/// Convert a parsed document into pipeline inputs, cross-validating the
/// declared local data against the global group when one is present.
pub fn realise_fixture(doc: FixtureDoc) -> Result<LoadedFixture, FixtureError> {
    let mut notes = Vec::new();

    let mut components = Vec::new();
    for c in &doc.components {
        let g_alpha = c.group.to_group()?;
        // the declared rho rotations must preserve the lattice exactly
        let rho_lattice: Vec<IMat> = c.rho.iter().map(|r| IMat::from_rows(&r.matrix)).collect();
        // validate that the root system is constructible (rejects E-types)
        RootSystem::new(c.gamma)?;
        components.push(ComponentData {
            id: c.id.clone(),
            copies: c.copies,
            gamma: c.gamma,
            g_alpha,
            rho_lattice,
            rho_display: c.rho.iter().map(|r| r.display.clone()).collect(),
            rho_trivial_on_lattice: c.rho_trivial_on_lattice,
        });
    }

    let resolutions: Vec<ComponentResolution> = doc
        .resolution
        .iter()
        .map(|r| ComponentResolution {
            component: r.component.clone(),
            zeta: DeformationPoint::new(r.zeta.iter().map(|col| triple(col)).collect()),
            curves: r
                .curves
                .iter()
                .map(|c| CurveChoice {
                    axis: c.axis,
                    length: c.length.to_rat(),
                    kind: c.kind.clone(),
                })
                .collect(),
        })
        .collect();

    // realise the global group and verify the declared component data
    let mut global = None;
    let mut computed_fixed: Option<bool> = None;
    if let Some(g) = &doc.global {
        let gens: Result<Vec<AffineMap7>, FixtureError> =
            g.generators.iter().map(|d| d.to_map()).collect();
        let group = CrystalGroupR7::new(gens?);
        let form = G2Form::standard();
        for (i, gen) in group.generators.iter().enumerate() {
            if !preserves_phi(gen, &form) {
                return Err(FixtureError::Inconsistent(format!(
                    "global generator {i} does not preserve the three-form"
                )));
            }
        }
        let comps = singular_components(&group, 256)?;
        let in_stratum: Vec<_> = comps
            .iter()
            .filter(|c| c.stratum == g.resolved_stratum)
            .collect();
        notes.push(format!(
            "global group: {} singular components, {} in resolved stratum {}",
            comps.len(),
            in_stratum.len(),
            g.resolved_stratum
        ));
        // the declared copy count must match the stratum size
        if let Some(cd) = components.first() {
            if cd.copies != in_stratum.len() {
                return Err(FixtureError::Inconsistent(format!(
                    "declared {} copies but stratum has {} components",
                    cd.copies,
                    in_stratum.len()
                )));
            }
        }
        // local model of a representative component must match declaration
        if let Some(rep) = in_stratum.first() {
            let lm = local_model(&group, rep, 256)?;
            if let Some(cd) = doc.components.first() {
                if lm.gamma != cd.gamma.isotropy_name() {
                    return Err(FixtureError::Inconsistent(format!(
                        "computed isotropy {} but fixture declares {}",
                        lm.gamma,
                        cd.gamma.isotropy_name()
                    )));
                }
            }
            notes.push(format!(
                "local model: isotropy {}, induced class {}, rho trivial: {}",
                lm.gamma, lm.g_alpha_class, lm.rho_trivial
            ));
        }
        let symmetry = match &g.symmetry {
            Some(s) => {
                let lambda = s.to_map()?;
                let action = symmetry_action_on_components(&group, &comps, &lambda, &form, 256)?;
                let fixed_here = comps
                    .iter()
                    .zip(&action.fixed)
                    .filter(|(c, _)| c.stratum == g.resolved_stratum)
                    .all(|(_, &f)| f);
                computed_fixed = Some(fixed_here);
                notes.push(format!(
                    "symmetry action: {} fixed components, {} two-cycles",
                    action.fixed.iter().filter(|&&f| f).count(),
                    action.two_cycles()
                ));
                Some(lambda)
            }
            None => None,
        };
        global = Some((group, symmetry));
    }

    let mut k_actions = Vec::new();
    if let Some(k) = &doc.k_action {
        for kc in &k.per_component {
            let fixes = match (computed_fixed, kc.fixes_component) {
                (Some(c), Some(declared)) => {
                    if c != declared {
                        return Err(FixtureError::Inconsistent(format!(
                            "fixture declares fixes_component = {declared} but the \
                             computed symmetry action gives {c}"
                        )));
                    }
                    c
                }
                (Some(c), None) => c,
                (None, Some(declared)) => declared,
                (None, None) => {
                    return Err(FixtureError::Inconsistent(
                        "fixes_component is undetermined: no global group and no declaration"
                            .into(),
                    ))
                }
            };
            k_actions.push(ComponentKAction {
                component: kc.component.clone(),
                lambda_lattice: kc.lambda.iter().map(|m| IMat::from_rows(m)).collect(),
                kappa_lattice: kc.kappa.iter().map(|m| IMat::from_rows(m)).collect(),
                fixes_component: fixes,
            });
        }
    }

    Ok(LoadedFixture {
        doc,
        components,
        resolutions,
        k_actions,
        global,
        notes,
    })
}

/// Run the counting mechanism the fixture requests; returns the report plus
/// the per-resolution-entry totals in fixture order.
pub fn run_counts(loaded: &LoadedFixture) -> Result<(CountReport, Vec<usize>), FixtureError> {
    let report = match loaded.doc.mechanism {
        Mechanism::OrbifoldFixedPoints => {
            count_orbifold_mechanism(&loaded.components, &loaded.resolutions)?
        }
        Mechanism::KEquivariantExact => {
            count_equivariant_mechanism(&loaded.components, &loaded.resolutions, &loaded.k_actions)?
        }
    };
    let per_entry: Vec<usize> = loaded
        .resolutions
        .iter()
        .map(|r| {
            report
                .certificates
                .iter()
                .filter(|c| c.component == r.component)
                .map(|c| c.guaranteed_count)
                .sum()
        })
        .collect();
    Ok((report, per_entry))
}

/// One catalogue entry of the shipped examples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub tag: String,
    pub file: String,
    pub title: String,
    pub expected_counts: Vec<usize>,
}

/// Scan a directory for example fixtures (files with a `tag` field).
pub fn catalog(dir: &Path) -> Result<Vec<CatalogEntry>, FixtureError> {
    let mut entries = Vec::new();
    if !dir.exists() {
        return Ok(entries);
    }
    let mut files: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
        .collect();
    files.sort();
    for f in files {
        let text = std::fs::read_to_string(&f)?;
        let Ok(doc) = serde_json::from_str::<FixtureDoc>(&text) else {
            continue;
        };
        if entries.iter().any(|e: &CatalogEntry| e.tag == doc.tag) {
            return Err(FixtureError::DuplicateTag(doc.tag));
        }
        entries.push(CatalogEntry {
            tag: doc.tag,
            file: f.file_name().unwrap().to_string_lossy().into_owned(),
            title: doc.title,
            expected_counts: doc.expected_counts,
        });
    }
    Ok(entries)
}

/// The crate's own fixture directory (used by the examples and tests).
pub fn builtin_fixture_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Standalone document for the fixed-locus command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedLocusDoc {
    pub root_system: AdeKind,
    /// ambient rotations as integer matrices
    pub rotations: Vec<Vec<Vec<i64>>>,
}

/// Standalone document for the Gibbons-Hawking command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GhDoc {
    pub charges: Vec<Vec<Q>>,
    pub direction: [f64; 3],
    pub radii: Vec<f64>,
    pub harmonicity_point: [f64; 3],
    pub h_ladder: Vec<f64>,
    pub closedness_point: [f64; 3],
    pub string_direction: [f64; 3],
    pub closedness_h: f64,
}

impl GhDoc {
    pub fn config(&self) -> Result<crate::ale::GHConfig, crate::ale::AleError> {
        crate::ale::GHConfig::new(self.charges.iter().map(|c| triple(c)).collect())
    }
}
