//! The section of the behavior polytope by the quantum moment subspace:
//! its extreme rays, its facets, and the witness operators that certify
//! every quantum moment vector lies inside it.

mod cone;
pub mod dd;
mod subspace;
mod witness;

use serde::Serialize;
use thiserror::Error;

use crate::arith::wire::{gauss_matrix_to_wire, int_row_to_wire, GaussianStr};
use crate::arith::{ArithError, IntMatrix};
use crate::automata::{behavior_matrix, enumerate_behaviors, AutomataError, Behavior, BehaviorMatrix};
use crate::quantum::{build_square, z_catalog, Square, ZCatalog};

pub use cone::{
    facets_to_rays, membership, rays_to_facets, section_rays, section_rays_with_stats, ConeGenerators,
    FacetSystem, SectionStats,
};
pub use dd::{dual_cone_rays, orthant_section, DdConfig, DdError, InsertionOrder};
pub use subspace::{subspace_and_k, SubspaceBasis};
pub use witness::{classify_witnesses, witness_for_row, witnesses, WitnessOperator, WitnessSet, WitnessVerdict};

/// Number of nonzero witnesses a successful certification produces.
pub const EXPECTED_WITNESSES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SectionError {
    #[error(transparent)]
    Dd(#[from] DdError),
    #[error("generator {index} does not lie in the moment subspace")]
    RayOutsideSubspace { index: usize },
    #[error("witness classification failed: {0}")]
    ClassificationMismatch(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionReport {
    pub ray_count: usize,
    pub facet_count: usize,
    pub nonzero_witness_count: usize,
    pub zero_witness_rows: Vec<usize>,
    pub witnesses: Vec<WitnessVerdict>,
    /// True iff every nonzero witness is positive semidefinite.
    pub q_subset_p: bool,
}

impl SectionReport {
    pub fn new(rays: &ConeGenerators, facets: &FacetSystem, ws: &WitnessSet, verdicts: Vec<WitnessVerdict>) -> Self {
        SectionReport {
            ray_count: rays.len(),
            facet_count: facets.len(),
            nonzero_witness_count: ws.nonzero.len(),
            zero_witness_rows: ws.zero_rows.clone(),
            q_subset_p: verdicts.iter().all(|v| v.psd),
            witnesses: verdicts,
        }
    }

    /// Verdict true with exactly the expected number of rank-one PSD witnesses.
    pub fn accepted(&self) -> bool {
        self.q_subset_p
            && self.nonzero_witness_count == EXPECTED_WITNESSES
            && self.witnesses.iter().all(|v| v.psd && v.rank == 1)
    }
}

/// Every artifact of a certification run.
#[derive(Clone, Debug)]
pub struct Certification {
    pub square: Square,
    pub catalog: ZCatalog,
    pub behaviors: Vec<Behavior>,
    pub matrix: BehaviorMatrix,
    pub basis: SubspaceBasis,
    pub k: IntMatrix,
    pub stats: SectionStats,
    pub rays: ConeGenerators,
    pub facets: FacetSystem,
    pub witnesses: WitnessSet,
    pub report: SectionReport,
}

/// Runs the full pipeline on the canonical behavior family.
pub fn certify(cfg: &DdConfig) -> Result<Certification, SectionError> {
    certify_behaviors(enumerate_behaviors()?, cfg)
}

pub fn certify_behaviors(behaviors: Vec<Behavior>, cfg: &DdConfig) -> Result<Certification, SectionError> {
    let square = build_square();
    let catalog = z_catalog(&square);
    let matrix = behavior_matrix(&behaviors);
    let (basis, k) = subspace_and_k(&square, &catalog);
    let (rays, stats) = section_rays_with_stats(&matrix, &k, &basis, cfg)?;
    let facets = rays_to_facets(&rays, &basis, &k, cfg)?;
    let ws = witnesses(&facets, &catalog);
    let verdicts = classify_witnesses(&ws, &square)?;
    let report = SectionReport::new(&rays, &facets, &ws, verdicts);
    Ok(Certification {
        square,
        catalog,
        behaviors,
        matrix,
        basis,
        k,
        stats,
        rays,
        facets,
        witnesses: ws,
        report,
    })
}

#[derive(Serialize)]
struct WitnessRecord<'a> {
    #[serde(flatten)]
    verdict: &'a WitnessVerdict,
    matrix: Vec<Vec<GaussianStr>>,
}

#[derive(Serialize)]
struct ReportFile<'a> {
    ray_count: usize,
    facet_count: usize,
    nonzero_witness_count: usize,
    zero_witness_rows: &'a [usize],
    ka_rank: usize,
    d_rays: usize,
    rays: Vec<Vec<String>>,
    facets: Vec<Vec<String>>,
    witnesses: Vec<WitnessRecord<'a>>,
    q_subset_p: bool,
}

/// JSON section report with integer matrices written as strings.
pub fn render_report(c: &Certification) -> String {
    let file = ReportFile {
        ray_count: c.report.ray_count,
        facet_count: c.report.facet_count,
        nonzero_witness_count: c.report.nonzero_witness_count,
        zero_witness_rows: &c.report.zero_witness_rows,
        ka_rank: c.stats.ka_rank,
        d_rays: c.stats.d_rays,
        rays: c.rays.rays().iter().map(|r| int_row_to_wire(r)).collect(),
        facets: c.facets.rows().iter().map(|r| int_row_to_wire(r)).collect(),
        witnesses: c
            .report
            .witnesses
            .iter()
            .zip(&c.witnesses.nonzero)
            .map(|(verdict, op)| WitnessRecord {
                verdict,
                matrix: gauss_matrix_to_wire(&op.w),
            })
            .collect(),
        q_subset_p: c.report.q_subset_p,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("report serializes");
    s.push('\n');
    s
}
