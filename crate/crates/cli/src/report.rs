//! Per-command computations, each producing a text report and the `result`
//! value of the JSON envelope.

use std::fmt::Write;

use galmod::delpezzo::{explicit_resolution, h_orbit_sizes};
use galmod::{
    coflasque_resolution, complement_summand, decompose_resolution, dp5_motive, h1, is_coflabby, is_invertible,
    is_permutation, Certificate, Error, FiniteAbelianGroup, GLattice, Integer, IntegerMatrix, Isomorphism,
    PermutationSummary, PermutationVerdict, Render, Resolution, ResolutionSummary, Subgroup, ZeroCycleAssumption,
    ZeroCycleSource,
};
use serde::Serialize;
use serde_json::Value;

use crate::input::{Loaded, Preset};
use crate::{Analysis, Task};

pub const REPORT_SCHEMA: &str = "galmod-report/1";

/// Where the lattice of a run came from.
#[derive(Clone, Debug, Serialize)]
pub struct Source {
    /// `preset` or `file`.
    pub kind: &'static str,
    /// Preset name or file path.
    pub name: String,
    pub rank: usize,
    pub group_order: usize,
    /// Generator names passed to `--subgroup`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<String>>,
}

impl Source {
    pub fn of(loaded: &Loaded) -> Self {
        Source {
            kind: if loaded.preset.is_some() { "preset" } else { "file" },
            name: loaded.origin.clone(),
            rank: loaded.lattice.rank(),
            group_order: loaded.lattice.group().order(),
            subgroup: loaded.subgroup_names.clone(),
        }
    }

    pub fn describe(&self) -> String {
        let sub = self
            .subgroup
            .as_ref()
            .map(|s| format!(", subgroup <{}>", s.join(", ")))
            .unwrap_or_default();
        format!(
            "source: {} {}{sub}, rank {}, group order {}",
            self.kind, self.name, self.rank, self.group_order
        )
    }
}

fn to_value<T: Serialize>(t: &T) -> Result<Value, Error> {
    serde_json::to_value(t).map_err(|e| Error::Internal(e.to_string()))
}

pub(crate) fn compute(task: Task, loaded: &Loaded, flag: bool, iso_bound: u32) -> Result<(String, Value), Error> {
    let m = &loaded.lattice;
    match task {
        Task::Analysis(Analysis::Info) => info(m),
        Task::Analysis(Analysis::H1) => cohomology(m),
        Task::Analysis(Analysis::Coflabby) => coflabby(m),
        Task::Analysis(Analysis::Coflasque) => coflasque(m),
        Task::Analysis(Analysis::Invertible) => invertible(m),
        Task::Analysis(Analysis::Permutation) => permutation(m, iso_bound),
        Task::Analysis(Analysis::Motive) => motive(loaded, flag, iso_bound),
        Task::Dp5Explicit => dp5_explicit(m),
    }
}

#[derive(Serialize)]
struct ClassEntry {
    class: usize,
    order: usize,
    generators: String,
}

impl ClassEntry {
    fn new(m: &GLattice, class: usize, h: &Subgroup) -> Self {
        ClassEntry {
            class,
            order: h.order(),
            generators: h.describe(m.group()),
        }
    }
}

#[derive(Serialize)]
struct InfoResult {
    rank: usize,
    group_order: usize,
    generators: Vec<String>,
    subgroup_classes: usize,
    subgroup_count: usize,
    classes: Vec<ClassEntry>,
}

fn info(m: &GLattice) -> Result<(String, Value), Error> {
    let g = m.group();
    let cat = g.catalog();
    let result = InfoResult {
        rank: m.rank(),
        group_order: g.order(),
        generators: g.generator_names().to_vec(),
        subgroup_classes: cat.classes().len(),
        subgroup_count: cat.subgroup_count(),
        classes: cat
            .classes()
            .iter()
            .enumerate()
            .map(|(i, h)| ClassEntry::new(m, i, h))
            .collect(),
    };
    let mut text = String::new();
    let _ = writeln!(text, "rank: {}", result.rank);
    let _ = writeln!(text, "group order: {}", result.group_order);
    let _ = writeln!(text, "generators: {}", result.generators.join(", "));
    let _ = writeln!(text, "subgroup classes: {}", result.subgroup_classes);
    let _ = writeln!(text, "subgroups: {}", result.subgroup_count);
    for (c, size) in result.classes.iter().zip(cat.class_sizes()) {
        let _ = writeln!(
            text,
            "  H{} order {} {} ({} conjugates)",
            c.class, c.order, c.generators, size
        );
    }
    Ok((text, to_value(&result)?))
}

#[derive(Serialize)]
struct H1Entry {
    #[serde(flatten)]
    class: ClassEntry,
    h1: String,
    #[serde(with = "galmod::serde_int::vec")]
    invariant_factors: Vec<Integer>,
}

impl H1Entry {
    fn new(m: &GLattice, class: usize, h: &Subgroup, a: &FiniteAbelianGroup) -> Self {
        H1Entry {
            class: ClassEntry::new(m, class, h),
            h1: a.to_string(),
            invariant_factors: a.invariant_factors().to_vec(),
        }
    }

    fn line(&self) -> String {
        format!(
            "H{} order {} {}: H^1 = {}",
            self.class.class, self.class.order, self.class.generators, self.h1
        )
    }
}

#[derive(Serialize)]
struct H1Result {
    classes: Vec<H1Entry>,
}

fn cohomology(m: &GLattice) -> Result<(String, Value), Error> {
    let classes = m.group().catalog().classes();
    let result = H1Result {
        classes: classes
            .iter()
            .enumerate()
            .map(|(i, h)| H1Entry::new(m, i, h, &h1(m, h)))
            .collect(),
    };
    let text: String = result.classes.iter().map(|e| e.line() + "\n").collect();
    Ok((text, to_value(&result)?))
}

#[derive(Serialize)]
struct CoflabbyResult {
    coflabby: bool,
    failing: Vec<H1Entry>,
}

fn coflabby(m: &GLattice) -> Result<(String, Value), Error> {
    let report = is_coflabby(m);
    let classes = m.group().catalog().classes();
    let result = CoflabbyResult {
        coflabby: report.coflabby,
        failing: report
            .failing
            .iter()
            .map(|(i, a)| H1Entry::new(m, *i, &classes[*i], a))
            .collect(),
    };
    let mut text = format!("coflabby: {}\n", result.coflabby);
    for e in &result.failing {
        let _ = writeln!(text, "  {}", e.line());
    }
    Ok((text, to_value(&result)?))
}

#[derive(Serialize)]
struct CoflasqueResult {
    resolution: ResolutionSummary,
    /// `P` described as a sum of `Z[G/H]`.
    p: String,
    basis: Vec<String>,
    surjection: IntegerMatrix,
    inclusion: IntegerMatrix,
}

fn resolution_line(s: &ResolutionSummary) -> String {
    format!(
        "resolution ({}): P = {} (subgroup orders {:?}), rank P = {}, rank C = {}, checks {}",
        s.construction,
        s.permutation_parts.describe(),
        s.part_orders,
        s.p_rank,
        s.c_rank,
        if s.check.all_green() { "passed" } else { "FAILED" }
    )
}

fn coflasque_result(res: &Resolution, construction: &str) -> CoflasqueResult {
    CoflasqueResult {
        resolution: ResolutionSummary::of(res, construction),
        p: res.descriptor().describe(),
        basis: res.descriptor().basis_labels(res.m().group()),
        surjection: res.surjection().matrix().clone(),
        inclusion: res.inclusion().matrix().clone(),
    }
}

fn coflasque(m: &GLattice) -> Result<(String, Value), Error> {
    let res = coflasque_resolution(m)?;
    let result = coflasque_result(&res, "coflasque");
    let mut text = resolution_line(&result.resolution) + "\n";
    let _ = writeln!(text, "basis of P: {}", result.basis.join(", "));
    let _ = writeln!(text, "f: {}", result.surjection);
    let _ = writeln!(text, "iota: {}", result.inclusion);
    Ok((text, to_value(&result)?))
}

#[derive(Serialize)]
struct ComplementResult {
    rank: usize,
    idempotent: IntegerMatrix,
    /// `(s | basis of N)`, a unimodular matrix realizing `M ⊕ N ≅ P`.
    witness: IntegerMatrix,
}

#[derive(Serialize)]
struct InvertibleResult {
    invertible: bool,
    resolution: ResolutionSummary,
    certificate: Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    complement: Option<ComplementResult>,
}

fn invertible(m: &GLattice) -> Result<(String, Value), Error> {
    let inv = is_invertible(m)?;
    let res = &inv.resolution;
    let (certificate, complement) = match (res.splitting(), &inv.obstruction) {
        (Some(split), _) => {
            let n = complement_summand(res)?;
            (
                Certificate::Section {
                    matrix: split.section().matrix().clone(),
                },
                Some(ComplementResult {
                    rank: n.lattice().rank(),
                    idempotent: n.idempotent().clone(),
                    witness: n.witness().clone(),
                }),
            )
        }
        (None, Some(o)) => (Certificate::Obstruction { obstruction: o.clone() }, None),
        (None, None) => return Err(Error::Internal("neither section nor obstruction".into())),
    };
    let result = InvertibleResult {
        invertible: inv.invertible,
        resolution: ResolutionSummary::of(res, "coflasque"),
        certificate,
        complement,
    };
    let mut text = format!("invertible: {}\n", result.invertible);
    let _ = writeln!(text, "{}", resolution_line(&result.resolution));
    match &result.certificate {
        Certificate::Section { matrix } => {
            let _ = writeln!(text, "section: {matrix}");
        }
        Certificate::Obstruction { obstruction } => {
            let _ = writeln!(text, "obstruction: {obstruction}");
        }
    }
    if let Some(c) = &result.complement {
        let _ = writeln!(text, "complement N: rank {}, witness (s | N): {}", c.rank, c.witness);
    }
    Ok((text, to_value(&result)?))
}

#[derive(Serialize)]
struct PermutationResult {
    #[serde(flatten)]
    summary: PermutationSummary,
    /// Equivariant isomorphism `P → M` for a `yes` verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<IntegerMatrix>,
}

fn permutation(m: &GLattice, iso_bound: u32) -> Result<(String, Value), Error> {
    let verdict = is_permutation(m, iso_bound)?;
    let result = PermutationResult {
        summary: PermutationSummary::from_verdict(&verdict),
        witness: match &verdict {
            PermutationVerdict::Yes { witness, .. } => Some(witness.clone()),
            _ => None,
        },
    };
    let mut text = format!("permutation: {}\n", result.summary.verdict);
    if let Some(d) = &result.summary.descriptor {
        let _ = writeln!(text, "M = {}", d.describe());
    }
    if let Some(r) = &result.summary.reason {
        let _ = writeln!(text, "reason: {r}");
    }
    if let Some(w) = &result.witness {
        let _ = writeln!(text, "witness P -> M: {w}");
    }
    Ok((text, to_value(&result)?))
}

fn zero_cycle(loaded: &Loaded, flag: bool) -> ZeroCycleAssumption {
    let source = if flag {
        ZeroCycleSource::Flag
    } else if loaded.file_zero_cycle {
        ZeroCycleSource::InputFile
    } else {
        ZeroCycleSource::NotAssumed
    };
    ZeroCycleAssumption {
        assumed: source != ZeroCycleSource::NotAssumed,
        source,
    }
}

fn motive(loaded: &Loaded, flag: bool, iso_bound: u32) -> Result<(String, Value), Error> {
    let m = &loaded.lattice;
    let zc = zero_cycle(loaded, flag);
    let report = if loaded.preset == Some(Preset::Dp5) {
        let mut report = decompose_resolution(explicit_resolution(m)?, "explicit", zc, iso_bound)?;
        let (left, right) = dp5_motive(&loaded.parent, &loaded.subgroup);
        report.theorem = Some(Isomorphism { left, right });
        report
    } else {
        decompose_resolution(coflasque_resolution(m)?, "coflasque", zc, iso_bound)?
    };
    Ok((report.render(galmod::Format::Text), to_value(&report)?))
}

#[derive(Serialize)]
struct ExplicitResult {
    #[serde(flatten)]
    resolution: CoflasqueResult,
    #[serde(with = "galmod::serde_int::vec")]
    kernel_generator: Vec<Integer>,
    retraction: IntegerMatrix,
    /// Orbit sizes of the group on `h_1..h_5`.
    h_orbits: Vec<usize>,
    coflabby_kernel: bool,
}

fn dp5_explicit(m: &GLattice) -> Result<(String, Value), Error> {
    let res = explicit_resolution(m)?;
    let retraction = res
        .splitting()
        .ok_or_else(|| Error::Internal("explicit resolution carries no splitting".into()))?
        .retraction()
        .matrix()
        .clone();
    let result = ExplicitResult {
        resolution: coflasque_result(&res, "explicit"),
        kernel_generator: res.inclusion().matrix().column(0),
        retraction,
        h_orbits: h_orbit_sizes(m)?,
        coflabby_kernel: is_coflabby(res.c()).coflabby,
    };
    let mut text = resolution_line(&result.resolution.resolution) + "\n";
    let _ = writeln!(text, "f (columns e, e1..e5): {}", result.resolution.surjection);
    let kernel: Vec<String> = result.kernel_generator.iter().map(Integer::to_string).collect();
    let _ = writeln!(text, "kernel generator: ({})", kernel.join(", "));
    let _ = writeln!(text, "retraction: {}", result.retraction);
    let _ = writeln!(text, "orbits on h1..h5: {:?}", result.h_orbits);
    let _ = writeln!(text, "kernel coflabby: {}", result.coflabby_kernel);
    Ok((text, to_value(&result)?))
}
