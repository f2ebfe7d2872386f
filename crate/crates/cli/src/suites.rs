//! The verification suites behind each command. Every suite returns check
//! records; checks that are acceptance criteria carry the criterion number.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unlockable_core::analysis::expansion_distance;
use unlockable_core::protocol::{
    equivalence_report, mean_fidelity, sample_branch, superadditivity_with, unlock_with_corrector, MessageSet,
};
use unlockable_core::state::partial_transpose_matrix;
use unlockable_core::{
    frobenius_distance, ppt_check, separable_ensemble_for_cut, smolin_qudit_state, smolin_state,
    superadditivity_protocol, teleport_view, Complex64, Cut, DensityOperator, PartyId, PermutationMap,
    RegisterAssignment, Result, SigmaIndex, StateVector, SubsystemLayout, Transcript,
};

use crate::report::CheckRecord;
use crate::Tolerances;

pub(crate) const PARTIES: [&str; 4] = ["A", "B", "C", "D"];

/// Running invariant check over every density operator a suite produces.
#[derive(Debug, Default)]
pub(crate) struct Hygiene {
    checked: usize,
    failures: usize,
    first_failure: Option<String>,
    worst_hermitian: f64,
    worst_trace: f64,
    worst_min_eigenvalue: f64,
}

impl Hygiene {
    fn check(&mut self, what: &str, rho: &DensityOperator, tol: f64) {
        self.checked += 1;
        let verdict = rho.invariants().map(|r| {
            self.worst_hermitian = self.worst_hermitian.max(r.hermitian_deviation);
            self.worst_trace = self.worst_trace.max(r.trace_deviation);
            self.worst_min_eigenvalue = self.worst_min_eigenvalue.min(r.min_eigenvalue);
            r.holds(tol)
        });
        if !matches!(verdict, Ok(true)) {
            self.failures += 1;
            self.first_failure.get_or_insert_with(|| what.to_owned());
        }
    }
}

pub(crate) struct Ctx<'a> {
    pub tol: &'a Tolerances,
    pub hygiene: Hygiene,
}

impl<'a> Ctx<'a> {
    pub fn new(tol: &'a Tolerances) -> Self {
        Self {
            tol,
            hygiene: Hygiene::default(),
        }
    }

    fn see(&mut self, what: &str, rho: &DensityOperator) {
        self.hygiene.check(what, rho, self.tol.equality);
    }

    fn see_transcripts(&mut self, what: &str, ts: &[Transcript]) {
        for (k, t) in ts.iter().enumerate() {
            if let Some(s) = &t.final_state {
                self.see(&format!("{what} branch {k}"), s);
            }
            if let Some(Ok(r)) = t.target_state() {
                self.see(&format!("{what} branch {k} target"), &r);
            }
        }
    }
}

fn state_for(d: usize) -> Result<DensityOperator> {
    if d == 2 {
        Ok(smolin_state())
    } else {
        smolin_qudit_state(d)
    }
}

fn pid(s: &str) -> PartyId {
    PartyId::new(s)
}

fn infidelity(t: &Transcript) -> f64 {
    t.certified_fidelity.map_or(f64::INFINITY, |f| (1.0 - f).abs())
}

fn min_fidelity(ts: &[Transcript]) -> f64 {
    ts.iter()
        .map(|t| t.certified_fidelity.unwrap_or(0.0))
        .fold(f64::INFINITY, f64::min)
}

/// PPT / NPT records for every 2:2 and 1:3 cut, plus separable ensembles
/// for qubits.
pub(crate) fn cuts(ctx: &mut Ctx, d: usize) -> Result<Vec<CheckRecord>> {
    let rho = state_for(d)?;
    ctx.see("four-party state", &rho);
    let tol = ctx.tol;
    let mut out = Vec::new();
    for cut in Cut::two_two_cuts(rho.layout())? {
        let r = ppt_check(&rho, &cut, tol.ppt)?;
        // the conjugate qudit pairing is entangled across AD:BC
        let expect_ppt = d == 2 || cut.to_string() != "AD:BC";
        let record = if expect_ppt {
            let rec = CheckRecord::new(
                format!("ppt {cut}"),
                "state is PPT across this 2:2 cut",
                tol.ppt,
                r.min_eigenvalue >= -tol.ppt,
            );
            match d {
                2 => rec.criterion(1),
                3 if cut.to_string() == "AB:CD" => rec.criterion(6),
                _ => rec,
            }
        } else {
            CheckRecord::new(
                format!("npt {cut}"),
                "qudit pairing is NPT across AD:BC for d >= 3",
                tol.npt,
                r.min_eigenvalue < -tol.npt,
            )
        };
        out.push(
            record
                .value("min_eigenvalue", r.min_eigenvalue)
                .value("negativity", negativity_of(&r.eigenvalues, tol.ppt)),
        );
    }
    if d == 2 {
        for cut in Cut::two_two_cuts(rho.layout())? {
            let ensemble = separable_ensemble_for_cut(&cut)?;
            let rebuilt = ensemble.reconstruct(rho.layout())?;
            ctx.see(&format!("ensemble {cut}"), &rebuilt);
            let err = rebuilt.distance(&rho)?;
            out.push(
                CheckRecord::new(
                    format!("separable ensemble {cut}"),
                    "explicit product-state ensemble across the cut reproduces the state",
                    tol.reconstruction,
                    err <= tol.reconstruction,
                )
                .criterion(1)
                .value("reconstruction_error", err)
                .value("terms", ensemble.terms.len())
                .value("weight_sum", ensemble.weight_sum()),
            );
        }
    }
    for cut in Cut::one_three_cuts(rho.layout())? {
        let r = ppt_check(&rho, &cut, tol.ppt)?;
        let rec = CheckRecord::new(
            format!("npt {cut}"),
            "state is NPT across every 1:3 cut",
            tol.npt,
            r.min_eigenvalue < -tol.npt,
        )
        .value("min_eigenvalue", r.min_eigenvalue)
        .value("negativity", negativity_of(&r.eigenvalues, tol.ppt));
        out.push(if d == 2 { rec.criterion(2) } else { rec });
    }
    Ok(out)
}

fn negativity_of(eigenvalues: &[f64], tol: f64) -> f64 {
    eigenvalues.iter().filter(|&&x| x < -tol).map(|x| -x).sum()
}

fn compose(layout: &SubsystemLayout, p: &PermutationMap, q: &PermutationMap) -> Result<PermutationMap> {
    let images: Vec<&str> = layout
        .labels()
        .iter()
        .map(|l| q.image(p.image(l).unwrap_or(l)).unwrap_or(l))
        .collect();
    PermutationMap::from_images(layout, &images)
}

/// Closure of `generators` under composition.
fn generated_group(layout: &SubsystemLayout, generators: &[PermutationMap]) -> Result<Vec<PermutationMap>> {
    let mut group = vec![PermutationMap::identity(layout)];
    let mut k = 0;
    while k < group.len() {
        for g in generators {
            let next = compose(layout, &group[k], g)?;
            if !group.contains(&next) {
                group.push(next);
            }
        }
        k += 1;
    }
    Ok(group)
}

/// Qudit symmetries: B<->C, A<->D and the simultaneous swap of both pairs.
fn qudit_symmetries(layout: &SubsystemLayout) -> Result<Vec<PermutationMap>> {
    let generators = [
        PermutationMap::swap(layout, "B", "C")?,
        PermutationMap::swap(layout, "A", "D")?,
        PermutationMap::from_pairs(layout, &[("A", "B"), ("B", "A"), ("C", "D"), ("D", "C")])?,
    ];
    generated_group(layout, &generators)
}

pub(crate) fn invariance(ctx: &mut Ctx, d: usize) -> Result<Vec<CheckRecord>> {
    let rho = state_for(d)?;
    let tol = ctx.tol.equality;
    let symmetric = if d == 2 {
        PermutationMap::all(rho.layout())
    } else {
        qudit_symmetries(rho.layout())?
    };
    let mut out = Vec::new();
    for p in PermutationMap::all(rho.layout()) {
        let image = rho.permute_subsystems(&p)?;
        ctx.see(&format!("permuted {p}"), &image);
        let distance = image.distance(&rho)?;
        let expected = symmetric.contains(&p);
        let rec = if expected {
            CheckRecord::new(
                format!("permutation {p}"),
                "state is unchanged by this relabelling",
                tol,
                distance <= tol,
            )
        } else {
            CheckRecord::new(
                format!("permutation {p}"),
                "relabelling outside the 8-element qudit symmetry group changes the state",
                tol,
                distance > tol,
            )
        };
        let is_bc = p == PermutationMap::swap(rho.layout(), "B", "C")?;
        let rec = if d == 3 && is_bc { rec.criterion(6) } else { rec };
        out.push(rec.value("distance", distance).value("expected_symmetry", expected));
    }
    Ok(out)
}

pub(crate) fn expansion(_ctx: &mut Ctx, tol: f64) -> Result<Vec<CheckRecord>> {
    let distance = expansion_distance()?;
    Ok(vec![CheckRecord::new(
        "expansion equality",
        "the AB|CD and AC|BD Bell pairings expand to the same operator",
        tol,
        distance <= tol,
    )
    .criterion(3)
    .value("distance", distance)])
}

/// Per-branch records of one unlocking run.
pub(crate) fn unlock_branches(
    ctx: &mut Ctx,
    d: usize,
    merge: (&str, &str),
    corrector: Option<&str>,
) -> Result<(Vec<CheckRecord>, Vec<Transcript>)> {
    let rho = state_for(d)?;
    let assignment = RegisterAssignment::one_per_register(rho.layout());
    let corrector = corrector.map(pid);
    let ts = unlock_with_corrector(&rho, (&pid(merge.0), &pid(merge.1)), &assignment, corrector.as_ref())?;
    ctx.see_transcripts("unlock", &ts);
    let tol = ctx.tol;
    let criterion = match d {
        2 => Some(4),
        3 if matches!(merge, ("C", "D") | ("D", "C")) => Some(6),
        _ => None,
    };
    let tag = |r: CheckRecord| match criterion {
        Some(c) => r.criterion(c),
        None => r,
    };
    let mut out = Vec::new();
    for t in &ts {
        let outcome = t.outcomes().first().map(|o| o.to_string()).unwrap_or_default();
        let (who, correction) = t
            .steps
            .iter()
            .find_map(|e| match e {
                unlockable_core::TranscriptEvent::Correction { party, operator, .. } => {
                    Some((party.clone(), operator.to_string()))
                }
                _ => None,
            })
            .unwrap_or_default();
        out.push(tag(CheckRecord::new(
            format!("unlock {}+{} branch {outcome}", merge.0, merge.1),
            "corrected remaining pair holds the target maximally entangled state",
            tol.fidelity,
            infidelity(t) <= tol.fidelity,
        )
        .value("outcome", outcome)
        .value("probability", t.probability)
        .value("fidelity", t.certified_fidelity.unwrap_or(0.0))
        .value("corrector", who)
        .value("correction", correction)
        .value("output", t.target_registers.join(","))));
    }
    out.push(tag(probability_record(
        &format!("unlock {}+{} probabilities", merge.0, merge.1),
        &ts,
        (d * d) as f64,
        tol.equality,
    )));
    Ok((out, ts))
}

fn probability_record(name: &str, ts: &[Transcript], branches: f64, tol: f64) -> CheckRecord {
    let gap = ts
        .iter()
        .map(|t| (t.probability - 1.0 / branches).abs())
        .fold(0.0, f64::max);
    let sum: f64 = ts.iter().map(|t| t.probability).sum();
    CheckRecord::new(
        name,
        "outcomes are uniformly distributed and exhaust the probability",
        tol,
        gap <= tol && (sum - 1.0).abs() <= tol && ts.len() == branches as usize,
    )
    .value("branches", ts.len())
    .value("max_gap_from_uniform", gap)
    .value("sum", sum)
}

/// All six merged pairs with both choices of correcting party.
pub(crate) fn unlock_all(ctx: &mut Ctx) -> Result<Vec<CheckRecord>> {
    let rho = smolin_state();
    let assignment = RegisterAssignment::one_per_register(rho.layout());
    let mut out = Vec::new();
    let mut all = Vec::new();
    let mut single_pair = true;
    for (i, &p) in PARTIES.iter().enumerate() {
        for &q in &PARTIES[i + 1..] {
            for c in PARTIES.iter().filter(|x| **x != p && **x != q) {
                let ts = unlock_with_corrector(&rho, (&pid(p), &pid(q)), &assignment, Some(&pid(c)))?;
                ctx.see_transcripts(&format!("unlock {p}+{q}"), &ts);
                let worst = ts.iter().map(infidelity).fold(0.0, f64::max);
                single_pair &= ts.iter().all(|t| t.target_registers.len() == 2);
                out.push(
                    CheckRecord::new(
                        format!("unlock {p}+{q} corrector {c}"),
                        "every branch ends with the remaining pair in the singlet",
                        ctx.tol.fidelity,
                        ts.len() == 4 && worst <= ctx.tol.fidelity,
                    )
                    .criterion(4)
                    .value("branches", ts.len())
                    .value("min_fidelity", min_fidelity(&ts)),
                );
                all.extend(ts);
            }
        }
    }
    let gap = all.iter().map(|t| (t.probability - 0.25).abs()).fold(0.0, f64::max);
    out.push(
        CheckRecord::new(
            "unlock probabilities",
            "each of the four outcomes occurs with probability 1/4",
            ctx.tol.equality,
            gap <= ctx.tol.equality,
        )
        .criterion(4)
        .value("branches", all.len())
        .value("max_gap_from_uniform", gap),
    );
    out.push(
        CheckRecord::new(
            "unlock output size",
            "each run leaves exactly one qubit with each remaining party",
            0.0,
            single_pair,
        )
        .criterion(4)
        .value("runs", all.len() / 4),
    );
    Ok(out)
}

pub(crate) fn equivalence(ctx: &mut Ctx) -> Result<Vec<CheckRecord>> {
    let r = equivalence_report(ctx.tol.equality)?;
    let prob_gap = r
        .comparisons
        .iter()
        .map(|c| c.max_probability_gap)
        .fold(0.0, f64::max);
    let state_gap = r.comparisons.iter().map(|c| c.max_state_gap).fold(0.0, f64::max);
    let teleport_f = r
        .comparisons
        .iter()
        .map(|c| c.min_teleport_fidelity)
        .fold(f64::INFINITY, f64::min);
    Ok(vec![CheckRecord::new(
        "teleportation equivalence",
        "unlocking by B+D and teleportation from B' to C agree branch by branch",
        ctx.tol.equality,
        r.passed(),
    )
    .criterion(5)
    .value("mixture_distance", r.mixture_distance)
    .value("max_probability_gap", prob_gap)
    .value("max_state_gap", state_gap)
    .value("min_unlock_fidelity", r.min_unlock_fidelity)
    .value("min_teleport_fidelity", teleport_f)])
}

fn qubit(theta: f64, phi: f64) -> Result<StateVector> {
    StateVector::new(
        SubsystemLayout::qubits(&["Q"])?,
        vec![
            Complex64::new((theta / 2.0).cos(), 0.0),
            Complex64::from_polar((theta / 2.0).sin(), phi),
        ],
    )
}

/// Teleportation of a 10x10 grid of Bloch-sphere inputs through every resource label.
pub(crate) fn teleport_grid(ctx: &mut Ctx) -> Result<Vec<CheckRecord>> {
    let mut worst: f64 = 0.0;
    let mut gap: f64 = 0.0;
    let mut branches = 0usize;
    for i in 0..10 {
        for j in 0..10 {
            let input = qubit((i as f64 + 0.5) * PI / 10.0, 2.0 * PI * j as f64 / 10.0)?;
            for r in SigmaIndex::ALL {
                let ts = teleport_view(&input, r)?;
                ctx.see_transcripts("teleport grid", &ts);
                branches += ts.len();
                worst = ts.iter().map(infidelity).fold(worst, f64::max);
                gap = ts.iter().map(|t| (t.probability - 0.25).abs()).fold(gap, f64::max);
            }
        }
    }
    Ok(vec![CheckRecord::new(
        "teleport grid",
        "100 grid inputs x 4 resources: every branch delivers the input",
        ctx.tol.fidelity,
        branches == 1600 && worst <= ctx.tol.fidelity && gap <= ctx.tol.equality,
    )
    .criterion(5)
    .value("inputs", 100usize)
    .value("branches", branches)
    .value("max_infidelity", worst)
    .value("max_gap_from_uniform", gap)])
}

const NAMED_INPUTS: [(&str, f64, f64); 5] = [
    ("|0>", 0.0, 0.0),
    ("|1>", PI, 0.0),
    ("|+>", PI / 2.0, 0.0),
    ("|+i>", PI / 2.0, PI / 2.0),
    ("generic", 1.1, 2.3),
];

pub(crate) fn teleport_named(ctx: &mut Ctx) -> Result<(Vec<CheckRecord>, Vec<Transcript>)> {
    let mut out = Vec::new();
    let mut sample_pool = Vec::new();
    for (name, theta, phi) in NAMED_INPUTS {
        let input = qubit(theta, phi)?;
        for r in SigmaIndex::ALL {
            let ts = teleport_view(&input, r)?;
            ctx.see_transcripts("teleport", &ts);
            let worst = ts.iter().map(infidelity).fold(0.0, f64::max);
            out.push(
                CheckRecord::new(
                    format!("teleport {name} resource {r}"),
                    "receiver holds the input state on every branch",
                    ctx.tol.fidelity,
                    worst <= ctx.tol.fidelity,
                )
                .value("branches", ts.len())
                .value("min_fidelity", min_fidelity(&ts)),
            );
            if name == "generic" && r == SigmaIndex::ALL[0] {
                sample_pool = ts;
            }
        }
    }
    Ok((out, sample_pool))
}

pub(crate) fn superadditivity(ctx: &mut Ctx) -> Result<(Vec<CheckRecord>, Vec<Transcript>)> {
    let tol = ctx.tol;
    let ts = superadditivity_protocol()?;
    ctx.see_transcripts("superadditivity", &ts);
    let worst = ts.iter().map(infidelity).fold(0.0, f64::max);
    let null = ts.iter().filter(|t| t.is_null()).count();
    let mut out = vec![
        CheckRecord::new(
            "superadditivity branches",
            "two copies: every composite branch leaves D and E with a singlet",
            tol.fidelity,
            ts.len() == 64 && null == 0 && worst <= tol.fidelity,
        )
        .criterion(7)
        .value("branches", ts.len())
        .value("null_branches", null)
        .value("min_fidelity", min_fidelity(&ts)),
        probability_record("superadditivity probabilities", &ts, 64.0, tol.equality).criterion(7),
    ];
    for m in MessageSet::ABLATIONS {
        let mean = mean_fidelity(&superadditivity_with(m)?);
        out.push(
            CheckRecord::new(
                format!("superadditivity ablation {}", m.name()),
                "dropping one classical message breaks the correction",
                tol.ablation,
                mean < tol.ablation,
            )
            .criterion(7)
            .value("mean_fidelity", mean),
        );
    }
    Ok((out, ts))
}

/// Qudit records: cuts, symmetry, and unlocking by every supported pair.
pub(crate) fn qudit(ctx: &mut Ctx, d: usize) -> Result<Vec<CheckRecord>> {
    let mut out = cuts(ctx, d)?;
    let rho = state_for(d)?;
    let swap = PermutationMap::swap(rho.layout(), "B", "C")?;
    let distance = rho.permute_subsystems(&swap)?.distance(&rho)?;
    let rec = CheckRecord::new(
        "permutation B<->C",
        "state is unchanged by exchanging B and C",
        ctx.tol.equality,
        distance <= ctx.tol.equality,
    )
    .value("distance", distance);
    out.push(if d == 3 { rec.criterion(6) } else { rec });
    for (p, q) in [("A", "B"), ("C", "D"), ("A", "C"), ("B", "D")] {
        let (records, ts) = unlock_branches(ctx, d, (p, q), None)?;
        let worst = ts.iter().map(infidelity).fold(0.0, f64::max);
        let rec = CheckRecord::new(
            format!("unlock {p}+{q}"),
            "every branch ends in the canonical maximally entangled state",
            ctx.tol.fidelity,
            ts.len() == d * d && worst <= ctx.tol.fidelity,
        )
        .value("branches", ts.len())
        .value("min_fidelity", min_fidelity(&ts));
        out.push(if d == 3 && p == "C" { rec.criterion(6) } else { rec });
        // the per-branch probability check rides along
        out.extend(records.into_iter().filter(|r| r.name.ends_with("probabilities")).map(|mut r| {
            r.criterion = None;
            r
        }));
    }
    Ok(out)
}

/// The criterion-6 subset at d = 3.
pub(crate) fn qudit_criterion(ctx: &mut Ctx) -> Result<Vec<CheckRecord>> {
    Ok(qudit(ctx, 3)?
        .into_iter()
        .filter(|r| r.criterion == Some(6))
        .collect())
}

/// Deterministic mixed states over varied layouts.
fn structured_state(n: usize) -> Result<DensityOperator> {
    const LAYOUTS: [&[usize]; 5] = [&[2, 2, 2, 2], &[2, 3, 2], &[3, 3], &[2, 2, 3, 2], &[4, 2, 2]];
    let dims = LAYOUTS[n % LAYOUTS.len()];
    let labels: Vec<String> = (0..dims.len()).map(|k| format!("R{k}")).collect();
    let layout = SubsystemLayout::new(&labels, dims)?;
    let dim = layout.total_dim();
    let rank = 1 + n % 4;
    let vectors = (0..rank)
        .map(|r| {
            let amps = (0..dim)
                .map(|k| {
                    if n.is_multiple_of(3) && (k + r) % 3 == 1 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let mag = 1.0 + ((k * 7 + r * 3 + n) % 5) as f64;
                    Complex64::from_polar(mag, 0.37 * n as f64 + 1.3 * (k * k) as f64 + 0.71 * r as f64)
                })
                .collect();
            StateVector::normalized(layout.clone(), amps)
        })
        .collect::<Result<Vec<_>>>()?;
    let terms: Vec<(f64, &StateVector)> = vectors
        .iter()
        .enumerate()
        .map(|(r, v)| (1.0 + ((n + r) % 3) as f64, v))
        .collect();
    DensityOperator::mixture(&terms)
}

/// Invariants over everything seen so far, plus the structural identities on
/// a family of 1000 test states.
pub(crate) fn hygiene(ctx: &mut Ctx, states: usize) -> Result<Vec<CheckRecord>> {
    let exact = ctx.tol.reconstruction;
    let mut pt: f64 = 0.0;
    let mut perm: f64 = 0.0;
    for n in 0..states {
        let rho = structured_state(n)?;
        let layout = rho.layout();
        let k = layout.len();
        let mask = 1 + n % ((1 << k) - 2);
        let positions: Vec<usize> = (0..k).filter(|p| mask >> p & 1 == 1).collect();
        let once = partial_transpose_matrix(layout, rho.matrix(), &positions);
        let twice = partial_transpose_matrix(layout, &once, &positions);
        pt = pt.max(frobenius_distance(&twice, rho.matrix())?);
        let perms = PermutationMap::all(layout);
        let p = &perms[n % perms.len()];
        let back = rho.permute_subsystems(p)?.permute_subsystems(&p.inverse())?;
        perm = perm.max(back.distance(&rho)?);
    }
    let h = &ctx.hygiene;
    Ok(vec![
        CheckRecord::new(
            "density operator invariants",
            "every operator produced by the suites is Hermitian, unit-trace and PSD",
            ctx.tol.equality,
            h.failures == 0 && h.checked > 0,
        )
        .criterion(8)
        .value("operators", h.checked)
        .value("failures", h.failures)
        .value("first_failure", h.first_failure.clone().unwrap_or_else(|| "none".into()))
        .value("max_hermitian_deviation", h.worst_hermitian)
        .value("max_trace_deviation", h.worst_trace)
        .value("min_eigenvalue", h.worst_min_eigenvalue),
        CheckRecord::new(
            "partial transpose involution",
            "transposing the same subsystems twice is the identity",
            exact,
            pt <= exact,
        )
        .criterion(8)
        .value("states", states)
        .value("max_distance", pt),
        CheckRecord::new(
            "permutation round-trip",
            "a permutation followed by its inverse is the identity",
            exact,
            perm <= exact,
        )
        .criterion(8)
        .value("states", states)
        .value("max_distance", perm),
    ])
}

/// Seeded sampling of branches from an exhaustive run, for demonstration.
pub(crate) fn sampled(ctx: &Ctx, what: &str, ts: &[Transcript], seed: u64, shots: usize) -> CheckRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut worst: f64 = 0.0;
    for _ in 0..shots {
        let u: f64 = rng.random();
        match sample_branch(ts, u) {
            Some(t) => {
                let key = t.outcomes().iter().map(|o| o.to_string()).collect::<Vec<_>>().join("/");
                *counts.entry(key).or_default() += 1;
                worst = worst.max(infidelity(t));
            }
            None => worst = f64::INFINITY,
        }
    }
    let histogram = counts
        .iter()
        .map(|(k, v)| format!("{k}:{v}"))
        .collect::<Vec<_>>()
        .join(", ");
    CheckRecord::new(
        format!("{what} sampled runs"),
        "seeded demonstration: sampled branches reach the target",
        ctx.tol.fidelity,
        worst <= ctx.tol.fidelity,
    )
    .value("seed", seed)
    .value("shots", shots)
    .value("outcomes", histogram)
    .value("max_infidelity", worst)
}
