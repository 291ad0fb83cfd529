use std::path::{Path, PathBuf};
use std::time::Instant;

use jsnr_core::effectiveness::{
    all_pair_verdicts, build_witness, evaluate_witness, fidelity_tuple, overlap_matrix, set_effective,
    EffectivenessOptions, EffectivenessVerdict, ReferenceSet, SupportMethod,
};
use jsnr_core::oracle::entanglement_oracle;
use jsnr_core::quantum::{fidelity, DensityOperator};
use jsnr_core::range::{
    check_nested, hausdorff_distance, jnr_two_pure, jsnr_two_product, region_csv, region_svg, sampled_region_states,
    ConvexRegion2D, JnrOptions, JsnrOptions, RangeMode, SampleOptions, TupleClassification, TupleClassifier,
    TupleVerdict,
};
use jsnr_core::{tol, Dims};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::{self, InputDocument};
use crate::report::{self, Report, SCHEMA_VERSION};
use crate::{MethodArg, ModeArg};

/// Sampled and analytic constructions are expected to agree this closely.
pub const HAUSDORFF_TOLERANCE: f64 = 5e-3;

/// Slack of the JSNR ⊆ JNR consistency check.
pub const NESTING_TOLERANCE: f64 = 1e-6;

/// Witness values below this count as negative.
pub const DETECTION_FLOOR: f64 = -1e-12;

pub struct Context {
    pub seed: u64,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub quiet: bool,
    pub timing: bool,
    start: Instant,
}

impl Context {
    pub fn new(seed: u64, tol: f64, out: Option<PathBuf>, quiet: bool, timing: bool) -> Self {
        Self {
            seed,
            tol,
            out,
            quiet,
            timing,
            start: Instant::now(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(CliError::schema(format!("--tol must lie in (0, 1), got {}", self.tol)));
        }
        Ok(())
    }

    pub fn effectiveness(&self) -> EffectivenessOptions {
        let mut o = EffectivenessOptions::default().with_seed(self.seed);
        o.ces.tol = self.tol;
        o
    }

    /// Human-readable lines go to stdout when the report goes to a file.
    pub fn say(&self, line: impl AsRef<str>) {
        if self.quiet {
            return;
        }
        if self.out.is_some() {
            println!("{}", line.as_ref());
        } else {
            eprintln!("{}", line.as_ref());
        }
    }

    pub fn warn(&self, warnings: &[String]) {
        if !self.quiet {
            for w in warnings {
                eprintln!("warning: {w}");
            }
        }
    }

    pub fn artifact(&self, name: &str) -> Option<PathBuf> {
        self.out.as_ref().map(|d| d.join(name))
    }

    pub fn elapsed(&self) -> Option<f64> {
        self.timing.then(|| self.start.elapsed().as_secs_f64())
    }

    fn config(&self) -> Value {
        json!({
            "seed": self.seed,
            "ces_tol": self.tol,
            "witness_margin_tol": tol::WITNESS_MARGIN,
            "local_overlap_tol": tol::LOCAL_OVERLAP,
        })
    }

    /// Serializes the report to `<out>/<command>.json`, or stdout without `--out`.
    pub fn emit<R: Serialize>(
        &self,
        command: &str,
        args: Value,
        extra_config: Value,
        warnings: &[String],
        result: R,
        artifacts: Vec<String>,
    ) -> Result<(), CliError> {
        let mut config = self.config();
        if let (Value::Object(base), Value::Object(extra)) = (&mut config, extra_config) {
            base.extend(extra);
        }
        let r = Report {
            schema_version: SCHEMA_VERSION,
            command,
            args,
            config,
            warnings,
            result,
            artifacts,
            wall_time_s: self.elapsed(),
        };
        let text = report::to_json(&r)?;
        match self.artifact(&format!("{}.json", command.replace(' ', "_"))) {
            Some(path) => {
                report::write_atomic(&path, &text)?;
                self.say(format!("report: {}", path.display()));
            }
            None => print!("{text}"),
        }
        Ok(())
    }
}

fn load(ctx: &Context, path: &Path) -> Result<InputDocument, CliError> {
    let doc = input::load(path)?;
    ctx.warn(&doc.warnings);
    Ok(doc)
}

pub fn references(doc: &InputDocument) -> Result<ReferenceSet, CliError> {
    Ok(ReferenceSet::new(doc.states.clone())?.with_labels(doc.labels.clone())?)
}

pub fn method(m: MethodArg) -> SupportMethod {
    match m {
        MethodArg::Seesaw => SupportMethod::Seesaw,
        MethodArg::Grid => SupportMethod::Grid,
    }
}

pub fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| report::short(*x)).collect();
    format!("({})", parts.join(", "))
}

pub fn evidence_line(v: &EffectivenessVerdict) -> Option<String> {
    if let (Some(n), Some(m)) = (&v.effective_direction, v.witness_margin) {
        return Some(format!("witness margin {} along {}", report::short(m), fmt_vec(n)));
    }
    v.evidence.as_ref().map(|c| {
        format!(
            "subspace dim {} (CES bound {}), max product overlap {} ({:?})",
            c.subspace_dim,
            c.max_ces_dim,
            report::short(c.max_product_overlap),
            c.decided_by
        )
    })
}

fn exhaustive_oracle(dims: Dims) -> bool {
    dims.d_a == 2 && dims.d_b == 2
}

pub fn analyze(ctx: &Context, path: &Path) -> Result<(), CliError> {
    let doc = load(ctx, path)?;
    let refs = references(&doc)?;
    let opts = ctx.effectiveness();
    let verdict = set_effective(&refs, &opts)?;
    let pairs = all_pair_verdicts(&refs, &opts)?;

    ctx.say(format!("set of {} references: {verdict}", refs.len()));
    if let Some(line) = evidence_line(&verdict) {
        ctx.say(format!("  evidence: {line}"));
    }
    let pair_json: Vec<Value> = pairs
        .iter()
        .map(|(i, j, v)| {
            ctx.say(format!("  pair ({},{}): {v}", i + 1, j + 1));
            json!({"i": i, "j": j, "summary": v.to_string(), "verdict": v})
        })
        .collect();

    let density = match &doc.density {
        None => Value::Null,
        Some((source, rho)) => {
            let tuple = fidelity_tuple(rho, &refs)?;
            let oracle = entanglement_oracle(rho, &opts.ces);
            let value = match &verdict.effective_direction {
                Some(n) => Some(evaluate_witness(
                    &build_witness(&refs, n, SupportMethod::Seesaw, &opts.support)?,
                    rho,
                )?),
                None => None,
            };
            let detected = value.map(|v| v < DETECTION_FLOOR);
            if let Some(v) = value {
                ctx.say(format!(
                    "  density: witness value {} ({})",
                    report::short(v),
                    if v < DETECTION_FLOOR {
                        "detected"
                    } else {
                        "not detected"
                    }
                ));
            }
            json!({
                "source": source,
                "fidelity_tuple": tuple,
                "oracle": oracle,
                "witness_value": value,
                "detected": detected,
            })
        }
    };

    let result = json!({
        "dims": refs.dims(),
        "references": refs,
        "summary": verdict.to_string(),
        "verdict": verdict,
        "pairs": pair_json,
        "overlaps": overlap_matrix(&refs),
        "exhaustive_oracle_available": exhaustive_oracle(refs.dims()),
        "density": density,
    });
    ctx.emit(
        "analyze",
        json!({"input": path.display().to_string()}),
        json!({"effectiveness": opts}),
        &doc.warnings,
        result,
        Vec::new(),
    )
}

pub struct RangeArgs {
    pub mode: ModeArg,
    pub directions: usize,
    pub density: Option<usize>,
    pub method: MethodArg,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Serialize)]
struct RegionSummary {
    provenance: jsnr_core::range::Provenance,
    parameters: jsnr_core::range::RegionParameters,
    vertex_count: usize,
    area: f64,
}

fn summary(r: &ConvexRegion2D) -> RegionSummary {
    RegionSummary {
        provenance: r.provenance,
        parameters: r.parameters.clone(),
        vertex_count: r.vertices.len(),
        area: r.area(),
    }
}

pub struct Analytic {
    pub jnr: ConvexRegion2D,
    pub jsnr: ConvexRegion2D,
}

pub fn analytic_regions(doc: &InputDocument, jnr: &JnrOptions, jsnr: &JsnrOptions) -> Result<Analytic, CliError> {
    let s = &doc.states;
    Ok(Analytic {
        jnr: jnr_two_pure(s[0].state(), s[1].state(), doc.dims.total(), jnr)?,
        jsnr: jsnr_two_product(&s[0], &s[1], jsnr)?,
    })
}

fn require_pair(doc: &InputDocument, command: &str) -> Result<(), CliError> {
    if doc.states.len() != 2 {
        return Err(CliError::arity(format!(
            "{command} needs exactly 2 references, found {}",
            doc.states.len()
        )));
    }
    Ok(())
}

pub fn write_artifact(ctx: &Context, path: &Path, contents: &str, artifacts: &mut Vec<String>) -> Result<(), CliError> {
    report::write_atomic(path, contents)?;
    ctx.say(format!("wrote {}", path.display()));
    artifacts.push(report::display(path));
    Ok(())
}

pub fn range(ctx: &Context, path: &Path, args: &RangeArgs) -> Result<(), CliError> {
    let doc = load(ctx, path)?;
    require_pair(&doc, "range")?;
    if args.directions < 3 {
        return Err(CliError::schema("--directions must be at least 3"));
    }
    let mut jnr_opts = JnrOptions::default();
    let mut jsnr_opts = JsnrOptions::default();
    if let Some(n) = args.density {
        if n < 2 {
            return Err(CliError::schema("--density must be at least 2"));
        }
        jnr_opts.samples = n;
        jsnr_opts.theta_samples = n;
    }
    let mut sample = SampleOptions {
        directions: args.directions,
        method: method(args.method),
        ..SampleOptions::default()
    };
    sample.support.seesaw.seed = ctx.seed;

    let joint = doc.joint_states();
    let c = fidelity(&joint[0], &joint[1])?;
    let (c_a, c_b) = doc.states[0].local_fidelities(&doc.states[1])?;
    ctx.say(format!(
        "fidelities: c = {}, c_A = {}, c_B = {}",
        report::short(c),
        report::short(c_a),
        report::short(c_b)
    ));

    let analytic = analytic_regions(&doc, &jnr_opts, &jsnr_opts)?;
    let modes: &[RangeMode] = match args.mode {
        ModeArg::Jnr => &[RangeMode::Jnr],
        ModeArg::Jsnr => &[RangeMode::Jsnr],
        ModeArg::Both => &[RangeMode::Jnr, RangeMode::Jsnr],
    };
    let mut regions = serde_json::Map::new();
    let mut artifacts = Vec::new();
    for &mode in modes {
        let (name, region) = match mode {
            RangeMode::Jnr => ("jnr", &analytic.jnr),
            RangeMode::Jsnr => ("jsnr", &analytic.jsnr),
        };
        let sampled = sampled_region_states(&joint, doc.dims, mode, &sample)?;
        let h = hausdorff_distance(region, &sampled.region);
        ctx.say(format!(
            "{name}: area {}, sampled gap {}, Hausdorff(analytic, sampled) {}",
            report::short(region.area()),
            report::short(sampled.gap),
            report::short(h)
        ));
        regions.insert(
            name.to_string(),
            json!({
                "analytic": summary(region),
                "sampled_inner": summary(&sampled.region),
                "sampled_outer": summary(&sampled.outer),
                "gap": sampled.gap,
                "hausdorff_analytic_sampled": h,
                "converged": h < HAUSDORFF_TOLERANCE,
            }),
        );
        let csv_path = match (&args.csv, args.mode) {
            (Some(p), ModeArg::Both) => Some(report::suffixed(p, name)),
            (Some(p), _) => Some(p.clone()),
            (None, _) => ctx.artifact(&format!("{name}.csv")),
        };
        if let Some(p) = csv_path {
            write_artifact(ctx, &p, &region_csv(region), &mut artifacts)?;
        }
    }

    let mut warnings = doc.warnings.clone();
    let nested = if args.mode == ModeArg::Both {
        // Both polygons are inscribed, so a coarse JNR can cut a fine JSNR vertex.
        let (ok, excess) = match check_nested(&analytic.jnr, &analytic.jsnr, NESTING_TOLERANCE) {
            Ok(e) => (true, e),
            Err(jsnr_core::Error::InconsistentRegions(e)) => (false, e),
            Err(e) => return Err(e.into()),
        };
        if !ok {
            let w = format!("JSNR polygon exceeds the JNR polygon by {excess:.3e}; raise --density");
            warnings.push(w);
            ctx.warn(&warnings[warnings.len() - 1..]);
        }
        json!({"nested": ok, "max_excess": excess})
    } else {
        Value::Null
    };

    let (jnr, jsnr) = match args.mode {
        ModeArg::Jnr => (Some(&analytic.jnr), None),
        ModeArg::Jsnr => (None, Some(&analytic.jsnr)),
        ModeArg::Both => (Some(&analytic.jnr), Some(&analytic.jsnr)),
    };
    let tuples: Vec<TupleClassification> = if args.mode == ModeArg::Both && !doc.tuples.is_empty() {
        let cl = TupleClassifier::new(&analytic.jnr, &analytic.jsnr, tol::CLASSIFY)?;
        doc.tuples.iter().map(|&t| cl.classify(t)).collect()
    } else {
        Vec::new()
    };
    if let Some(p) = args.svg.clone().or_else(|| ctx.artifact("range.svg")) {
        write_artifact(ctx, &p, &region_svg(jnr, jsnr, &tuples), &mut artifacts)?;
    }

    let result = json!({
        "dims": doc.dims,
        "fidelities": {"c": c, "c_a": c_a, "c_b": c_b},
        "regions": regions,
        "nesting": nested,
        "tuples": tuples,
    });
    ctx.emit(
        "range",
        json!({
            "input": path.display().to_string(),
            "mode": args.mode,
            "directions": args.directions,
            "density": args.density,
            "method": args.method,
        }),
        json!({
            "jnr": jnr_opts,
            "jsnr": jsnr_opts,
            "sampling": sample,
            "hausdorff_tolerance": HAUSDORFF_TOLERANCE,
            "nesting_tolerance": NESTING_TOLERANCE,
            "classify_tol": tol::CLASSIFY,
        }),
        &warnings,
        result,
        artifacts,
    )
}

pub fn witness(ctx: &Context, path: &Path, direction: &[f64], m: MethodArg) -> Result<(), CliError> {
    let doc = load(ctx, path)?;
    if direction.len() != doc.states.len() {
        return Err(CliError::arity(format!(
            "direction has {} entries but the input has {} references",
            direction.len(),
            doc.states.len()
        )));
    }
    if direction.iter().any(|x| !x.is_finite()) {
        return Err(CliError::schema("direction entries must be finite"));
    }
    let refs = references(&doc)?;
    let opts = ctx.effectiveness();
    let w = build_witness(&refs, direction, method(m), &opts.support)?;
    let status = if w.is_effective() {
        "effective witness"
    } else {
        "not a witness"
    };
    ctx.say(format!(
        "witness along {}: alpha {}, lambda_max {}, margin {} ({status})",
        fmt_vec(direction),
        report::short(w.alpha),
        report::short(w.lambda_max),
        report::short(w.margin)
    ));
    if w.oracle_fallback {
        ctx.say("  note: grid requested outside two qubits; seesaw used instead");
    }
    let density = match &doc.density {
        None => Value::Null,
        Some((source, rho)) => {
            let value = evaluate_witness(&w, rho)?;
            let detected = value < DETECTION_FLOOR;
            let word = if detected { "detected" } else { "not detected" };
            ctx.say(format!("  Tr(W rho) = {} ({word})", report::short(value)));
            json!({"source": source, "value": value, "detected": detected, "verdict": word})
        }
    };
    let result = json!({
        "dims": refs.dims(),
        "status": status,
        "effective": w.is_effective(),
        "witness": w,
        "exhaustive_oracle_available": exhaustive_oracle(refs.dims()),
        "density": density,
    });
    ctx.emit(
        "witness",
        json!({"input": path.display().to_string(), "direction": direction, "method": m}),
        json!({"support": opts.support, "detection_floor": DETECTION_FLOOR}),
        &doc.warnings,
        result,
        Vec::new(),
    )
}

pub fn verdict_word(v: TupleVerdict) -> &'static str {
    match v {
        TupleVerdict::Detected => "detected",
        TupleVerdict::Compatible => "compatible",
        TupleVerdict::Infeasible => "infeasible",
    }
}

pub fn classify(
    ctx: &Context,
    path: &Path,
    tuple: Option<&[f64]>,
    classify_tol: f64,
    svg: Option<&Path>,
) -> Result<(), CliError> {
    let doc = load(ctx, path)?;
    require_pair(&doc, "classify")?;
    if !(classify_tol.is_finite() && classify_tol >= 0.0) {
        return Err(CliError::schema("--classify-tol must be a nonnegative number"));
    }
    let mut tuples: Vec<(&str, [f64; 2])> = Vec::new();
    if let Some(t) = tuple {
        if t.len() != 2 {
            return Err(CliError::arity(format!("--tuple needs 2 entries, found {}", t.len())));
        }
        if t.iter().any(|x| !x.is_finite()) {
            return Err(CliError::schema("tuple entries must be finite"));
        }
        tuples.push(("argument", [t[0], t[1]]));
    }
    tuples.extend(doc.tuples.iter().map(|&t| ("document", t)));
    if let Some((_, rho)) = &doc.density {
        tuples.push(("density", density_tuple(&doc, rho)?));
    }
    if tuples.is_empty() {
        return Err(CliError::schema(
            "nothing to classify: pass --tuple or add `tuples` to the input",
        ));
    }

    let jnr_opts = JnrOptions::default();
    let jsnr_opts = JsnrOptions::default();
    let analytic = analytic_regions(&doc, &jnr_opts, &jsnr_opts)?;
    let cl = TupleClassifier::new(&analytic.jnr, &analytic.jsnr, classify_tol)?;
    let classified: Vec<TupleClassification> = tuples.iter().map(|(_, t)| cl.classify(*t)).collect();
    let rows: Vec<Value> = tuples
        .iter()
        .zip(&classified)
        .map(|((source, _), c)| {
            ctx.say(format!(
                "{} [{source}]: {} (distance to JSNR {}, to JNR {})",
                fmt_vec(&c.tuple),
                verdict_word(c.verdict),
                report::short(c.distance_jsnr),
                report::short(c.distance_jnr)
            ));
            json!({"source": source, "classification": c})
        })
        .collect();

    let mut artifacts = Vec::new();
    if let Some(p) = svg.map(Path::to_path_buf).or_else(|| ctx.artifact("classify.svg")) {
        write_artifact(
            ctx,
            &p,
            &region_svg(Some(&analytic.jnr), Some(&analytic.jsnr), &classified),
            &mut artifacts,
        )?;
    }
    ctx.emit(
        "classify",
        json!({"input": path.display().to_string(), "tuple": tuple, "classify_tol": classify_tol}),
        json!({"jnr": jnr_opts, "jsnr": jsnr_opts, "classify_tol": classify_tol}),
        &doc.warnings,
        json!({"dims": doc.dims, "tuples": rows}),
        artifacts,
    )
}

/// `(⟨ψ₁|ρ|ψ₁⟩, ⟨ψ₂|ρ|ψ₂⟩)` without requiring independent references.
fn density_tuple(doc: &InputDocument, rho: &DensityOperator) -> Result<[f64; 2], CliError> {
    let f = |i: usize| rho.expectation(doc.states[i].state()).map(|x| x.clamp(0.0, 1.0));
    Ok([f(0)?, f(1)?])
}
