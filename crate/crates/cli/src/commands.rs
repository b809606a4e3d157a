use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::time::Duration;

use anyhow::Context;
use serde::Serialize;
use serde_json::{json, Value};

use fqgraph::combinat::RamseyOptions;
use fqgraph::distance::{exhaustive_csv, exhaustive_table, SamplingMode, SpaceSpec, EPSILON};
use fqgraph::graphs::{
    build_alon_graph, build_code_graph, build_euclidean, build_halfplane, build_orthogonal, OrthoFamily,
};
use fqgraph::spectral::{certify_cayley, DEFAULT_DENSE_CEILING};
use fqgraph::suite::{run_selected, SuiteOptions, CRITERIA};
use fqgraph::{
    certify, ext_field, field_of_order, make_field, make_form, ramsey_witness, run_experiment, ExperimentConfig,
    FieldElem, FormKind, Graph, NdlCertificate, SearchBudget,
};

use crate::{
    Cli, Command, DistanceArgs, FamilyArg, FieldArgs, FormArgs, GraphArgs, GraphFormat, RamseyArgs, SpaceArg,
    SuiteArgs, SuiteFormat, TableFormat,
};

/// Exit status 1 for `Check`, 2 for `Usage`.
#[derive(Debug)]
pub enum Failure {
    Check(String),
    Usage(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(format!("{e:#}"))
    }
}

fn usage<E: Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

type Outcome = Result<(), Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let mut out = Output { path: cli.output.as_deref() };
    match &cli.command {
        Command::Field(a) => field(a, &mut out),
        Command::Form(a) => form(a, &mut out),
        Command::Graph(a) => graph(a, &mut out),
        Command::Ramsey(a) => ramsey(a, &mut out),
        Command::Distance(a) => distance(a, &mut out),
        Command::Suite(a) => suite(a, &mut out),
    }
}

struct Output<'a> {
    path: Option<&'a std::path::Path>,
}

impl Output<'_> {
    fn text(&mut self, body: &str) -> Outcome {
        match self.path {
            Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display()))?,
            None => {
                let mut stdout = io::stdout().lock();
                match stdout.write_all(body.as_bytes()).and_then(|()| stdout.flush()) {
                    // A closed downstream pipe is not an error.
                    Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                    r => r.context("writing standard output")?,
                }
            }
        }
        Ok(())
    }

    fn json<T: Serialize>(&mut self, value: &T) -> Outcome {
        let mut body = serde_json::to_string_pretty(value).map_err(usage)?;
        body.push('\n');
        self.text(&body)
    }
}

fn field(args: &FieldArgs, out: &mut Output) -> Outcome {
    let ctx = match (args.p, args.r, args.q) {
        (Some(p), Some(r), None) => make_field(p, r),
        (None, None, Some(q)) => field_of_order(q),
        _ => return Err(usage("give either --p and --r, or --q")),
    }
    .map_err(usage)?;
    out.json(&json!({ "config": args, "field": ctx.summary() }))
}

fn form(args: &FormArgs, out: &mut Output) -> Outcome {
    let kind: FormKind = args.kind.parse().map_err(usage)?;
    let form = make_form(field_of_order(args.q).map_err(usage)?, kind, args.dim).map_err(usage)?;
    out.json(&json!({ "config": args, "form": form.summary().map_err(usage)? }))
}

fn required<T: Copy>(value: Option<T>, flag: &str, family: FamilyArg) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required for the {family:?} family")))
}

fn element(f: &fqgraph::FieldCtx, index: u32) -> Result<FieldElem, Failure> {
    f.elem(index as u64).map_err(usage)
}

/// The graph and, for Euclidean graphs, a character-sum certificate that
/// works at any size.
fn build_graph(args: &GraphArgs) -> Result<(Graph, Option<NdlCertificate>), Failure> {
    let fam = args.family;
    match fam {
        FamilyArg::Euclidean => {
            let f = field_of_order(required(args.q, "q", fam)?).map_err(usage)?;
            let kind: FormKind = args.kind.as_deref().unwrap_or("plus_even").parse().map_err(usage)?;
            let form = make_form(f.clone(), kind, args.d).map_err(usage)?;
            let a = element(&f, required(args.a, "a", fam)?)?;
            let g = build_euclidean(&form, a).map_err(usage)?;
            let cert = certify_cayley(&form, a).ok();
            Ok((g, cert))
        }
        FamilyArg::Halfplane => {
            let f = field_of_order(required(args.q, "q", fam)?).map_err(usage)?;
            let sigma = match args.sigma {
                Some(s) => element(&f, s)?,
                None => f.primitive_element(),
            };
            let a = element(&f, required(args.a, "a", fam)?)?;
            let ext = ext_field(f, sigma).map_err(usage)?;
            Ok((build_halfplane(&ext, a).map_err(usage)?, None))
        }
        FamilyArg::Orthogonal => {
            let f = field_of_order(required(args.q, "q", fam)?).map_err(usage)?;
            let family: OrthoFamily = args
                .ortho
                .as_deref()
                .ok_or_else(|| Failure::Usage("--ortho is required for the Orthogonal family".into()))?
                .parse()
                .map_err(usage)?;
            let form = make_form(f, family.form_kind(), family.dim(args.m)).map_err(usage)?;
            let g = build_orthogonal(&form, family, required(args.i, "i", fam)?).map_err(usage)?;
            Ok((g, None))
        }
        FamilyArg::Bch => Ok((build_code_graph(required(args.k, "k", fam)?).map_err(usage)?, None)),
        FamilyArg::Alon => Ok((build_alon_graph(required(args.k, "k", fam)?).map_err(usage)?, None)),
    }
}

fn graph(args: &GraphArgs, out: &mut Output) -> Outcome {
    let (g, cayley) = build_graph(args)?;
    // Dense certificates are attached whenever they are affordable; --certify
    // turns a missing or failed certificate into an error.
    let cert = match cayley {
        Some(c) => Some(c),
        None if g.n() <= DEFAULT_DENSE_CEILING && g.regular_degree().is_some() => certify(&g).ok(),
        None => None,
    };
    if args.certify {
        match &cert {
            None => return Err(Failure::Usage(format!("{} cannot be certified", g.family().name()))),
            Some(c) if c.pass == Some(false) => {
                out.json(&json!({ "config": args, "certificate": c }))?;
                return Err(Failure::Check(format!("λ = {} exceeds the stated bound {:?}", c.lambda, c.bound)));
            }
            Some(_) => {}
        }
    }
    match args.format {
        GraphFormat::Adjacency => out.text(&g.adjacency_text().to_string()),
        GraphFormat::Json => {
            let report = json!({
                "config": args,
                "degree": g.regular_degree(),
                "edge_count": g.edge_count(),
                "certificate": cert,
                "graph": g.to_envelope(),
            });
            out.json(&report)
        }
    }
}

fn ramsey(args: &RamseyArgs, out: &mut Output) -> Outcome {
    let opts = RamseyOptions {
        exact_alpha: args.exact_alpha,
        exact_chi: args.exact_chi,
        budget: SearchBudget::new(args.node_limit, Duration::from_secs(args.time_limit)),
    };
    let w = ramsey_witness(args.q, args.a, opts).map_err(usage)?;
    out.json(&json!({ "config": args, "witness": w }))?;
    if w.is_valid() {
        Ok(())
    } else {
        Err(Failure::Check(format!("E_{}(2,plus_even,{}) has {} triangles", w.q, w.a, w.triangle_count)))
    }
}

fn space_spec(args: &DistanceArgs, space: SpaceArg) -> Result<SpaceSpec, Failure> {
    let q = args.q.ok_or_else(|| Failure::Usage("--q is required with --space".into()))?;
    Ok(match space {
        SpaceArg::Euclidean => SpaceSpec::Euclidean { q, d: args.d, form: args.kind.parse().map_err(usage)? },
        SpaceArg::Halfplane => SpaceSpec::Halfplane { q, sigma: args.sigma },
    })
}

fn distance(args: &DistanceArgs, out: &mut Output) -> Outcome {
    let cfg = match (&args.config, args.space) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<ExperimentConfig>(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        (None, Some(space)) => {
            let spec = space_spec(args, space)?;
            if args.exhaustive {
                let rows = exhaustive_table(&spec.build().map_err(usage)?, args.max_size).map_err(usage)?;
                return match args.format {
                    TableFormat::Csv => out.text(&exhaustive_csv(&rows)),
                    TableFormat::Json => out.json(&json!({ "config": args, "rows": rows })),
                };
            }
            if args.sizes.is_empty() {
                return Err(Failure::Usage("--sizes is required for a sampled experiment".into()));
            }
            let mode: SamplingMode = serde_json::from_value(Value::String(args.mode.clone()))
                .map_err(|_| Failure::Usage(format!("unknown sampling mode '{}'", args.mode)))?;
            ExperimentConfig {
                space: spec,
                sizes: args.sizes.clone(),
                trials: args.trials,
                seed: args.seed,
                mode,
                pair: args.pair,
                epsilon: EPSILON,
            }
        }
        (None, None) => return Err(Failure::Usage("give --config FILE or --space".into())),
    };
    let report = run_experiment(&cfg).map_err(usage)?;
    match args.format {
        TableFormat::Csv => out.text(&report.to_csv())?,
        TableFormat::Json => out.json(&report)?,
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{} of {} trials meeting the hypothesis fell below the claimed bound",
            report.audit_failures, report.audited_trials
        )))
    }
}

fn suite(args: &SuiteArgs, out: &mut Output) -> Outcome {
    if args.list {
        let body: String = CRITERIA.iter().map(|(id, title)| format!("{id:>2} {title}\n")).collect();
        return out.text(&body);
    }
    let mut ids: Vec<u8> = if args.only.is_empty() { CRITERIA.iter().map(|(id, _)| *id).collect() } else { args.only.clone() };
    if let Some(bad) = ids.iter().find(|id| !CRITERIA.iter().any(|(c, _)| c == *id)) {
        return Err(Failure::Usage(format!("no criterion {bad}")));
    }
    if ids.contains(&12) {
        ids.extend(1..=11);
    }
    ids.sort_unstable();
    ids.dedup();
    let opts = SuiteOptions {
        seed: args.seed.unwrap_or(SuiteOptions::default().seed),
        corrupt_adjacency: args.corrupt,
    };
    let text = args.format == SuiteFormat::Text;
    let report = run_selected(&ids, &opts, |o, secs| {
        if text {
            eprintln!("{} {:>2} {} ({secs:.1} s)", if o.passed { "PASS" } else { "FAIL" }, o.id, o.title);
        }
    });
    if text {
        let mut body = String::new();
        for o in &report.outcomes {
            body.push_str(&format!(
                "{} {:>2} {}: {} checks, {} failed\n",
                if o.passed { "PASS" } else { "FAIL" },
                o.id,
                o.title,
                o.checks,
                o.failure_count
            ));
            for f in &o.failures {
                body.push_str(&format!("    failed: {f}\n"));
            }
            for n in &o.notes {
                body.push_str(&format!("    note: {n}\n"));
            }
        }
        out.text(&body)?;
    } else {
        out.json(&report)?;
    }
    let failed: Vec<String> = report.outcomes.iter().filter(|o| !o.passed).map(|o| o.id.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("criteria {} failed", failed.join(", "))))
    }
}
