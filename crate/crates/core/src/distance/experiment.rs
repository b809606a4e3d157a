//! Seeded sampling experiments and exhaustive extremal tables.

use itertools::Itertools;
use rand::seq::{index::sample, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ffield::{ext_field, field_of_order, FieldElem};
use crate::graphs::encode_vector;
use crate::qforms::{make_form, FormKind};
use crate::seeding::{derive_seed, task_rng};

use super::{distance_set_any, distance_set_pair, BoundKind, DistanceError, PairValue, PointSet, Space, SpaceKey, EPSILON};

/// Header of the per-trial CSV.
pub const CSV_HEADER: &str = "space,q,d,size,trial,seed,delta_size,threshold,satisfied";

/// Largest number of subsets an exhaustive table will enumerate.
const EXHAUSTIVE_LIMIT: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceSpec {
    Euclidean { q: u64, d: usize, form: FormKind },
    /// `sigma` defaults to the primitive element of `GF(q)`.
    Halfplane {
        q: u64,
        #[serde(default)]
        sigma: Option<u32>,
    },
}

impl SpaceSpec {
    pub fn build(&self) -> Result<Space, DistanceError> {
        match *self {
            SpaceSpec::Euclidean { q, d, form } => Space::euclidean(&make_form(field_of_order(q)?, form, d)?),
            SpaceSpec::Halfplane { q, sigma } => {
                let f = field_of_order(q)?;
                let sigma = match sigma {
                    Some(s) => f.elem(s as u64)?,
                    None => f.primitive_element(),
                };
                Space::halfplane(&ext_field(f, sigma)?)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    /// Uniform over all subsets of the given size.
    #[default]
    Uniform,
    /// Union of parallel lines, isotropic when the form has isotropic
    /// directions; vertical lines `Re z = c` in the half plane.
    AdversarialLine,
    /// Union of spheres about a random centre, radius 0 first.
    AdversarialBall,
}

fn default_epsilon() -> f64 {
    EPSILON
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub space: SpaceSpec,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub mode: SamplingMode,
    /// Draw pairs `(E, F)` with `|E| = |F| = size` instead of single sets.
    #[serde(default)]
    pub pair: bool,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub space: String,
    pub q: u32,
    pub d: usize,
    pub size: usize,
    pub trial: usize,
    pub seed: u64,
    pub delta_size: usize,
    pub threshold: f64,
    pub satisfied: bool,
    pub hypothesis_met: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub size: usize,
    pub trials: usize,
    pub min_delta: usize,
    pub mean_delta: f64,
    pub max_delta: usize,
    pub threshold: f64,
    pub hypothesis_met: bool,
    pub fraction_satisfied: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub space: SpaceKey,
    pub bound: BoundKind,
    pub statement: String,
    /// Least `|E|` (or `|E||F|`) meeting the hypothesis.
    pub hypothesis_minimum: f64,
    /// No set in the universe meets the hypothesis, so nothing is tested.
    pub vacuous: bool,
    pub rows: Vec<TrialRow>,
    pub summaries: Vec<SizeSummary>,
    pub audited_trials: usize,
    pub audit_failures: usize,
}

impl ExperimentReport {
    /// Every trial meeting the hypothesis satisfied the claimed bound.
    pub fn passed(&self) -> bool {
        self.audit_failures == 0
    }

    pub fn to_csv(&self) -> String {
        #[derive(Serialize)]
        struct CsvRow<'a> {
            space: &'a str,
            q: u32,
            d: usize,
            size: usize,
            trial: usize,
            seed: u64,
            delta_size: usize,
            threshold: String,
            satisfied: bool,
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(CsvRow {
                space: &r.space,
                q: r.q,
                d: r.d,
                size: r.size,
                trial: r.trial,
                seed: r.seed,
                delta_size: r.delta_size,
                threshold: format!("{:.6}", r.threshold),
                satisfied: r.satisfied,
            })
            .expect("writing to memory cannot fail");
        }
        if self.rows.is_empty() {
            return format!("{CSV_HEADER}\n");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("CSV output is UTF-8")
    }
}

fn line_points(space: &Space, base: usize, direction: &[FieldElem]) -> Vec<usize> {
    let form = space.form().expect("Euclidean space");
    let f = form.ctx();
    let q = f.q();
    let p = crate::graphs::decode_vector(base, q, form.dim());
    f.elements()
        .map(|t| {
            let x: Vec<FieldElem> = p.iter().zip(direction).map(|(&a, &v)| f.add(a, f.mul(t, v))).collect();
            encode_vector(&x, q)
        })
        .collect()
}

/// A sorted random subset of `size` points drawn according to `mode`.
pub fn sample_points(space: &Space, size: usize, mode: SamplingMode, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = space.size();
    let size = size.min(n);
    let mut chosen = vec![false; n];
    let mut out = Vec::with_capacity(size);
    let mut take = |group: &mut Vec<usize>, rng: &mut ChaCha8Rng, out: &mut Vec<usize>| {
        group.shuffle(rng);
        for &v in group.iter() {
            if out.len() == size {
                break;
            }
            if !chosen[v] {
                chosen[v] = true;
                out.push(v);
            }
        }
    };
    match mode {
        SamplingMode::Uniform => out = sample(rng, n, size).into_vec(),
        SamplingMode::AdversarialLine => match space.key() {
            SpaceKey::Euclidean { q, d, .. } => {
                let form = space.form().expect("Euclidean space");
                let dirs: Vec<Vec<FieldElem>> =
                    (1..n).map(|i| crate::graphs::decode_vector(i, q, d)).filter(|v| form.eval_unchecked(v).is_zero()).collect();
                let dir = if dirs.is_empty() {
                    crate::graphs::decode_vector(rng.gen_range(1..n), q, d)
                } else {
                    dirs[rng.gen_range(0..dirs.len())].clone()
                };
                while out.len() < size {
                    let free: Vec<usize> = (0..n).filter(|&v| !chosen_contains(&out, v)).collect();
                    let base = free[rng.gen_range(0..free.len())];
                    let mut line = line_points(space, base, &dir);
                    take(&mut line, rng, &mut out);
                }
            }
            SpaceKey::Halfplane { q, .. } => {
                let mut columns: Vec<usize> = (0..q as usize).collect();
                columns.shuffle(rng);
                let height = q as usize - 1;
                for c in columns {
                    let mut line: Vec<usize> = (c * height..(c + 1) * height).collect();
                    take(&mut line, rng, &mut out);
                }
            }
        },
        SamplingMode::AdversarialBall => {
            let centre = rng.gen_range(0..n);
            let q = space.key().q() as usize;
            let mut spheres: Vec<Vec<usize>> = vec![Vec::new(); q];
            for v in 0..n {
                spheres[space.distance(centre, v).index()].push(v);
            }
            let mut radii: Vec<usize> = (1..q).collect();
            radii.shuffle(rng);
            for r in std::iter::once(0).chain(radii) {
                take(&mut spheres[r], rng, &mut out);
            }
        }
    }
    out.sort_unstable();
    out
}

fn chosen_contains(out: &[usize], v: usize) -> bool {
    out.contains(&v)
}

/// Runs `trials` seeded trials per size. Trial `(size, t)` uses the seed
/// `derive_seed(seed, [size, t])`, so any row can be replayed alone.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, DistanceError> {
    let space = cfg.space.build()?;
    let n = space.size();
    if cfg.trials == 0 {
        return Err(DistanceError::Config("trials must be at least 1".into()));
    }
    if cfg.sizes.is_empty() {
        return Err(DistanceError::Config("no sizes given".into()));
    }
    if let Some(&s) = cfg.sizes.iter().find(|&&s| s == 0 || s > n) {
        return Err(DistanceError::Config(format!("size {s} is outside 1..={n}")));
    }
    if !(cfg.epsilon > 0.0 && cfg.epsilon < 0.5) {
        return Err(DistanceError::Config(format!("epsilon {} is outside (0, 1/2)", cfg.epsilon)));
    }
    let key = space.key();
    let (q, d) = (key.q(), key.d());
    let bound = BoundKind::for_space(key, cfg.pair);
    let label = key.to_string();
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for &size in &cfg.sizes {
        let hypothesis_met = bound.hypothesis_met(q, d, cfg.epsilon, size, size);
        let mut deltas = Vec::with_capacity(cfg.trials);
        let mut threshold = 0.0;
        let mut satisfied_count = 0;
        for trial in 0..cfg.trials {
            let keys = [size as u64, trial as u64];
            let seed = derive_seed(cfg.seed, &keys);
            let mut rng = task_rng(cfg.seed, &keys);
            let e = PointSet::new(&space, sample_points(&space, size, cfg.mode, &mut rng))?;
            let report = if cfg.pair {
                let f = PointSet::new(&space, sample_points(&space, size, cfg.mode, &mut rng))?;
                distance_set_pair(&space, &e, &f, PairValue::Difference)?
            } else {
                distance_set_any(&space, &e)?
            };
            threshold = report.threshold;
            satisfied_count += usize::from(report.satisfied);
            deltas.push(report.delta_size);
            rows.push(TrialRow {
                space: label.clone(),
                q,
                d,
                size,
                trial,
                seed,
                delta_size: report.delta_size,
                threshold: report.threshold,
                satisfied: report.satisfied,
                hypothesis_met,
            });
        }
        summaries.push(SizeSummary {
            size,
            trials: cfg.trials,
            min_delta: *deltas.iter().min().expect("trials >= 1"),
            mean_delta: deltas.iter().sum::<usize>() as f64 / deltas.len() as f64,
            max_delta: *deltas.iter().max().expect("trials >= 1"),
            threshold,
            hypothesis_met,
            fraction_satisfied: satisfied_count as f64 / cfg.trials as f64,
        });
    }
    let audited: Vec<&TrialRow> = rows.iter().filter(|r| r.hypothesis_met).collect();
    Ok(ExperimentReport {
        config: cfg.clone(),
        space: key,
        bound,
        statement: bound.statement().to_string(),
        hypothesis_minimum: bound.hypothesis_minimum(q, d, cfg.epsilon),
        vacuous: bound.vacuous(q, d, cfg.epsilon, n),
        audited_trials: audited.len(),
        audit_failures: audited.iter().filter(|r| !r.satisfied).count(),
        rows,
        summaries,
    })
}

/// Extremes of `|Δ(E)|` over every `E` of one size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExhaustiveRow {
    pub space: String,
    pub q: u32,
    pub d: usize,
    pub size: usize,
    pub subsets: u64,
    pub min_delta: usize,
    pub max_delta: usize,
    /// Subsets attaining `min_delta`.
    pub argmin_count: u64,
    pub threshold: f64,
    pub hypothesis_met: bool,
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Every subset of sizes `1..=max_size`, in lexicographic order.
pub fn exhaustive_table(space: &Space, max_size: usize) -> Result<Vec<ExhaustiveRow>, DistanceError> {
    let n = space.size();
    if max_size == 0 || max_size > n {
        return Err(DistanceError::Config(format!("max size {max_size} is outside 1..={n}")));
    }
    let total: u64 = (1..=max_size as u64).map(|k| binomial(n as u64, k)).sum();
    if total > EXHAUSTIVE_LIMIT {
        return Err(DistanceError::Config(format!("{total} subsets exceed the exhaustive limit {EXHAUSTIVE_LIMIT}")));
    }
    let key = space.key();
    let (q, d) = (key.q(), key.d());
    let bound = BoundKind::for_space(key, false);
    let mut rows = Vec::new();
    for size in 1..=max_size {
        let (mut lo, mut hi, mut at_lo, mut count) = (usize::MAX, 0, 0u64, 0u64);
        for set in (0..n).combinations(size) {
            let r = distance_set_any(space, &PointSet::new(space, set)?)?;
            count += 1;
            hi = hi.max(r.delta_size);
            match r.delta_size.cmp(&lo) {
                std::cmp::Ordering::Less => (lo, at_lo) = (r.delta_size, 1),
                std::cmp::Ordering::Equal => at_lo += 1,
                std::cmp::Ordering::Greater => {}
            }
        }
        rows.push(ExhaustiveRow {
            space: key.to_string(),
            q,
            d,
            size,
            subsets: count,
            min_delta: lo,
            max_delta: hi,
            argmin_count: at_lo,
            threshold: bound.claimed(q, d, size, size),
            hypothesis_met: bound.hypothesis_met(q, d, EPSILON, size, size),
        });
    }
    Ok(rows)
}

pub fn exhaustive_csv(rows: &[ExhaustiveRow]) -> String {
    let mut out = String::from("space,q,d,size,subsets,min_delta,max_delta,argmin_count,threshold,hypothesis_met\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{:.6},{}\n",
            r.space, r.q, r.d, r.size, r.subsets, r.min_delta, r.max_delta, r.argmin_count, r.threshold, r.hypothesis_met
        ));
    }
    out
}
