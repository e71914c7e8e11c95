//! Report builders behind the `analyze`, `verify` and `kahler` subcommands.

use std::collections::BTreeMap;
use std::time::Instant;

use hesslab_core::dotchar::{dot_action_multiplicities_guarded, is_palindromic, GradedMultiplicity};
use hesslab_core::gkm::{build_gkm, kahler_package, morse_betti, Cohomology, KahlerReport};
use hesslab_core::hessenberg::{dimension, enumerate_hessenberg, HessenbergFunction};
use hesslab_core::partitions::{Partition, ReflectionSet};
use hesslab_core::springer::{
    allowed_irreps_given, chain_shape, generic_jordan_type_sampled, support_violations, SamplingReport,
    SpringerConvention,
};
use hesslab_core::Error as CoreError;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cache::{Cache, CacheKey, VERSION};

pub const TOOL: &str = "hesslab";
/// Largest `n` for the symbolic cross-check of `λ_H`.
pub const SYMBOLIC_MAX_N: usize = 5;
/// Largest `n` for moment-graph Betti numbers.
pub const GKM_MAX_N: usize = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input, 3 for a violated theorem, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Core(e) => match e {
                CoreError::OutOfRange { .. }
                | CoreError::SizeMismatch(_)
                | CoreError::InvalidPartition(_)
                | CoreError::InvalidHessenberg(_)
                | CoreError::InvalidSubset(_)
                | CoreError::InvalidWeight(_)
                | CoreError::CostGuard(_) => 2,
                CoreError::TheoremViolation(_) => 3,
                _ => 1,
            },
            Self::Io(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Debug)]
pub struct Context {
    pub seed: u64,
    pub cache: Cache,
    pub force: bool,
    pub timing: bool,
}

impl Context {
    pub fn new(seed: u64, cache: Cache) -> Self {
        Self { seed, cache, force: false, timing: false }
    }

    pub fn multiplicities(&self, h: &HessenbergFunction) -> CliResult<GradedMultiplicity> {
        let hs = h.to_comma_string();
        let key = CacheKey { module: "dotchar", n: h.n(), h: &hs, j: "", seed: None };
        if let Some(m) = self.cache.get(&key).and_then(|v| mult_from_json(h, &v)) {
            return Ok(m);
        }
        let m = dot_action_multiplicities_guarded(h, self.force)?;
        self.cache.put(&key, &mult_to_json(&m))?;
        Ok(m)
    }

    pub fn sampling(&self, h: &HessenbergFunction) -> CliResult<SamplingReport> {
        let hs = h.to_comma_string();
        let key = CacheKey { module: "springer", n: h.n(), h: &hs, j: "", seed: Some(self.seed) };
        if let Some(r) = self.cache.get(&key).and_then(|v| sampling_from_json(&v)) {
            return Ok(r);
        }
        let r = generic_jordan_type_sampled(h, self.seed)?;
        self.cache.put(&key, &serde_json::to_value(&r).expect("sampling report serializes"))?;
        Ok(r)
    }
}

fn mult_to_json(m: &GradedMultiplicity) -> Value {
    let rows: Vec<Value> = m.rows().map(|(p, r)| json!([p.to_comma_string(), r])).collect();
    json!({ "h": m.h.to_comma_string(), "l": m.l, "rows": rows })
}

fn mult_from_json(h: &HessenbergFunction, v: &Value) -> Option<GradedMultiplicity> {
    if v.get("h")?.as_str()? != h.to_comma_string() {
        return None;
    }
    let l = v.get("l")?.as_u64()? as usize;
    let mut table = BTreeMap::new();
    for row in v.get("rows")?.as_array()? {
        let p: Partition = row.get(0)?.as_str()?.parse().ok()?;
        let r: Vec<u64> = serde_json::from_value(row.get(1)?.clone()).ok()?;
        if r.len() != l + 1 {
            return None;
        }
        table.insert(p, r);
    }
    Some(GradedMultiplicity { h: h.clone(), l, table })
}

fn sampling_from_json(v: &Value) -> Option<SamplingReport> {
    let u = |k: &str| v.get(k).and_then(Value::as_u64);
    Some(SamplingReport {
        seed: u("seed")?,
        prime: u("prime")?,
        samples: u("samples")? as usize,
        agreeing: u("agreeing")? as usize,
        attempts: u("attempts")? as usize,
        jordan_type: v.get("jordan_type")?.as_str()?.parse().ok()?,
    })
}

/// One failed check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub h: String,
    pub check: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SamplingSummary {
    pub prime: u64,
    pub samples: usize,
    pub agreeing: usize,
    pub attempts: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportVerdict {
    pub convention: SpringerConvention,
    pub allowed_irreps: Vec<String>,
    pub present_but_forbidden: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularVerdict {
    #[serde(rename = "J")]
    pub j: String,
    pub betti: Vec<u64>,
    pub palindromic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GkmVerdict {
    pub morse_betti: Vec<u64>,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub h: String,
    pub n: usize,
    pub l: usize,
    pub indecomposable: bool,
    pub betti: Vec<u64>,
    pub mult: Value,
    #[serde(rename = "lambdaH")]
    pub lambda_h: String,
    pub sampling: SamplingSummary,
    #[serde(rename = "lambdaH_symbolic", skip_serializing_if = "Option::is_none")]
    pub lambda_h_symbolic: Option<String>,
    pub support: SupportVerdict,
    pub regular: Vec<RegularVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gkm: Option<GkmVerdict>,
    pub violations: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<&'static str, u128>>,
    #[serde(skip)]
    pub multiplicities: Option<GradedMultiplicity>,
}

#[derive(Clone, Copy, Debug)]
pub struct AnalyzeOptions {
    pub convention: SpringerConvention,
    pub gkm: bool,
    pub symbolic: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self { convention: SpringerConvention::Fourier, gkm: false, symbolic: false }
    }
}

struct Stopwatch {
    enabled: bool,
    laps: BTreeMap<&'static str, u128>,
    last: Instant,
}

impl Stopwatch {
    fn new(enabled: bool) -> Self {
        Self { enabled, laps: BTreeMap::new(), last: Instant::now() }
    }

    fn lap(&mut self, name: &'static str) {
        let now = Instant::now();
        self.laps.insert(name, (now - self.last).as_millis());
        self.last = now;
    }

    fn finish(self) -> Option<BTreeMap<&'static str, u128>> {
        self.enabled.then_some(self.laps)
    }
}

/// Characters, Betti numbers, `λ_H`, the support criterion and palindromicity
/// for one Hessenberg function.
pub fn analyze(ctx: &Context, h: &HessenbergFunction, opts: AnalyzeOptions) -> CliResult<AnalyzeReport> {
    let n = h.n();
    let hs = h.to_comma_string();
    let mut clock = Stopwatch::new(ctx.timing);
    let mult = ctx.multiplicities(h)?;
    let betti = mult.betti();
    clock.lap("dotchar");

    let sampling = ctx.sampling(h)?;
    let lambda_h = sampling.jordan_type.clone();
    let lambda_h_symbolic = if opts.symbolic {
        if n > SYMBOLIC_MAX_N {
            return Err(CliError::Usage(format!("--symbolic supports n ≤ {SYMBOLIC_MAX_N}")));
        }
        let exact = chain_shape(h)?;
        if exact != lambda_h {
            return Err(CoreError::Consistency(format!(
                "{hs}: sampled λ_H = {lambda_h} but the exact chain shape is {exact}"
            ))
            .into());
        }
        Some(exact.to_comma_string())
    } else {
        None
    };
    let allowed = allowed_irreps_given(h, &lambda_h, opts.convention)?;
    let forbidden = support_violations(&mult, &lambda_h, opts.convention)?;
    clock.lap("springer");

    let mut violations = Vec::new();
    for p in &forbidden {
        violations.push(Witness {
            h: hs.clone(),
            check: "support",
            detail: format!(
                "irrep {p} occurs but its orbit {} is not dominated by lambdaH = {lambda_h}",
                opts.convention.orbit_of(p)
            ),
        });
    }
    let mut regular = Vec::new();
    for j in ReflectionSet::all(n) {
        let b = mult.regular_betti(&j)?;
        let palindromic = is_palindromic(&b);
        if !palindromic {
            violations.push(Witness {
                h: hs.clone(),
                check: "palindromic",
                detail: format!("J = {{{}}} gives {b:?}", j.to_comma_string()),
            });
        }
        regular.push(RegularVerdict { j: j.to_comma_string(), betti: b, palindromic });
    }
    let l = mult.l;
    if h.is_indecomposable() && (betti[0] != 1 || betti[l] != 1) {
        violations.push(Witness {
            h: hs.clone(),
            check: "connected",
            detail: format!("indecomposable but b0 = {}, btop = {}", betti[0], betti[l]),
        });
    }
    clock.lap("checks");

    let gkm = if opts.gkm {
        if n > GKM_MAX_N {
            return Err(CliError::Usage(format!("--gkm supports n ≤ {GKM_MAX_N}")));
        }
        let g = build_gkm(h)?;
        let morse = morse_betti(&g, ctx.seed);
        let agrees = morse == betti;
        if !agrees {
            violations.push(Witness {
                h: hs.clone(),
                check: "gkm-betti",
                detail: format!("Morse count {morse:?} differs from {betti:?}"),
            });
        }
        clock.lap("gkm");
        Some(GkmVerdict { morse_betti: morse, agrees })
    } else {
        None
    };

    Ok(AnalyzeReport {
        tool: TOOL,
        version: VERSION,
        seed: ctx.seed,
        h: hs,
        n,
        l: dimension(h),
        indecomposable: h.is_indecomposable(),
        betti,
        mult: mult.to_json()["mult"].clone(),
        lambda_h: lambda_h.to_comma_string(),
        sampling: SamplingSummary {
            prime: sampling.prime,
            samples: sampling.samples,
            agreeing: sampling.agreeing,
            attempts: sampling.attempts,
        },
        lambda_h_symbolic,
        support: SupportVerdict {
            convention: opts.convention,
            allowed_irreps: allowed.iter().map(Partition::to_comma_string).collect(),
            present_but_forbidden: forbidden.iter().map(Partition::to_comma_string).collect(),
        },
        regular,
        gkm,
        violations,
        timing_ms: clock.finish(),
        multiplicities: Some(mult),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub h: String,
    pub l: usize,
    pub betti: Vec<u64>,
    #[serde(rename = "lambdaH")]
    pub lambda_h: String,
    pub gkm_checked: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub n: usize,
    pub indecomposable_only: bool,
    pub convention: SpringerConvention,
    pub gkm_max_n: usize,
    pub functions: usize,
    pub gkm_checked: usize,
    pub violation_count: usize,
    pub violations: Vec<Witness>,
    pub results: Vec<VerifyRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<&'static str, u128>>,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub n: usize,
    pub indecomposable_only: bool,
    pub gkm_max_n: usize,
    pub convention: SpringerConvention,
}

/// Runs every check over all Hessenberg functions of size `n`; results are
/// merged in lexicographic order of `h` whatever the thread count.
pub fn verify(ctx: &Context, opts: VerifyOptions) -> CliResult<VerifyReport> {
    let max_n = if ctx.force { 8 } else { 7 };
    if !(2..=max_n).contains(&opts.n) {
        return Err(CliError::Usage(format!("verify supports 2 ≤ n ≤ {max_n} (8 with --force)")));
    }
    if opts.gkm_max_n > GKM_MAX_N {
        return Err(CliError::Usage(format!("--gkm-max-n must be at most {GKM_MAX_N}")));
    }
    let started = Instant::now();
    let hs = enumerate_hessenberg(opts.n, opts.indecomposable_only)?;
    let gkm = opts.n <= opts.gkm_max_n;
    let per_h: Vec<AnalyzeReport> = hs
        .par_iter()
        .map(|h| analyze(ctx, h, AnalyzeOptions { convention: opts.convention, gkm, symbolic: false }))
        .collect::<CliResult<_>>()?;
    let mut violations = Vec::new();
    let mut results = Vec::with_capacity(per_h.len());
    for r in per_h {
        results.push(VerifyRow {
            h: r.h.clone(),
            l: r.l,
            betti: r.betti.clone(),
            lambda_h: r.lambda_h.clone(),
            gkm_checked: r.gkm.is_some(),
            ok: r.violations.is_empty(),
        });
        violations.extend(r.violations);
    }
    let mut timing = BTreeMap::new();
    timing.insert("total", started.elapsed().as_millis());
    Ok(VerifyReport {
        tool: TOOL,
        version: VERSION,
        seed: ctx.seed,
        n: opts.n,
        indecomposable_only: opts.indecomposable_only,
        convention: opts.convention,
        gkm_max_n: opts.gkm_max_n,
        functions: results.len(),
        gkm_checked: results.iter().filter(|r| r.gkm_checked).count(),
        violation_count: violations.len(),
        violations,
        results,
        timing_ms: ctx.timing.then_some(timing),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct KahlerCliReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub betti: Vec<u64>,
    #[serde(flatten)]
    pub report: KahlerReport,
    pub witnesses: Vec<String>,
}

pub fn parse_weight(s: &str, n: usize) -> CliResult<Vec<i64>> {
    let parts: Result<Vec<i64>, _> = s.split(',').map(|x| x.trim().parse::<i64>()).collect();
    let lambda = parts.map_err(|_| CliError::Usage(format!("cannot parse weight {s:?}")))?;
    if lambda.len() != n {
        return Err(CliError::Usage(format!("weight {s:?} needs {n} entries")));
    }
    Ok(lambda)
}

pub fn parse_subset(s: &str, n: usize) -> CliResult<ReflectionSet> {
    ReflectionSet::parse(n, s).map_err(|e| CliError::Usage(e.to_string()))
}

/// Poincaré duality, hard Lefschetz and Hodge–Riemann on `H^*(Hess)^{W_J}`.
pub fn kahler(ctx: &Context, h: &HessenbergFunction, j: &ReflectionSet, lambda: &[i64]) -> CliResult<KahlerCliReport> {
    let coh = Cohomology::new(build_gkm(h)?, ctx.seed)?;
    let betti = ctx.multiplicities(h)?.betti();
    coh.check_betti(&betti)?;
    let report = kahler_package(&coh, j, lambda)?;
    Ok(KahlerCliReport { tool: TOOL, version: VERSION, seed: ctx.seed, betti, witnesses: report.witnesses(), report })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hf(v: &[usize]) -> HessenbergFunction {
        HessenbergFunction::new(v.to_vec()).unwrap()
    }

    #[test]
    fn cached_tables_round_trip() {
        for h in [hf(&[2, 3, 3]), hf(&[1, 2, 3]), hf(&[3, 3, 4, 4])] {
            let m = dot_action_multiplicities_guarded(&h, false).unwrap();
            let back = mult_from_json(&h, &mult_to_json(&m)).unwrap();
            assert_eq!(back.table, m.table);
            assert_eq!(back.l, m.l);
            assert!(mult_from_json(&hf(&[3, 3, 3]), &mult_to_json(&m)).is_none());
            let s = generic_jordan_type_sampled(&h, 5).unwrap();
            let back = sampling_from_json(&serde_json::to_value(&s).unwrap()).unwrap();
            assert_eq!(back.jordan_type, s.jordan_type);
            assert_eq!((back.prime, back.samples, back.agreeing), (s.prime, s.samples, s.agreeing));
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::from(CoreError::InvalidHessenberg("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(CoreError::TheoremViolation("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(CoreError::Consistency("x".into())).exit_code(), 1);
    }

    #[test]
    fn weight_and_subset_parsing() {
        assert_eq!(parse_weight("1, 0,-1", 3).unwrap(), vec![1, 0, -1]);
        assert!(parse_weight("1,0", 3).is_err());
        assert!(parse_weight("a,b,c", 3).is_err());
        assert!(parse_subset("", 3).unwrap().is_empty());
        assert!(parse_subset("3", 3).is_err());
    }
}
