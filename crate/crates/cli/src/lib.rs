//! Command-line surface of the workbench.
//!
//! [`run`] takes an argument vector and returns the exit code together with
//! the text that would be written to stdout and stderr, so the binary is a
//! thin wrapper and tests can drive commands in-process.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use fgcoh::cohom::{bar_cohomology_dim, cohomology_dim_cached};
use fgcoh::fpcore::is_prime;
use fgcoh::generation::{tensor_sequence, ext_class_vanishes};
use fgcoh::kgmod::{radical, ModuleJson};
use fgcoh::resolve::{free_resolution, verify_exact, DEFAULT_RANK_CEILING};
use fgcoh::serre::{find_witness_in, splice, verify_zero_class, DEFAULT_MAX_M};
use fgcoh::{
    build_group, catalog, generation_certificate, lemma1_check, module_generators, ring_presentation,
    verify_certificate, Error, FiniteGroup, GenerationCertificate, GenerationLimits, GroupCohomology,
    GroupSpec, KGModule, ResolutionCache,
};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "fgcoh", version, about = "Mod-p cohomology of small p-groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hilbert table, ring generators and structure constants of H^*(G, F_p).
    Ring(Common),
    /// Minimal m with a vanishing product of Bocksteins of degree-1 classes.
    Witness(Common),
    /// The spliced exact sequence of a witness, with its checks.
    Splice(Common),
    /// Generation certificate for a module.
    Certify(Common),
    /// Re-check a stored certificate.
    Verify {
        certificate: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Truncated finite-generation report, for the ring or a module.
    Fingen(Common),
    /// Ranks of a free resolution of the module.
    Betti(Common),
    /// Cohomology dimensions from the bar complex beside the resolution.
    Oracle(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Catalog group name.
    #[arg(long)]
    pub group: Option<String>,
    /// Group JSON file (name, p, degree, generators as 1-based image lists).
    #[arg(long)]
    pub group_file: Option<PathBuf>,
    /// Builtin module.
    #[arg(long, value_enum)]
    pub module: Option<BuiltinModule>,
    /// Module JSON file.
    #[arg(long)]
    pub module_file: Option<PathBuf>,
    /// Characteristic, for groups that are not p-groups.
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long, default_value_t = 10)]
    pub maxdeg: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_M)]
    pub max_m: usize,
    #[arg(long, default_value_t = DEFAULT_RANK_CEILING)]
    pub rank_ceiling: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Recorded in the session config; results are not persisted.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BuiltinModule {
    K,
    Regular,
    Radical,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SessionConfig {
    pub p: u32,
    pub maxdeg: usize,
    pub max_m: usize,
    pub rank_ceiling: usize,
    pub format: Format,
    pub cache_dir: Option<String>,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Input(_) | Error::Domain(_) => EXIT_INPUT,
            Error::Cap(_) => EXIT_CAP,
            Error::Verification(_) => EXIT_VERIFY,
            Error::Internal(_) => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: msg.into(),
    }
}

/// A rendered report plus the exit code it carries.
struct Report {
    command: &'static str,
    result: Value,
    code: i32,
}

type Run<T> = std::result::Result<T, Failure>;

fn read_file(path: &PathBuf) -> Run<String> {
    std::fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))
}

fn load_group(c: &Common) -> Run<Arc<FiniteGroup>> {
    let mut spec: GroupSpec = match (&c.group, &c.group_file) {
        (Some(_), Some(_)) => return Err(input("give either --group or --group-file")),
        (Some(name), None) => catalog(name).ok_or_else(|| input(format!("unknown group {name}")))?,
        (None, Some(path)) => serde_json::from_str(&read_file(path)?)
            .map_err(|e| input(format!("bad group file: {e}")))?,
        (None, None) => return Err(input("a group is required (--group or --group-file)")),
    };
    if let Some(p) = c.p {
        spec.p = p;
    }
    Ok(build_group(&spec)?)
}

fn load_module(c: &Common, g: &Arc<FiniteGroup>) -> Run<KGModule> {
    match (&c.module, &c.module_file) {
        (Some(_), Some(_)) => Err(input("give either --module or --module-file")),
        (None, Some(path)) => {
            let json: ModuleJson = serde_json::from_str(&read_file(path)?)
                .map_err(|e| input(format!("bad module file: {e}")))?;
            Ok(KGModule::from_json(g, &json)?)
        }
        (Some(BuiltinModule::Regular), None) => Ok(KGModule::regular(g)),
        (Some(BuiltinModule::Radical), None) => {
            let reg = KGModule::regular(g);
            Ok(reg.submodule(&radical(&reg)?)?)
        }
        (Some(BuiltinModule::K), None) | (None, None) => Ok(KGModule::trivial(g)),
    }
}

fn config(c: &Common, p: u32) -> Run<SessionConfig> {
    if !is_prime(p) {
        return Err(input(format!("{p} is not prime")));
    }
    if c.maxdeg == 0 || c.max_m == 0 || c.rank_ceiling == 0 {
        return Err(input("maxdeg, max-m and rank-ceiling must be positive"));
    }
    Ok(SessionConfig {
        p,
        maxdeg: c.maxdeg,
        max_m: c.max_m,
        rank_ceiling: c.rank_ceiling,
        format: c.format,
        cache_dir: c.cache_dir.as_ref().map(|d| d.display().to_string()),
    })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn ring(c: &Common, g: &Arc<FiniteGroup>, cache: &ResolutionCache) -> Run<Report> {
    let ctx = GroupCohomology::with_cache(cache, g, c.maxdeg)?;
    let pres = ring_presentation(&ctx)?;
    let mut result = to_value(&pres);
    result["generator_degrees"] = to_value(&pres.generator_degrees());
    Ok(Report {
        command: "ring",
        result,
        code: EXIT_OK,
    })
}

fn witness(c: &Common, g: &Arc<FiniteGroup>, cache: &ResolutionCache) -> Run<Report> {
    let ctx = GroupCohomology::with_cache(cache, g, 2 * c.max_m)?;
    let search = find_witness_in(&ctx, c.max_m)?;
    let result = match &search.witness {
        Some(w) => json!({ "found": true, "bound": c.max_m, "witness": w.to_json() }),
        None => json!({
            "found": false,
            "bound": c.max_m,
            "capped": search.capped,
            "message": format!("none ≤ {}", c.max_m),
        }),
    };
    Ok(Report {
        command: "witness",
        result,
        code: if search.capped { EXIT_CAP } else { EXIT_OK },
    })
}

fn splice_cmd(c: &Common, g: &Arc<FiniteGroup>, cache: &ResolutionCache) -> Run<Report> {
    let ctx = GroupCohomology::with_cache(cache, g, 2 * c.max_m)?;
    let search = find_witness_in(&ctx, c.max_m)?;
    let Some(w) = search.witness else {
        return Ok(Report {
            command: "splice",
            result: json!({ "found": false, "bound": c.max_m, "capped": search.capped }),
            code: if search.capped { EXIT_CAP } else { EXIT_OK },
        });
    };
    let s = splice(&w)?;
    let zero = verify_zero_class(&s, &ctx)?;
    let mut result = json!({
        "found": true,
        "witness": w.to_json(),
        "n": s.n(),
        "term_dims": s.terms().iter().map(|t| t.dim()).collect::<Vec<_>>(),
        "subgroups": s.subgroups.iter().map(|h| h.members().to_vec()).collect::<Vec<_>>(),
        "exactness": to_value(&s.exact_report),
        "zero_class": {
            "degree": zero.class.degree,
            "class": zero.class.vector,
            "bockstein_product": zero.product.vector,
            "matches": zero.matches,
            "is_zero": zero.is_zero,
        },
    });
    let mut ok = s.exact_report.pass && zero.is_zero && zero.matches;
    if c.module.is_some() || c.module_file.is_some() {
        let l = load_module(c, g)?;
        let t = tensor_sequence(&s, &l)?;
        let report = verify_exact(&t)?;
        let (class, vanishes) = ext_class_vanishes(&t, &l, cache)?;
        ok &= report.pass && vanishes;
        result["tensored"] = json!({
            "module_dim": l.dim(),
            "term_dims": t.objects.iter().map(|o| o.dim()).collect::<Vec<_>>(),
            "exactness": to_value(&report),
            "ext_class": class.vector,
            "ext_class_is_zero": vanishes,
        });
    }
    Ok(Report {
        command: "splice",
        result,
        code: if ok { EXIT_OK } else { EXIT_VERIFY },
    })
}

fn limits(c: &Common) -> GenerationLimits {
    GenerationLimits {
        max_m: c.max_m,
        rank_ceiling: c.rank_ceiling,
        ..GenerationLimits::default()
    }
}

fn certify(c: &Common, g: &Arc<FiniteGroup>) -> Run<Report> {
    let l = load_module(c, g)?;
    let cert = generation_certificate(&l, &limits(c))?;
    let code = if cert.is_complete() { EXIT_OK } else { EXIT_CAP };
    Ok(Report {
        command: "certify",
        result: to_value(&cert),
        code,
    })
}

/// Accepts a bare certificate or a report envelope around one.
pub fn parse_certificate(text: &str) -> std::result::Result<GenerationCertificate, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("bad certificate file: {e}"))?;
    let inner = match v.get("result") {
        Some(r) if v.get("command").is_some() => r.clone(),
        _ => v,
    };
    serde_json::from_value(inner).map_err(|e| format!("bad certificate file: {e}"))
}

fn verify(path: &PathBuf) -> Run<(Report, u32)> {
    let cert = parse_certificate(&read_file(path)?).map_err(input)?;
    let report = verify_certificate(&cert);
    let code = if report.pass { EXIT_OK } else { EXIT_VERIFY };
    Ok((
        Report {
            command: "verify",
            result: json!({
                "group": cert.group.name,
                "complete": cert.is_complete(),
                "report": to_value(&report),
            }),
            code,
        },
        cert.group.p,
    ))
}

fn fingen(c: &Common, g: &Arc<FiniteGroup>, cache: &ResolutionCache) -> Run<Report> {
    let ctx = GroupCohomology::with_cache(cache, g, c.maxdeg)?;
    let result = if c.module.is_some() || c.module_file.is_some() {
        to_value(&module_generators(&ctx, &load_module(c, g)?)?)
    } else {
        to_value(&lemma1_check(&ctx)?)
    };
    Ok(Report {
        command: "fingen",
        result,
        code: EXIT_OK,
    })
}

fn betti(c: &Common, g: &Arc<FiniteGroup>) -> Run<Report> {
    let l = load_module(c, g)?;
    let res = free_resolution(&l, c.maxdeg, c.rank_ceiling)?;
    let mut result = json!({
        "group": g.name(),
        "module_dim": l.dim(),
        "minimal": g.is_p_group(),
        "ranks": res.betti()[..=c.maxdeg].to_vec(),
    });
    if l.is_trivial_action() && l.dim() == 1 {
        let cache = ResolutionCache::new(c.rank_ceiling);
        let dims = (0..=c.maxdeg)
            .map(|n| cohomology_dim_cached(&cache, g, &l, n))
            .collect::<fgcoh::Result<Vec<_>>>()?;
        result["cohomology"] = to_value(&dims);
    }
    Ok(Report {
        command: "betti",
        result,
        code: EXIT_OK,
    })
}

fn oracle(c: &Common, g: &Arc<FiniteGroup>, cache: &ResolutionCache) -> Run<Report> {
    let k = KGModule::trivial(g);
    let mut bar = Vec::new();
    let mut capped_at = None;
    for n in 0..=c.maxdeg {
        match bar_cohomology_dim(g, n) {
            Ok(d) => bar.push(d),
            Err(Error::Cap(_)) => {
                capped_at = Some(n);
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let resolution = (0..bar.len())
        .map(|n| cohomology_dim_cached(cache, g, &k, n))
        .collect::<fgcoh::Result<Vec<_>>>()?;
    let agree = bar == resolution;
    Ok(Report {
        command: "oracle",
        result: json!({
            "group": g.name(),
            "bar": bar,
            "resolution": resolution,
            "agree": agree,
            "capped_at": capped_at,
        }),
        code: if !agree {
            EXIT_VERIFY
        } else if capped_at.is_some() {
            EXIT_CAP
        } else {
            EXIT_OK
        },
    })
}

fn render_text(command: &str, result: &Value) -> String {
    let mut out = format!("{command}\n");
    if let Value::Object(map) = result {
        for (k, v) in map {
            let shown = match v {
                Value::Object(_) => continue,
                Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
                    format!("[{} entries]", xs.len())
                }
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("  {k}: {shown}\n"));
        }
    }
    out
}

fn dispatch(cli: Cli) -> Run<(Report, SessionConfig, Option<PathBuf>)> {
    if let Command::Verify { certificate, common } = &cli.command {
        let (report, p) = verify(certificate)?;
        let cfg = config(common, common.p.unwrap_or(p))?;
        return Ok((report, cfg, common.out.clone()));
    }
    let c = match &cli.command {
        Command::Ring(c)
        | Command::Witness(c)
        | Command::Splice(c)
        | Command::Certify(c)
        | Command::Fingen(c)
        | Command::Betti(c)
        | Command::Oracle(c) => c,
        Command::Verify { .. } => unreachable!(),
    };
    let g = load_group(c)?;
    let cfg = config(c, g.p())?;
    let cache = ResolutionCache::new(c.rank_ceiling);
    let report = match &cli.command {
        Command::Ring(_) => ring(c, &g, &cache)?,
        Command::Witness(_) => witness(c, &g, &cache)?,
        Command::Splice(_) => splice_cmd(c, &g, &cache)?,
        Command::Certify(_) => certify(c, &g)?,
        Command::Fingen(_) => fingen(c, &g, &cache)?,
        Command::Betti(_) => betti(c, &g)?,
        Command::Oracle(_) => oracle(c, &g, &cache)?,
        Command::Verify { .. } => unreachable!(),
    };
    Ok((report, cfg, c.out.clone()))
}

/// Runs one command. `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli) {
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
        Ok((report, cfg, out)) => {
            let body = match cfg.format {
                Format::Json => {
                    let envelope = json!({
                        "schema_version": SCHEMA_VERSION,
                        "command": report.command,
                        "config": to_value(&cfg),
                        "result": report.result,
                    });
                    serde_json::to_string_pretty(&envelope).expect("report serializes") + "\n"
                }
                Format::Text => render_text(report.command, &report.result),
            };
            match out {
                Some(path) => match std::fs::write(&path, &body) {
                    Ok(()) => Outcome {
                        code: report.code,
                        stdout: String::new(),
                        stderr: String::new(),
                    },
                    Err(e) => Outcome {
                        code: EXIT_INPUT,
                        stdout: String::new(),
                        stderr: format!("error: cannot write {}: {e}\n", path.display()),
                    },
                },
                None => Outcome {
                    code: report.code,
                    stdout: body,
                    stderr: String::new(),
                },
            }
        }
    }
}
