//! The `ellquad` command line. [`run`] parses arguments, dispatches and
//! returns the exit status: 0 on success, 1 when a verification fails or a
//! computation cannot finish, 2 on usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::curve::{parse_curve, tate_normal, CurvePoint, KCurve, RationalCurve};
use crate::error::Error;
use crate::field::Field;
use crate::heights::{HeightContext, PrecisionPolicy, DEFAULT_TOLERANCE};
use crate::modp::{ap_table, curve_hash, ApTable};
use crate::quadfield::{QuadElem, QuadField};
use crate::records::{self, VerifyOptions};
use crate::sieve::{self, DFilter, SieveConfig, Variant};
use crate::torsion::{extra_two_torsion_field, torsion_over_k};
use crate::twistdecomp::TwistMap;

/// Directory for cached a_p tables.
pub const CACHE_ENV: &str = "ELLQUAD_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "ellquad", version, about = "Elliptic curves over Q and quadratic fields")]
pub struct Cli {
    /// Starting precision in bits for heights
    #[arg(long, global = true)]
    pub precision_bits: Option<u64>,
    /// Prime bound for a_p tables and Mestre-Nagao sums
    #[arg(long, global = true, default_value_t = 1000)]
    pub pmax: u64,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    /// `[a1,a2,a3,a4,a6]`, coefficients written `a+b*s` with s = √d
    #[arg(long)]
    pub curve: String,
    /// Squarefree d of the field Q(√d); 1 means Q
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub field_d: i64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// b- and c-invariants, discriminant and j-invariant
    Invariants(CurveArgs),
    /// The quadratic twist of a curve over Q
    Twist {
        #[arg(long)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Torsion subgroup over Q or Q(√d)
    Torsion {
        #[command(flatten)]
        c: CurveArgs,
        /// Also report the field of the remaining 2-torsion (curves over Q)
        #[arg(long)]
        two_torsion_field: bool,
    },
    /// Traces of Frobenius up to --pmax
    Ap {
        #[arg(long)]
        curve: String,
    },
    /// Mestre-Nagao sum of one twist
    MnSum {
        #[arg(long)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value = "S1")]
        variant: String,
    },
    /// Rank the twists in a range of d by their Mestre-Nagao sums
    Sieve {
        #[arg(long)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        dmin: i64,
        #[arg(long, allow_hyphen_values = true)]
        dmax: i64,
        #[arg(long, default_value_t = 20)]
        top: usize,
        #[arg(long, allow_hyphen_values = true)]
        min_sum: Option<f64>,
        #[arg(long, default_value = "S1")]
        variant: String,
        /// Enumerate fundamental discriminants instead of squarefree d
        #[arg(long)]
        fundamental: bool,
        /// Checkpoint file to resume from and append to
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Canonical height of a point, `(x;y)` or `(x;?)`
    Height {
        #[command(flatten)]
        c: CurveArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Independence of points via the height pairing
    Independence {
        #[command(flatten)]
        c: CurveArgs,
        #[arg(long = "point", allow_hyphen_values = true, required = true)]
        points: Vec<String>,
    },
    /// Split a point over Q(√d) into its Q- and twist components
    Descend {
        #[command(flatten)]
        c: CurveArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// The Tate normal form for (b, c) and the order of (0,0)
    TateNormal {
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        field_d: i64,
    },
    /// Check the claims of a record file (default: the built-in corpus)
    Verify {
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long)]
        only: Option<String>,
        /// Also write the full report here
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Errors carrying their exit status.
enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Domain(_) | Error::NotOnCurve(_) | Error::Singular => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Failed(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Failed(e.to_string())
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// Ordered key/value output; text and machine formats render the same pairs.
struct Out {
    format: Format,
    lines: Vec<(String, String)>,
    raw: String,
}

impl Out {
    fn put(&mut self, k: impl Into<String>, v: impl ToString) {
        self.lines.push((k.into(), v.to_string()));
    }

    fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.lines {
            match self.format {
                Format::Machine => s.push_str(&format!("{k}={v}\n")),
                Format::Text => s.push_str(&format!("{k:<18} {v}\n")),
            }
        }
        s.push_str(&self.raw);
        s
    }
}

fn field(d: i64) -> Res<QuadField> {
    if d == 1 {
        return Ok(QuadField::rationals());
    }
    Ok(QuadField::new(d)?)
}

fn k_curve(c: &CurveArgs) -> Res<KCurve> {
    Ok(parse_curve(&c.curve, &field(c.field_d)?)?)
}

fn q_curve(text: &str) -> Res<RationalCurve> {
    let k = parse_curve(text, &QuadField::rationals())?;
    Ok(k.to_rational().expect("curve over Q"))
}

fn parse_point(e: &KCurve, text: &str) -> Res<CurvePoint<QuadElem>> {
    Ok(records::parse_point(e, text)?)
}

fn policy(cli: &Cli) -> PrecisionPolicy {
    let mut p = PrecisionPolicy::default();
    if let Some(b) = cli.precision_bits {
        p.start_bits = b.max(32);
        p.max_bits = p.max_bits.max(b);
    }
    p
}

fn table_for(e: &RationalCurve, pmax: u64) -> Res<ApTable> {
    match std::env::var_os(CACHE_ENV) {
        Some(dir) => Ok(ApTable::load_or_build(e, pmax, Path::new(&dir))?),
        None => Ok(ap_table(e, pmax)),
    }
}

fn fmt_point<E: std::fmt::Display>(p: &CurvePoint<E>) -> String {
    p.to_string()
}

fn dispatch(cli: &Cli, out: &mut Out) -> Res<bool> {
    match &cli.command {
        Command::Invariants(c) => {
            let e = k_curve(c)?;
            let k = e.field();
            let inv = e.invariants();
            out.put("curve", &e);
            out.put("field_d", c.field_d);
            for (name, v) in [
                ("b2", &inv.b2),
                ("b4", &inv.b4),
                ("b6", &inv.b6),
                ("b8", &inv.b8),
                ("c4", &inv.c4),
                ("c6", &inv.c6),
                ("disc", &inv.disc),
                ("j", &inv.j),
            ] {
                out.put(name, k.format(v));
            }
        }
        Command::Twist { curve, d } => {
            let e = q_curve(curve)?;
            let t = e.quadratic_twist(&BigInt::from(*d))?;
            out.put("curve", &e);
            out.put("d", d);
            out.put("twist", &t);
            out.put("isomorphic_over_q", e.is_isomorphic_short(&t));
        }
        Command::Torsion { c, two_torsion_field } => {
            let e = k_curve(c)?;
            let t = torsion_over_k(&e)?;
            out.put("curve", &e);
            out.put("field_d", c.field_d);
            out.put("torsion", t.group);
            out.put("order_bound", t.bound);
            for (i, g) in t.generators.iter().enumerate() {
                out.put(format!("generator.{}", i + 1), fmt_point(g));
            }
            let pts: Vec<String> = t.all_points.iter().map(fmt_point).collect();
            out.put("points", pts.join(","));
            if *two_torsion_field {
                let eq = e
                    .to_rational()
                    .ok_or_else(|| Failure::Usage("--two-torsion-field needs a curve over Q".into()))?;
                out.put("two_torsion_field", extra_two_torsion_field(&eq)?);
            }
        }
        Command::Ap { curve } => {
            let e = q_curve(curve)?;
            let t = table_for(&e, cli.pmax)?;
            out.put("curve", &e);
            out.put("curve_id", &t.curve_id);
            out.put("pmax", t.pmax);
            out.put("sha256", t.digest());
            out.raw = t.serialize();
        }
        Command::MnSum { curve, d, variant } => {
            let e = q_curve(curve)?;
            let v: Variant = variant.parse()?;
            let t = table_for(&e, cli.pmax)?;
            let s = sieve::mn_sum(&e, *d, &t, v)?;
            out.put("curve", &e);
            out.put("d", d);
            out.put("pmax", cli.pmax);
            out.put("variant", v);
            out.put("sum", format!("{:.12}", s.sum));
            out.put("skipped_primes", s.skipped);
        }
        Command::Sieve {
            curve,
            dmin,
            dmax,
            top,
            min_sum,
            variant,
            fundamental,
            resume,
        } => {
            let e = q_curve(curve)?;
            let cfg = SieveConfig {
                curve_id: curve_hash(&e),
                pmax: cli.pmax,
                d_min: *dmin,
                d_max: *dmax,
                top_k: *top,
                min_sum: *min_sum,
                variant: variant.parse()?,
                d_filter: if *fundamental {
                    DFilter::Fundamental
                } else {
                    DFilter::Squarefree
                },
            };
            cfg.validate()?;
            let t = table_for(&e, cli.pmax)?;
            let o = sieve::run_sieve_with(&cfg, &t, resume.as_deref())?;
            out.raw = sieve::format_report(&cfg, &t, &o);
        }
        Command::Height { c, point } => {
            let e = k_curve(c)?;
            let p = parse_point(&e, point)?;
            let ctx = HeightContext::with_policy(&e, policy(cli))?;
            let h = ctx.canonical_height(&p, DEFAULT_TOLERANCE)?;
            out.put("curve", &e);
            out.put("field_d", c.field_d);
            out.put("point", fmt_point(&p));
            out.put("height", h.to_decimal(30));
            out.put("error_bound", format!("{:.3e}", h.error_bound()));
            out.put("precision_bits", h.bits);
        }
        Command::Independence { c, points } => {
            let e = k_curve(c)?;
            let pts = points.iter().map(|s| parse_point(&e, s)).collect::<Res<Vec<_>>>()?;
            let ctx = HeightContext::with_policy(&e, policy(cli))?;
            let rep = ctx.independence(&pts)?;
            out.put("curve", &e);
            out.put("field_d", c.field_d);
            for (i, p) in pts.iter().enumerate() {
                out.put(format!("point.{}", i + 1), fmt_point(p));
            }
            for (i, row) in rep.gram.entries.iter().enumerate() {
                for (j, v) in row.iter().enumerate().skip(i) {
                    out.put(format!("gram.{}.{}", i + 1, j + 1), v.to_decimal(20));
                }
            }
            out.put("regulator", rep.gram.det.to_decimal(20));
            out.put("error_bound", format!("{:.3e}", rep.gram.det.radius_f64()));
            out.put("precision_bits", rep.bits);
            out.put("verdict", &rep.verdict);
        }
        Command::Descend { c, point } => {
            let e = k_curve(c)?;
            let eq = e
                .to_rational()
                .ok_or_else(|| Failure::Usage("descend needs a curve with rational coefficients".into()))?;
            let tm = TwistMap::new(&eq, e.field())?;
            let p = parse_point(tm.curve_k(), point)?;
            let dsc = tm.descend(&p)?;
            out.put("curve", &eq);
            out.put("field_d", c.field_d);
            out.put("twist", tm.twist());
            out.put("plus", fmt_point(&dsc.plus));
            out.put("minus", fmt_point(&dsc.minus));
            out.put("defect", fmt_point(&dsc.defect));
        }
        Command::TateNormal { b, c, field_d } => {
            let k = field(*field_d)?;
            let (b, c) = (k.parse(b)?, k.parse(c)?);
            let e = tate_normal(&k, &b, &c)?;
            let p = e.point(k.zero(), k.zero())?;
            out.put("curve", &e);
            out.put("field_d", field_d);
            match e.order_up_to(&p, 64) {
                Some(n) => out.put("order", n),
                None => out.put("order", "infinite-or-above-64"),
            }
        }
        Command::Verify { records, only, report } => {
            let corpus = match records {
                Some(p) => records::ingest(p)?,
                None => records::parse_corpus(records::BUILTIN_CORPUS)?,
            };
            let opts = VerifyOptions {
                only: only.clone(),
                policy: policy(cli),
            };
            let rep = records::verify(&corpus, &opts)?;
            if let Some(path) = report {
                std::fs::write(path, rep.to_string())?;
            }
            match cli.format {
                Format::Text => out.raw = rep.to_string(),
                Format::Machine => {
                    for r in &rep.records {
                        out.put(format!("record.{}.torsion", r.id), tag(&r.torsion));
                        if let Some(j) = &r.j {
                            out.put(format!("record.{}.j", r.id), tag(j));
                        }
                        for (i, p) in r.points.iter().enumerate() {
                            out.put(format!("record.{}.point.{}", r.id, i + 1), tag(&p.non_torsion));
                        }
                        out.put(format!("record.{}.rank", r.id), tag(&r.rank));
                        out.put(format!("record.{}.certified_rank", r.id), r.certified_rank);
                    }
                    out.raw = machine_summary_lines(&rep);
                }
            }
            return Ok(rep.all_passed());
        }
    }
    Ok(true)
}

fn tag(v: &records::ClaimVerdict) -> &'static str {
    if v.is_verified() {
        "verified"
    } else if v.is_skipped() {
        "skipped"
    } else {
        "failed"
    }
}

fn machine_summary_lines(rep: &records::RecordReport) -> String {
    let s = rep.summary();
    let mut out = String::new();
    for (name, c) in [
        ("torsion", &s.torsion),
        ("j", &s.j),
        ("points", &s.points),
        ("rank", &s.rank),
        ("conditional", &s.conditional),
    ] {
        out.push_str(&format!(
            "summary.{name}.verified={}\nsummary.{name}.failed={}\nsummary.{name}.skipped={}\n",
            c.verified, c.failed, c.skipped
        ));
    }
    out.push_str(&format!("summary.omitted={}\n", s.omitted));
    out
}

fn header(cli: &Cli, args: &[String]) -> String {
    let jobs = cli.jobs.map_or("auto".to_string(), |j| j.to_string());
    let p = policy(cli);
    format!(
        "# ellquad {} | args: {} | pmax={} jobs={} precision={}..{} format={}\n",
        env!("CARGO_PKG_VERSION"),
        args.join(" "),
        cli.pmax,
        jobs,
        p.start_bits,
        p.max_bits,
        match cli.format {
            Format::Text => "text",
            Format::Machine => "machine",
        }
    )
}

/// Runs one invocation; `args` excludes the program name.
pub fn run(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let argv = std::iter::once("ellquad".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = if code == 0 {
                write!(stdout, "{e}")
            } else {
                write!(stderr, "{e}")
            };
            return code;
        }
    };
    let mut out = Out {
        format: cli.format,
        lines: Vec::new(),
        raw: String::new(),
    };
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut out)),
            Err(e) => Err(Failure::Failed(e.to_string())),
        },
        None => dispatch(&cli, &mut out),
    };
    match result {
        Ok(passed) => {
            let _ = stdout.write_all(header(&cli, args).as_bytes());
            let _ = stdout.write_all(out.render().as_bytes());
            if passed {
                0
            } else {
                let _ = writeln!(stderr, "verification failed: see the report for failed verdicts");
                1
            }
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            let _ = writeln!(stderr, "run `ellquad help` for the synopsis of each subcommand");
            2
        }
        Err(Failure::Failed(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            1
        }
    }
}
