use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use stitched_polar::analysis::{coset_spectrum, count_unpolarized, min_distance, scaling_fit, scheme_profile, Scheme};
use stitched_polar::construction::{brs_code, build_family, partially_stitched, qup_code, transform_count};
use stitched_polar::harness::{
    simulate_bler, snr_search, sweep_lengths, SimConfig, StopRule, SweepConfig, DEFAULT_ROUND,
};
use stitched_polar::io::{
    format_bits, parse_bits, parse_llr_csv, read_code, read_family, write_code, write_family,
};
use stitched_polar::{ChannelModel, CheckRule, DecoderConfig, RateMatchedCode};

#[derive(Parser)]
#[command(name = "stpolar", version, about = "Stitched polar code construction, decoding and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the recursive code family up to a maximum length.
    ConstructFamily {
        #[arg(long)]
        max_len: usize,
        /// Design channel, e.g. bec:0.5 or awgn:1.0
        #[arg(long, default_value = "bec:0.5")]
        channel: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a partially stitched code from a family.
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 6)]
        s: u32,
        #[arg(long)]
        family: PathBuf,
        /// Design channel for rate allocation; defaults to the family's.
        #[arg(long)]
        design: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a rate-matched regular baseline.
    Baseline {
        #[arg(long = "type", value_enum)]
        kind: BaselineKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Design Es/N0 in dB for Gaussian-approximation reliability.
        #[arg(long, default_value_t = 1.0)]
        design_snr: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encode messages, one bit string per line.
    Encode {
        #[arg(long)]
        code: PathBuf,
        /// Message file, or - for stdin.
        #[arg(long = "in")]
        input: String,
        /// Codeword file, or - for stdout.
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Decode received LLR vectors, one comma-separated line each.
    Decode {
        #[arg(long)]
        code: PathBuf,
        /// LLR file, or - for stdin.
        #[arg(long)]
        llr: String,
        #[command(flatten)]
        dec: DecoderArgs,
    },
    /// Monte-Carlo BLER at one channel point.
    Simulate {
        #[arg(long)]
        code: PathBuf,
        /// awgn:DB (Es/N0), awgn-sigma:S or bec:EPS
        #[arg(long)]
        channel: String,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long)]
        max_errors: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        dec: DecoderArgs,
    },
    /// Required Es/N0 for a target BLER, by bisection.
    SnrSearch {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        target: f64,
        /// Es/N0 bracket in dB, LO:HI
        #[arg(long, default_value = "-2:8", allow_hyphen_values = true)]
        bracket: String,
        #[arg(long, default_value_t = 0.02)]
        tol: f64,
        #[command(flatten)]
        stop: StopArgs,
        #[command(flatten)]
        dec: DecoderArgs,
    },
    /// Required Es/N0 per length and scheme, written as CSV.
    Sweep {
        #[arg(long, default_value_t = 0.5)]
        rate: f64,
        /// Comma-separated code lengths.
        #[arg(long)]
        lengths: String,
        /// Comma-separated schemes: qup, brs, stc, stc-min, regular.
        #[arg(long, default_value = "qup,brs,stc")]
        schemes: String,
        #[arg(long, default_value_t = 0.01)]
        target: f64,
        #[arg(long, default_value = "-2:8", allow_hyphen_values = true)]
        bracket: String,
        #[arg(long, default_value_t = 0.02)]
        tol: f64,
        /// Design Es/N0 in dB for every construction.
        #[arg(long, default_value_t = 1.0)]
        design_snr: f64,
        /// Family file; built on the design channel when absent.
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        family_len: usize,
        #[arg(long, default_value_t = 6)]
        s: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        stop: StopArgs,
        #[command(flatten)]
        dec: DecoderArgs,
    },
    /// Coset spectrum and minimum distance of a code.
    Spectrum {
        #[arg(long)]
        code: PathBuf,
    },
    /// Un-polarized channel counts over a range of lengths and the fitted
    /// scaling exponent.
    Scaling {
        #[arg(long, value_parser = parse_scheme)]
        scheme: Scheme,
        /// Exponent range A:B; lengths are 2^m (plus 2^(m-t) with --extra).
        #[arg(long)]
        m_range: String,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long, default_value = "0.01:0.99")]
        band: String,
        /// Add 2^(m-t) positions to every length.
        #[arg(long)]
        extra: Option<u32>,
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        s: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BaselineKind {
    Qup,
    Brs,
}

#[derive(Args, Clone, Copy)]
struct DecoderArgs {
    /// List size; 1 is plain SC.
    #[arg(long, default_value_t = 1)]
    list: usize,
    /// Use the min-sum check-node rule.
    #[arg(long)]
    minsum: bool,
}

impl DecoderArgs {
    fn config(self) -> DecoderConfig {
        DecoderConfig {
            list_size: self.list.max(1),
            rule: if self.minsum { CheckRule::MinSum } else { CheckRule::Exact },
        }
    }
}

#[derive(Args, Clone, Copy)]
struct StopArgs {
    #[arg(long, default_value_t = 10_000_000)]
    max_trials: u64,
    #[arg(long, default_value_t = 100)]
    max_errors: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl StopArgs {
    fn rule(self) -> StopRule {
        StopRule {
            max_trials: self.max_trials,
            max_errors: Some(self.max_errors),
            exclude: None,
        }
    }
}

fn parse_scheme(s: &str) -> std::result::Result<Scheme, String> {
    Scheme::parse(s).map_err(|e| e.to_string())
}

fn parse_range<T: std::str::FromStr>(s: &str, what: &str) -> Result<(T, T)> {
    let (a, b) = s.split_once(':').ok_or_else(|| anyhow!("{what} must look like A:B, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<T>().map_err(|_| anyhow!("bad {what} bound {t:?}"));
    Ok((parse(a)?, parse(b)?))
}

fn read_input(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
    }
}

fn write_output(arg: Option<&Path>, text: &str) -> Result<()> {
    match arg {
        Some(p) if p != Path::new("-") => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        _ => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json(v: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::ConstructFamily { max_len, channel, out } => {
            let ch = ChannelModel::parse(&channel)?;
            let fam = build_family(max_len, &ch)?;
            write_family(&out, &fam)?;
            print_json(&json!({ "max_len": max_len, "channel": ch, "out": out }))
        }
        Command::Build { n, k, s, family, design, out } => {
            let fam = read_family(&family)?;
            let ch = match design {
                Some(d) => ChannelModel::parse(&d)?,
                None => fam.channel(),
            };
            let (code, layout) = partially_stitched(n, k, s, &fam, &ch)?;
            let meta = json!({
                "construction": "partially-stitched",
                "design": ch,
                "s": layout.s,
                "block_lengths": layout.block_lengths,
                "block_dims": layout.block_dims,
                "irregular_blocks": layout.irregular_blocks(),
                "transforms": transform_count(code.sequence()),
            });
            write_code(&out, &RateMatchedCode::plain(code), Some(meta.clone()))?;
            print_json(&meta)
        }
        Command::Baseline { kind, n, k, design_snr, out } => {
            let ch = ChannelModel::awgn_esn0_db(design_snr);
            let (name, code) = match kind {
                BaselineKind::Qup => ("qup", qup_code(n, k, &ch)?),
                BaselineKind::Brs => ("brs", brs_code(n, k, &ch)?),
            };
            let meta = json!({ "construction": name, "design": ch });
            write_code(&out, &code, Some(meta.clone()))?;
            print_json(&meta)
        }
        Command::Encode { code, input, out } => {
            let code = read_code(&code)?;
            let words = parse_bits(&read_input(&input)?)?;
            let cws = words.iter().map(|w| code.encode(w)).collect::<stitched_polar::Result<Vec<_>>>()?;
            let dest = (out != "-").then(|| PathBuf::from(&out));
            write_output(dest.as_deref(), &format_bits(&cws))
        }
        Command::Decode { code, llr, dec } => {
            let code = read_code(&code)?;
            let decoder = stitched_polar::Decoder::new(&code, dec.config())?;
            let mut results = Vec::new();
            for row in parse_llr_csv(&read_input(&llr)?)? {
                let d = decoder.decode(&row)?;
                let list: Vec<f64> = decoder.decode_list(&row)?.iter().map(|c| c.metric).collect();
                results.push(json!({
                    "message": format_bits(&[d.message]).trim(),
                    "u_hat": format_bits(&[d.u_hat]).trim(),
                    "x_hat": format_bits(&[d.x_hat]).trim(),
                    "metric": d.metric,
                    "crc_ok": d.crc_ok,
                    "path_metrics": list,
                }));
            }
            print_json(&Value::Array(results))
        }
        Command::Simulate { code, channel, trials, max_errors, seed, threads, out, dec } => {
            let code = read_code(&code)?;
            let ch = ChannelModel::parse(&channel)?;
            let mut cfg = SimConfig::new(ch, dec.config(), StopRule { max_trials: trials, max_errors, exclude: None }, seed);
            cfg.threads = threads;
            cfg.round = DEFAULT_ROUND;
            let r = simulate_bler(&code, &cfg)?;
            let text = serde_json::to_string_pretty(&r)? + "\n";
            write_output(out.as_deref(), &text)
        }
        Command::SnrSearch { code, target, bracket, tol, stop, dec } => {
            let code = read_code(&code)?;
            let bracket = parse_range::<f64>(&bracket, "bracket")?;
            let r = snr_search(&code, dec.config(), target, bracket, stop.rule(), stop.seed, tol)?;
            print_json(&json!({
                "target_bler": target,
                "esn0_db": r.value,
                "bracket": [r.lo, r.hi],
                "bracket_width_db": r.width(),
                "evaluations": r.evaluations,
                "seed": stop.seed,
            }))
        }
        Command::Sweep {
            rate,
            lengths,
            schemes,
            target,
            bracket,
            tol,
            design_snr,
            family,
            family_len,
            s,
            out,
            stop,
            dec,
        } => {
            let lengths = lengths
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| anyhow!("bad length {t:?}")))
                .collect::<Result<Vec<_>>>()?;
            if lengths.windows(2).any(|w| w[0] >= w[1]) {
                bail!("lengths must be strictly increasing");
            }
            let schemes = schemes.split(',').map(Scheme::parse).collect::<stitched_polar::Result<Vec<_>>>()?;
            let design = ChannelModel::awgn_esn0_db(design_snr);
            let needs_family = schemes.iter().any(|s| matches!(s, Scheme::Stc | Scheme::StcMin));
            let fam = match (family, needs_family) {
                (Some(p), _) => Some(read_family(&p)?),
                (None, true) => Some(build_family(family_len, &design)?),
                (None, false) => None,
            };
            let cfg = SweepConfig {
                decoder: dec.config(),
                target,
                bracket: parse_range::<f64>(&bracket, "bracket")?,
                stop: stop.rule(),
                seed: stop.seed,
                tol_db: tol,
                design,
                s,
            };
            let r = sweep_lengths(rate, &lengths, &schemes, fam.as_ref(), &cfg)?;
            write_output(out.as_deref(), &r.to_csv())
        }
        Command::Spectrum { code } => {
            let code = read_code(&code)?;
            let g = code.outer_generator();
            let d = coset_spectrum(&g)?;
            let info = code.outer_info();
            let ig = code.info_generator();
            let dmin = min_distance(&ig, &(0..ig.rows()).collect::<Vec<_>>())?;
            print_json(&json!({
                "n": code.n(),
                "k": code.k(),
                "spectrum": d.0,
                "info": info.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "min_distance": dmin,
            }))
        }
        Command::Scaling { scheme, m_range, epsilon, band, extra, family, s, out } => {
            let (a, b) = parse_range::<u32>(&m_range, "m-range")?;
            let band = parse_range::<f64>(&band, "band")?;
            let fam = family.map(|p| read_family(&p)).transpose()?;
            let mut csv = String::from("m,N,count,alpha\n");
            let mut points = Vec::new();
            for m in a..=b {
                let base = 1usize << m;
                let n = match extra {
                    Some(t) if t <= m => base + (base >> t),
                    Some(t) => bail!("extra shift {t} exceeds m = {m}"),
                    None => base,
                };
                let profile = scheme_profile(scheme, n, epsilon, fam.as_ref(), s)?;
                let (count, alpha) = count_unpolarized(&profile, band, n)?;
                csv.push_str(&format!("{m},{n},{count},{alpha:e}\n"));
                points.push((m as f64, alpha));
            }
            write_output(out.as_deref(), &csv)?;
            let summary = match scaling_fit(&points) {
                Ok(fit) => json!({
                    "scheme": scheme,
                    "mu": fit.mu,
                    "lambda": fit.lambda,
                    "slope": fit.slope,
                    "intercept": fit.intercept,
                    "band": [band.0, band.1],
                    "channel": ChannelModel::bec(epsilon)?,
                }),
                Err(e) => json!({ "scheme": scheme, "fit_error": e.to_string() }),
            };
            if out.is_some() {
                print_json(&summary)
            } else {
                eprintln!("{summary}");
                Ok(())
            }
        }
    }
}

fn error_json(err: &anyhow::Error) -> Value {
    let kind = err
        .chain()
        .find_map(|e| e.downcast_ref::<stitched_polar::Error>())
        .map_or("error", |e| e.kind());
    json!({ "error": kind, "message": format!("{err:#}") })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": "usage", "message": e.to_string() }));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::FAILURE
        }
    }
}
