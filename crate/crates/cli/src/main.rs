//! Command-line front end: every computation of the library behind
//! reproducible, diffable flags. Text output uses the `x = e0 - 1`,
//! `y = e1 - 1` display convention; JSON output follows docs/schema.json.

use clap::{Parser, Subcommand, ValueEnum};
use fermat_core::cohomology::{d2_kernel_test, CochainComplex, D2Instance, D2Verdict};
use fermat_core::context::PrimeContext;
use fermat_core::galois::{action_norm, action_unit, cubic_coefficient, log_poly, CVector};
use fermat_core::group_ring::{grid, render_xy};
use fermat_core::invariants::{invariant_report, kernel_question_probe};
use fermat_core::scalar::Fp;
use fermat_core::verify::{render_outcome, run_acceptance};
use fermat_core::zeta::{
    admissible_pairs, jacobi_sum, orbit_decomposition, zeta_mod_p_report, FiniteField,
    DEFAULT_POINT_CAP,
};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

const SUPPORTED_PRIMES: &[u64] = &[3, 5, 7, 11, 13];
const DEFAULT_SEED: u64 = 0xfe52a7;

#[derive(Parser)]
#[command(
    name = "fermat",
    about = "Galois action on the mod-p homology of the degree-p Fermat curve: \
             units, norms, invariants, cohomology, and finite-field checks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// The unit by which a Galois element acts on homology
    Bq {
        #[arg(long)]
        p: u64,
        /// Comma-separated coordinates c0,...,cr (c0 first)
        #[arg(long)]
        q: String,
    },
    /// The auxiliary logarithm polynomial and its Artin-Schreier data
    Gamma {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: String,
    },
    /// The norm of the action unit
    Norm {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: String,
    },
    /// Invariant subspace dimensions and bases
    Invariants {
        #[arg(long)]
        p: u64,
        /// Also report the kernel-coincidence evidence for this prime
        #[arg(long)]
        probe_question: bool,
    },
    /// First-cohomology dimension of the Galois group acting on homology
    Cohomology {
        #[arg(long)]
        p: u64,
    },
    /// Decide transgression-kernel membership for an instance file
    D2check {
        #[arg(long)]
        p: u64,
        /// JSON file with fields p, u (r+1 vectors) and w (C(r+1,2) vectors)
        #[arg(long)]
        instance: PathBuf,
    },
    /// Point counts of the curve over finite fields, mod-p zeta check
    Zeta {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
        /// Extension degree of the base field
        #[arg(long, default_value_t = 1)]
        f: usize,
        #[arg(long, default_value_t = 1)]
        m_max: usize,
        /// Cap on the field size enumerated per count
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Jacobi sums of the order-p characters over a finite field
    Jacobi {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        f: usize,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Run the full verification suite and print one line per criterion
    VerifyPaper {
        /// Restrict to the sub-checks involving this prime
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn parse_cvector(ctx: &PrimeContext, s: &str) -> Result<CVector, String> {
    let coords: Vec<u64> = s
        .split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    CVector::new(ctx, coords).map_err(|e| e.to_string())
}

fn context_for(p: u64) -> Result<PrimeContext, String> {
    if !SUPPORTED_PRIMES.contains(&p) {
        return Err(format!("p must be one of {SUPPORTED_PRIMES:?}"));
    }
    PrimeContext::new(p).map_err(|e| e.to_string())
}

fn point_cap(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("FERMAT_POINT_CAP")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_POINT_CAP)
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Bq { p, q } => {
            let ctx = context_for(p)?;
            let fp = Fp::new(&ctx);
            let q = parse_cvector(&ctx, &q)?;
            let unit = action_unit(&ctx, &q);
            let norm = action_norm(&ctx, &q);
            let alpha = cubic_coefficient(&ctx, &q).ok();
            match cli.format {
                Format::Text => {
                    println!("{}", render_xy(&unit.elt, &fp));
                }
                Format::Json => {
                    let out = json!({
                        "p": p,
                        "c_vector": q.coords(),
                        "B": grid(&unit.elt, &fp),
                        "norm": grid(&norm, &fp),
                        "alpha": alpha,
                    });
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gamma { p, q } => {
            let ctx = context_for(p)?;
            let q = parse_cvector(&ctx, &q)?;
            let data = log_poly(&ctx, &q);
            let c = data.ring.structure_constant();
            match cli.format {
                Format::Text => {
                    println!("structure constant c = {c}");
                    println!("root F = t, a root of X^{p} - X + {c}");
                    for (i, coeff) in data.coeffs.iter().enumerate() {
                        println!("f_{i} = {coeff:?}  (coordinates in 1, t, ..., t^{})", p - 1);
                    }
                }
                Format::Json => {
                    let out = json!({
                        "p": p,
                        "c_vector": q.coords(),
                        "structure_constant": c,
                        "f_coeffs": data.coeffs,
                    });
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Norm { p, q } => {
            let ctx = context_for(p)?;
            let fp = Fp::new(&ctx);
            let q = parse_cvector(&ctx, &q)?;
            let norm = action_norm(&ctx, &q);
            match cli.format {
                Format::Text => println!("{}", render_xy(&norm, &fp)),
                Format::Json => {
                    let g = grid(&norm, &fp);
                    let is_zero = g.iter().flatten().all(|&x| x == 0);
                    let out = json!({
                        "p": p,
                        "c_vector": q.coords(),
                        "norm": g,
                        "is_zero": is_zero,
                    });
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Invariants { p, probe_question } => {
            let ctx = context_for(p)?;
            let rep = invariant_report(&ctx);
            let probe = probe_question.then(|| kernel_question_probe(&ctx));
            match cli.format {
                Format::Text => {
                    println!("p = {p}");
                    println!("dim M^Q            = {}", rep.dim_mq);
                    println!("dim H1(U)          = {}", rep.dim_h1u);
                    println!("dim M^Q ∩ H1(U)    = {}", rep.dim_mq_cap_h1u);
                    println!("codim in M^Q       = {}", rep.codim_in_mq);
                    println!("dim edge subspace  = {}", rep.dim_edge_subspace);
                    println!("kernel dims        = {:?}", rep.kernel_dims);
                    println!(
                        "kernels equal (i >= 1): {}",
                        rep.kernels_equal_for_nonzero_generators
                    );
                    if let Some(pr) = probe {
                        println!(
                            "probe: kernels all equal = {}, M^Q = K0 ∩ K1 = {}",
                            pr.kernels_all_equal, pr.invariants_equal_two_kernel_intersection
                        );
                    }
                }
                Format::Json => {
                    let mut out = serde_json::to_value(&rep).unwrap();
                    if let Some(pr) = probe {
                        out["question_probe"] = serde_json::to_value(&pr).unwrap();
                    }
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cohomology { p } => {
            let ctx = context_for(p)?;
            let complex = CochainComplex::build(&ctx);
            let dim = complex.h1_dimension();
            match cli.format {
                Format::Text => {
                    println!("p = {p}: rho = {}, dim H^1(Q, M) = {dim}", complex.rho);
                }
                Format::Json => {
                    let out = json!({
                        "p": p,
                        "rho": complex.rho,
                        "dim_H1": dim,
                        "d0_rank": complex.d0.rank(),
                        "d1_kernel_dim": complex.d1.cols - complex.d1.rank(),
                    });
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::D2check { p, instance } => {
            let ctx = context_for(p)?;
            let text = std::fs::read_to_string(&instance)
                .map_err(|e| format!("cannot read {}: {e}", instance.display()))?;
            let parsed: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| e.to_string())?;
            if parsed["p"].as_u64() != Some(p) {
                return Err("instance file prime does not match --p".into());
            }
            let read_blocks = |key: &str| -> Result<Vec<Vec<u64>>, String> {
                parsed[key]
                    .as_array()
                    .ok_or(format!("missing field {key}"))?
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or(format!("bad row in {key}"))?
                            .iter()
                            .map(|v| v.as_u64().ok_or(format!("bad entry in {key}")))
                            .collect()
                    })
                    .collect()
            };
            let inst = D2Instance {
                u: read_blocks("u")?,
                w: read_blocks("w")?,
            };
            let complex = CochainComplex::build(&ctx);
            let verdict = d2_kernel_test(&complex, &inst).map_err(|e| e.to_string())?;
            match (cli.format, &verdict) {
                (Format::Text, D2Verdict::InKernel(ms)) => {
                    println!("in kernel; certificate tuple:");
                    for (j, m) in ms.iter().enumerate() {
                        println!("m_{j} = {m:?}");
                    }
                }
                (Format::Text, D2Verdict::NotInKernel) => println!("not in kernel"),
                (Format::Json, verdict) => {
                    let out = match verdict {
                        D2Verdict::InKernel(ms) => json!({
                            "p": p, "verdict": "in_kernel", "certificate": ms,
                        }),
                        D2Verdict::NotInKernel => json!({
                            "p": p, "verdict": "not_in_kernel",
                        }),
                    };
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Zeta {
            p,
            ell,
            f,
            m_max,
            cap,
        } => {
            let cap = point_cap(cap);
            let rep = zeta_mod_p_report(p, ell, f, m_max, cap).map_err(|e| e.to_string())?;
            match cli.format {
                Format::Text => {
                    println!("p = {p}, ell = {ell}, f = {f}, genus = {}", rep.genus);
                    for e in &rep.counts {
                        let orbit = orbit_decomposition(p, e.n)
                            .map(|k| k.to_string())
                            .unwrap_or_else(|| "-".into());
                        println!(
                            "m = {}: N = {} (mod p: {}), infinity = {}, orbit k = {orbit}",
                            e.m, e.n, e.n_mod_p, e.points_at_infinity
                        );
                    }
                    println!("series identity holds: {}", rep.holds);
                }
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&rep).unwrap());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Jacobi { p, ell, f, cap } => {
            if !SUPPORTED_PRIMES.contains(&p) {
                return Err(format!("p must be one of {SUPPORTED_PRIMES:?}"));
            }
            let cap = point_cap(cap);
            let field = FiniteField::new(ell, f, cap).map_err(|e| e.to_string())?;
            let mut sums = Vec::new();
            for (i, j) in admissible_pairs(p) {
                let js = jacobi_sum(&field, p, i, j).map_err(|e| e.to_string())?;
                sums.push((i, j, js));
            }
            match cli.format {
                Format::Text => {
                    println!("p = {p}, q = {} (generator {})", field.q, field.generator);
                    for (i, j, js) in &sums {
                        let coords: Vec<String> =
                            js.coords.iter().map(|c| c.to_string()).collect();
                        println!("J({i}, {j}) = [{}]", coords.join(", "));
                    }
                }
                Format::Json => {
                    let out = json!({
                        "p": p,
                        "ell": ell,
                        "f": f,
                        "q": field.q,
                        "generator": field.generator,
                        "sums": sums.iter().map(|(i, j, js)| json!({
                            "i": i,
                            "j": j,
                            "coords": js.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        })).collect::<Vec<_>>(),
                    });
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyPaper { p, seed } => {
            if let Some(p) = p {
                if !SUPPORTED_PRIMES.contains(&p) {
                    return Err(format!("p must be one of {SUPPORTED_PRIMES:?}"));
                }
            }
            let outcomes = run_acceptance(p, seed);
            let all_pass = outcomes.iter().all(|o| o.pass);
            match cli.format {
                Format::Text => {
                    for o in &outcomes {
                        println!("{}", render_outcome(o));
                    }
                    println!("overall: {}", if all_pass { "PASS" } else { "FAIL" });
                }
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&outcomes).unwrap());
                }
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
