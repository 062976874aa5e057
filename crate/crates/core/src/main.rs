use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use shcalc::pipeline::{self, compute_sh_with_seed};
use shcalc::{grr, gw, localization, CoefficientField, Error};

#[derive(Parser)]
#[command(name = "shcalc", version, about = "Quantum and symplectic cohomology of O(-n) -> P^m")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// QH and SH presentations, the r-matrix and diagnostics.
    Compute {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "q")]
        field: CoefficientField,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The continuation matrix r.
    Rmatrix {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "q")]
        field: CoefficientField,
    },
    /// Coefficients tau_{a,n}.
    Tau {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "q")]
        field: CoefficientField,
    },
    /// A_a by torus localization at sampled weights.
    Localize {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: u32,
        #[arg(long, default_value_t = 3)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Riemann-Roch on the blown-up P^1 x P^1 and deg(Obs).
    Grr,
    /// QH and SH for every exact-mode pair with m <= max-m.
    Table {
        #[arg(long)]
        max_m: u32,
        #[arg(long, default_value = "q")]
        field: CoefficientField,
    },
}

fn run(cmd: Command) -> Result<serde_json::Value, Error> {
    Ok(match cmd {
        Command::Compute { m, n, field, format, seed } => {
            let res = compute_sh_with_seed(m, n, field, seed)?;
            match format {
                Format::Json => res.to_json(),
                Format::Text => serde_json::Value::String(res.to_text()),
            }
        }
        Command::Rmatrix { m, n, field } => {
            let res = compute_sh_with_seed(m, n, field, 0)?;
            let v = res.to_json();
            json!({"m": m, "n": n, "field": field.name(), "r_matrix": v["r_matrix"], "r_unknown": v["r_unknown"]})
        }
        Command::Tau { n, field } => serde_json::to_value(gw::tau_table(n, field)?).expect("serializable"),
        Command::Localize { m, n, a, trials, seed } => {
            let report = localization::localize_trials(m, n, a, trials, seed)?;
            let expected = gw::subdiagonal_entry(m, n, a, CoefficientField::Rationals)?;
            let mut v = serde_json::to_value(&report).expect("serializable");
            v["closed_form"] = json!(expected.to_string());
            v
        }
        Command::Grr => {
            let (ring, z) = grr::o11_universal_curve();
            let ints = ring.grr_integrals(&z)?;
            let noether = ring.grr_chi(&grr::DivisorClass::zero(ring.rank()))?;
            json!({
                "chi_top": ints.c2,
                "c1_squared": ints.c1_squared,
                "c1_z": ints.c1_z,
                "z_squared": ints.z_squared,
                "chi": ints.chi().to_string(),
                "chi_structure_sheaf": noether.to_string(),
                "deg_obs": grr::obstruction_degree(&ring, &z),
            })
        }
        Command::Table { max_m, field } => {
            let rows = pipeline::exact_mode_pairs(max_m)
                .into_iter()
                .map(|(m, n)| {
                    let res = compute_sh_with_seed(m, n, field, 0)?;
                    Ok(json!({
                        "m": m,
                        "n": n,
                        "N": res.min_chern,
                        "regime": res.regime.kind.to_string(),
                        "qh": res.qh.render(),
                        "sh": res.sh.render(),
                        "sh_rank": res.sh_rank.value(),
                        "diagnostics_pass": res.all_pass(),
                    }))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            serde_json::Value::Array(rows)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(v) => {
            let out = match v {
                serde_json::Value::String(text) => text,
                v => serde_json::to_string_pretty(&v).expect("serializable") + "\n",
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e @ Error::Unsupported { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
