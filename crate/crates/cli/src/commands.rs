use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use oilab_core::circuit::enumerate_distribution;
use oilab_core::invseq::{default_polarization_k, polarize, reduce_sd_to_sisd, PolarizationPlan};
use oilab_core::lattice::{
    closest_vector, gap_experiment, lwe_to_gapcvp, sample_lwe, sample_uniform, RowVerdict,
    DEFAULT_SEPARATION,
};
use oilab_core::numeric::format_rational;
use oilab_core::quantum::{ci_oracle_query, oi_oracle_query, OracleDiagnostics};
use oilab_core::seed::derived_rng;
use oilab_core::solver::{decide_sd, decide_sisd, derive_threshold};
use oilab_core::{
    BoolCircuit, Caps, Decision, Error, GapCvpInstance, LweInstance, LweParams, OiQuery,
    SdInstance, SisdInstance, SolverConfig, StateVector, Verdict,
};
use serde::Serialize;

use crate::cli::*;
use crate::query::QueryFile;
use crate::report::{emit, envelope, file_digest, read_json, to_json, write_atomic};

/// What the process exit code reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Yes,
    No,
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let common = cli.common;
    let caps = match common.cap_bits {
        Some(bits) => Caps::default().with_enumeration_bits(bits),
        None => Caps::default(),
    };
    let ctx = Ctx { common, caps };
    match cli.command {
        Command::Circuit(CircuitCmd::Stats { circuit }) => ctx.circuit_stats(&circuit),
        Command::Reduce(ReduceCmd::SdToSisd { instance }) => ctx.reduce(&instance),
        Command::Polarize {
            instance,
            polarize_k,
        } => ctx.polarize(&instance, polarize_k),
        Command::Decide(DecideCmd::Sd {
            instance,
            solver,
            polarize_k,
        }) => ctx.decide_sd(&instance, &solver, polarize_k),
        Command::Decide(DecideCmd::Sisd { instance, solver }) => {
            ctx.decide_sisd(&instance, &solver)
        }
        Command::Oracle {
            kind,
            query,
            lambda,
        } => ctx.oracle(kind, &query, lambda),
        Command::Lwe(LweCmd::Gen { shape, origin }) => ctx.lwe_gen(&shape, origin),
        Command::Lwe(LweCmd::ToGapcvp { instance, gamma }) => ctx.to_gapcvp(&instance, gamma),
        Command::Lwe(LweCmd::Dist { instance }) => ctx.dist(&instance),
        Command::Lwe(LweCmd::Experiment {
            shape,
            trials,
            separation,
        }) => ctx.experiment(&shape, trials, separation),
    }
}

struct Ctx {
    common: Common,
    caps: Caps,
}

#[derive(Serialize)]
struct InputConfig<'a, T: Serialize> {
    input: String,
    input_sha256: String,
    caps: &'a Caps,
    #[serde(flatten)]
    extra: T,
}

#[derive(Serialize)]
struct Artifact<E: Serialize> {
    artifact: String,
    sha256: String,
    #[serde(flatten)]
    extra: E,
}

impl Ctx {
    fn out(&self) -> Option<&Path> {
        self.common.out.as_deref()
    }

    fn input_config<T: Serialize>(&self, path: &Path, extra: T) -> Result<InputConfig<'_, T>> {
        Ok(InputConfig {
            input: path.display().to_string(),
            input_sha256: file_digest(path)?,
            caps: &self.caps,
            extra,
        })
    }

    fn report<C: Serialize, R: Serialize>(
        &self,
        command: &str,
        config: &C,
        result: R,
    ) -> Result<()> {
        emit(
            self.out(),
            &to_json(&envelope(command, self.common.seed, config, result)?)?,
        )
    }

    /// Artifacts keep their plain file format. With `--out` they go to the
    /// file and an enveloped receipt goes to stdout.
    fn artifact<C: Serialize, T: Serialize>(
        &self,
        command: &str,
        config: &C,
        artifact: &T,
    ) -> Result<()> {
        self.artifact_with(command, config, artifact, ())
    }

    fn artifact_with<C: Serialize, T: Serialize, E: Serialize>(
        &self,
        command: &str,
        config: &C,
        artifact: &T,
        extra: E,
    ) -> Result<()> {
        let text = to_json(artifact)?;
        match self.out() {
            None => emit(None, &text),
            Some(path) => {
                write_atomic(path, text.as_bytes())?;
                let receipt = Artifact {
                    artifact: path.display().to_string(),
                    sha256: oilab_core::seed::fingerprint(text.as_bytes()),
                    extra,
                };
                emit(
                    None,
                    &to_json(&envelope(command, self.common.seed, config, receipt)?)?,
                )
            }
        }
    }

    fn circuit_stats(&self, path: &Path) -> Result<Outcome> {
        #[derive(Serialize)]
        struct Stats {
            k_in: usize,
            k_out: usize,
            gates: usize,
            wires: usize,
            gate_kinds: BTreeMap<String, usize>,
            support: usize,
            distribution: BTreeMap<String, String>,
        }
        let c: BoolCircuit = read_json(path, "circuit")?;
        let d = enumerate_distribution(&c, &self.caps)?;
        let mut gate_kinds = BTreeMap::new();
        for g in c.gates() {
            *gate_kinds
                .entry(format!("{:?}", g.kind).to_uppercase())
                .or_insert(0) += 1;
        }
        let stats = Stats {
            k_in: c.k_in(),
            k_out: c.k_out(),
            gates: c.size(),
            wires: c.wire_count(),
            gate_kinds,
            support: d.support_len(),
            distribution: d.to_json_map(),
        };
        self.report("circuit stats", &self.input_config(path, ())?, stats)?;
        Ok(Outcome::Yes)
    }

    fn reduce(&self, path: &Path) -> Result<Outcome> {
        let inst: SdInstance = read_json(path, "SD instance")?;
        let sisd = reduce_sd_to_sisd(&inst)?;
        self.artifact("reduce sd-to-sisd", &self.input_config(path, ())?, &sisd)?;
        Ok(Outcome::Yes)
    }

    fn polarize(&self, path: &Path, k: Option<u32>) -> Result<Outcome> {
        #[derive(Serialize)]
        struct Config {
            polarize_k: u32,
        }
        #[derive(Serialize)]
        struct Receipt {
            plan: PolarizationPlan,
        }
        let inst: SdInstance = read_json(path, "SD instance")?;
        let k = k.unwrap_or_else(default_polarization_k);
        let pol = polarize(&inst, k, &self.caps)?;
        let config = self.input_config(path, Config { polarize_k: k })?;
        self.artifact_with(
            "polarize",
            &config,
            &pol.instance,
            Receipt { plan: pol.plan },
        )?;
        Ok(Outcome::Yes)
    }

    fn solver_config(&self, s: &SolverArgs) -> SolverConfig {
        SolverConfig {
            lambda: s.lambda,
            retry_budget: s.retry_budget,
            swap_shots: s.shots,
            trial_count: s.trials,
            threshold: None,
            seed: self.common.seed,
            caps: self.caps,
        }
    }

    fn decision(
        &self,
        command: &str,
        path: &Path,
        cfg: &SolverConfig,
        polarize_k: Option<u32>,
        d: Decision,
    ) -> Result<Outcome> {
        #[derive(Serialize)]
        struct Config<'a> {
            solver: &'a SolverConfig,
            polarize_k: Option<u32>,
        }
        let verdict = d.verdict;
        self.report(
            command,
            &self.input_config(
                path,
                Config {
                    solver: cfg,
                    polarize_k,
                },
            )?,
            d,
        )?;
        Ok(match verdict {
            Verdict::Yes => Outcome::Yes,
            Verdict::No => Outcome::No,
        })
    }

    fn decide_sd(&self, path: &Path, s: &SolverArgs, polarize_k: Option<u32>) -> Result<Outcome> {
        let inst: SdInstance = read_json(path, "SD instance")?;
        if polarize_k.is_none() {
            if let Err(Error::GapViolation { gap }) = derive_threshold(inst.a(), inst.b()) {
                bail!(
                    "promise (a, b) = ({}, {}) fails the gap condition b² - 2a + a² > 0 (gap = {}); \
                     rerun with --polarize-k K to amplify to (2^-K, 1 - 2^-K) first",
                    format_rational(inst.a()),
                    format_rational(inst.b()),
                    format_rational(&gap)
                );
            }
        }
        let cfg = self.solver_config(s);
        let d = decide_sd(&inst, &cfg, polarize_k)?;
        self.decision("decide sd", path, &cfg, polarize_k, d)
    }

    fn decide_sisd(&self, path: &Path, s: &SolverArgs) -> Result<Outcome> {
        let inst: SisdInstance = read_json(path, "SISD instance")?;
        let cfg = self.solver_config(s);
        let d = decide_sisd(&inst, &cfg)?;
        self.decision("decide sisd", path, &cfg, None, d)
    }

    fn oracle(&self, kind: OracleKind, path: &Path, lambda: Option<u64>) -> Result<Outcome> {
        #[derive(Serialize)]
        struct Config {
            kind: &'static str,
            lambda: u64,
        }
        #[derive(Serialize)]
        struct Answer {
            success: bool,
            diagnostics: OracleDiagnostics,
            state: Option<StateVector>,
        }
        let file: QueryFile = read_json(path, "oracle query")?;
        let lambda = lambda.or(file.lambda).ok_or_else(|| {
            anyhow!("no λ given: set \"lambda\" in the query file or pass --lambda")
        })?;
        let unitaries = file
            .unitaries
            .iter()
            .enumerate()
            .map(|(i, u)| u.build(i))
            .collect::<Result<Vec<_>>>()?;
        let mut rng = derived_rng(self.common.seed, "oracle", 0);
        let (name, outcome) = match kind {
            OracleKind::Oi => {
                let q = OiQuery::new(unitaries, file.psi, lambda)?;
                ("oi", oi_oracle_query(&q, &self.caps, &mut rng)?)
            }
            OracleKind::Ci => (
                "ci",
                ci_oracle_query(&unitaries, &file.psi, lambda, &mut rng)?,
            ),
        };
        let success = outcome.success;
        let config = self.input_config(path, Config { kind: name, lambda })?;
        let answer = Answer {
            success,
            diagnostics: outcome.diagnostics,
            state: outcome.state,
        };
        self.report(&format!("oracle {name}"), &config, answer)?;
        Ok(if success { Outcome::Yes } else { Outcome::No })
    }

    fn lwe_gen(&self, shape: &LweShape, origin: OriginArg) -> Result<Outcome> {
        #[derive(Serialize)]
        struct Config {
            params: LweParams,
            origin: &'static str,
        }
        let p = params(shape)?;
        let mut rng = derived_rng(self.common.seed, "lwe-gen", 0);
        let (inst, name) = match origin {
            OriginArg::Lwe => (sample_lwe(&p, &mut rng)?, "lwe"),
            OriginArg::Uniform => (sample_uniform(&p, &mut rng)?, "uniform"),
        };
        self.artifact(
            "lwe gen",
            &Config {
                params: p,
                origin: name,
            },
            &inst,
        )?;
        Ok(Outcome::Yes)
    }

    fn to_gapcvp(&self, path: &Path, gamma: f64) -> Result<Outcome> {
        #[derive(Serialize)]
        struct Config {
            gamma: f64,
        }
        let inst: LweInstance = read_json(path, "LWE instance")?;
        let g = lwe_to_gapcvp(&inst, gamma)?;
        self.artifact(
            "lwe to-gapcvp",
            &self.input_config(path, Config { gamma })?,
            &g,
        )?;
        Ok(Outcome::Yes)
    }

    fn dist(&self, path: &Path) -> Result<Outcome> {
        #[derive(Serialize)]
        struct Measured {
            dist: f64,
            dist_sq: u64,
            d: f64,
            gamma: f64,
            verdict: RowVerdict,
        }
        let raw: serde_json::Value = read_json(path, "lattice instance")?;
        // GapCVP files carry d and gamma; plain LWE files get the default separation
        let g: GapCvpInstance = if raw.get("d").is_some() {
            serde_json::from_value(raw)
                .with_context(|| format!("parsing GapCVP file {}", path.display()))?
        } else {
            let inst: LweInstance = serde_json::from_value(raw)
                .with_context(|| format!("parsing LWE file {}", path.display()))?;
            lwe_to_gapcvp(&inst, DEFAULT_SEPARATION)?
        };
        let sol = closest_vector(g.params().q, g.matrix(), g.target(), &self.caps)?;
        let verdict = if sol.dist <= g.d() {
            RowVerdict::Yes
        } else if sol.dist > g.gamma() * g.d() {
            RowVerdict::No
        } else {
            RowVerdict::Gap
        };
        let m = Measured {
            dist: sol.dist,
            dist_sq: sol.dist_sq,
            d: g.d(),
            gamma: g.gamma(),
            verdict,
        };
        self.report("lwe dist", &self.input_config(path, ())?, m)?;
        Ok(if verdict == RowVerdict::Yes {
            Outcome::Yes
        } else {
            Outcome::No
        })
    }

    fn experiment(&self, shape: &LweShape, trials: u32, separation: f64) -> Result<Outcome> {
        #[derive(Serialize)]
        struct Config<'a> {
            params: LweParams,
            trials: u32,
            separation: f64,
            caps: &'a Caps,
        }
        #[derive(Serialize)]
        struct Summary<'a> {
            #[serde(flatten)]
            report: &'a oilab_core::lattice::GapReport,
            rows_csv: Option<String>,
        }
        let p = params(shape)?;
        let report = gap_experiment(&p, separation, trials, self.common.seed, &self.caps)?;
        let config = Config {
            params: p,
            trials,
            separation,
            caps: &self.caps,
        };
        match self.out() {
            None => {
                let summary = Summary {
                    report: &report,
                    rows_csv: None,
                };
                emit(
                    None,
                    &to_json(&envelope(
                        "lwe experiment",
                        self.common.seed,
                        &config,
                        summary,
                    )?)?,
                )?;
            }
            Some(dir) => {
                let rows_path: PathBuf = dir.join("rows.csv");
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &report.rows {
                    w.serialize(row)?;
                }
                let csv_bytes = w.into_inner().map_err(|e| anyhow!("flushing CSV: {e}"))?;
                write_atomic(&rows_path, &csv_bytes)?;
                let summary = Summary {
                    report: &report,
                    rows_csv: Some(oilab_core::seed::fingerprint(&csv_bytes)),
                };
                let text = to_json(&envelope(
                    "lwe experiment",
                    self.common.seed,
                    &config,
                    summary,
                )?)?;
                write_atomic(&dir.join("summary.json"), text.as_bytes())?;
            }
        }
        Ok(Outcome::Yes)
    }
}

fn params(s: &LweShape) -> Result<LweParams> {
    Ok(LweParams::new(s.n, s.q, s.m, s.alpha)?)
}
