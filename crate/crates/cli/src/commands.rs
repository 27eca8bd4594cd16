use std::fmt::Write as _;
use std::path::Path;

use ergo_core::config_model::{default_max_tries, sample_simple, simple_fraction};
use ergo_core::cut_spectral::{cheeger_report, cut_profile};
use ergo_core::degree_law::{
    calibrate_gamma, concentration_report, default_alpha, target_total, ConcentrationReport,
};
use ergo_core::ergm::{
    default_burn_in, default_thinning, equilibrate, replica_seed, run_chain, ChainConfig,
};
use ergo_core::families::{complete, cycle, path, star};
use ergo_core::report::{envelope, format_sig9, to_json};
use ergo_core::resilience::{disconnect_probability, er_sample, thresholds};
use ergo_core::rng::{mix64, seeded};
use ergo_core::{DegreeSequence, Error, Graph, SpectralReport};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{
    ConfigModelConfig, CutsConfig, DegreesConfig, GraphSource, ResilienceConfig, SampleConfig,
    SpectralConfig,
};
use crate::error::{CliError, CliResult};

/// Files produced by a command, written only after the command finishes.
#[derive(Debug, Default)]
pub struct Outputs(pub Vec<(String, String)>);

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, body: String) {
        self.0.push((name.into(), body));
    }

    pub fn write(&self, dir: &Path) -> CliResult<()> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for (name, body) in &self.0 {
            let p = dir.join(name);
            std::fs::write(&p, body).map_err(|e| CliError::io(&p, e))?;
        }
        Ok(())
    }
}

pub(crate) fn require(cond: bool, msg: impl Into<String>) -> CliResult<()> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Config(msg.into()))
    }
}

fn positive(x: f64, name: &str) -> CliResult<()> {
    require(x.is_finite() && x > 0.0, format!("{name} must be positive and finite, got {x}"))
}

pub(crate) fn render<C: Serialize, R: Serialize>(
    kind: &str,
    cfg: &C,
    seed: u64,
    target_total: Option<u64>,
    result: &R,
) -> CliResult<String> {
    Ok(to_json(&envelope(kind, cfg, seed, target_total, result)?)?)
}

fn edges_for(c: f64, n: usize) -> usize {
    (target_total(c, n) / 2) as usize
}

pub fn sample(cfg: &mut SampleConfig) -> CliResult<Outputs> {
    let edges = match (cfg.c, cfg.edges) {
        (Some(c), None) => {
            positive(c, "c")?;
            require(cfg.n >= 2, "n must be >= 2")?;
            edges_for(c, cfg.n)
        }
        (None, Some(e)) => e,
        _ => return Err(CliError::Config("give exactly one of `c` and `edges`".into())),
    };
    require(cfg.samples >= 1, "samples must be >= 1")?;
    require(cfg.replicas >= 1, "replicas must be >= 1")?;
    require(cfg.trace_stride >= 1, "trace_stride must be >= 1")?;
    let burn_in = cfg.burn_in.unwrap_or_else(|| default_burn_in(edges));
    let thinning = cfg.thinning.unwrap_or_else(|| default_thinning(edges));
    cfg.edges = Some(edges);
    cfg.burn_in = Some(burn_in);
    cfg.thinning = Some(thinning);
    let chain = |seed| ChainConfig {
        beta: cfg.beta,
        n: cfg.n,
        target_edges: edges,
        steps: burn_in + cfg.samples * thinning,
        burn_in,
        thinning,
        seed,
    };
    chain(0).validate()?;

    let mut out = Outputs::default();
    let mut replicas = Vec::new();
    for r in 0..cfg.replicas {
        let seed = replica_seed(cfg.seed, r);
        let run = run_chain(&chain(seed))?;
        let mut trace = String::from("step,energy\n");
        for (t, e) in run.energy_trace.iter().enumerate().step_by(cfg.trace_stride as usize) {
            writeln!(trace, "{t},{e}").unwrap();
        }
        let trace_name = format!("energy_r{r}.csv");
        out.add(trace_name.clone(), trace);
        let mut names = Vec::new();
        for (k, g) in run.snapshots.iter().enumerate() {
            let name = format!("snapshot_r{r}_{k:04}.edges");
            out.add(name.clone(), g.to_edge_list());
            names.push(name);
        }
        let tail = &run.energy_trace[burn_in as usize..];
        let mean_energy = tail.iter().map(|&e| e as f64).sum::<f64>() / tail.len() as f64;
        replicas.push(json!({
            "replica": r,
            "seed": seed,
            "acceptance_rate": run.acceptance_rate,
            "initial_energy": run.energy_trace[0],
            "final_energy": *run.energy_trace.last().unwrap(),
            "mean_energy_after_burn_in": mean_energy,
            "snapshot_energies": run.snapshots.iter().map(|g| g.energy()).collect::<Vec<_>>(),
            "snapshots": names,
            "energy_trace": trace_name,
        }));
    }
    let result = json!({ "edges": edges, "replicas": replicas });
    out.add("sample.json", render("sample", cfg, cfg.seed, Some(2 * edges as u64), &result)?);
    Ok(out)
}

pub fn degrees(cfg: &mut DegreesConfig) -> CliResult<Outputs> {
    require(cfg.n >= 3, "n must be >= 3")?;
    positive(cfg.c, "c")?;
    positive(cfg.beta, "beta")?;
    require(cfg.samples >= 1, "samples must be >= 1")?;
    require(
        cfg.source == "law" || cfg.source == "ergm",
        format!("source must be `law` or `ergm`, got {:?}", cfg.source),
    )?;
    let alpha1 = cfg.alpha1.unwrap_or_else(|| default_alpha(cfg.beta));
    let alpha2 = cfg.alpha2.unwrap_or_else(|| default_alpha(cfg.beta));
    positive(alpha1, "alpha1")?;
    positive(alpha2, "alpha2")?;
    cfg.alpha1 = Some(alpha1);
    cfg.alpha2 = Some(alpha2);
    let target = target_total(cfg.c, cfg.n);
    let edges = (target / 2) as usize;
    if cfg.source == "ergm" {
        let burn_in = cfg.burn_in.unwrap_or_else(|| default_burn_in(edges));
        cfg.burn_in = Some(burn_in);
        let check = ChainConfig {
            beta: cfg.beta,
            n: cfg.n,
            target_edges: edges,
            steps: burn_in,
            burn_in,
            thinning: 1,
            seed: 0,
        };
        check.validate()?;
    }

    let law = calibrate_gamma(cfg.beta, cfg.c, cfg.n)?;
    let moments = law.moments()?;
    let sampler = law.sampler();
    let mut hist = vec![0u64; law.window + 1];
    let mut samples = Vec::new();
    let mut csv = String::from("sample,mean,variance,max_pos_dev,max_neg_dev,in_a,in_a1,in_a2\n");
    for i in 0..cfg.samples {
        let seed = mix64(cfg.seed, i);
        let (d, method, attempts) = if cfg.source == "law" {
            let cd = sampler.sample_conditioned(target, &mut seeded(seed))?;
            (cd.degrees, Some(cd.method), Some(cd.attempts))
        } else {
            let g = equilibrate(cfg.beta, cfg.n, edges, cfg.burn_in.unwrap(), seed)?;
            (g.degree_stats(), None, None)
        };
        for &k in &d.degrees {
            if k >= hist.len() {
                hist.resize(k + 1, 0);
            }
            hist[k] += 1;
        }
        let conc: ConcentrationReport = concentration_report(&d, cfg.c, alpha1, alpha2);
        writeln!(
            csv,
            "{i},{},{},{},{},{},{},{}",
            format_sig9(conc.mean),
            format_sig9(conc.variance),
            format_sig9(conc.max_pos_dev),
            format_sig9(conc.max_neg_dev),
            conc.in_a,
            conc.in_a1,
            conc.in_a2
        )
        .unwrap();
        samples.push(json!({
            "sample": i,
            "seed": seed,
            "method": method,
            "attempts": attempts,
            "d_min": d.d_min,
            "d_max": d.d_max,
            "concentration": conc,
        }));
    }
    let total: u64 = hist.iter().sum();
    let mut hist_csv = String::from("degree,pmf,empirical\n");
    for (j, &count) in hist.iter().enumerate() {
        let pmf = if j <= law.window { law.pmf(j) } else { 0.0 };
        writeln!(hist_csv, "{j},{},{}", format_sig9(pmf), format_sig9(count as f64 / total as f64))
            .unwrap();
    }
    let result = json!({
        "law": law,
        "moments": moments,
        "target_mean": cfg.c * (cfg.n as f64).ln(),
        "samples": samples,
    });
    let mut out = Outputs::default();
    out.add("degrees.json", render("degrees", cfg, cfg.seed, Some(target), &result)?);
    out.add("degrees.csv", csv);
    out.add("degree_hist.csv", hist_csv);
    Ok(out)
}

pub fn configmodel(cfg: &mut ConfigModelConfig) -> CliResult<Outputs> {
    require(cfg.trials >= 1, "trials must be >= 1")?;
    let d = match (&cfg.degrees, cfg.n, cfg.k, cfg.c, cfg.beta) {
        (Some(d), None, None, None, None) => {
            require(!d.is_empty(), "degrees must be non-empty")?;
            DegreeSequence::new(d.clone())
        }
        (None, Some(n), Some(k), None, None) => {
            require(n >= 1, "n must be >= 1")?;
            DegreeSequence::new(vec![k; n])
        }
        (None, Some(n), None, Some(c), Some(beta)) => {
            require(n >= 3, "n must be >= 3")?;
            positive(c, "c")?;
            positive(beta, "beta")?;
            let law = calibrate_gamma(beta, c, n)?;
            let cd = law.sampler().sample_conditioned(target_total(c, n), &mut seeded(mix64(cfg.seed, 1)))?;
            cd.degrees
        }
        _ => {
            return Err(CliError::Config(
                "give `degrees`, or `n` with `k`, or `n` with `c` and `beta`".into(),
            ))
        }
    };
    require(d.total % 2 == 0, format!("degree sum {} is odd", d.total))?;

    let stats = simple_fraction(&d, cfg.trials, &mut seeded(mix64(cfg.seed, 0)))?;
    let mut out = Outputs::default();
    let realization =
        match sample_simple(&d, &mut seeded(mix64(cfg.seed, 2)), Some(default_max_tries(&d))) {
            Ok(g) => {
                out.add("configmodel_sample.edges", g.to_edge_list());
                Some("configmodel_sample.edges")
            }
            Err(Error::Rejection { .. }) => None,
            Err(e) => return Err(e.into()),
        };
    let result = json!({
        "degrees": d,
        "stats": stats,
        "realization": realization,
    });
    out.add("configmodel.json", render("configmodel", cfg, cfg.seed, Some(d.total), &result)?);
    Ok(out)
}

/// Builds the graph named by a config and a short description of where it
/// came from.
fn load_graph(src: &GraphSource, c: Option<f64>, seed: u64) -> CliResult<(Graph, Value)> {
    let erg = src.n.is_some() || src.beta.is_some();
    let chosen = src.graph.is_some() as u8 + src.family.is_some() as u8 + erg as u8;
    require(chosen == 1, "give exactly one of `graph`, `family`, or `n` with `beta`")?;
    if let Some(path) = &src.graph {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read graph {path}: {e}")))?;
        let g = Graph::parse_edge_list(&text)
            .map_err(|e| CliError::Config(format!("{path}: {e}")))?;
        return Ok((g, json!({ "graph": path })));
    }
    if let Some(family) = &src.family {
        let size = src.size.ok_or_else(|| CliError::Config("`family` needs `size`".into()))?;
        let g = match family.as_str() {
            "complete" => complete(size),
            "cycle" => {
                require(size >= 3, "cycle needs size >= 3")?;
                cycle(size)
            }
            "path" => path(size),
            "star" => star(size),
            other => return Err(CliError::Config(format!("unknown family {other:?}"))),
        };
        return Ok((g, json!({ "family": family, "size": size })));
    }
    let (n, beta) = match (src.n, src.beta) {
        (Some(n), Some(beta)) => (n, beta),
        _ => return Err(CliError::Config("an ERG graph needs both `n` and `beta`".into())),
    };
    let c = c.ok_or_else(|| CliError::Config("an ERG graph needs `c`".into()))?;
    positive(c, "c")?;
    require(n >= 2, "n must be >= 2")?;
    let edges = edges_for(c, n);
    let burn_in = src.burn_in.unwrap_or_else(|| default_burn_in(edges));
    ChainConfig { beta, n, target_edges: edges, steps: burn_in, burn_in, thinning: 1, seed }
        .validate()?;
    let g = equilibrate(beta, n, edges, burn_in, seed)?;
    Ok((g, json!({ "erg": { "n": n, "beta": beta, "edges": edges, "burn_in": burn_in } })))
}

pub fn cuts(cfg: &mut CutsConfig) -> CliResult<Outputs> {
    positive(cfg.c, "c")?;
    require(cfg.trials >= 1, "trials must be >= 1")?;
    let (g, source) = load_graph(&cfg.source(), Some(cfg.c), mix64(cfg.seed, 0))?;
    require(g.n() >= 4, format!("cut profile needs n >= 4, got {}", g.n()))?;
    let profile = cut_profile(&g, cfg.c, cfg.trials, &mut seeded(mix64(cfg.seed, 1)))?;
    let result = json!({ "source": source, "edges": g.edge_count(), "profile": profile });
    let mut out = Outputs::default();
    out.add("cuts.json", render("cuts", cfg, cfg.seed, Some(2 * g.edge_count() as u64), &result)?);
    out.add("cuts.csv", profile.to_csv());
    Ok(out)
}

pub fn spectral(cfg: &mut SpectralConfig) -> CliResult<Outputs> {
    let (g, source) = load_graph(&cfg.source(), cfg.c, mix64(cfg.seed, 0))?;
    let report: SpectralReport = cheeger_report(&g)?;
    let result = json!({ "source": source, "report": report });
    let mut out = Outputs::default();
    out.add(
        "spectral.json",
        render("spectral", cfg, cfg.seed, Some(2 * g.edge_count() as u64), &result)?,
    );
    Ok(out)
}

pub fn resilience(cfg: &mut ResilienceConfig) -> CliResult<Outputs> {
    require(cfg.n >= 4, "n must be >= 4")?;
    positive(cfg.c, "c")?;
    require(cfg.beta.is_finite() && cfg.beta >= 0.0, "beta must be finite and >= 0")?;
    require(cfg.trials >= 1, "trials must be >= 1")?;
    require(cfg.cut_trials >= 1, "cut_trials must be >= 1")?;
    for &p in &cfg.p_grid {
        require((0.0..=1.0).contains(&p), format!("p_grid entry {p} outside [0, 1]"))?;
    }
    if let Some(d) = cfg.delta_tilde {
        require((0.0..1.0).contains(&d), format!("delta_tilde {d} outside [0, 1)"))?;
    }
    let edges = edges_for(cfg.c, cfg.n);
    let burn_in = cfg.burn_in.unwrap_or_else(|| default_burn_in(edges));
    cfg.burn_in = Some(burn_in);
    ChainConfig { beta: cfg.beta, n: cfg.n, target_edges: edges, steps: burn_in, burn_in, thinning: 1, seed: 0 }
        .validate()?;

    let g = equilibrate(cfg.beta, cfg.n, edges, burn_in, mix64(cfg.seed, 0))?;
    let (delta, delta_source) = match cfg.delta_tilde {
        Some(d) => (d, "config"),
        None => {
            let profile = cut_profile(&g, cfg.c, cfg.cut_trials, &mut seeded(mix64(cfg.seed, 4)))?;
            (profile.empirical_delta.max(0.0), "cut_profile")
        }
    };
    if delta >= 1.0 {
        return Err(CliError::Runtime(format!(
            "sampled graph has an empty cut (delta_tilde = {delta}); no threshold is defined"
        )));
    }
    let thr = thresholds(cfg.c, delta)?;
    let erg = disconnect_probability(&g, &cfg.p_grid, cfg.trials, &mut seeded(mix64(cfg.seed, 2)), cfg.coupled)?
        .with_thresholds(thr);
    let mut out = Outputs::default();
    out.add("resilience.csv", erg.to_csv());
    let er = if cfg.baseline {
        let h = er_sample(cfg.n, edges, &mut seeded(mix64(cfg.seed, 1)))?;
        let r = disconnect_probability(&h, &cfg.p_grid, cfg.trials, &mut seeded(mix64(cfg.seed, 3)), cfg.coupled)?
            .with_thresholds(thr);
        out.add("resilience_er.csv", r.to_csv());
        Some(r)
    } else {
        None
    };
    let result = json!({
        "edges": edges,
        "delta_tilde": delta,
        "delta_source": delta_source,
        "thresholds": thr,
        "erg": erg,
        "baseline_model": "G(n,m) with the same edge count",
        "er": er,
    });
    out.add(
        "resilience.json",
        render("resilience", cfg, cfg.seed, Some(2 * edges as u64), &result)?,
    );
    Ok(out)
}
