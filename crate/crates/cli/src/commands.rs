use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};

use aor_core::agent::{train_with, Model, TrainAbort};
use aor_core::belief::DirichletTable;
use aor_core::env::TrackDataset;
use aor_core::eval::{compare, evaluate, grid, transition_stats, AccuracyTable};
use aor_core::net::NetworkParams;

use crate::config::RunConfig;

const NETWORK_FILE: &str = "network.json";
const TABLE_FILE: &str = "dirichlet.json";
const LOG_FILE: &str = "train_log.jsonl";
const CONFIG_FILE: &str = "config.toml";

/// Writes through a temporary file in the target directory so a failed
/// write never leaves a partial file behind.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn prepare_out_dir(cfg: &RunConfig) -> Result<()> {
    fs::create_dir_all(&cfg.out)
        .with_context(|| format!("creating output directory {}", cfg.out.display()))?;
    write_atomic(&cfg.out.join(CONFIG_FILE), cfg.to_toml()?.as_bytes())
}

fn init_threads(cfg: &RunConfig) -> Result<()> {
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .context("configuring worker threads")?;
    }
    Ok(())
}

pub fn gen_data(cfg: &RunConfig) -> Result<()> {
    let dataset = aor_core::env::gen_synthetic(&cfg.data.synthetic, cfg.data.seed)?;
    write_atomic(&cfg.out, dataset.to_csv().as_bytes())?;
    eprintln!(
        "wrote {} records to {}",
        dataset.num_observations(),
        cfg.out.display()
    );
    Ok(())
}

pub fn train(cfg: &RunConfig) -> Result<()> {
    let (train_data, _) = cfg.splits()?;
    let spec = cfg.network_spec(&train_data);
    prepare_out_dir(cfg)?;

    let log_path = cfg.out.join(LOG_FILE);
    let mut log = BufWriter::new(
        fs::File::create(&log_path).with_context(|| format!("creating {}", log_path.display()))?,
    );
    let mut write_err = None;
    let result = train_with(&train_data, &spec, &cfg.train_config(), |record| {
        if write_err.is_none() {
            let line = serde_json::to_string(record).map_err(anyhow::Error::from);
            if let Err(e) = line.and_then(|l| writeln!(log, "{l}").map_err(Into::into)) {
                write_err = Some(e);
            }
        }
    });
    log.flush()?;
    if let Some(e) = write_err {
        return Err(e.context("writing training log"));
    }
    let out = match result {
        Ok(out) => out,
        Err(TrainAbort {
            iteration, source, ..
        }) => {
            bail!(
                "training aborted at iteration {iteration}: {source}; partial log in {}",
                log_path.display()
            )
        }
    };

    let network = cfg.out.join(NETWORK_FILE);
    let table = cfg.out.join(TABLE_FILE);
    write_atomic(&network, out.model.params.to_json()?.as_bytes())?;
    write_atomic(&table, out.model.table.to_json()?.as_bytes())?;
    let reloaded = load_model(&cfg.out)?;
    ensure!(
        reloaded == out.model,
        "checkpoint in {} does not read back",
        cfg.out.display()
    );
    eprintln!(
        "trained {} iterations; checkpoint in {}",
        out.log.len(),
        cfg.out.display()
    );
    Ok(())
}

fn load_model(dir: &Path) -> Result<Model> {
    let params = NetworkParams::load(dir.join(NETWORK_FILE))
        .with_context(|| format!("loading network checkpoint from {}", dir.display()))?;
    let table = DirichletTable::load(dir.join(TABLE_FILE))
        .with_context(|| format!("loading Dirichlet table from {}", dir.display()))?;
    Ok(Model { params, table })
}

/// Models and the run config each checkpoint directory was trained with.
fn load_checkpoints(cfg: &RunConfig) -> Result<Vec<(RunConfig, Model)>> {
    if cfg.eval.checkpoints.is_empty() {
        bail!("no checkpoint given (use --checkpoint DIR)");
    }
    cfg.eval
        .checkpoints
        .iter()
        .map(|dir| {
            let trained = RunConfig::load(&dir.join(CONFIG_FILE))?;
            Ok((trained, load_model(dir)?))
        })
        .collect()
}

fn checkpoint_variant(
    checkpoints: &[(RunConfig, Model)],
) -> Result<aor_core::agent::EpisodeConfig> {
    let first = checkpoints[0].0.train.episode();
    for (c, _) in checkpoints {
        let ep = c.train.episode();
        ensure!(
            ep.encoder == first.encoder && ep.mask_repeats == first.mask_repeats,
            "checkpoints mix encoders or masking settings"
        );
    }
    Ok(first)
}

fn write_table(out: &Path, table: &AccuracyTable) -> Result<()> {
    write_atomic(&out.join("accuracy.csv"), table.to_csv().as_bytes())?;
    write_atomic(
        &out.join("accuracy_per_seed.csv"),
        table.per_seed_csv().as_bytes(),
    )
}

pub fn eval(cfg: &RunConfig) -> Result<()> {
    init_threads(cfg)?;
    let (train_data, test_data) = cfg.splits()?;
    ensure!(!test_data.is_empty(), "test split is empty");
    prepare_out_dir(cfg)?;
    if cfg.eval.grid {
        let spec = cfg.network_spec(&train_data);
        let report = compare(
            &grid(),
            &train_data,
            &test_data,
            &spec,
            &cfg.train_config(),
            &cfg.eval.seeds,
        )?;
        write_table(&cfg.out, &report.table)?;
        write_atomic(&cfg.out.join("report.json"), report.to_json()?.as_bytes())?;
        print!("{}", report.table.to_csv());
        return Ok(());
    }

    let checkpoints = load_checkpoints(cfg)?;
    let episode = checkpoint_variant(&checkpoints)?;
    let models: Vec<(u64, &Model)> = checkpoints.iter().map(|(c, m)| (c.seed, m)).collect();
    let row = evaluate(&models, &test_data, episode, cfg.eval.policy)?;
    let table = AccuracyTable { rows: vec![row] };
    write_table(&cfg.out, &table)?;
    write_atomic(
        &cfg.out.join("report.json"),
        serde_json::to_string_pretty(&table)?.as_bytes(),
    )?;
    print!("{}", table.to_csv());
    Ok(())
}

pub fn export_policy(cfg: &RunConfig) -> Result<()> {
    init_threads(cfg)?;
    let (train_data, test_data) = cfg.splits()?;
    let checkpoints = load_checkpoints(cfg)?;
    let episode = checkpoint_variant(&checkpoints)?;
    prepare_out_dir(cfg)?;
    let models: Vec<(u64, &Model)> = checkpoints.iter().map(|(c, m)| (c.seed, m)).collect();
    let splits: [(&str, &TrackDataset); 2] = [("train", &train_data), ("test", &test_data)];
    for (name, data) in splits {
        if data.is_empty() {
            continue;
        }
        let stats = transition_stats(&models, data, episode, cfg.eval.policy)?;
        let base: PathBuf = cfg.out.join(format!("transitions_{name}"));
        write_atomic(&base.with_extension("csv"), stats.to_csv().as_bytes())?;
        write_atomic(
            &base.with_extension("dot"),
            stats.to_dot(&format!("transitions_{name}")).as_bytes(),
        )?;
        write_atomic(
            &base.with_extension("json"),
            serde_json::to_string_pretty(&stats)?.as_bytes(),
        )?;
        eprintln!(
            "{name}: {} episodes, max pair share {:.3}",
            stats.episodes,
            stats.max_pair_share()
        );
    }
    Ok(())
}
