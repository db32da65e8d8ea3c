//! `toolswitch gen`: write a benchmark family to disk.
//!
//! Preset family names (A1..D4) carry their own shape; any flag overrides
//! the preset, and a custom family name just needs `--jobs`, `--tools`, and
//! `--capacity`. Next to the instance files the command drops a
//! `manifest.txt` recording every parameter including the seed, so a
//! directory can always be regenerated byte for byte.

use crate::common::CliError;
use std::path::PathBuf;
use toolswitch::io::{generate_instances, serialize_instance, DatasetSpec, InstanceFormat};

#[derive(clap::Args)]
pub struct Args {
    /// Family name: a preset (A1..D4) or any label for a custom shape.
    #[arg(long)]
    pub family: String,
    /// Jobs per instance (required unless the family is a preset).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Tools in the universe (required unless the family is a preset).
    #[arg(long)]
    pub tools: Option<usize>,
    /// Magazine capacity (required unless the family is a preset).
    #[arg(long)]
    pub capacity: Option<usize>,
    /// Instances to write (default 10).
    #[arg(long)]
    pub instances: Option<usize>,
    /// Smallest tool set a job may need; default max(1, capacity/2).
    #[arg(long)]
    pub job_size_min: Option<usize>,
    /// Largest tool set a job may need; default the capacity.
    #[arg(long)]
    pub job_size_max: Option<usize>,
    /// Directory to write into (created if missing).
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// File format for the instances.
    #[arg(long, default_value = "native")]
    pub format: InstanceFormat,
}

pub fn run(args: Args, seed: u64) -> Result<(), CliError> {
    let spec = resolve_spec(&args, seed)?;
    let instances = generate_instances(&spec).map_err(CliError::usage)?;

    std::fs::create_dir_all(&args.out)
        .map_err(|err| CliError::Usage(format!("{}: {err}", args.out.display())))?;
    let mut names = Vec::with_capacity(instances.len());
    for (index, inst) in instances.iter().enumerate() {
        let name = format!("{}_{}.txt", spec.family, index + 1);
        let path = args.out.join(&name);
        std::fs::write(&path, serialize_instance(inst, args.format))
            .map_err(|err| CliError::Usage(format!("{}: {err}", path.display())))?;
        names.push(name);
    }

    let mut manifest = String::new();
    manifest.push_str(&format!("family={}\n", spec.family));
    manifest.push_str(&format!("jobs={}\n", spec.num_jobs));
    manifest.push_str(&format!("tools={}\n", spec.num_tools));
    manifest.push_str(&format!("capacity={}\n", spec.capacity));
    manifest.push_str(&format!("instances={}\n", spec.instances));
    manifest.push_str(&format!("job_size_min={}\n", spec.job_size_min));
    manifest.push_str(&format!("job_size_max={}\n", spec.job_size_max));
    manifest.push_str(&format!("seed={seed}\n"));
    manifest.push_str(&format!("format={}\n", args.format));
    manifest.push_str("files:\n");
    for name in &names {
        manifest.push_str(&format!("  {name}\n"));
    }
    let manifest_path = args.out.join("manifest.txt");
    std::fs::write(&manifest_path, manifest)
        .map_err(|err| CliError::Usage(format!("{}: {err}", manifest_path.display())))?;

    println!(
        "wrote {} instances to {}",
        instances.len(),
        args.out.display()
    );
    Ok(())
}

fn resolve_spec(args: &Args, seed: u64) -> Result<DatasetSpec, CliError> {
    let preset = DatasetSpec::preset(&args.family, seed);
    let required = |flag: Option<usize>, preset_value: Option<usize>, name: &str| {
        flag.or(preset_value).ok_or_else(|| {
            CliError::Usage(format!(
                "--{name} is required when the family is not a preset (presets: A1..D4)"
            ))
        })
    };
    let jobs = required(args.jobs, preset.as_ref().map(|s| s.num_jobs), "jobs")?;
    let tools = required(args.tools, preset.as_ref().map(|s| s.num_tools), "tools")?;
    let capacity = required(
        args.capacity,
        preset.as_ref().map(|s| s.capacity),
        "capacity",
    )?;
    let instances = args
        .instances
        .or(preset.as_ref().map(|s| s.instances))
        .unwrap_or(10);

    // Rebuilding from the resolved numbers lets the default job-size bounds
    // track a capacity override instead of the preset's capacity.
    let spec = DatasetSpec::new(&args.family, jobs, tools, capacity, instances, seed);
    let min = args.job_size_min.unwrap_or(spec.job_size_min);
    let max = args.job_size_max.unwrap_or(spec.job_size_max);
    Ok(spec.with_job_sizes(min, max))
}
