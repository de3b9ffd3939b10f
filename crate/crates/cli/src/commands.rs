use std::fs::File;
use std::io::Write;
use std::sync::Arc;

use serde_json::{json, Value};

use netspace_core::dirichlet::{characterization_constant, encode_members, Frontend, KernelNorms};
use netspace_core::harness::{
    embedding_trend, exponent_json, net_corpus, su2_converse_trend, su2_corpus, torus_corpus, verify_char_forward_su2,
    verify_char_forward_torus, verify_comparison_torus, verify_embedding, verify_hl_torus, verify_kfunc_upper,
    verify_ned_torus, verify_su2_converse, CorpusSpec, FamilySpec, Status, VerificationReport, SCHEMA,
};
use netspace_core::lattice::{check_assumption3, weyl_count_check, LambdaRule, Side};
use netspace_core::netnorm::{averaging_table, net_norm};
use netspace_core::{Caps, CoefficientNet, Lattice, LatticeKind, NormParams, Spin, SubsetFamily};

use crate::args::*;
use crate::error::CliError;

type Res<T> = Result<T, CliError>;

pub fn spin(l: f64) -> Res<Spin> {
    let twice = 2.0 * l;
    if twice.is_nan() || twice < 0.0 || (twice - twice.round()).abs() > 1e-9 || twice > f64::from(u32::MAX) {
        return Err(CliError::usage(format!("spin must be a non-negative multiple of 1/2, got {l}")));
    }
    Ok(Spin::from_twice(twice.round() as u32))
}

fn spin_list(text: &str) -> Res<Vec<Spin>> {
    text.split(',')
        .map(|s| s.trim().parse::<Spin>().map_err(CliError::from))
        .collect()
}

fn build_lattice(a: &LatticeArgs) -> Res<Arc<Lattice>> {
    if let Some(path) = &a.lattice {
        return Ok(Arc::new(Lattice::from_json_file(path)?));
    }
    Ok(Arc::new(match a.kind {
        LatticeChoice::Z => Lattice::integer(a.dim, a.radius, a.lambda_rule.parse::<LambdaRule>()?)?,
        LatticeChoice::Su2 => Lattice::su2_dual(spin(a.lmax)?),
    }))
}

fn build_family(a: &FamilyArgs, lattice: Arc<Lattice>) -> Res<SubsetFamily> {
    let fam = a.family.parse::<FamilySpec>()?.build(lattice)?;
    if a.max_cardinality.is_some() || a.max_count.is_some() {
        return Ok(fam.with_caps(Caps { max_cardinality: a.max_cardinality, max_count: a.max_count }));
    }
    Ok(fam)
}

fn load_net(a: &NetSource, lattice: &Arc<Lattice>) -> Res<CoefficientNet> {
    if let Some(path) = &a.net {
        return Ok(CoefficientNet::from_json_file(lattice.clone(), path)?);
    }
    let spec = CorpusSpec::Random { size: 1, seed: a.seed, decay: Some(0.0) };
    Ok(net_corpus(&spec, lattice)?.remove(0).value)
}

fn write_json(out: &OutputArgs, text: &str) -> Res<()> {
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn envelope(command: &str, config: &Value, result: Value) -> Res<String> {
    let v = json!({ "schema": SCHEMA, "command": command, "config": config, "result": result });
    Ok(serde_json::to_string_pretty(&v).map_err(netspace_core::NetspaceError::from)? + "\n")
}

fn csv_file(out: &OutputArgs) -> Res<Option<File>> {
    Ok(match &out.csv {
        Some(p) => Some(File::create(p)?),
        None => None,
    })
}

/// Runs one subcommand and returns the exit code.
pub fn execute(command: &Command, config: &Value) -> Res<u8> {
    match command {
        Command::Netnorm(a) => netnorm(a, config),
        Command::AveragingTable(a) => averaging(a, config),
        Command::Dirichlet(a) => dirichlet(a, config),
        Command::Characterize(a) => characterize(a, config),
        Command::Verify(a) => verify(a, config),
        Command::ValidateLattice(a) => validate(a, config),
    }
}

fn netnorm(a: &NetnormArgs, config: &Value) -> Res<u8> {
    let lattice = build_lattice(&a.lattice)?;
    let family = build_family(&a.family, lattice.clone())?;
    let net = load_net(&a.net, &lattice)?;
    let engine = a.engine.resolve(&family);
    let n = net_norm(&net, &NormParams::new(a.p, a.q, family.clone())?.with_engine(engine))?;
    let result = json!({
        "value": n.value,
        "p": n.p,
        "q": exponent_json(n.q),
        "lower_bound": n.lower_bound,
        "engine": engine.to_string(),
        "family": family.describe(),
        "lattice_size": lattice.len(),
        "sup_at": n.sup_at.map(|id| lattice.elements()[id].label.clone()),
        "averaging": n.table.levels,
    });
    write_json(&a.output, &envelope("netnorm", config, result)?)?;
    Ok(0)
}

fn averaging(a: &AveragingArgs, config: &Value) -> Res<u8> {
    let lattice = build_lattice(&a.lattice)?;
    let family = build_family(&a.family, lattice.clone())?;
    let net = load_net(&a.net, &lattice)?;
    let levels = match &a.levels {
        Some(text) => text
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::usage(format!("bad level {s:?}"))))
            .collect::<Res<Vec<_>>>()?,
        None => lattice.distinct_levels(),
    };
    let table = averaging_table(&net, &levels, &family, a.engine)?;
    if let Some(f) = csv_file(&a.output)? {
        let mut w = csv::Writer::from_writer(f);
        w.write_record(["level", "value", "witness", "witness_nu"]).map_err(netspace_core::NetspaceError::from)?;
        for lv in &table.levels {
            w.write_record([
                lv.level.to_string(),
                lv.value.to_string(),
                lv.witness.as_ref().map(|ids| encode_members(&lattice, ids)).unwrap_or_default(),
                lv.witness_nu.map(|x| x.to_string()).unwrap_or_default(),
            ])
            .map_err(netspace_core::NetspaceError::from)?;
        }
        w.flush()?;
    }
    let result = json!({
        "engine": table.engine.to_string(),
        "lower_bound": table.lower_bound,
        "family": family.describe(),
        "levels": table.levels,
    });
    write_json(&a.output, &envelope("averaging-table", config, result)?)?;
    Ok(0)
}

fn frontend_for(lattice: &Lattice, grid: usize, panels: Option<usize>) -> Res<Frontend> {
    Ok(match Frontend::for_lattice(lattice, grid)? {
        Frontend::Su2 { .. } => Frontend::Su2 { panels },
        f => f,
    })
}

fn dirichlet(a: &DirichletArgs, config: &Value) -> Res<u8> {
    let lattice = build_lattice(&a.lattice)?;
    let ids: Vec<usize> = match (&a.members, &a.ids) {
        (Some(labels), _) => labels
            .split(';')
            .map(|l| {
                lattice.id_of_label(l.trim()).ok_or_else(|| CliError::usage(format!("no element labelled {l:?}")))
            })
            .collect::<Res<_>>()?,
        (None, Some(ids)) => ids
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| CliError::usage(format!("bad id {s:?}"))))
            .collect::<Res<_>>()?,
        (None, None) => return Err(CliError::usage("give the kernel's elements with --members or --ids")),
    };
    let kernels = KernelNorms::new(lattice.clone(), frontend_for(&lattice, a.grid, a.panels)?)?;
    let v = kernels.norm(&ids, a.p_prime)?;
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    let result = json!({
        "value": v.value,
        "uncertainty": v.uncertainty,
        "p_prime": exponent_json(a.p_prime),
        "members": encode_members(&lattice, &sorted),
        "nu": lattice.nu(&sorted)?,
    });
    write_json(&a.output, &envelope("dirichlet", config, result)?)?;
    Ok(0)
}

fn characterize(a: &CharacterizeArgs, config: &Value) -> Res<u8> {
    let lattice = build_lattice(&a.lattice)?;
    let family = build_family(&a.family, lattice.clone())?;
    let c = characterization_constant(&family, a.p, frontend_for(&lattice, a.grid, a.panels)?)?;
    if let Some(f) = csv_file(&a.output)? {
        c.write_csv(f)?;
    }
    let mut result = serde_json::to_value(&c).map_err(netspace_core::NetspaceError::from)?;
    result["p"] = exponent_json(c.p);
    result["family"] = json!(family.describe());
    write_json(&a.output, &envelope("characterize", config, result)?)?;
    Ok(0)
}

fn validate(a: &ValidateArgs, config: &Value) -> Res<u8> {
    let lattice = build_lattice(&a.lattice)?;
    let side = match &a.side {
        Some(s) => s.parse::<Side>()?,
        None => Side::for_beta(a.beta)?,
    };
    let report = check_assumption3(&lattice, a.beta, side)?;
    let weyl = (lattice.kind() != LatticeKind::Generic).then(|| weyl_count_check(&lattice));
    let result = json!({
        "lattice_size": lattice.len(),
        "lambda_monotone": lattice.is_lambda_monotone(),
        "interior_spread": report.interior.spread(),
        "assumption3": report,
        "weyl": weyl,
    });
    write_json(&a.output, &envelope("validate-lattice", config, result)?)?;
    Ok(0)
}

fn finish(mut report: VerificationReport, a: &VerifyArgs, config: &Value) -> Res<u8> {
    report.config = config.clone();
    if let Some(f) = csv_file(&a.output)? {
        report.write_csv(f)?;
    }
    write_json(&a.output, &report.to_json()?)?;
    Ok(if report.status == Status::Fail { 1 } else { 0 })
}

fn verify(a: &VerifyArgs, config: &Value) -> Res<u8> {
    let spec: CorpusSpec = a.corpus.parse()?;
    let desc = spec.to_string();
    let trend = a.lmax_trend.as_deref().map(spin_list).transpose()?;
    let report = match a.inequality {
        Inequality::HlTorus => verify_hl_torus(&torus_corpus(&spec, a.dim, a.bandwidth)?, &desc, a.p, a.grid)?,
        Inequality::NedTorus => {
            let radius = a.radius.unwrap_or(2 * a.bandwidth);
            verify_ned_torus(&torus_corpus(&spec, a.dim, a.bandwidth)?, &desc, a.p, a.q, a.grid, radius)?
        }
        Inequality::Comparison => {
            verify_comparison_torus(&torus_corpus(&spec, a.dim, a.bandwidth)?, &desc, a.p, a.grid)?
        }
        Inequality::Su2Converse => match &trend {
            Some(sizes) => su2_converse_trend(|l| su2_corpus(&spec, l), &desc, a.p, sizes, a.threshold)?,
            None => {
                let l = spin(a.lmax)?;
                verify_su2_converse(&su2_corpus(&spec, l)?, &desc, a.p, l)?
            }
        },
        Inequality::Embedding => {
            let fam_spec: FamilySpec = a.family.as_deref().unwrap_or("segments").parse()?;
            match (&trend, &a.lattice) {
                (Some(sizes), None) => {
                    let sizes: Vec<f64> = sizes.iter().map(|s| s.as_f64()).collect();
                    embedding_trend(&sizes, &desc, a.p, a.q1, a.q2, a.engine, a.threshold, |l| {
                        let lattice = Arc::new(Lattice::su2_dual(Spin::from_twice((2.0 * l).round() as u32)));
                        Ok((fam_spec.build(lattice.clone())?, net_corpus(&spec, &lattice)?))
                    })?
                }
                (Some(_), Some(_)) => return Err(CliError::usage("--lmax-trend cannot be combined with --lattice")),
                (None, _) => {
                    let lattice = match &a.lattice {
                        Some(p) => Arc::new(Lattice::from_json_file(p)?),
                        None => Arc::new(Lattice::su2_dual(spin(a.lmax)?)),
                    };
                    let fam = fam_spec.build(lattice.clone())?;
                    verify_embedding(&net_corpus(&spec, &lattice)?, &desc, &fam, a.p, a.q1, a.q2, a.engine)?
                }
            }
        }
        Inequality::Kfunc => {
            let family: fn(Arc<Lattice>) -> SubsetFamily = match a.family.as_deref().unwrap_or("all-subsets") {
                "all-subsets" => SubsetFamily::all_subsets,
                "segments" => SubsetFamily::segments,
                other => {
                    return Err(CliError::usage(format!("kfunc supports all-subsets or segments, got {other:?}")))
                }
            };
            let lattice = a.lattice.as_ref().map(Lattice::from_json_file).transpose()?.map(Arc::new);
            let size = lattice.as_ref().map_or(a.lattice_size, |l| l.len());
            verify_kfunc_upper(lattice, size, a.p1, a.p2, a.trials, a.seed, family)?
        }
        Inequality::CharForward => {
            let fam_spec: FamilySpec = a.family.as_deref().unwrap_or("all-subsets").parse()?;
            match a.frontend {
                FrontendChoice::Su2 => {
                    let l = spin(a.lmax)?;
                    let fam = fam_spec.build(Arc::new(Lattice::su2_dual(l)))?;
                    verify_char_forward_su2(&su2_corpus(&spec, l)?, &desc, &fam, a.p, a.engine)?
                }
                FrontendChoice::Torus => {
                    let lattice = Arc::new(Lattice::integer(a.dim, a.bandwidth as u32, LambdaRule::Rank)?);
                    let fam = fam_spec.build(lattice)?;
                    let corpus = torus_corpus(&spec, a.dim, a.bandwidth)?;
                    verify_char_forward_torus(&corpus, &desc, &fam, a.p, a.grid, a.engine)?
                }
            }
        }
    };
    finish(report, a, config)
}
