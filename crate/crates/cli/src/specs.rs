//! Textual descriptions of groups, systems, representations and transfer
//! systems accepted on the command line.

use std::path::Path;
use std::sync::Arc;

use normcalc::group::{build_group, builtin, FiniteGroup, GroupContext, GroupInput};
use normcalc::gset::{parse_multiset, OrbitMultiset};
use normcalc::repsupport::{catalog, Dim, DimensionFunction};
use normcalc::transfer::TransferSystem;
use normcalc::windex::{saturate, Family, SystemJson, WeakIndexingSystem};
use normcalc::{Error, Result};

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))
}

fn is_file(spec: &str) -> bool {
    spec.ends_with(".json") && Path::new(spec).exists()
}

/// A builtin name or a JSON file in the group input format.
pub fn group(spec: &str) -> Result<FiniteGroup> {
    if is_file(spec) {
        let input: GroupInput = serde_json::from_str(&read(spec)?).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
        let g = build_group(&input.to_spec()?)?;
        return Ok(match input.name {
            Some(name) => g.with_name(name),
            None => g,
        });
    }
    builtin(spec)
}

pub fn class(ctx: &GroupContext, label: &str) -> Result<usize> {
    ctx.class_by_label(label.trim())
}

/// Comma-separated class labels, closed downward.
pub fn family(ctx: &GroupContext, spec: &str) -> Result<Family> {
    let spec = spec.trim();
    match spec {
        "" | "none" | "{}" => Ok(Family::none(ctx)),
        "all" => Ok(Family::all(ctx)),
        _ => {
            let classes = spec.split(',').map(|l| class(ctx, l)).collect::<Result<Vec<_>>>()?;
            Ok(Family::generated(ctx, &classes))
        }
    }
}

/// Sets separated by `;`.
pub fn sets(ctx: &GroupContext, spec: &str) -> Result<Vec<OrbitMultiset>> {
    spec.split(';').filter(|s| !s.trim().is_empty()).map(|s| parse_multiset(ctx, s)).collect()
}

pub const SYSTEM_NAMES: &str =
    "complete, triv, finf, comm-nu, e0:F, terminal:F, bor:F, gen:X;Y, rep:NAME, transfer:K<H,..., or a .json file";

/// A weak indexing system by name, generators, representation or file.
pub fn system(ctx: &Arc<GroupContext>, spec: &str, bound: usize) -> Result<WeakIndexingSystem> {
    let spec = spec.trim();
    if is_file(spec) {
        let json: SystemJson = serde_json::from_str(&read(spec)?).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
        return WeakIndexingSystem::from_json(ctx, &json);
    }
    let (head, arg) = match spec.split_once(':') {
        Some((h, a)) => (h.trim(), Some(a)),
        None => (spec, None),
    };
    match (head, arg) {
        ("complete" | "all", None) => Ok(WeakIndexingSystem::complete(ctx, bound)),
        ("triv" | "trivial", None) => Ok(WeakIndexingSystem::trivial(ctx, bound)),
        ("finf" | "F-inf", None) => Ok(WeakIndexingSystem::finf(ctx, bound)),
        ("comm-nu" | "nonunital", None) => Ok(WeakIndexingSystem::nonunital_complete(ctx, bound)),
        ("e0", Some(f)) => Ok(WeakIndexingSystem::e0(ctx, &family(ctx, f)?, bound)),
        ("terminal", Some(f)) => Ok(WeakIndexingSystem::terminal_with_unit_family(ctx, &family(ctx, f)?, bound)),
        ("bor", Some(f)) => Ok(WeakIndexingSystem::complete(ctx, bound).borelify(&family(ctx, f)?)),
        ("gen", Some(g)) => saturate(ctx, &sets(ctx, g)?, bound),
        ("rep", Some(r)) => rep(ctx, r)?.arity_support(bound),
        ("transfer", Some(t)) => Ok(transfer(ctx, t)?.to_indexing_system(bound)),
        _ => Err(Error::Parse(format!("unknown system {spec:?}; expected one of {SYSTEM_NAMES}"))),
    }
}

/// Builtin systems a result may coincide with.
pub fn recognize(w: &WeakIndexingSystem) -> Option<String> {
    let ctx = w.context();
    let b = w.bound();
    let named = [
        ("complete", WeakIndexingSystem::complete(ctx, b)),
        ("triv", WeakIndexingSystem::trivial(ctx, b)),
        ("finf", WeakIndexingSystem::finf(ctx, b)),
        ("comm-nu", WeakIndexingSystem::nonunital_complete(ctx, b)),
    ];
    named.into_iter().find(|(_, v)| v == w).map(|(n, _)| n.to_string())
}

/// A catalog name (`triv`, `rho`, `sign[2]`, `R[G/2]`, ...), `sigma` for the
/// first sign character, `table:K=d,...` for explicit fixed-point
/// dimensions, or a `⊕`-separated sum of these.
pub fn rep(ctx: &Arc<GroupContext>, spec: &str) -> Result<DimensionFunction> {
    let spec = spec.trim();
    if is_file(spec) {
        let json = serde_json::from_str(&read(spec)?).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
        return DimensionFunction::from_json(ctx, &json);
    }
    let cat = catalog(ctx);
    if let Some(r) = cat.iter().find(|r| r.name == spec) {
        return Ok(r.rep.clone());
    }
    if spec == "sigma" || spec == "sign" {
        return cat
            .iter()
            .find(|r| r.name.starts_with("sign[") && !r.name.contains('+'))
            .map(|r| r.rep.clone())
            .ok_or_else(|| Error::Parse(format!("{} has no sign character", ctx.name())));
    }
    if let Some(table) = spec.strip_prefix("table:") {
        let mut dims = vec![None; ctx.num_classes()];
        for entry in table.split(',') {
            let (k, d) = entry.split_once('=').ok_or_else(|| Error::Parse(format!("table entry {entry:?} is not K=d")))?;
            let d: Dim = serde_json::from_value(match d.trim().parse::<u64>() {
                Ok(n) => serde_json::Value::from(n),
                Err(_) => serde_json::Value::from(d.trim()),
            })
            .map_err(|e| Error::Parse(format!("dimension {d:?}: {e}")))?;
            dims[class(ctx, k)?] = Some(d);
        }
        let dims = dims
            .into_iter()
            .enumerate()
            .map(|(c, d)| d.ok_or_else(|| Error::Parse(format!("table misses class {}", ctx.class_label(c)))))
            .collect::<Result<Vec<_>>>()?;
        return DimensionFunction::from_table(ctx, dims);
    }
    if spec.contains('⊕') {
        let mut out = DimensionFunction::zero(ctx);
        for part in spec.split('⊕') {
            out = out.direct_sum(&rep(ctx, part)?)?;
        }
        return Ok(out);
    }
    let names: Vec<String> = cat.iter().map(|r| r.name.clone()).collect();
    Err(Error::Parse(format!("unknown representation {spec:?}; known: {}, sigma, table:K=d,...", names.join(", "))))
}

/// `empty`, `complete`, a `.json` file, or comma-separated `K<H` pairs of
/// an orbit label `K` at level `H`, closed up.
pub fn transfer(ctx: &Arc<GroupContext>, spec: &str) -> Result<TransferSystem> {
    let spec = spec.trim();
    if is_file(spec) {
        let json = serde_json::from_str(&read(spec)?).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
        return TransferSystem::from_json(ctx, &json);
    }
    match spec {
        "empty" | "" | "{}" => Ok(TransferSystem::empty(ctx)),
        "complete" => Ok(TransferSystem::complete(ctx)),
        _ => {
            let pairs: Vec<(&str, &str)> = spec
                .split(',')
                .map(|p| p.split_once('<').map(|(k, h)| (k.trim(), h.trim())).ok_or_else(|| Error::Parse(format!("pair {p:?} is not K<H"))))
                .collect::<Result<_>>()?;
            TransferSystem::generated_by_labels(ctx, &pairs)
        }
    }
}
