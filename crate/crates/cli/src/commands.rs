use std::collections::BTreeMap;
use std::path::Path;

use dft_core::lift::{isotropic_elements, prime_order_isotropic_subgroups};
use dft_core::weil::default_conductor;
use dft_core::{
    build_form, build_isotropy_graph, check_lift_equivariance, check_relations, image_analysis,
    isotropic_subgroups, parse_symbol, small_type, Bounds, DiscriminantForm, GenusSymbol,
    RationalMod1,
};
use serde_json::{json, Value};

use crate::error::{CliError, EXIT_OK, EXIT_PROPERTY};

/// JSON payload plus the exit code it should produce.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub json: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(json: Value) -> Self {
        Outcome { json, code: EXIT_OK }
    }
}

pub fn load(text: &str) -> Result<(GenusSymbol, DiscriminantForm), CliError> {
    let sym = parse_symbol(text)?;
    let d = build_form(&sym)?;
    Ok((sym, d))
}

fn is_two_adic(d: &DiscriminantForm) -> bool {
    d.level().is_power_of_two()
}

pub fn info(text: &str, bounds: &Bounds) -> Result<Outcome, CliError> {
    let (sym, d) = load(text)?;
    let p_parts: BTreeMap<String, String> = sym
        .primes()
        .into_iter()
        .map(|p| (p.to_string(), sym.p_part(p).to_string()))
        .collect();
    let subgroups = if d.order() <= bounds.max_enum_order {
        json!(isotropic_subgroups(&d, bounds)?.len())
    } else {
        Value::Null
    };
    Ok(Outcome::ok(json!({
        "symbol": sym.to_string(),
        "order": d.order(),
        "level": d.level(),
        "signature": d.signature()?,
        "rank": sym.rank(),
        "p_parts": p_parts,
        "isotropic_elements": isotropic_elements(&d, None).len(),
        "prime_order_isotropic_subgroups": prime_order_isotropic_subgroups(&d).len(),
        "isotropic_subgroups": subgroups,
    })))
}

pub fn classify(text: &str) -> Result<Outcome, CliError> {
    let sym = parse_symbol(text)?;
    let v = small_type(&sym)?;
    let mut j = serde_json::to_value(&v)?;
    j["symbol"] = json!(sym.to_string());
    Ok(Outcome::ok(j))
}

pub fn image(
    text: &str,
    per_element: bool,
    witnesses: bool,
    bounds: &Bounds,
) -> Result<Outcome, CliError> {
    let (sym, d) = load(text)?;
    let a = image_analysis(&d, bounds)?;
    let mut out = json!({
        "symbol": sym.to_string(),
        "order": d.order(),
        "rank": a.rank,
        "full_image": a.is_full(),
        "subgroups": a.subgroup_count,
        "columns": a.column_count,
    });
    if witnesses {
        let w: Vec<String> = a.witnesses().into_iter().map(|g| d.label(g)).collect();
        out["witnesses"] = json!(w);
    }
    let mut code = EXIT_OK;
    if per_element {
        let graph = if is_two_adic(&d) {
            Some(build_isotropy_graph(&d, bounds)?)
        } else {
            None
        };
        let rows: Vec<Value> = d
            .elements()
            .map(|g| {
                let mut row = json!({"element": d.label(g), "in_image": a.in_image[g]});
                if let Some(gr) = &graph {
                    let verdict = gr.gamma_in_image(g);
                    row["graph_in_image"] = json!(verdict);
                    if verdict != a.in_image[g] {
                        code = EXIT_PROPERTY;
                    }
                }
                row
            })
            .collect();
        out["per_element"] = json!(rows);
        if graph.is_some() {
            out["graph_agrees"] = json!(code == EXIT_OK);
        }
    }
    Ok(Outcome { json: out, code })
}

pub fn graph(text: &str, dot: Option<&Path>, bounds: &Bounds) -> Result<Outcome, CliError> {
    let (sym, d) = load(text)?;
    let g = build_isotropy_graph(&d, bounds)?;
    if let Some(path) = dot {
        std::fs::write(path, g.to_dot(&d))?;
    }
    let components: Vec<Value> = g
        .components()
        .iter()
        .map(|c| {
            json!({
                "size": c.vertices.len(),
                "representative": d.label(c.vertices[0]),
                "bipartite": c.bipartite,
                "odd_cycle": c.odd_cycle.as_ref().map(|w| w.iter().map(|&x| d.label(x)).collect::<Vec<_>>()),
            })
        })
        .collect();
    Ok(Outcome::ok(json!({
        "symbol": sym.to_string(),
        "vertices": g.order(),
        "edges": g.edge_count(),
        "components": components,
        "dot": dot.map(|p| p.display().to_string()),
    })))
}

pub fn weil(text: &str, check: bool, bounds: &Bounds) -> Result<Outcome, CliError> {
    let (sym, d) = load(text)?;
    if d.order() > bounds.max_cyclotomic_order {
        return Err(dft_core::Error::BoundExceeded {
            what: "Weil representation",
            order: d.order(),
            bound: bounds.max_cyclotomic_order,
        }
        .into());
    }
    let s = d.signature()?;
    let mut out = json!({
        "symbol": sym.to_string(),
        "order": d.order(),
        "signature": s,
        "conductor": default_conductor(&d),
    });
    if check {
        let report = check_relations(&d, bounds)?;
        let mut count = 0;
        if d.order() <= bounds.max_enum_order {
            for h in isotropic_subgroups(&d, bounds)? {
                check_lift_equivariance(&d, &h, bounds)?;
                count += 1;
            }
        }
        out["relations"] = json!(report.checked);
        out["equivariant_subgroups"] = json!(count);
        out["pass"] = json!(true);
    } else {
        // entries as exponents x of e(x)
        let prefix = -RationalMod1::new(s as i128, 8);
        let t: Vec<String> = d.elements().map(|g| d.q(g).to_string()).collect();
        let w: Vec<Vec<String>> = d
            .elements()
            .map(|b| {
                d.elements()
                    .map(|g| (prefix - d.b(g, b)).to_string())
                    .collect()
            })
            .collect();
        out["rho_t_exponents"] = json!(t);
        out["w_exponents"] = json!(w);
    }
    Ok(Outcome::ok(out))
}
