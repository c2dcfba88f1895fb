//! Named invariant suites run by `dft verify`.

use dft_core::arith::prime_power;
use dft_core::lift::{
    check_transitivity, evaluate_terms, kernel_vector, odd_cycle_expression,
    perp_contains_isotropic_plane, plane_criterion_applies, rank5_expression,
};
use dft_core::{
    build_form, build_isotropy_graph, check_lift_equivariance, check_relations, enumerate_symbols,
    full_image_analysis, image_analysis, isotropic_subgroups, lift_matrix, parse_symbol, Bounds,
    DiscriminantForm, Error,
};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use crate::commands::Outcome;
use crate::error::{CliError, EXIT_BOUND, EXIT_OK, EXIT_PROPERTY};

pub const SUITES: [&str; 3] = ["relations", "lemmas", "constructions"];

pub fn default_max_order(suite: &str) -> u64 {
    match suite {
        "relations" => 32,
        _ => 81,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub pass: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Default)]
struct Runner {
    results: Vec<PropertyResult>,
    bound_hit: bool,
}

type Check<'a> = Box<dyn FnOnce(&mut usize) -> dft_core::Result<Option<String>> + 'a>;

impl Runner {
    fn run(&mut self, name: &'static str, f: Check<'_>) {
        let mut checked = 0;
        let failure = match f(&mut checked) {
            Ok(f) => f,
            Err(e) => {
                self.bound_hit |= matches!(e, Error::BoundExceeded { .. });
                Some(e.to_string())
            }
        };
        self.results.push(PropertyResult {
            name,
            pass: failure.is_none(),
            checked,
            failure,
        });
    }

    fn exit_code(&self) -> i32 {
        let failed = self.results.iter().any(|r| !r.pass);
        match (failed, self.bound_hit) {
            (false, _) => EXIT_OK,
            (true, true) => EXIT_BOUND,
            (true, false) => EXIT_PROPERTY,
        }
    }
}

struct Form {
    name: String,
    prime: Option<u64>,
    d: DiscriminantForm,
}

fn forms(max_order: u64, primes: &[u64]) -> dft_core::Result<Vec<Form>> {
    enumerate_symbols(max_order, primes)
        .into_iter()
        .filter(|s| !s.is_trivial())
        .map(|s| {
            Ok(Form {
                name: s.to_string(),
                prime: prime_power(s.order()).map(|(p, _)| p),
                d: build_form(&s)?,
            })
        })
        .collect()
}

fn fail_at(f: &Form, what: &str) -> Option<String> {
    Some(format!("{}: {what}", f.name))
}

fn relations(r: &mut Runner, list: &[Form], bounds: &Bounds) {
    r.run(
        "Weil relations",
        Box::new(|n| {
            for f in list {
                check_relations(&f.d, bounds)?;
                *n += 1;
            }
            Ok(None)
        }),
    );
    r.run(
        "lift equivariance",
        Box::new(|n| {
            for f in list {
                for h in isotropic_subgroups(&f.d, bounds)? {
                    if !check_lift_equivariance(&f.d, &h, bounds)? {
                        return Ok(fail_at(f, "lift is not equivariant"));
                    }
                    *n += 1;
                }
            }
            Ok(None)
        }),
    );
    r.run(
        "Milgram identity",
        Box::new(|n| {
            for f in list {
                if !f.d.milgram_identity_holds(f.d.signature()?) {
                    return Ok(fail_at(f, "Gauss sum mismatch"));
                }
                *n += 1;
            }
            Ok(None)
        }),
    );
}

fn lemmas(r: &mut Runner, list: &[Form], bounds: &Bounds) {
    r.run(
        "descent is the transpose of lift",
        Box::new(|n| {
            for f in list {
                for h in isotropic_subgroups(&f.d, bounds)? {
                    let l = lift_matrix(&f.d, &h)?;
                    let (up, down) = (l.matrix(), l.descent_matrix());
                    let transposed = (0..down.len())
                        .all(|c| (0..up.len()).all(|g| up[g][c] == down[c][g]));
                    if !transposed {
                        return Ok(fail_at(f, "descent differs from the transposed lift"));
                    }
                    *n += 1;
                }
            }
            Ok(None)
        }),
    );
    r.run(
        "lift transitivity",
        Box::new(|n| {
            for f in list {
                let subs = isotropic_subgroups(&f.d, bounds)?;
                for h in &subs {
                    for k in &subs {
                        if h.order() < k.order() && h.elements.iter().all(|&x| k.contains(x)) {
                            if !check_transitivity(&f.d, h, k)? {
                                return Ok(fail_at(f, "lifts do not compose"));
                            }
                            *n += 1;
                        }
                    }
                }
            }
            Ok(None)
        }),
    );
    r.run(
        "prime-order subgroups span the full image",
        Box::new(|n| {
            for f in list {
                let a = image_analysis(&f.d, bounds)?;
                let full = full_image_analysis(&f.d, bounds)?;
                if a.rank != full.rank {
                    return Ok(fail_at(f, "spans differ"));
                }
                *n += 1;
            }
            Ok(None)
        }),
    );
    r.run(
        "graph membership matches the span",
        Box::new(|n| {
            for f in list.iter().filter(|f| f.prime == Some(2)) {
                let a = image_analysis(&f.d, bounds)?;
                let g = build_isotropy_graph(&f.d, bounds)?;
                for x in f.d.elements() {
                    if g.gamma_in_image(x) != a.in_image[x] {
                        return Ok(fail_at(f, &format!("verdicts differ at {}", f.d.label(x))));
                    }
                    *n += 1;
                }
            }
            Ok(None)
        }),
    );
    r.run(
        "isotropic plane criterion",
        Box::new(|n| {
            for f in list {
                let Some(p) = f.prime.filter(|&p| p != 2) else {
                    continue;
                };
                let a = image_analysis(&f.d, bounds)?;
                for x in f.d.elements() {
                    if !plane_criterion_applies(&f.d, x, p) {
                        continue;
                    }
                    if perp_contains_isotropic_plane(&f.d, x, p) != a.in_image[x] {
                        return Ok(fail_at(f, &format!("criterion fails at {}", f.d.label(x))));
                    }
                    *n += 1;
                }
            }
            Ok(None)
        }),
    );
}

fn unit(n: usize, g: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[g] = BigRational::one();
    v
}

fn constructions(r: &mut Runner, list: &[Form], bounds: &Bounds) {
    r.run(
        "kernel vectors",
        Box::new(|n| {
            for f in list {
                let Some(p) = f.prime else { continue };
                for x in f.d.elements() {
                    if perp_contains_isotropic_plane(&f.d, x, p) {
                        continue;
                    }
                    let v = kernel_vector(&f.d, x, bounds)?;
                    if !v[x].is_one() {
                        return Ok(fail_at(f, "kernel vector does not pair to 1"));
                    }
                    *n += 1;
                }
            }
            Ok(None)
        }),
    );
    r.run(
        "odd cycle expressions",
        Box::new(|n| {
            for f in list.iter().filter(|f| f.prime == Some(2)) {
                let g = build_isotropy_graph(&f.d, bounds)?;
                for x in f.d.elements() {
                    let Some(cycle) = g.odd_cycle_through(x) else {
                        continue;
                    };
                    let terms = odd_cycle_expression(&f.d, &cycle)?;
                    if evaluate_terms(&f.d, &terms)? != unit(f.d.order(), x) {
                        return Ok(fail_at(f, "expression does not sum to the unit vector"));
                    }
                    *n += 1;
                }
            }
            Ok(None)
        }),
    );
    r.run(
        "rank-five expressions",
        Box::new(|n| {
            for s in ["3^-4.9^-1", "3^-4.9^+1"] {
                let d = build_form(&parse_symbol(s)?)?;
                let g = d.element_from_coords(&[0, 0, 0, 0, 1])?;
                let terms = rank5_expression(&d, g)?;
                if evaluate_terms(&d, &terms)? != unit(d.order(), g) {
                    return Ok(Some(format!("{s}: expression does not sum to the unit vector")));
                }
                *n += 1;
            }
            Ok(None)
        }),
    );
}

pub fn verify(suite: &str, max_order: Option<u64>, bounds: &Bounds) -> Result<Outcome, CliError> {
    if !SUITES.contains(&suite) {
        return Err(CliError::input(
            "UnknownSuite",
            format!("unknown suite {suite:?}; expected one of {}", SUITES.join(", ")),
        ));
    }
    let max_order = max_order.unwrap_or_else(|| default_max_order(suite));
    let primes: &[u64] = if suite == "relations" { &[2, 3, 5, 7] } else { &[2, 3, 5] };
    let list = forms(max_order, primes)?;
    let mut r = Runner::default();
    match suite {
        "relations" => relations(&mut r, &list, bounds),
        "lemmas" => lemmas(&mut r, &list, bounds),
        _ => constructions(&mut r, &list, bounds),
    }
    let code = r.exit_code();
    Ok(Outcome {
        json: json!({
            "suite": suite,
            "max_order": max_order,
            "forms": list.len(),
            "properties": r.results,
            "pass": code == EXIT_OK,
        }),
        code,
    })
}
