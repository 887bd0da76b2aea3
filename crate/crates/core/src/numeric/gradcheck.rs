//! Central finite-difference verification of analytic gradients.

use serde::Serialize;

use super::{NumericError, ParamStore};

#[derive(Debug, Clone, Serialize)]
pub struct ParamCheck {
    pub name: String,
    pub max_rel_err: f64,
    pub worst_index: usize,
    pub checked: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GradCheckReport {
    pub per_param: Vec<ParamCheck>,
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn rel_err(analytic: f64, numeric: f64) -> f64 {
    // the 1e-6 floor keeps central-difference cancellation noise on
    // near-zero components (|Δ| ~ eps·|loss|/step ≈ 1e-10) from registering
    // as relative error; real gradient defects are orders louder
    let denom = analytic.abs().max(numeric.abs()).max(1e-6);
    (analytic - numeric).abs() / denom
}

/// Compare analytic gradients (produced by `grad_fn`, which must leave them
/// in the store's grad slots) against central differences of `loss_fn` at
/// `step`, component by component.
pub fn grad_check<L, G>(
    store: &mut ParamStore,
    tolerance: f64,
    step: f64,
    loss_fn: L,
    grad_fn: G,
) -> Result<GradCheckReport, NumericError>
where
    L: Fn(&ParamStore) -> f64,
    G: FnOnce(&mut ParamStore),
{
    let base = loss_fn(store);
    if !base.is_finite() {
        return Err(NumericError::NonFinite(format!("loss at evaluation point: {base}")));
    }
    store.zero_grads();
    grad_fn(store);

    let names: Vec<String> = store.names().to_vec();
    let analytic: Vec<(String, Vec<f64>)> =
        names.iter().map(|n| (n.clone(), store.get(n).grad.clone())).collect();

    let mut per_param = Vec::new();
    let mut overall: f64 = 0.0;
    for (name, grads) in &analytic {
        let mut worst = 0.0f64;
        let mut worst_index = 0;
        for i in 0..grads.len() {
            let original = store.get(name).values[i];
            store.get_mut(name).values[i] = original + step;
            let plus = loss_fn(store);
            store.get_mut(name).values[i] = original - step;
            let minus = loss_fn(store);
            store.get_mut(name).values[i] = original;
            if !plus.is_finite() || !minus.is_finite() {
                return Err(NumericError::NonFinite(format!(
                    "perturbed loss for `{name}`[{i}]"
                )));
            }
            let numeric = (plus - minus) / (2.0 * step);
            let err = rel_err(grads[i], numeric);
            if err > worst {
                worst = err;
                worst_index = i;
            }
        }
        overall = overall.max(worst);
        per_param.push(ParamCheck {
            name: name.clone(),
            max_rel_err: worst,
            worst_index,
            checked: grads.len(),
        });
    }

    Ok(GradCheckReport { per_param, max_rel_err: overall, tolerance, pass: overall < tolerance })
}
