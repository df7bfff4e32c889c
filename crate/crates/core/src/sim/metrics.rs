use crate::dataset::Dataset;
use crate::error::{Error, Result};

fn check_len(test: &Dataset, beta: &[f64], what: &str) -> Result<()> {
    if beta.len() != test.p() + 1 {
        return Err(Error::Dimension(format!(
            "{what} has length {}, expected {} (intercept + {} slopes)",
            beta.len(),
            test.p() + 1,
            test.p()
        )));
    }
    if test.n() == 0 {
        return Err(Error::invalid("empty test set"));
    }
    Ok(())
}

/// Mean squared difference between the true and the fitted linear predictor
/// over the test rows. Both vectors carry the intercept first.
pub fn mse(test: &Dataset, beta_true: &[f64], beta_hat: &[f64]) -> Result<f64> {
    check_len(test, beta_true, "true coefficient vector")?;
    check_len(test, beta_hat, "estimated coefficient vector")?;
    let diff: Vec<f64> = beta_true.iter().zip(beta_hat).map(|(a, b)| a - b).collect();
    let pred = test.predict(&diff);
    Ok(pred.iter().map(|v| v * v).sum::<f64>() / test.n() as f64)
}

/// Mean squared prediction error against the observed test responses.
pub fn mspe(test: &Dataset, beta_hat: &[f64]) -> Result<f64> {
    check_len(test, beta_hat, "estimated coefficient vector")?;
    let pred = test.predict(beta_hat);
    Ok(pred
        .iter()
        .zip(test.response())
        .map(|(p, y)| (y - p) * (y - p))
        .sum::<f64>()
        / test.n() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionMetrics {
    pub sensitivity: f64,
    pub specificity: f64,
}

/// True positive and true negative rates of the exactly-nonzero slopes.
///
/// Both vectors carry the intercept first; it is ignored. Specificity is 1
/// when every true slope is nonzero.
pub fn selection_metrics(beta_true: &[f64], beta_hat: &[f64]) -> Result<SelectionMetrics> {
    if beta_true.len() != beta_hat.len() || beta_true.is_empty() {
        return Err(Error::Dimension(format!(
            "coefficient vectors have lengths {} and {}",
            beta_true.len(),
            beta_hat.len()
        )));
    }
    let (mut tp, mut fneg, mut tn, mut fpos) = (0usize, 0usize, 0usize, 0usize);
    for (&t, &h) in beta_true[1..].iter().zip(&beta_hat[1..]) {
        match (t != 0.0, h != 0.0) {
            (true, true) => tp += 1,
            (true, false) => fneg += 1,
            (false, false) => tn += 1,
            (false, true) => fpos += 1,
        }
    }
    if tp + fneg == 0 {
        return Err(Error::invalid("sensitivity is undefined without true nonzero slopes"));
    }
    let specificity = if tn + fpos == 0 {
        1.0
    } else {
        tn as f64 / (tn + fpos) as f64
    };
    Ok(SelectionMetrics {
        sensitivity: tp as f64 / (tp + fneg) as f64,
        specificity,
    })
}
