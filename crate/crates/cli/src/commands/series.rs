use clap::Args;
use num_traits::Signed;
use serde::Serialize;
use serde_json::json;

use typicality::mutual_info::{
    mi_bernoulli_series, mi_exact_rational, mi_leading_exact, optimal_truncation_order,
    series_term_exact,
};
use typicality::special_fn::{rational_to_f64, BERNOULLI_K_MAX};

use super::tripartite;
use crate::output::{emit, CommandOutput, OutputSpec, Table};
use crate::Failure;

#[derive(Debug, Args, Serialize)]
pub struct SeriesArgs {
    #[arg(long)]
    pub da: u64,
    #[arg(long)]
    pub db: u64,
    #[arg(long)]
    pub de: u64,
    /// Highest series order to print (0 prints the leading term only).
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(0..=BERNOULLI_K_MAX as u64))]
    pub k_max: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputSpec,
}

pub fn run(args: &SeriesArgs) -> Result<(), Failure> {
    let dims = tripartite(args.da, args.db, args.de)?;
    if !dims.page_regime() {
        return Err(Failure::Regime(format!(
            "the series requires d_A d_B <= d_E, got d_A d_B = {} > d_E = {}",
            dims.d_ab(),
            dims.d_e()
        )));
    }
    let k_max = args.k_max as usize;
    let eval = mi_bernoulli_series(dims, k_max)?;
    let exact = mi_exact_rational(dims);
    let optimal = optimal_truncation_order(dims)?;

    let mut table = Table::new(vec!["k", "coefficient", "term", "partial_sum", "abs_error"]);
    let mut json_rows = Vec::new();
    let mut partial = mi_leading_exact(dims);
    let mut push = |k: usize, coefficient: String, term: f64, partial: &typicality::Rational| {
        let sum = rational_to_f64(partial);
        let error = rational_to_f64(&(&exact - partial).abs());
        table.push(vec![k.into(), coefficient.clone().into(), term.into(), sum.into(), error.into()]);
        json_rows.push(json!({
            "k": k,
            "coefficient": coefficient,
            "term": term,
            "partial_sum": sum,
            "abs_error": error,
        }));
    };
    // k = 0 is the leading term (d_A²−1)(d_B²−1)/(2N).
    push(0, "1/2".into(), eval.leading, &partial);
    for k in 1..=k_max {
        partial += series_term_exact(dims, k)?;
        push(k, eval.coefficients[k - 1].to_string(), eval.terms[k - 1], &partial);
    }

    let mut summary = Table::new(vec!["quantity", "value"]).titled(format!(
        "I(A:B) series for (d_A, d_B, d_E) = ({}, {}, {})",
        args.da, args.db, args.de
    ));
    summary.push(vec!["exact".into(), rational_to_f64(&exact).into()]);
    summary.push(vec!["optimal_order".into(), optimal.into()]);
    summary.push(vec!["first_omitted_term".into(), eval.truncation_estimate.into()]);

    emit(
        &args.out,
        &CommandOutput {
            command: "series",
            inputs: json!(args),
            sections: vec![summary],
            primary: table,
            outputs: json!({
                "exact": rational_to_f64(&exact),
                "optimal_order": optimal,
                "first_omitted_term": eval.truncation_estimate,
                "terms": json_rows,
            }),
        },
    )?;
    Ok(())
}
