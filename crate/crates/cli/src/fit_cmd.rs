use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;

use ising_traffic::compiler::fit_quadratic;

use crate::common::{write_output, CliResult, Context, Failure, Report};
use crate::tap_cmd::load_network;

const TABLE_ROWS: usize = 11;

#[derive(Args, Debug)]
pub struct FitArgs {
    pub network: PathBuf,
    /// Link id.
    #[arg(long)]
    pub link: String,
    #[arg(long)]
    pub lo: f64,
    #[arg(long)]
    pub hi: f64,
}

pub fn run(ctx: &Context, args: &FitArgs) -> CliResult<()> {
    if !(args.lo >= 0.0 && args.hi > args.lo && args.hi.is_finite()) {
        return Err(Failure::usage(format!(
            "interval needs 0 <= lo < hi, got --lo {} --hi {}",
            args.lo, args.hi
        )));
    }
    let net = load_network(&args.network)?;
    let idx = net
        .link(&args.link)
        .ok_or_else(|| Failure::usage(format!("unknown link `{}`", args.link)))?;
    let link = &net.links()[idx];
    let fit = fit_quadratic(link, args.lo, args.hi)?;

    let mut report = Report::default();
    report.put("link", &link.id);
    report.put("t0", link.t0);
    report.put("capacity", link.capacity);
    report.put("lo", args.lo);
    report.put("hi", args.hi);
    report.put("gamma1", fit.gamma1);
    report.put("gamma2", fit.gamma2);
    report.put("gamma3", fit.gamma3);
    report.put("max_rel_error", fit.max_rel_error);
    report.put("max_abs_error", fit.max_abs_error);

    let shape = link.shape();
    let mut table = String::from("flow,target,fit,rel_error\n");
    for k in 0..TABLE_ROWS {
        let f = args.lo + (args.hi - args.lo) * k as f64 / (TABLE_ROWS - 1) as f64;
        let (target, q) = (shape.eval(f), fit.eval(f));
        let rel = if target > 0.0 {
            (q - target).abs() / target
        } else {
            0.0
        };
        writeln!(table, "{f},{target},{q},{rel}").expect("write to string");
    }
    let text = format!("{}\n{table}", report.text());
    if ctx.out.is_some() {
        write_output(&ctx.out_dir()?, &format!("fit_{}.txt", link.id), &text)?;
    }
    print!("{text}");
    Ok(())
}
