use isoembed::dice::{
    best_of, maximize_constrained_target, maximize_per_space, maximize_unconstrained,
};
use isoembed::discrepancy::{self, Cell};
use isoembed::game::{
    backward_induction, global_comparison, Bilinear, GameOutcome, GameSpec, Strategy,
};
use isoembed::gaussian::{
    moments_by_quadrature, relation_gradients, rho_derivative_at_zero, sample_cases, Relation,
};
use isoembed::jointbinary::{
    correlation, entropy_gradient, fisher_information, log_likelihood_gradient, mle, CountData,
    Family, JointPoint,
};
use isoembed::strategy::{table1, Case, Column, Pattern};
use isoembed::treeopt::{self, maximize_payoff_on_slice, SliceOptimum, DEFAULT_GRID, SWEEP_RHOS};
use isoembed::{Error, GradientResult, OptimumReport, Result, Semantics};

use crate::output::{Section, Value};
use crate::{CaseArg, Cli, Command};

const SURFACE_GRID: usize = 51;

fn four<T>(name: &str, values: Option<&[T]>) -> Result<()> {
    match values {
        Some(v) if v.len() != 4 => Err(Error::BadParams(format!(
            "--{name} takes 4 comma-separated values, got {}",
            v.len()
        ))),
        _ => Ok(()),
    }
}

pub fn run(cli: &Cli) -> Result<Vec<Section>> {
    match &cli.command {
        Command::Joint { point, counts, .. } => {
            four("point", Some(point))?;
            four("counts", counts.as_deref())?;
        }
        Command::Game { cx, cy } => {
            four("cx", cx.as_deref())?;
            four("cy", cy.as_deref())?;
        }
        _ => {}
    }
    let grid = cli.global.grid.map(|g| g as usize);
    match &cli.command {
        Command::Dice => Ok(dice()),
        Command::GaussianCheck { sets } => gaussian(cli.global.seed, *sets),
        Command::Joint {
            point,
            counts,
            report,
        } => match report {
            Some(_) => report_sections(&["dim(F)", "dim(grad L)", "|grad E|", "d", "V"]),
            None => joint(point, counts.as_deref()),
        },
        Command::Table1 { case } => strategy_table(*case),
        Command::TreeOpt { rho, sweep } => {
            let grid = grid.unwrap_or(DEFAULT_GRID);
            if *sweep {
                tree_sweep(grid)
            } else {
                let rho = rho.expect("clap requires --rho without --sweep");
                Ok(vec![slice_section(&[maximize_payoff_on_slice(rho, grid)?])])
            }
        }
        Command::Surface { rho } => surface(*rho, grid.unwrap_or(SURFACE_GRID)),
        Command::Game { cx, cy } => game(cx.as_deref(), cy.as_deref()),
        Command::ReportEq14 => report_sections(&[]),
    }
}

fn report_row(section: &mut Section, method: &str, r: &OptimumReport) {
    section.push(vec![
        method.into(),
        r.label.as_str().into(),
        r.value.into(),
        r.point.clone().into(),
        r.diagnostics.on_boundary.into(),
    ]);
}

fn dice() -> Vec<Section> {
    let mut s = Section::new("dice", &["method", "die", "value", "point", "on_boundary"]);
    let per = maximize_per_space();
    for r in &per {
        report_row(&mut s, "per-space", r);
    }
    for r in &maximize_constrained_target() {
        report_row(&mut s, "constrained", r);
    }
    let un = maximize_unconstrained();
    report_row(&mut s, "unconstrained", &un.optimum);
    let mut summary = Section::new("summary", &["quantity", "value"]);
    if let Some(best) = best_of(&per) {
        summary.push(vec!["best die".into(), best.label.as_str().into()]);
    }
    summary.push(vec!["unconstrained conflicts".into(), un.conflicts.into()]);
    vec![s, summary]
}

fn gradient_value(g: &GradientResult) -> Value {
    match g {
        GradientResult::Finite(v) => v.clone().into(),
        GradientResult::Diverging(_) => Value::Diverging,
        GradientResult::Undefined => "undefined".into(),
    }
}

fn gaussian(seed: u64, sets: usize) -> Result<Vec<Section>> {
    let mut grads = Section::new(
        "gaussian",
        &[
            "set",
            "relation",
            "constrained_norm",
            "limit_rho",
            "closed_form_rho",
        ],
    );
    let mut quad = Section::new(
        "quadrature",
        &["set", "rho", "cov_quadrature", "cov_closed_form"],
    );
    for (i, (params, probe)) in sample_cases(seed, sets).into_iter().enumerate() {
        for relation in Relation::ALL {
            let probe = relation.is_pointwise().then_some(probe);
            let c = relation_gradients(&params, relation, Semantics::Constrained, probe)?;
            let l = relation_gradients(&params, relation, Semantics::Limit, probe)?;
            let limit_rho = match &l {
                GradientResult::Finite(v) => v[relation.rho_index()].into(),
                other => gradient_value(other),
            };
            grads.push(vec![
                i.into(),
                relation.label().into(),
                c.magnitude().into(),
                limit_rho,
                rho_derivative_at_zero(&params, relation, probe)?.into(),
            ]);
        }
        let rho = 0.5;
        let m = moments_by_quadrature(&params.with_rho(rho), 64)?;
        quad.push(vec![
            i.into(),
            rho.into(),
            (m.mean_xy - m.mean_x * m.mean_y).into(),
            (rho * params.sigma_x * params.sigma_y).into(),
        ]);
    }
    Ok(vec![grads, quad])
}

fn result_value<T>(r: Result<T>, f: impl FnOnce(T) -> Value) -> Value {
    match r {
        Ok(v) => f(v),
        Err(e) => format!("error: {e}").into(),
    }
}

fn matrix_value(m: Vec<Vec<f64>>) -> Value {
    m.into_iter().flatten().collect::<Vec<_>>().into()
}

fn joint(point: &[f64], counts: Option<&[u64]>) -> Result<Vec<Section>> {
    let p = JointPoint::new(point[0], point[1], point[2], point[3])?;
    let mut s = Section::new("joint", &["quantity", "semantics", "value"]);
    s.push(vec![
        "rho_xy".into(),
        "-".into(),
        result_value(correlation(&p), Value::from),
    ]);
    for semantics in [Semantics::Constrained, Semantics::Limit] {
        let mode = Family::Correlated.mode(semantics, p.free());
        s.push(vec![
            "grad E_xy".into(),
            semantics.as_str().into(),
            result_value(entropy_gradient(&p, &mode), |g| gradient_value(&g)),
        ]);
    }
    for semantics in [Semantics::Constrained, Semantics::Limit] {
        s.push(vec![
            "fisher".into(),
            semantics.as_str().into(),
            result_value(fisher_information(&p, semantics), matrix_value),
        ]);
    }
    if let Some(c) = counts {
        let data = CountData::new(c[0], c[1], c[2], c[3]);
        for semantics in [Semantics::Constrained, Semantics::Limit] {
            s.push(vec![
                "grad log L".into(),
                semantics.as_str().into(),
                result_value(log_likelihood_gradient(&data, &p, semantics), |g| {
                    gradient_value(&g)
                }),
            ]);
            s.push(vec![
                "mle".into(),
                semantics.as_str().into(),
                result_value(mle(&data, semantics), |m| m.probs().to_vec().into()),
            ]);
        }
    }
    Ok(vec![s])
}

fn cell_value(c: &Cell) -> Value {
    match c {
        Cell::Count(n) => (*n).into(),
        Cell::Number(x) => (*x).into(),
        Cell::Diverging => Value::Diverging,
        Cell::Text(t) => t.as_str().into(),
    }
}

/// The discrepancy table, restricted to `only` when non-empty.
fn report_sections(only: &[&str]) -> Result<Vec<Section>> {
    let mut s = Section::new("report", &["quantity", "P", "G"]);
    for row in discrepancy::report()? {
        if only.is_empty() || only.contains(&row.quantity) {
            s.push(vec![
                row.quantity.into(),
                cell_value(&row.p),
                cell_value(&row.g),
            ]);
        }
    }
    Ok(vec![s])
}

fn strategy_table(case: CaseArg) -> Result<Vec<Section>> {
    let case = match case {
        CaseArg::Corr => Case::PerfectlyCorrelated,
        CaseArg::Ind => Case::Independent,
    };
    let mut columns = Section::new("columns", &["column", "parameters", "dim"]);
    for c in Column::ALL {
        columns.push(vec![
            c.label(case).into(),
            c.parameters(case).join(" ").into(),
            c.dim(case).into(),
        ]);
    }
    let mut names = vec!["row"];
    names.extend(Column::ALL.iter().map(|c| c.label(case)));
    let mut rows = Section::new(&format!("table1-{}", case.name()), &names);
    for row in table1(case)?.rows {
        let mut cells: Vec<Value> = vec![row.label.into()];
        cells.extend(row.entries.iter().map(|e| match e.pattern() {
            Pattern::Zero => Value::Int(0),
            Pattern::Diverging => Value::Diverging,
            Pattern::Nonzero(g) => g.into(),
            Pattern::Undefined => Value::Null,
        }));
        rows.push(cells);
    }
    Ok(vec![columns, rows])
}

fn slice_section(rows: &[SliceOptimum]) -> Section {
    let mut s = Section::new(
        "tree-opt",
        &["rho", "p", "q", "r", "value", "on_boundary", "iterations"],
    );
    for r in rows {
        s.push(vec![
            r.rho.into(),
            r.point[0].into(),
            r.point[1].into(),
            r.point[2].into(),
            r.value.into(),
            r.diagnostics.on_boundary.into(),
            r.diagnostics.iterations.into(),
        ]);
    }
    s
}

fn tree_sweep(grid: usize) -> Result<Vec<Section>> {
    let sweep = treeopt::sweep(&SWEEP_RHOS, grid)?;
    let mut best = Section::new("best", &["rho", "value"]);
    if let Some(i) = sweep.best {
        best.push(vec![sweep.rows[i].rho.into(), sweep.rows[i].value.into()]);
    }
    Ok(vec![slice_section(&sweep.rows), best])
}

fn surface(rho: f64, grid: usize) -> Result<Vec<Section>> {
    let mut s = Section::new("surface", &["p", "q", "r_plus", "in_range"]);
    for [p, q, r, inside] in treeopt::surface(rho, grid)? {
        s.push(vec![p.into(), q.into(), r.into(), (inside == 1.0).into()]);
    }
    Ok(vec![s])
}

fn bilinear(c: &[f64]) -> Bilinear {
    Bilinear::new(c[0], c[1], c[2], c[3])
}

fn outcome_row(o: &GameOutcome) -> Vec<Value> {
    let rho = o.rho.map_or(Value::from("unconstrained"), Value::from);
    let (kind, a, b) = match o.strategy {
        Strategy::Pure { x, y } => ("pure", x as f64, y as f64),
        Strategy::Mixed { p, q } => ("mixed", p, q),
    };
    vec![
        rho,
        kind.into(),
        a.into(),
        b.into(),
        o.payoffs.0.into(),
        o.payoffs.1.into(),
    ]
}

const OUTCOME_COLUMNS: [&str; 6] = [
    "rho", "strategy", "x_or_p", "y_or_q", "payoff_x", "payoff_y",
];

fn game(cx: Option<&[f64]>, cy: Option<&[f64]>) -> Result<Vec<Section>> {
    let default = GameSpec::default();
    let spec = GameSpec::new(
        cx.map_or(default.x, bilinear),
        cy.map_or(default.y, bilinear),
    )?;
    let mut slices = Section::new("slices", &OUTCOME_COLUMNS);
    let comparison = global_comparison(&spec);
    for o in &comparison.slices {
        slices.push(outcome_row(o));
    }
    let mut baseline = Section::new("backward-induction", &OUTCOME_COLUMNS);
    baseline.push(outcome_row(&backward_induction(&spec)));
    let mut chosen = Section::new("chosen", &OUTCOME_COLUMNS);
    chosen.push(outcome_row(&comparison.chosen));
    Ok(vec![slices, baseline, chosen])
}
