//! Class membership of a scalar symbol, with the constant symbol and the
//! pole `G_{0,0}` run alongside as negative controls.

use std::fmt;

use crate::error::{param, Result};
use crate::harness::class::{check_multiplier_class, ClassRanges, MultiplierClassReport};
use crate::harness::sweep::{SweepResult, SweepRow};
use crate::spectral::decomposition::ScalarFn;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symbol {
    /// `1/(iτ + t + μ)`.
    MuTau { mu: f64, tau: f64 },
    Constant(f64),
}

impl Symbol {
    pub fn scalar(self) -> ScalarFn {
        match self {
            Symbol::MuTau { mu, tau } => ScalarFn::g_mu_tau(mu, tau),
            Symbol::Constant(c) => ScalarFn::constant(c),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::MuTau { mu, tau } => write!(f, "g-mu{mu}-tau{tau}"),
            Symbol::Constant(c) => write!(f, "constant{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierClassParams {
    pub symbol: Symbol,
    pub bound: f64,
    pub t0: f64,
    pub d: usize,
    pub ranges: ClassRanges,
    pub controls: bool,
}

impl Default for MultiplierClassParams {
    fn default() -> Self {
        Self {
            symbol: Symbol::MuTau { mu: 0.4, tau: 0.3 },
            bound: 100.0,
            t0: 1.0,
            d: 3,
            ranges: ClassRanges::default(),
            controls: true,
        }
    }
}

const CONDITIONS: [&str; 4] = ["size", "even-sum", "variation", "decay"];

fn push(res: &mut SweepResult, symbol: Symbol, r: &MultiplierClassReport) {
    for (i, (name, v)) in CONDITIONS.iter().zip(r.candidates()).enumerate() {
        res.push(SweepRow::value((i + 1) as f64, format!("{symbol}-{name}"), v));
    }
}

pub fn multiplier_class(par: &MultiplierClassParams) -> Result<SweepResult> {
    if !(par.bound > 0.0) {
        return param("class bound must be positive");
    }
    let mut res = SweepResult::new("multiplier-class", "condition");
    let main = check_multiplier_class(&par.symbol.scalar(), par.bound, par.t0, par.d, &par.ranges)?;
    push(&mut res, par.symbol, &main);
    let observed = main.candidates().iter().copied().fold(0.0, f64::max);
    res.metric("observed_bound", observed);
    for (name, pass) in CONDITIONS.iter().zip(main.pass) {
        res.metric(&format!("pass_{name}"), pass as u8 as f64);
    }
    res.check_flag("class_member", main.passed());
    if par.controls {
        let one = Symbol::Constant(1.0);
        let c = check_multiplier_class(&one.scalar(), par.bound, par.t0, par.d, &par.ranges)?;
        push(&mut res, one, &c);
        res.check_flag("constant_fails_even_sum", !c.pass[1]);
        let pole = Symbol::MuTau { mu: 0.0, tau: 0.0 };
        let c = check_multiplier_class(&pole.scalar(), par.bound, par.t0, par.d, &par.ranges)?;
        push(&mut res, pole, &c);
        res.check_flag("pole_fails_size", !c.pass[0]);
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run() {
        let res = multiplier_class(&MultiplierClassParams::default()).unwrap();
        assert!(res.passed(), "{:?}", res.checks);
        assert_eq!(res.rows.len(), 12);
        assert!(res.get("observed_bound").unwrap().is_finite());
    }

    #[test]
    fn failing_member_is_reported() {
        let par = MultiplierClassParams {
            symbol: Symbol::Constant(1.0),
            controls: false,
            ..Default::default()
        };
        let res = multiplier_class(&par).unwrap();
        assert!(!res.passed());
        assert_eq!(res.get("pass_even-sum"), Some(0.0));
    }
}
