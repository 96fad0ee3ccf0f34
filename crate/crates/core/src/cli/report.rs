//! Reports in machine-readable (JSON) and human-readable form.
//!
//! Coalitions are written as keys such as `a,1,3` with external user ids,
//! rationals as `"num/den"` strings.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::instance::Instance;
use crate::error::{Error, Result};
use crate::game::{Allocation, Coalition, Game, Player};
use crate::least_core::{self, LeastCoreReport};
use crate::properties::{self, PropertyReport};
use crate::rational::Rational;
use crate::shares::{PartitionMode, SharesReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Method {
    Formula,
    Lp,
    Both,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Formula => "formula",
            Method::Lp => "lp",
            Method::Both => "both",
        })
    }
}

pub type Payoffs = Vec<(String, Rational)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub instance: InstanceSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub properties: Option<PropertiesSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub least_core: Option<LeastCoreSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shares: Option<SharesSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub kind: String,
    pub n_users: usize,
    pub user_ids: Vec<u32>,
    pub grand_value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertiesSection {
    pub superadditive: bool,
    pub superadditive_witness: Option<(String, String)>,
    pub monotonic: bool,
    /// `(S, i)` with `v(S ∪ {i}) < v(S)`.
    pub monotonic_witness: Option<(String, String)>,
    pub convex: bool,
    pub convex_witness: Option<(String, String)>,
    pub veto_set: String,
    pub clan: Option<String>,
    pub big_boss: Option<String>,
    pub balanced: bool,
    pub balanced_witness: Option<String>,
    pub totally_balanced: bool,
    pub users_take_all_in_core: bool,
    pub egalitarian_in_core: bool,
    pub sesg: Option<SesgProperties>,
}

/// Closed-form verdicts available for energy sharing instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SesgProperties {
    pub monotone_closed_form: bool,
    pub monotone_fee_condition: bool,
    pub big_boss_closed_form: Option<bool>,
    pub balanced_fee_condition: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeastCoreSection {
    pub method: String,
    pub balanced: bool,
    pub eps_star: Option<Rational>,
    pub eps_hat: Option<Rational>,
    pub formula_exact: Option<bool>,
    pub argmin: Vec<String>,
    pub s_hat: Option<String>,
    pub s_min: Option<String>,
    pub eps_bar: Rational,
    pub bounds: Option<BalancedBounds>,
    pub unbalanced: Option<UnbalancedSection>,
    pub clan_formula: Option<Rational>,
    pub clan_branch: Option<String>,
    pub allocation: Option<Payoffs>,
    pub dual: Option<Payoffs>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedBounds {
    pub lower: Rational,
    pub lower_guaranteed: bool,
    pub upper: Rational,
    pub eps0_star: Option<Rational>,
    pub no_fee_lower: Option<Rational>,
    pub no_fee_upper: Option<Rational>,
    pub max_fee: Option<Rational>,
    pub sandwich_lower: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnbalancedSection {
    pub eps_tilde: Rational,
    pub eps_bar: Rational,
    pub exact: bool,
    pub k: Option<u32>,
    pub violation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharesSection {
    pub eps_star: Rational,
    pub max_aggregator: Rational,
    pub min_aggregator: Rational,
    pub max_users: Rational,
    pub s_min: Option<String>,
    pub equality: bool,
    pub characterization: Option<bool>,
    pub max_closed_form: Option<Rational>,
    pub partition_mode: String,
    pub partition_bound: Rational,
    pub partition: Vec<String>,
    pub singleton_bound: Rational,
    pub max_allocation: Payoffs,
    pub min_allocation: Payoffs,
}

fn player_label(inst: &Instance, p: Player) -> String {
    match p {
        Player::Aggregator => "a".into(),
        Player::User(i) => inst.user_id(i).to_string(),
    }
}

fn payoffs(inst: &Instance, x: &Allocation) -> Payoffs {
    std::iter::once(("a".to_string(), x.aggregator()))
        .chain((0..inst.n_users()).map(|i| (inst.user_id(i).to_string(), x.user(i))))
        .collect()
}

fn pair(inst: &Instance, w: Option<(Coalition, Coalition)>) -> Option<(String, String)> {
    w.map(|(s, t)| (inst.key(s), inst.key(t)))
}

/// Fee-free companion game and largest fee, for energy sharing instances.
pub fn fee_free(inst: &Instance) -> Result<Option<(Game, Rational)>> {
    match inst {
        Instance::Sesg(s) => Ok(Some((s.strip_fees().build_game()?, s.max_fee()))),
        Instance::Table(_) => Ok(None),
    }
}

pub fn summary(inst: &Instance, game: &Game) -> InstanceSummary {
    InstanceSummary {
        kind: inst.kind().into(),
        n_users: inst.n_users(),
        user_ids: (0..inst.n_users()).map(|i| inst.user_id(i)).collect(),
        grand_value: game.grand_value(),
    }
}

pub fn properties_section(inst: &Instance, game: &Game) -> Result<PropertiesSection> {
    let report = PropertyReport::analyze(game)?;
    let egalitarian = properties::egalitarian_membership(game)?;
    let sesg = match inst {
        Instance::Sesg(s) => {
            let game0 = s.strip_fees().build_game()?;
            Some(SesgProperties {
                monotone_closed_form: properties::sesg_monotone_char(s),
                monotone_fee_condition: properties::mono_char_with_fees(&game0, &s.fees())?,
                big_boss_closed_form: not_applicable_to_none(properties::sesg_bigboss_char(s))?,
                balanced_fee_condition: not_applicable_to_none(properties::sesg_balanced_char(s))?,
            })
        }
        Instance::Table(_) => None,
    };
    Ok(PropertiesSection {
        superadditive: report.superadditive.holds,
        superadditive_witness: pair(inst, report.superadditive.witness),
        monotonic: report.monotonic.holds,
        monotonic_witness: report.monotonic.witness.map(|(s, p)| (inst.key(s), player_label(inst, p))),
        convex: report.convex.holds,
        convex_witness: pair(inst, report.convex.witness),
        veto_set: inst.key(report.veto_set),
        clan: report.clan.map(|c| inst.key(c)),
        big_boss: report.big_boss.map(|p| player_label(inst, p)),
        balanced: report.balanced.holds,
        balanced_witness: report.balanced.witness.map(|s| inst.key(s)),
        totally_balanced: report.totally_balanced,
        users_take_all_in_core: egalitarian.users_all_in_core,
        egalitarian_in_core: egalitarian.egalitarian_in_core,
        sesg,
    })
}

pub fn not_applicable_to_none<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::NotApplicable(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn clan_formulas(inst: &Instance) -> Result<(Option<Rational>, Option<String>)> {
    let Instance::Sesg(s) = inst else {
        return Ok((None, None));
    };
    let general = not_applicable_to_none(least_core::clan_general_eps(s))?;
    let branch = not_applicable_to_none(least_core::clan_equal_capacity_eps(s))?.map(|(_, b)| format!("{b:?}"));
    Ok((general, branch))
}

fn bounds_section(fb: &least_core::FeeBounds) -> BalancedBounds {
    BalancedBounds {
        lower: fb.lower,
        lower_guaranteed: fb.lower_guaranteed,
        upper: fb.upper,
        eps0_star: fb.eps0_star,
        no_fee_lower: fb.no_fee.map(|b| b.lower),
        no_fee_upper: fb.no_fee.map(|b| b.upper),
        max_fee: fb.max_fee,
        sandwich_lower: fb.sandwich_lower,
    }
}

fn unbalanced_section(inst: &Instance, ub: &least_core::UnbalancedBounds, ex: &least_core::Exactness) -> UnbalancedSection {
    UnbalancedSection {
        eps_tilde: ub.eps_tilde,
        eps_bar: ub.eps_bar,
        exact: ex.exact,
        k: ex.k.map(|k| inst.user_id(k)),
        violation: ex.violation.map(|s| inst.key(s)),
    }
}

/// The least-core section. `both` runs the full cross-checked analysis and
/// also returns the report for the shares section.
pub fn least_core_section(
    inst: &Instance,
    game: &Game,
    method: Method,
) -> Result<(LeastCoreSection, Option<LeastCoreReport>)> {
    let (clan_formula, clan_branch) = clan_formulas(inst)?;
    let companion = fee_free(inst)?;
    let companion_ref = companion.as_ref().map(|(g, c)| (g, *c));
    let keys = |v: &[Coalition]| v.iter().map(|s| inst.key(*s)).collect::<Vec<_>>();
    let dual = |w: &[(Coalition, Rational)]| w.iter().map(|(s, l)| (inst.key(*s), *l)).collect::<Payoffs>();
    match method {
        Method::Both => {
            let report = LeastCoreReport::analyze(game, companion_ref)?;
            let section = LeastCoreSection {
                method: method.to_string(),
                balanced: report.balanced,
                eps_star: Some(report.eps_star),
                eps_hat: Some(report.eps_hat),
                formula_exact: Some(report.formula_exact),
                argmin: keys(&report.argmin),
                s_hat: Some(inst.key(least_core::eps_hat(game).s_hat())),
                s_min: Some(inst.key(report.s_min)),
                eps_bar: report.eps_bar,
                bounds: report.fee_bounds.as_ref().map(bounds_section),
                unbalanced: report
                    .unbalanced
                    .as_ref()
                    .zip(report.exactness.as_ref())
                    .map(|(ub, ex)| unbalanced_section(inst, ub, ex)),
                clan_formula,
                clan_branch,
                allocation: Some(payoffs(inst, &report.primal_cert)),
                dual: Some(dual(&report.dual_cert)),
            };
            Ok((section, Some(report)))
        }
        Method::Formula => {
            let hat = least_core::eps_hat(game);
            let balanced = properties::check_balanced(game)?.holds;
            let (bounds, unbalanced) = if balanced {
                (Some(bounds_section(&least_core::bounds_with_fees(game, companion_ref)?)), None)
            } else {
                let ub = least_core::bounds_unbalanced(game)?;
                let ex = least_core::unbalanced_exactness(game)?;
                (None, Some(unbalanced_section(inst, &ub, &ex)))
            };
            let section = LeastCoreSection {
                method: method.to_string(),
                balanced,
                eps_star: None,
                eps_hat: Some(hat.value),
                formula_exact: None,
                argmin: keys(&hat.argmin),
                s_hat: Some(inst.key(hat.s_hat())),
                s_min: Some(inst.key(hat.s_min())),
                eps_bar: least_core::eps_bar(game),
                bounds,
                unbalanced,
                clan_formula,
                clan_branch,
                allocation: None,
                dual: None,
            };
            Ok((section, None))
        }
        Method::Lp => {
            let lp = least_core::least_core_lp(game)?;
            let section = LeastCoreSection {
                method: method.to_string(),
                balanced: !lp.eps_star.is_negative(),
                eps_star: Some(lp.eps_star),
                eps_hat: None,
                formula_exact: None,
                argmin: Vec::new(),
                s_hat: None,
                s_min: None,
                eps_bar: least_core::eps_bar(game),
                bounds: None,
                unbalanced: None,
                clan_formula: None,
                clan_branch: None,
                allocation: Some(payoffs(inst, &lp.allocation)),
                dual: Some(dual(&lp.dual)),
            };
            Ok((section, None))
        }
    }
}

pub fn shares_section(inst: &Instance, game: &Game, lc: &LeastCoreReport, mode: PartitionMode) -> Result<SharesSection> {
    let sh = SharesReport::analyze(game, lc, mode)?;
    Ok(SharesSection {
        eps_star: sh.eps_star,
        max_aggregator: sh.max_aggregator,
        min_aggregator: sh.min_aggregator,
        max_users: sh.max_users,
        s_min: sh.s_min.map(|s| inst.key(s)),
        equality: sh.equality,
        characterization: sh.characterization.map(|c| c.equal),
        max_closed_form: sh.max_closed_form,
        partition_mode: mode.to_string(),
        partition_bound: sh.partition_bound.bound,
        partition: sh.partition_bound.partition.iter().map(|b| inst.key(*b)).collect(),
        singleton_bound: sh.singleton_bound,
        max_allocation: payoffs(inst, &sh.max_cert),
        min_allocation: payoffs(inst, &sh.min_cert),
    })
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }
}

fn set(key: &str) -> String {
    format!("{{{key}}}")
}

fn opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn opt_set(v: &Option<String>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), |x| set(x))
}

fn verdict(holds: bool, witness: Option<String>) -> String {
    match (holds, witness) {
        (true, _) => "yes".into(),
        (false, Some(w)) => format!("no, {w}"),
        (false, None) => "no".into(),
    }
}

fn payoff_line(p: &Payoffs) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = &self.instance;
        let ids: Vec<String> = i.user_ids.iter().map(|u| u.to_string()).collect();
        writeln!(f, "instance: {} game, users {}, v(N) = {}", i.kind, ids.join(","), i.grand_value)?;
        if let Some(p) = &self.properties {
            writeln!(f, "\nproperties")?;
            let pair = |w: &Option<(String, String)>| w.as_ref().map(|(s, t)| format!("{} and {}", set(s), set(t)));
            writeln!(f, "  superadditive      {}", verdict(p.superadditive, pair(&p.superadditive_witness)))?;
            let mono = p.monotonic_witness.as_ref().map(|(s, i)| format!("adding {i} to {}", set(s)));
            writeln!(f, "  monotonic          {}", verdict(p.monotonic, mono))?;
            writeln!(f, "  convex             {}", verdict(p.convex, pair(&p.convex_witness)))?;
            writeln!(f, "  veto set           {}", set(&p.veto_set))?;
            writeln!(f, "  clan               {}", opt_set(&p.clan))?;
            writeln!(f, "  big boss           {}", opt(&p.big_boss))?;
            let bal = p.balanced_witness.as_ref().map(|s| format!("v({}) > v(N)", set(s)));
            writeln!(f, "  balanced           {}", verdict(p.balanced, bal))?;
            writeln!(f, "  totally balanced   {}", verdict(p.totally_balanced, None))?;
            writeln!(f, "  users-take-all in core  {}", verdict(p.users_take_all_in_core, None))?;
            writeln!(f, "  egalitarian in core     {}", verdict(p.egalitarian_in_core, None))?;
            if let Some(s) = &p.sesg {
                writeln!(f, "  closed forms: monotone {}, fee condition {}, big boss {}, balanced {}",
                    s.monotone_closed_form, s.monotone_fee_condition, opt(&s.big_boss_closed_form), opt(&s.balanced_fee_condition))?;
            }
        }
        if let Some(l) = &self.least_core {
            writeln!(f, "\nleast core ({})", l.method)?;
            writeln!(f, "  balanced           {}", verdict(l.balanced, None))?;
            if let Some(e) = &l.eps_star {
                writeln!(f, "  ε*                 {e}")?;
            }
            if let Some(e) = &l.eps_hat {
                writeln!(f, "  ε̂                  {e}")?;
                writeln!(f, "  Ŝ                  {}", opt_set(&l.s_hat))?;
                writeln!(f, "  S_min              {}", opt_set(&l.s_min))?;
                let argmin: Vec<String> = l.argmin.iter().map(|k| set(k)).collect();
                writeln!(f, "  argmin             {}", argmin.join(" "))?;
            }
            if let Some(x) = l.formula_exact {
                writeln!(f, "  ε* = ε̂             {}", verdict(x, None))?;
            }
            writeln!(f, "  ε̄                  {}", l.eps_bar)?;
            if let Some(b) = &l.bounds {
                let guarantee = if b.lower_guaranteed { "" } else { " (not guaranteed: game not monotonic)" };
                writeln!(f, "  bounds             [{}, {}]{guarantee}", b.lower, b.upper)?;
                if let Some(e0) = &b.eps0_star {
                    writeln!(f, "  ε*₀                {e0}  (fee-free bounds [{}, {}])", opt(&b.no_fee_lower), opt(&b.no_fee_upper))?;
                    writeln!(f, "  ε*₀ − c̄            {}  (c̄ = {})", opt(&b.sandwich_lower), opt(&b.max_fee))?;
                }
            }
            if let Some(u) = &l.unbalanced {
                writeln!(f, "  ε̃                  {}", u.eps_tilde)?;
                let detail = match (&u.k, &u.violation) {
                    (Some(k), Some(s)) => format!(" (k = {k}, fails at {})", set(s)),
                    (Some(k), None) => format!(" (k = {k})"),
                    (None, _) => " (Ŝ leaves out more than one user)".into(),
                };
                writeln!(f, "  ε̂ exact            {}{detail}", verdict(u.exact, None))?;
            }
            if let Some(c) = &l.clan_formula {
                writeln!(f, "  clan closed form   {c}{}", l.clan_branch.as_ref().map_or(String::new(), |b| format!(" ({b})")))?;
            }
            if let Some(x) = &l.allocation {
                writeln!(f, "  allocation         {}", payoff_line(x))?;
            }
            if let Some(d) = &l.dual {
                let w: Vec<String> = d.iter().map(|(s, v)| format!("{}:{v}", set(s))).collect();
                writeln!(f, "  dual weights       {}", w.join(" "))?;
            }
        }
        if let Some(s) = &self.shares {
            writeln!(f, "\naggregator shares (ε* = {})", s.eps_star)?;
            writeln!(f, "  M_a                {}", s.max_aggregator)?;
            writeln!(f, "  m_a                {}", s.min_aggregator)?;
            writeln!(f, "  M_U                {}", s.max_users)?;
            writeln!(f, "  m_a = M_a          {}", verdict(s.equality, None))?;
            if let Some(c) = s.characterization {
                writeln!(f, "  characterization   {}", verdict(c, None))?;
            }
            writeln!(f, "  S_min              {}", opt_set(&s.s_min))?;
            let blocks: Vec<String> = s.partition.iter().map(|b| set(b)).collect();
            writeln!(f, "  partition bound    {} ({}, {})", s.partition_bound, s.partition_mode, blocks.join(" "))?;
            writeln!(f, "  singleton bound    {}", s.singleton_bound)?;
            writeln!(f, "  M_a attained at    {}", payoff_line(&s.max_allocation))?;
            writeln!(f, "  m_a attained at    {}", payoff_line(&s.min_allocation))?;
        }
        Ok(())
    }
}
