//! Premium and protection legs of single paths, both spread estimators, and
//! the closed form for independent names.
//!
//! cargo run --example leg_valuation

use ftd_basket::copula::DefaultTimeVector;
use ftd_basket::pricing::{
    analytic_independent_spread, default_schedule, spread_estimator_paper, spread_estimator_standard,
    value_path, BasketSpec, DiscountCurve, PathLegs,
};
use ftd_basket::survival::CreditName;

fn main() -> ftd_basket::Result<()> {
    let names = vec![CreditName::new("A", 0.2, 0.2)?, CreditName::new("B", 0.2, 0.4)?];
    let basket = BasketSpec::new(names, 5.0, default_schedule(5.0, 0.5)?)?;
    let curve = DiscountCurve::flat(0.05)?;

    for times in [vec![1.2, 7.0], vec![9.0, 3.0], vec![0.3, 0.4], vec![6.0, 8.0]] {
        let o = value_path(DefaultTimeVector(times.clone()), &basket, &curve)?;
        println!(
            "T = {times:?}: first {} at {}, premium PV {:.6}, protection PV {:.6}",
            basket.names()[o.first_index].id,
            o.first_time,
            o.premium_pv,
            o.protection_pv
        );
    }

    let legs = [
        PathLegs { premium_pv: 2.0, protection_pv: 1.0 },
        PathLegs { premium_pv: 0.0, protection_pv: 0.8 },
    ];
    println!(
        "\nmean of ratios {:.3}, ratio of means {:.3}",
        spread_estimator_paper(&legs)?.spread,
        spread_estimator_standard(&legs, 100)?.spread
    );

    let schedule = default_schedule(5.0, 0.5)?;
    println!(
        "independent 5-name basket, h = 0.2, R = 0.2, r = 0.05: break-even spread {:.7}",
        analytic_independent_spread(5, 0.2, 0.2, 0.05, &schedule, 5.0)?
    );
    Ok(())
}
