//! Randomized invariants. Formulas come from the crate's seeded generator so
//! a failing case reprints from its seed.

use std::collections::BTreeMap;

use num::{BigUint, Signed, Zero};
use proptest::prelude::*;

use aaw_core::analysis::value_range;
use aaw_core::attributes::{attributes, lipschitz_map};
use aaw_core::eval::{eval, eval_std, Environment, DEFAULT_FRONTIER_CAP};
use aaw_core::model::{Element, Model, Ultracharge};
use aaw_core::parser::parse_formula;
use aaw_core::sample::{random_formula, rng};
use aaw_core::Rat;

const VARS: [&str; 3] = ["x", "y", "z"];

fn env_from(coords: &[u64; 3], model: &Model) -> Environment {
    let mut env = Environment::new();
    for (v, c) in VARS.iter().zip(coords) {
        env.insert(v.to_string(), Element::diagonal(&BigUint::from(*c), model.arity()));
    }
    env
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_format_round_trip(seed in any::<u64>()) {
        let f = random_formula(&mut rng(seed), 4, &VARS);
        let printed = f.to_string();
        let back = parse_formula(&printed).unwrap();
        prop_assert_eq!(&back, &f, "{}", printed);
        // printing is a normal form: a second trip is identical text
        prop_assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn value_within_static_bound(seed in any::<u64>(), coords in [0u64..5, 0u64..5, 0u64..5]) {
        let f = random_formula(&mut rng(seed), 3, &VARS);
        let b = attributes(&f).bound;
        for model in [Model::Standard, Model::Powermean(Ultracharge::uniform(2))] {
            let env = env_from(&coords, &model);
            let v = eval(&f, &env, &model, 4, DEFAULT_FRONTIER_CAP).unwrap().value;
            prop_assert!(v.abs() <= b, "{} = {} exceeds bound {}", f, v, b);
        }
    }

    #[test]
    fn single_variable_lipschitz(seed in any::<u64>(), coords in [0u64..5, 0u64..5, 0u64..5], bump in 0usize..3) {
        let f = random_formula(&mut rng(seed), 3, &VARS);
        let per_var = lipschitz_map(&f);
        let var = VARS[bump];
        let model = Model::Standard;
        let env = env_from(&coords, &model);
        let mut moved = env.clone();
        let mut c2 = coords;
        c2[bump] += 1;
        moved.insert(var.to_string(), Element::scalar(c2[bump]));
        let a = eval(&f, &env, &model, 4, DEFAULT_FRONTIER_CAP).unwrap().value;
        let b = eval(&f, &moved, &model, 4, DEFAULT_FRONTIER_CAP).unwrap().value;
        // moving one variable a distance of 1 moves the value by at most
        // that variable's constant
        let l = per_var.get(var).cloned().unwrap_or_else(Rat::zero);
        prop_assert!((a - b).abs() <= l, "{} not {}-Lipschitz in {}", f, l, var);
    }

    #[test]
    fn standard_value_lands_in_range(seed in any::<u64>(), coords in [0u64..5, 0u64..5, 0u64..5]) {
        let f = random_formula(&mut rng(seed), 3, &VARS);
        if let Ok(range) = value_range(&f) {
            let mut env: BTreeMap<String, BigUint> = BTreeMap::new();
            for (v, c) in VARS.iter().zip(&coords) {
                env.insert(v.to_string(), BigUint::from(*c));
            }
            let v = eval_std(&f, &mut env, 4, DEFAULT_FRONTIER_CAP).unwrap().value;
            prop_assert!(range.contains(&v), "{} = {} outside range", f, v);
        }
    }

    #[test]
    fn powermean_value_within_range_hull(seed in any::<u64>(), coords in [0u64..4, 0u64..4, 0u64..4]) {
        let f = random_formula(&mut rng(seed), 3, &VARS);
        if let Ok(range) = value_range(&f) {
            let lo = range.set.iter().next().unwrap().clone();
            let hi = range.set.iter().last().unwrap().clone();
            let model = Model::Powermean(Ultracharge::uniform(3));
            let mut env = Environment::new();
            // non-diagonal elements so the coordinates genuinely differ
            for (i, v) in VARS.iter().enumerate() {
                let c = coords[i];
                env.insert(v.to_string(), Element::from_u64s(&[c, c + 1, 2 * c]));
            }
            let v = eval(&f, &env, &model, 4, DEFAULT_FRONTIER_CAP).unwrap().value;
            prop_assert!(lo <= v && v <= hi, "{} = {} outside [{}, {}]", f, v, lo, hi);
        }
    }
}
