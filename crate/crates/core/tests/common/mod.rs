//! Shared fixtures for the integration suites.
#![allow(dead_code)] // each test binary uses a different slice of this

use abelicomp::field::FieldSpec;
use abelicomp::group::Group;
use abelicomp::restriction::{ClassSpec, RestrictionDigraph};

pub struct BuiltClass {
    pub name: String,
    pub group: Group,
    pub spec: ClassSpec,
    pub digraph: RestrictionDigraph,
}

pub fn small_groups(max_order: usize) -> Vec<Group> {
    let candidates: Vec<Vec<u64>> = vec![
        vec![2],
        vec![3],
        vec![4],
        vec![5],
        vec![6],
        vec![7],
        vec![8],
        vec![2, 2],
        vec![2, 3],
        vec![2, 4],
        vec![2, 2, 2],
    ];
    candidates
        .into_iter()
        .map(|m| Group::new(&m).unwrap())
        .filter(|g| g.order() <= max_order)
        .collect()
}

/// Every built-in class instance over the small groups: all window
/// parameters up to `max_d`, both parts modes where they exist, and the
/// field product classes over GF(4) and GF(5) (and GF(7) when it fits).
/// Instances whose digraph cannot be built (degenerate hypotheses) are
/// skipped.
pub fn built_in_classes(max_order: usize, max_d: usize) -> Vec<BuiltClass> {
    let mut out = Vec::new();
    let mut push = |name: String, group: &Group, spec: ClassSpec| {
        if let Ok(digraph) = RestrictionDigraph::build(group, spec.clone()) {
            out.push(BuiltClass {
                name,
                group: group.clone(),
                spec,
                digraph,
            });
        }
    };

    for group in small_groups(max_order) {
        let label = format!("Z{:?}", group.moduli());
        for d in 1..=max_d {
            push(format!("mullen(d={d}) over {label}"), &group, ClassSpec::mullen(d));
            push(
                format!("carlitz(d={d}) over {label}"),
                &group,
                ClassSpec::carlitz(d, false, false),
            );
            push(
                format!("carlitz-weak(d={d}) over {label}"),
                &group,
                ClassSpec::carlitz(d, true, false),
            );
            push(
                format!("carlitz-weak-first(d={d}) over {label}"),
                &group,
                ClassSpec::carlitz(d, true, true),
            );
            if d >= 2 {
                push(
                    format!("window-sum(d={d}) over {label}"),
                    &group,
                    ClassSpec::window_sum(d, false),
                );
                push(
                    format!("window-sum-weak(d={d}) over {label}"),
                    &group,
                    ClassSpec::window_sum(d, true),
                );
            }
        }
    }

    for (p, n) in [(2u64, 2usize), (5, 1), (7, 1)] {
        let field = FieldSpec::new(p, n, None).unwrap();
        if field.order() > max_order {
            continue;
        }
        let group = field.additive_group().clone();
        for d in 2..=max_d.max(2) {
            push(
                format!("product-ne-one(d={d}) over GF({})", field.order()),
                &group,
                ClassSpec::product_ne_one(field.clone(), d),
            );
        }
    }
    out
}
