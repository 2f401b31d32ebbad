//! Test varieties shared by the integration suites.

#![allow(dead_code)]

use toddkit::varieties::{
    abelian_variety, blow_up_point, product, projective_space, projective_space_named, BlowupPair,
    VarietyModel,
};

pub fn e_times_p1() -> VarietyModel {
    product(&abelian_variety(1), &projective_space_named(1, "y")).unwrap()
}

/// `A(1) × P¹` with its pi-classes renamed `u1, u2`.
pub fn relabelled_surface() -> VarietyModel {
    e_times_p1().relabel_pi(|a| a.replace('x', "u")).unwrap()
}

pub fn surfaces() -> Vec<VarietyModel> {
    vec![
        e_times_p1(),
        relabelled_surface(),
        projective_space(2),
        product(&projective_space(1), &projective_space_named(1, "k")).unwrap(),
        abelian_variety(2),
        blow_up_point(&e_times_p1()).unwrap().blown,
    ]
}

/// Base/blow-up pairs, including the blow-up of a blow-up and a surface with
/// designated classes in the top degree.
pub fn blowup_pairs() -> Vec<BlowupPair> {
    let once = blow_up_point(&e_times_p1()).unwrap();
    let twice = blow_up_point(&once.blown).unwrap();
    vec![
        once,
        blow_up_point(&relabelled_surface()).unwrap(),
        blow_up_point(&projective_space(2)).unwrap(),
        twice,
        blow_up_point(&abelian_variety(2)).unwrap(),
    ]
}

pub fn varieties() -> Vec<VarietyModel> {
    let mut v = vec![
        projective_space(0),
        projective_space(1),
        projective_space(3),
        abelian_variety(1),
        product(&projective_space(1), &projective_space(2)).unwrap(),
    ];
    v.extend(surfaces());
    v.extend(blowup_pairs().into_iter().map(|p| p.blown));
    v
}
