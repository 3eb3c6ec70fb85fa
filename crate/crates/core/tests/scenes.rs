use std::path::PathBuf;

use genformal::examples::{build_blowup, build_cpn, Scene};
use genformal::scalars::Qi;

fn shipped(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenes").join(format!("{name}.json"));
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn shipped_scenes_match_builders() {
    let c = Qi::from_frac(1, 100);
    for (name, built) in [("cp3", build_cpn(3, &c).unwrap()), ("blowup3", build_blowup(3, None, &c).unwrap())] {
        let loaded = Scene::from_json(&shipped(name)).unwrap();
        assert_eq!(loaded, built, "{name}");
        assert_eq!(loaded.content_hash().unwrap(), built.content_hash().unwrap());
    }
}

#[test]
fn every_shipped_scene_round_trips() {
    for name in ["cp3", "blowup3", "broken_moment", "cp3_flat", "cp3_nonholomorphic", "cp3_nonisolated", "hodge_pair"] {
        let s = Scene::from_json(&shipped(name)).unwrap();
        let again = Scene::from_json(&s.to_json().unwrap()).unwrap();
        assert_eq!(s, again, "{name}");
    }
}
