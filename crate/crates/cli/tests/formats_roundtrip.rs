//! Parsing of the fixture formats and serialize/parse round-trips.

use lfgt_cli::formats::{
    self, group_from_file, hom_from_file, lattice_from_file, lsubset_from_file, parse_text,
};
use lfgt_cli::workspace::Workspace;
use lfgt_core::verify::{gen_instance, InstanceSpec};

fn parse_lattice(text: &str) -> Result<lfgt_core::Lattice, lfgt_cli::error::CliError> {
    lattice_from_file(&parse_text("<mem>", text)?)
}

#[test]
fn minimal_lattice_file() {
    let l = parse_lattice("[lattice]\nelements = 0 1\ncovers = 0<1\n").unwrap();
    assert_eq!(l.len(), 2);
    assert_eq!(l.name(l.bottom()), "0");
}

#[test]
fn undeclared_cover_name_is_a_syntax_error() {
    let err = parse_lattice("[lattice]\nelements = 0 1\ncovers = 0<2\n").unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("unknown lattice element"), "{msg}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn malformed_cover_reports_its_line() {
    let err = parse_lattice("[lattice]\nelements = 0 1\ncovers = 0-1\n").unwrap_err();
    assert!(err.to_string().contains(":3:"), "{err}");
}

#[test]
fn permutation_group_file_builds_the_symmetric_group() {
    let file = parse_text(
        "<mem>",
        "[group]\nkind = permutation\ndegree = 4\ngenerators = (1 2), (1 2 3 4)\n",
    )
    .unwrap();
    let g = group_from_file(&file).unwrap();
    assert_eq!(g.len(), 24);
}

#[test]
fn out_of_range_generator_point_is_an_error() {
    let file = parse_text(
        "<mem>",
        "[group]\nkind = permutation\ndegree = 4\ngenerators = (1 5)\n",
    )
    .unwrap();
    let err = group_from_file(&file).unwrap_err();
    assert!(err.to_string().contains("out of range"), "{err}");
}

#[test]
fn trivial_table_group_file() {
    let file = parse_text("<mem>", "[group]\nkind = table\nelements = e\ntable = e\n").unwrap();
    assert_eq!(group_from_file(&file).unwrap().len(), 1);
}

#[test]
fn subset_files_require_totality_or_a_default() {
    let mut ws = Workspace::new();
    let file = parse_text(
        "<mem>",
        "[lsubset]\ngroup = C(2)\nlattice = chain(2)\nmap = 0:1\n",
    )
    .unwrap();
    let err = lsubset_from_file(&file, &mut ws).unwrap_err();
    assert!(err.to_string().contains("default"), "{err}");

    let file = parse_text(
        "<mem>",
        "[lsubset]\ngroup = C(2)\nlattice = chain(2)\nmap = 0:1, 1:0\n",
    )
    .unwrap();
    assert!(lsubset_from_file(&file, &mut ws).is_ok());

    let file = parse_text(
        "<mem>",
        "[lsubset]\ngroup = C(2)\nlattice = chain(2)\ndefault = 1\n",
    )
    .unwrap();
    let constant = lsubset_from_file(&file, &mut ws).unwrap();
    assert!(constant.values().iter().all(|&v| v == 1));
}

#[test]
fn multi_line_maps_continue_the_previous_value() {
    let mut ws = Workspace::new();
    let file = parse_text(
        "<mem>",
        "[lsubset]\ngroup = C(3)\nlattice = chain(2)\ndefault = 0\nmap = 0:1,\n  1:1,\n  2:1\n",
    )
    .unwrap();
    let s = lsubset_from_file(&file, &mut ws).unwrap();
    assert!(s.values().iter().all(|&v| v == 1));
}

#[test]
fn unknown_reference_is_reported() {
    let mut ws = Workspace::new();
    let file = parse_text(
        "<mem>",
        "[lsubset]\ngroup = NoSuchGroup\nlattice = chain(2)\ndefault = 0\n",
    )
    .unwrap();
    let err = lsubset_from_file(&file, &mut ws).unwrap_err();
    assert!(matches!(
        err,
        lfgt_cli::error::CliError::UnknownReference(_)
    ));
}

#[test]
fn hom_files_are_validated() {
    let mut ws = Workspace::new();
    let file = parse_text(
        "<mem>",
        "[hom]\nsource = C(4)\ntarget = C(2)\nmap = 0:0, 1:1, 2:0, 3:1\n",
    )
    .unwrap();
    let hom = hom_from_file(&file, &mut ws).unwrap();
    assert!(hom.is_surjective());

    let file = parse_text(
        "<mem>",
        "[hom]\nsource = C(4)\ntarget = C(2)\nmap = 0:0, 1:1, 2:1, 3:1\n",
    )
    .unwrap();
    assert!(hom_from_file(&file, &mut ws).is_err());
}

#[test]
fn serialized_forms_reparse_to_equal_values() {
    for seed in 0..40u64 {
        let spec = InstanceSpec::new(seed, 10, 5);
        let inst = gen_instance(&spec).unwrap();

        let lat_text = formats::lattice_to_text("L", &inst.lattice);
        let lat_file = parse_text("<lat>", &lat_text).unwrap();
        assert_eq!(lattice_from_file(&lat_file).unwrap(), *inst.lattice);

        let grp_text = formats::group_to_text("G", &inst.group);
        let grp_file = parse_text("<grp>", &grp_text).unwrap();
        assert_eq!(group_from_file(&grp_file).unwrap(), *inst.group);

        let mut ws = Workspace::new();
        let mut load = |text: &str| {
            let dir = std::env::temp_dir().join(format!("lfgt-rt-{seed}-{}", text.len()));
            std::fs::create_dir_all(&dir).unwrap();
            let path = dir.join("f.txt");
            std::fs::write(&path, text).unwrap();
            ws.load_path(path.to_str().unwrap()).unwrap();
        };
        load(&lat_text);
        load(&grp_text);
        let sub_text = formats::lsubset_to_text("eta", &inst.eta, "G", "L");
        let sub_file = parse_text("<sub>", &sub_text).unwrap();
        let reparsed = lsubset_from_file(&sub_file, &mut ws).unwrap();
        assert_eq!(reparsed, inst.eta);
    }
}

#[test]
fn failure_instances_serialize_with_every_carrier() {
    let spec = InstanceSpec {
        seed: 3,
        max_group_order: 6,
        max_lattice_size: 3,
        chain_only: false,
        with_hom: true,
        nilpotent_ambient: false,
    };
    let inst = gen_instance(&spec).unwrap();
    let text = formats::instance_to_text(&inst);
    assert!(text.contains("[lattice]"));
    assert!(text.contains("[group]"));
    assert!(text.contains("[lsubset]"));
    if inst.hom.is_some() {
        assert!(text.contains("[hom]"));
    }
}
