use daeforms_cli::format::{
    parse_data, parse_rational, parse_system, parse_witness, write_system, Form, FormData, SystemFile, Witness,
};
use daeforms_core::linalg::{frac, Mat};
use daeforms_core::SystemTriple;

fn system(text: &str) -> SystemTriple {
    parse_system(text).unwrap().system
}

fn error(text: &str) -> String {
    parse_system(text).unwrap_err().to_string()
}

#[test]
fn rationals_are_reduced() {
    assert_eq!(parse_rational("4/6").unwrap(), frac(2, 3));
    assert_eq!(parse_rational("-0").unwrap(), frac(0, 1));
    assert_eq!(parse_rational("007").unwrap(), frac(7, 1));
    let big = parse_rational("123456789012345678901234567891/1024").unwrap();
    assert_eq!(big.to_string(), "123456789012345678901234567891/1024");
}

#[test]
fn malformed_rationals_are_rejected() {
    for bad in ["1/0", "1/-2", "-1/-2", "+1", "1e3", "0.5", "1 /2", "", "--1", "1/2/3"] {
        assert!(parse_rational(bad).is_err(), "{bad:?}");
    }
}

#[test]
fn integer_and_string_entries_mix() {
    let s = system("E = [[1, \"1/2\"]]\nA = [[\"-3\", 0]]\nB = [[2]]\n");
    assert_eq!(s.e(), &Mat::from_fn(1, 2, |_, j| if j == 0 { frac(1, 1) } else { frac(1, 2) }));
    assert_eq!(s.a().get(0, 0), &frac(-3, 1));
}

#[test]
fn errors_name_the_entry() {
    let msg = error("E = [[\"1\", \"0\"], [\"2\", \"1/0\"]]\nA = [[1, 0], [0, 1]]\nB = [[1], [1]]\n");
    assert!(msg.contains("E row 2 column 2"), "{msg}");
    assert!(msg.contains("zero denominator"), "{msg}");
    let msg = error("E = [[1, 2], [3]]\nA = [[1, 0], [0, 1]]\nB = [[1], [1]]\n");
    assert!(msg.contains("E row 2: expected 2 entries"), "{msg}");
    let msg = error("E = [[1.5]]\nA = [[1]]\nB = [[1]]\n");
    assert!(msg.contains("E row 1 column 1") && msg.contains("float"), "{msg}");
}

#[test]
fn shape_errors() {
    assert!(error("E = [[1]]\nA = [[1, 2]]\nB = [[1]]\n").contains("dimension"));
    assert!(error("E = [[1]]\nA = [[1]]\n").contains("missing key B"));
    assert!(error("E = [[1]]\nA = [[1]]\nB = []\n").contains("rows = .."));
    assert!(error("E = [[1]]\nA = [[1]]\nB = [[1]]\ne = [[1]]\n").contains("unknown key \"e\""));
    assert!(error("E = [[1]]\nA = [[1]]\nB = { rows = 1, cols = 2 }\n").contains("needs data"));
    assert!(error("E = [[1]]\nA = [[1]]\nB = { rows = 2, cols = 1, data = [[1]] }\n").contains("expected 2 rows"));
}

#[test]
fn empty_matrices_use_the_table_form() {
    let s = system("E = { rows = 0, cols = 2 }\nA = { rows = 0, cols = 2 }\nB = { rows = 0, cols = 0 }\n");
    assert_eq!(s.dims(), (0, 2, 0));
    let s = system("E = [[0]]\nA = [[1]]\nB = { rows = 1, cols = 0 }\n");
    assert_eq!(s.b().shape(), (1, 0));
}

#[test]
fn written_systems_read_back_identically() {
    let entries = ["0", "-1", "22/7", "-98765432109876543210/3", "5"];
    let pick = |k: usize| parse_rational(entries[k % entries.len()]).unwrap();
    for (l, n, m) in [(1, 1, 1), (3, 2, 0), (0, 2, 1), (2, 0, 0), (4, 3, 2)] {
        let file = SystemFile {
            name: Some("round trip".into()),
            description: Some("quotes \" and\nnewlines".into()),
            system: SystemTriple::new(
                Mat::from_fn(l, n, |i, j| pick(i + 2 * j)),
                Mat::from_fn(l, n, |i, j| pick(3 * i + j + 1)),
                Mat::from_fn(l, m, |i, j| pick(i * j + 4)),
            )
            .unwrap(),
        };
        let text = write_system(&file);
        assert_eq!(parse_system(&text).unwrap(), file, "{text}");
        assert_eq!(write_system(&parse_system(&text).unwrap()), text);
    }
}

const S1: &str = "S = [[1]]\nT = [[2]]\nV = [[1]]\nF_P = [[0]]\n";

#[test]
fn witness_kind_must_match_feedback_terms() {
    assert!(matches!(parse_witness(&format!("kind = \"P\"\n{S1}")).unwrap(), Witness::P(_)));
    let pd = format!("kind = \"PD\"\n{S1}F_D = [[\"1/2\"]]\n");
    assert!(matches!(parse_witness(&pd).unwrap(), Witness::PD(_)));
    let msg = parse_witness(&format!("kind = \"PD\"\n{S1}")).unwrap_err().to_string();
    assert!(msg.contains("requires F_D"), "{msg}");
    let msg = parse_witness(&format!("kind = \"P\"\n{S1}F_D = [[0]]\n")).unwrap_err().to_string();
    assert!(msg.contains("must not have F_D"), "{msg}");
    assert!(parse_witness(&format!("kind = \"Q\"\n{S1}")).is_err());
}

#[test]
fn singular_witness_is_rejected() {
    let msg = parse_witness("kind = \"P\"\nS = [[0]]\nT = [[1]]\nV = [[1]]\nF_P = [[0]]\n").unwrap_err();
    assert!(msg.to_string().contains("not invertible"), "{msg}");
}

#[test]
fn witness_may_sit_in_its_own_section() {
    let text = format!("E = [[1]]\nA = [[1]]\nB = [[1]]\n\n[witness]\nkind = \"P\"\n{S1}");
    assert!(matches!(parse_witness(&text).unwrap(), Witness::P(_)));
}

#[test]
fn form_data() {
    let pff = "alpha = [1]\nkappa = [2, 1]\nA_cbar = [[\"1\"]]\n";
    let FormData::Pff(d) = parse_data(pff, Form::Pff).unwrap() else { panic!() };
    assert_eq!((d.alpha, d.beta, d.kappa, d.zero_inputs), (vec![1], vec![], vec![2, 1], 0));
    assert!(parse_data("alpha = [0]\n", Form::Pff).unwrap_err().to_string().contains("positive"));
    assert!(parse_data("alpha = [1]\n", Form::Pdff).unwrap_err().to_string().contains("missing key r"));
    assert!(parse_data("alpha = [1]\nr = 1\nkappa = [1]\n", Form::Pdff).is_err());
    let q = "l = [2, 1, 4]\nn = [3, 1, 2]\nm = [1, 0, 2]\n";
    let FormData::Qpff(s) = parse_data(q, Form::Qpff).unwrap() else { panic!() };
    assert_eq!(s.to_string(), "Σ_{2,3,1} / Σ_{1,1,0} / Σ_{4,2,2}");
    let msg = parse_data(q, Form::Qpdff).unwrap_err().to_string();
    assert!(msg.contains("m: expected 2 entries, found 3"), "{msg}");
    let in_section = format!("E = [[1]]\n\n[blocks]\n{q}");
    assert!(matches!(parse_data(&in_section, Form::Qpff).unwrap(), FormData::Qpff(_)));
}
