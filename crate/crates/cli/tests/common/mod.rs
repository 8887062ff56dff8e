#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

const GRAPHS: &str = "core/tests/fixtures/graphs";
const GROUPOIDS: &str = "core/tests/fixtures/groupoids";
const INPUTS: &str = "cli/tests/inputs";

pub struct Case {
    pub name: &'static str,
    pub args: Vec<String>,
    pub exit: i32,
}

pub fn case(name: &'static str, exit: i32, args: &[&str]) -> Case {
    let args = args
        .iter()
        .map(|a| {
            a.replace("@g/", &format!("{GRAPHS}/"))
                .replace("@o/", &format!("{GROUPOIDS}/"))
                .replace("@i/", &format!("{INPUTS}/"))
        })
        .collect();
    Case { name, args, exit }
}

pub fn cases() -> Vec<Case> {
    vec![
        case("lpa_mul_one_loop", 0, &["lpa", "--graph", "@g/one_loop.graph", "mul", "v[e]", "v[e]"]),
        case("lpa_mul_orthogonal", 0, &["lpa", "--graph", "@g/two_loops.graph", "mul", "w[a]", "3 * v[b] + v[a]"]),
        case("lpa_mul_gaussian", 0, &["--ring", "Q(i)", "lpa", "--graph", "@g/toeplitz.graph", "mul", "i * v[b]", "w[b]"]),
        case("lpa_star", 0, &["lpa", "--graph", "@g/two_loops.graph", "star", "2 * v[a.b] + p[x]"]),
        case("lpa_verify_two_loops", 0, &["lpa", "--graph", "@g/two_loops.graph", "verify-relations"]),
        case("lpa_verify_toeplitz_z", 0, &["--ring", "Z", "lpa", "--graph", "@g/toeplitz.graph", "verify-relations"]),
        case("lpa_verify_dead_source", 0, &["lpa", "--graph", "@g/dead_source.graph", "verify-relations"]),
        case("lpa_bad_edge_line", 2, &["lpa", "--graph", "@i/bad_edge.graph", "verify-relations"]),
        case("lpa_unknown_edge", 2, &["lpa", "--graph", "@g/one_loop.graph", "mul", "v[q]", "p[x]"]),
        case("lpa_missing_graph", 3, &["lpa", "verify-relations"]),
        case("lpa_missing_file", 3, &["lpa", "--graph", "@g/absent.graph", "verify-relations"]),
        case("conv_compare_two_loops", 0, &["conv", "--graph", "@g/two_loops.graph", "compare", "--count", "1000", "--seed", "7"]),
        case("conv_compare_crossed_gaussian", 0, &["--ring", "Q(i)", "conv", "--graph", "@g/crossed.graph", "compare", "--count", "200"]),
        case("conv_compare_localized", 0, &["--ring", "Z[1/3]", "conv", "--graph", "@g/triangle_loop.graph", "compare", "--count", "200"]),
        case("conv_compare_empty", 0, &["conv", "--graph", "@g/one_loop.graph", "compare", "--count", "0"]),
        case("gpd_convolve_pair", 0, &["gpd", "--groupoid", "@o/pair2.gpd", "convolve", "1_1 + e12", "2 * e21"]),
        case("gpd_convolve_s3", 0, &["--ring", "Z", "gpd", "--groupoid", "@o/s3.gpd", "convolve", "r + 2 * s", "r + s"]),
        case("gpd_decompose_z2", 0, &["gpd", "--groupoid", "@o/z2.gpd", "decompose"]),
        case("gpd_decompose_pair_z2", 0, &["gpd", "--groupoid", "@o/pair2_z2.gpd", "decompose"]),
        case("gpd_decompose_z2_point", 0, &["gpd", "--groupoid", "@o/z2_point.gpd", "decompose"]),
        case("gpd_equiv_pair", 0, &["gpd", "--groupoid", "@o/pair2.gpd", "equiv-check", "--count", "25", "--seed", "3"]),
        case("gpd_equiv_z3_gaussian", 0, &["--ring", "Q(i)", "gpd", "--groupoid", "@o/z3.gpd", "equiv-check", "--count", "10", "--max-rank", "2"]),
        case("gpd_equiv_needs_field", 3, &["--ring", "Z", "gpd", "--groupoid", "@o/z2.gpd", "equiv-check"]),
        case("gpd_bad_compose", 2, &["gpd", "--groupoid", "@i/bad_compose.gpd", "decompose"]),
        case("hecke_assoc_p2", 0, &["hecke", "--p", "2", "assoc", "--levels", "3"]),
        case("hecke_assoc_p3", 0, &["--ring", "Z[1/3]", "hecke", "--p", "3", "assoc", "--levels", "2"]),
        case("hecke_compose", 0, &["--ring", "Z[1/2]", "hecke", "--p", "2", "compose", "p=2 k=0->1 [-3]", "p=2 k=1->2 [1, 1/2]"]),
        case("hecke_not_invertible", 3, &["--ring", "Z", "hecke", "--p", "2", "assoc"]),
        case("hecke_wrong_prime", 3, &["--ring", "Z[1/3]", "hecke", "--p", "2", "assoc", "--levels", "1"]),
        case("hecke_bad_values", 2, &["hecke", "--p", "2", "compose", "p=2 k=0->1 [1, 2]", "p=2 k=1->0 [1]"]),
        case("norm_groupoid_pair", 0, &["norm", "--groupoid", "@o/pair2.gpd", "1_1 + e12"]),
        case("norm_groupoid_unitary", 0, &["--ring", "Q(i)", "norm", "--groupoid", "@o/z2.gpd", "3/5 * 1_x + 4/5i * g1"]),
        case("norm_graph_projection", 0, &["norm", "--graph", "@g/one_loop.graph", "p[x]"]),
        case("norm_graph_sum", 0, &["norm", "--graph", "@g/one_loop.graph", "--depth", "4", "p[x] + v[e]"]),
        case("norm_graph_depth_too_small", 3, &["norm", "--graph", "@g/one_loop.graph", "--depth", "1", "v[e.e]"]),
        case("norm_needs_target", 3, &["norm", "p[x]"]),
        case("ring_unavailable", 3, &["--ring", "Z[1/5]", "hecke", "--p", "5", "assoc"]),
        case("ring_unknown", 2, &["--ring", "R", "gpd", "--groupoid", "@o/z2.gpd", "decompose"]),
    ]
}

pub fn crates_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).parent().unwrap().to_path_buf()
}

/// Exit status and the text compared against the golden file: the report
/// for exit codes 0 and 1, the diagnostic otherwise.
pub fn run(args: &[String]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_convalg"))
        .args(args)
        .current_dir(crates_dir())
        .output()
        .expect("binary runs");
    let code = out.status.code().expect("exit code");
    let text = if code <= 1 {
        String::from_utf8(out.stdout).unwrap()
    } else {
        assert!(out.stdout.is_empty());
        format!("exit {code}\n{}", String::from_utf8(out.stderr).unwrap())
    };
    (code, text)
}

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))
}
