"""Command-line client: rendering, exit codes, seeds, output routing."""

import json

import pytest
from click.testing import CliRunner

from cli_cases import CORPUS, run_case
from qnalg.cli import main


def invoke(*argv):
    return CliRunner().invoke(main, list(argv))


@pytest.mark.parametrize(
    "argv,expected", CORPUS, ids=lambda v: v[0] if isinstance(v, list) else None
)
def test_corpus_exit_codes(argv, expected):
    code, _, _ = run_case(argv)
    assert code == expected


def test_corpus_covers_every_subcommand_and_exit():
    assert sorted(argv[0] for argv, _ in CORPUS) == sorted(
        c for c in main.commands if c != "serve"
    )
    assert {code for _, code in CORPUS} == {0, 1, 2, 3}


@pytest.mark.parametrize(
    "argv,expected", CORPUS, ids=lambda v: v[0] if isinstance(v, list) else None
)
def test_corpus_byte_determinism(argv, expected):
    assert run_case(argv) == run_case(argv)


def test_normalize_prints_canonical_form():
    res = invoke("normalize", "--n", "2", "z{1},{2}*z{},{1} - z{2},{1}*z{},{2}")
    assert res.exit_code == 0
    assert res.stdout == "0\n"
    assert res.stderr == ""


def test_equal_reports_difference_and_exit_one():
    res = invoke("equal", "--n", "2", "r{1}r{2}", "r{2}r{1}")
    assert res.exit_code == 1
    assert res.stdout == "not equal\ndifference: r{1}r{2} - r{2}r{1}\n"
    res = invoke(
        "equal", "--n", "2", "z{1},{2} + z{},{1}", "z{2},{1} + z{},{2}"
    )
    assert res.exit_code == 0
    assert res.stdout == "equal\n"


def test_parse_error_goes_to_stderr_with_position():
    res = invoke("normalize", "--n", "2", "z{1},{1}")
    assert res.exit_code == 2
    assert res.stdout == ""
    assert res.stderr == (
        "error [parse]: generator element must lie outside its subset"
        " (at position 5)\n"
    )


def test_resource_error_exits_two():
    res = invoke("enumerate-basis", "--n", "2", "--max-degree", "25")
    assert res.exit_code == 2
    assert res.stderr == "error [resource]: degree bound 25 exceeds 24\n"


def test_genericity_error_exits_three():
    res = invoke("factor-roots", "--ring", "rational", "--roots", "1;1")
    assert res.exit_code == 3
    assert res.stderr.startswith("error [genericity]: x_{1},2 undefined")


def test_seed_notice_only_when_inputs_are_drawn():
    res = invoke("evaluate", "--n", "2", "--ring", "quat", "r{1}")
    assert res.exit_code == 0
    assert res.stderr == "notice: no --seed given; using seed 0\n"
    with_seed = invoke("evaluate", "--n", "2", "--ring", "quat", "--seed", "0", "r{1}")
    assert with_seed.stderr == ""
    assert with_seed.stdout == res.stdout
    explicit = invoke(
        "evaluate", "--n", "2", "--ring", "quat", "--roots", "i; j", "z{1},{2}"
    )
    assert explicit.stderr == ""
    assert explicit.stdout == "roots: i; j\nvalue: -i\n"


def test_factor_roots_text_layout():
    res = invoke("factor-roots", "--ring", "quat", "--roots", "i;j")
    assert res.exit_code == 0
    assert res.stdout == (
        "polynomial: t^2 + (1)\n"
        "coefficients: 1; 0; 1\n"
        "ordering 1,2: (t - [-i])  (t - [i])\n"
        "ordering 2,1: (t - [-j])  (t - [j])\n"
    )


def test_vieta_text_layout():
    res = invoke("vieta", "--ring", "quat", "--roots", "i;j")
    assert res.exit_code == 0
    assert res.stdout == "sums: 1; 0; 1\ncoefficients: 1; 0; 1\nmatch: yes\n"


def test_diff_factor_text_layout():
    res = invoke("diff-factor", "--ring", "ratfunc", "--fs", "1/x;3/x")
    assert res.exit_code == 0
    assert res.stdout == (
        "operator: D^2 + ((-3)/(x))*D + ((3)/(x^2))\n"
        "coefficients: 1; (-3)/(x); (3)/(x^2)\n"
        "ordering 1,2: (D - [(2)/(x)])  (D - [(1)/(x)])\n"
        "ordering 2,1: (D - [0])  (D - [(3)/(x)])\n"
    )


def test_miura_text_layout():
    res = invoke("miura", "--flag", "x;x^2")
    assert res.exit_code == 0
    assert res.stdout == (
        "operator: D^2 + ((-2)/(x))*D + ((2)/(x^2))\n"
        "factors b_k: (1)/(x); (1)/(x)\n"
        "annihilates: yes; yes\n"
    )


def test_enumerate_basis_listing_ends_with_count():
    res = invoke("enumerate-basis", "--n", "2", "--max-degree", "2")
    lines = res.stdout.splitlines()
    assert lines[0] == "()"
    assert lines[-1] == "count: 9"
    assert "({1,2},{1})" in lines
    assert len(lines) == 10


def test_symfun_and_specialize_render_plain_text():
    res = invoke("symfun", "--n", "3", "--k", "2", "--subset", "{1,2,3}")
    assert res.exit_code == 0
    assert res.stdout == (
        "r{1,2,3}r{1,2} - r{1,2}r{1,2} + r{1,2}r{1} - r{1}r{1}\n"
    )
    res = invoke("specialize", "--n", "2", "--map", "psi", "r{1,2}")
    assert res.stdout == "v2 + v1\n"


def test_json_format_is_sorted_parseable_json():
    res = invoke(
        "normalize", "--n", "2", "--format", "json", "r{1,2}r{1}"
    )
    assert res.exit_code == 0
    body = json.loads(res.stdout)
    assert body["canonical"] == "r{1,2}r{1}"
    assert list(body) == sorted(body)


def test_out_option_writes_file_instead_of_stdout(tmp_path):
    target = tmp_path / "basis.txt"
    res = invoke(
        "enumerate-basis", "--n", "2", "--max-degree", "2", "--out", str(target)
    )
    assert res.exit_code == 0
    assert res.stdout == ""
    assert target.read_text().splitlines()[-1] == "count: 9"


def test_verify_relations_all_targets_report_success():
    for extra in (
        ["--target", "qn", "--n", "2"],
        ["--target", "roots", "--ring", "quat", "--n", "2", "--seed", "5"],
        ["--target", "diff", "--ring", "mat2", "--n", "2", "--seed", "5"],
    ):
        res = invoke("verify-relations", *extra)
        assert res.exit_code == 0, res.stderr
        assert res.stdout == "all relations hold\n"


def test_check_rs_reports_commuting_pairs():
    res = invoke("check-rs", "--n", "2")
    assert res.exit_code == 0
    assert res.stdout == "all pairs commute\n"


def test_bad_subset_literal_is_usage_error():
    res = invoke("symfun", "--n", "2", "--k", "1", "--subset", "{a}")
    assert res.exit_code == 2
    assert "bad subset literal" in res.stderr


def test_help_lists_every_command():
    res = invoke("--help")
    assert res.exit_code == 0
    for name in main.commands:
        assert name in res.stdout
