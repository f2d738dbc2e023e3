"""Presentation parsing and end-to-end runs of every subcommand."""

import json

import pytest

from slopekit.cli import (
    PresentationParseError,
    load_presentation,
    main,
    parse_presentation,
    presentation_from_json_dict,
)
from slopekit.group_core import GroupPresentation, Word, torus_group, trefoil_group

TORUS_TEXT = "generators: a b\nrelator: a b A B\n"
TREFOIL_TEXT = "generators: x y\nrelator: x y x Y X Y\n"
GENUS2_TEXT = "generators: a b c d\nrelator: a b A B c d C D\n"


# ---------------------------------------------------------------------------
# Parsing


def test_parse_presentation_torus():
    assert parse_presentation(TORUS_TEXT) == torus_group()


def test_parse_presentation_trefoil():
    assert parse_presentation(TREFOIL_TEXT) == trefoil_group()


def test_parse_skips_blanks_and_comments():
    text = "# the torus group\n\ngenerators: a b\n\nrelator: a b A B\n"
    assert parse_presentation(text) == torus_group()


@pytest.mark.parametrize(
    "source, fragment",
    [
        ("generators: a\nrelator: a q\n", "line 2: unknown letter 'q'"),
        ("relator: a\n", "line 1: relator before the generators line"),
        ("generators: a b\nrelator: a A\n", "line 2: relator reduces to the empty word"),
        ("generators: a a\n", "line 1: duplicate generator"),
        ("generators: a b\ngenerators: c\n", "line 2: duplicate generators line"),
        ("generators: a\nrelator: ab\n", "line 2: invalid token"),
        ("generators: A\n", "line 1: generator names"),
        ("nonsense\n", "line 1: expected"),
        ("", "missing generators line"),
    ],
)
def test_parse_errors_carry_line_numbers(source, fragment):
    with pytest.raises(PresentationParseError) as err:
        parse_presentation(source)
    assert fragment in str(err.value)


def test_presentation_json_mirror():
    data = {"generators": ["a", "b"], "relators": [["a", "b", "A", "B"]]}
    assert presentation_from_json_dict(data) == torus_group()
    # relators may also be given as strings
    data = {"generators": ["x", "y"], "relators": ["x y x Y X Y"]}
    assert presentation_from_json_dict(data) == trefoil_group()
    with pytest.raises(PresentationParseError):
        presentation_from_json_dict({"generators": ["a"]})


def test_load_presentation_sniffs_format(tmp_path):
    text_path = tmp_path / "torus.txt"
    text_path.write_text(TORUS_TEXT)
    json_path = tmp_path / "torus.json"
    json_path.write_text(json.dumps({"generators": ["a", "b"], "relators": [["a", "b", "A", "B"]]}))
    assert load_presentation(str(text_path)) == load_presentation(str(json_path)) == torus_group()


# ---------------------------------------------------------------------------
# Subcommands


@pytest.fixture
def torus_file(tmp_path):
    path = tmp_path / "torus.txt"
    path.write_text(TORUS_TEXT)
    return str(path)


@pytest.fixture
def genus2_file(tmp_path):
    path = tmp_path / "genus2.txt"
    path.write_text(GENUS2_TEXT)
    return str(path)


@pytest.fixture
def trefoil_file(tmp_path):
    path = tmp_path / "trefoil.txt"
    path.write_text(TREFOIL_TEXT)
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_abelianize_text_and_json(capsys, torus_file):
    code, out, _ = run_cli(capsys, "abelianize", "--input", torus_file)
    assert code == 0
    assert out == "free rank: 2\ntorsion: (none)\n"
    code, out, _ = run_cli(capsys, "abelianize", "--input", torus_file, "--format", "json")
    assert code == 0
    assert json.loads(out) == {"free_rank": 2, "torsion": []}


def test_alexander_symbolic(capsys, torus_file):
    code, out, _ = run_cli(capsys, "alexander", "--input", torus_file)
    assert code == 0
    assert out == "variables: 2\n[1 - t2, -1 + t1]\n"
    code, out, _ = run_cli(capsys, "alexander", "--input", torus_file, "--format", "json")
    data = json.loads(out)
    assert data["rows"] == 1 and data["cols"] == 2 and data["variables"] == 2
    assert data["entries"][0][0] == [
        {"exponents": [0, 0], "coefficient": 1},
        {"exponents": [0, 1], "coefficient": -1},
    ]


def test_alexander_at_character(capsys, trefoil_file):
    code, out, _ = run_cli(capsys, "alexander", "--input", trefoil_file, "--char", "6:1")
    assert code == 0
    assert "[0, 0]" in out
    code, out, _ = run_cli(
        capsys, "alexander", "--input", trefoil_file, "--char", "6:1", "--format", "json"
    )
    data = json.loads(out)
    assert data["character"] == {"modulus": 6, "exponents": [1]}
    assert data["entries"][0][0]["coefficients"] == ["0", "0"]


def test_scan_subcommand(capsys, torus_file):
    code, out, _ = run_cli(capsys, "scan", "--input", torus_file, "--max-order", "4")
    assert code == 0
    assert "nontrivial entries: 0" in out and "exponent: 1" in out
    code, out, _ = run_cli(
        capsys, "scan", "--input", torus_file, "--max-order", "4", "--format", "json"
    )
    data = json.loads(out)
    assert data == {"scan_bound": 4, "b1": 2, "entries": [], "exponent": 1}


def test_cover_b1_agreement(capsys, genus2_file):
    code, out, _ = run_cli(
        capsys, "cover-b1", "--input", genus2_file, "--cyclic", "3", "--weights", "1,0,0,0"
    )
    assert code == 0
    assert "hironaka b1: 8" in out
    assert "reidemeister-schreier b1: 8" in out
    assert "routes agree: yes" in out


def test_cover_b1_mismatch_is_fatal(capsys, genus2_file):
    code, out, err = run_cli(
        capsys,
        "cover-b1", "--input", genus2_file, "--cyclic", "3", "--weights", "1,0,0,0",
        "--max-order", "2",
    )
    assert code == 1
    assert "routes agree: NO" in out
    error = json.loads(err)
    assert "scan bound 2 is below the deck group exponent 3" in error["error"]


def test_cover_b1_epimorphism_file(capsys, genus2_file, tmp_path):
    epi_path = tmp_path / "epi.json"
    epi_path.write_text(json.dumps({"factors": [2, 2], "matrix": [[1, 0, 0, 0], [0, 1, 0, 0]]}))
    code, out, _ = run_cli(
        capsys, "cover-b1", "--input", genus2_file, "--epimorphism", str(epi_path),
        "--format", "json",
    )
    assert code == 0
    data = json.loads(out)
    assert data["hironaka_b1"] == data["reidemeister_schreier_b1"] == 10
    assert data["agree"] is True


def test_invariants_subcommand(capsys):
    code, out, _ = run_cli(capsys, "invariants", "--d", "1", "--k", "1")
    assert code == 0
    assert "K2=162 chi=20 q=2 pg=21" in out
    assert "slope: 81/10" in out
    code, out, _ = run_cli(capsys, "invariants", "--d", "2", "--k", "1", "--format", "json")
    data = json.loads(out)
    assert data["slope"] == "90/11" and data["geography_ok"] is True


def test_invariants_rejects_unknown_profile(capsys):
    code, _, err = run_cli(capsys, "invariants", "--d", "1", "--k", "1", "--input", "other")
    assert code == 1
    assert "cartwright-steger" in json.loads(err)["error"]


def test_density_certificate_csv(capsys):
    code, out, _ = run_cli(capsys, "density", "--epsilon", "1/4", "--max-denominator", "8")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "p,q,target_num,target_den,e,n,d,k,slope_num,slope_den,gap_num,gap_den"
    assert len(lines) == 22  # header + one row per Farey target of order 8


def test_density_single_target(capsys):
    code, out, _ = run_cli(
        capsys, "density", "--epsilon", "1/1000", "--target", "1/2", "--format", "json"
    )
    assert code == 0
    data = json.loads(out)
    assert len(data["entries"]) == 1
    entry = data["entries"][0]
    assert entry["n"] == 14 and entry["d"] == 253 and entry["k"] == 28
    assert entry["gap"] == "1/1010"


def test_density_infeasible_exit(capsys):
    code, _, err = run_cli(capsys, "density", "--epsilon", "2", "--max-denominator", "1")
    assert code == 1
    assert json.loads(err)["type"] == "NetInfeasibleError"


def test_density_plot(capsys, tmp_path):
    plot = tmp_path / "slopes.svg"
    code, _, _ = run_cli(
        capsys, "density", "--epsilon", "1/4", "--max-denominator", "8",
        "--plot", str(plot),
    )
    assert code == 0
    content = plot.read_text()
    assert content.startswith("<svg ") and content.rstrip().endswith("</svg>")


def test_out_flag_writes_file(capsys, torus_file, tmp_path):
    out_path = tmp_path / "h1.json"
    code, out, _ = run_cli(
        capsys, "abelianize", "--input", torus_file, "--format", "json",
        "--out", str(out_path),
    )
    assert code == 0 and out == ""
    assert json.loads(out_path.read_text()) == {"free_rank": 2, "torsion": []}


def test_byte_identical_outputs(capsys, genus2_file, monkeypatch):
    args = ["scan", "--input", genus2_file, "--max-order", "3", "--format", "json"]
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second
    monkeypatch.setenv("SLOPEKIT_THREADS", "4")
    _, threaded, _ = run_cli(capsys, *args)
    assert threaded == first


def test_bad_thread_env(capsys, torus_file, monkeypatch):
    monkeypatch.setenv("SLOPEKIT_THREADS", "many")
    code, _, err = run_cli(capsys, "scan", "--input", torus_file, "--max-order", "2")
    assert code == 2
    assert "SLOPEKIT_THREADS" in json.loads(err)["error"]


def test_missing_input_file(capsys):
    code, _, err = run_cli(capsys, "abelianize", "--input", "/nonexistent/file.txt")
    assert code == 1
    assert json.loads(err)["type"] == "FileNotFoundError"


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["density", "--epsilon", "1/4"])  # neither target nor denominator
    assert exit_info.value.code == 2
    with pytest.raises(SystemExit) as exit_info:
        main(["cover-b1", "--input", "x.txt"])  # no epimorphism data
    assert exit_info.value.code == 2
