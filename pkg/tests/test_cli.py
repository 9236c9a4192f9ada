import json
import subprocess
import sys
from pathlib import Path

import pytest

from nilsect import (
    IntersectionInstance,
    OrbitInstance,
    ParseError,
    ValidationError,
    load_instance_file,
    parse_instance,
    parse_instance_text,
    serialize_instance,
)
from nilsect.cli import main, reverify_report, run

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

UT3 = """
version 1
group ut-q 3
matrix x
1 1 0
0 1 0
0 0 1
matrix y
1 0 0
0 1 1
0 0 1
semigroup A x
semigroup B y
problem intersection A B
"""

SQRT2 = """
version 1
group heisenberg-k 3 minpoly 1 0 -2
element u
a 1,0
b 0,0
c 0,0
element v
a 0,1
b 1,0
c 0,1/2
semigroup A u v
semigroup B v
problem intersection A B
option oracle-depth 6
"""

PRODUCT = """
version 1
group product
factor heisenberg-k 3 minpoly 1 0 -2
factor heisenberg-k 3 minpoly 1 1
element g
factor 1
a 0,1
b 0,0
c 0,0
factor 2
a 2
b 3
c 0
semigroup A g
problem intersection A A
"""

ORBIT = """
version 1
group ut-q 3
matrix e
1 0 0
0 1 0
0 0 1
matrix x
1 1 0
0 1 0
0 0 1
matrix y
1 0 0
0 1 1
0 0 1
matrix z
1 0 1
0 1 0
0 0 1
semigroup G x y
semigroup H x y
problem orbit e z G H
"""


def test_parse_basic():
    inst_file = parse_instance_text(UT3)
    built = inst_file.build()
    assert isinstance(built, IntersectionInstance)
    assert built.n == 3 and built.M == 2


def test_parse_sqrt2_embeds_to_dimension_6():
    inst_file = parse_instance_text(SQRT2)
    assert inst_file.dimension == 6
    built = inst_file.build()
    assert built.n == 6


def test_parse_product_group_block_diagonal():
    inst_file = parse_instance_text(PRODUCT)
    # 3*2 + 3*1 = 9
    assert inst_file.dimension == 9
    g = inst_file.elements["g"]
    assert g[0, 3] == 2  # sqrt(2) block sits in the first factor
    assert g[6, 7] == 2  # second factor is rational (degree 1)


def test_parse_orbit():
    built = parse_instance_text(ORBIT).build()
    assert isinstance(built, OrbitInstance)


def test_round_trip():
    for text in (UT3, SQRT2, PRODUCT, ORBIT):
        inst_file = parse_instance_text(text)
        again = parse_instance_text(serialize_instance(inst_file))
        assert again == inst_file


def test_parse_errors_have_line_numbers():
    with pytest.raises(ParseError) as err:
        parse_instance_text("version 1\ngroup ut-q 3\nmatrix m\n1 2\n")
    assert "line 4" in str(err.value)
    with pytest.raises(ParseError):
        parse_instance_text("version 2\n")
    with pytest.raises(ParseError):
        parse_instance_text(UT3.replace("problem intersection A B", ""))
    with pytest.raises(ParseError):
        parse_instance_text(UT3 + "option no-such-option 3\n")
    # floating literals are rejected outright
    with pytest.raises(ParseError):
        parse_instance_text(UT3.replace("1 1 0", "1 1.5 0"))


def test_validation_non_unipotent():
    bad = UT3.replace("0 1 0\n0 0 1\nmatrix y", "2 1 0\n0 0 1\nmatrix y")
    with pytest.raises(ParseError):
        parse_instance_text(bad)


def test_orbit_outside_dimension_3_rejected():
    text = SQRT2.replace(
        "problem intersection A B", "problem orbit u u A B"
    )
    with pytest.raises(ValidationError):
        parse_instance_text(text).build()


def test_run_intersect_report():
    inst_file = parse_instance_text(UT3)
    report = run("intersect", inst_file)
    assert report.verdict == "empty"
    payload = report.to_jsonable()
    assert payload["schema"] == "decide-report/1"
    assert payload["verdict"] == "empty"


def test_run_witness_and_reverify():
    inst_file = load_instance_file(SAMPLES / "commutator.txt")
    report = run("witness", inst_file)
    assert report.verdict == "nonempty"
    payload = json.loads(json.dumps(report.to_jsonable()))
    # a fresh parse re-verifies the witnesses by multiplication alone
    fresh = load_instance_file(SAMPLES / "commutator.txt")
    assert reverify_report(payload, fresh)


def test_run_orbit_witness_and_reverify():
    inst_file = parse_instance_text(ORBIT)
    report = run("orbit", inst_file)
    assert report.verdict == "nonempty"
    payload = json.loads(json.dumps(report.to_jsonable()))
    assert reverify_report(payload, parse_instance_text(ORBIT))


def test_reverify_detects_tampering():
    inst_file = parse_instance_text(ORBIT)
    payload = run("orbit", inst_file).to_jsonable()
    payload = json.loads(json.dumps(payload))
    payload["witnesses"][0]["word"][0][1] += 1
    assert not reverify_report(payload, parse_instance_text(ORBIT))


def test_run_oracle():
    inst_file = load_instance_file(SAMPLES / "commutator.txt")
    report = run("oracle", inst_file, depth=4)
    assert report.verdict == "collision"
    report = run("oracle", inst_file, depth=3)
    assert report.verdict == "none"


def test_run_log_exp():
    text = (
        "version 1\ngroup ut-q 3\nmatrix m\n1 1 1\n0 1 1\n0 0 1\n"
        "semigroup A m\nproblem intersection A A\n"
    )
    inst_file = parse_instance_text(text)
    report = run("log", inst_file, matrix_name="m")
    assert report.matrix == [["0", "1", "1/2"], ["0", "0", "1"], ["0", "0", "0"]]
    report = run("exp", inst_file, matrix_name="m")
    assert report.matrix[0] == ["1", "1", "3/2"]


def test_main_exit_codes(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text(UT3)
    assert main(["intersect", str(empty)]) == 0

    assert main(["intersect", str(SAMPLES / "commutator.txt")]) == 1
    assert main(["witness", str(SAMPLES / "commutator.txt"), "--json"]) == 1
    assert main(["orbit", str(SAMPLES / "orbit-central.txt")]) == 1

    bad = tmp_path / "bad.txt"
    bad.write_text("version 1\ngroup ut-q 3\nmatrix m\n9 9 9\n")
    assert main(["intersect", str(bad)]) == 3
    assert main(["intersect", str(tmp_path / "missing.txt")]) == 3


def test_console_script_installed():
    out = subprocess.run(
        [sys.executable, "-m", "nilsect.cli", "oracle",
         str(SAMPLES / "commutator.txt"), "--depth", "4", "--json"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 1
    payload = json.loads(out.stdout)
    assert payload["verdict"] == "collision"


def test_check_oracle_flag():
    inst_file = parse_instance_text(UT3)
    report = run("intersect", inst_file, check_oracle=True)
    assert report.oracle["consistent"]
