import io
import json
import re
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from wallwave.catalog import GROUP_NAMES, get_group
from wallwave.cli import SEED_ENV, main
from wallwave.orbits import build_cross_section


def run(*argv):
    out = io.StringIO()
    status = main(list(argv), out=out)
    return status, out.getvalue()


def run_json(*argv):
    status, text = run(*argv)
    return status, json.loads(text)


def _ids(svg: str, prefix: str) -> list[str]:
    root = ET.fromstring(svg)
    return [e.get("id") for e in root.iter() if (e.get("id") or "").startswith(prefix)]


def test_catalog_all():
    status, data = run_json("catalog")
    assert status == 0
    assert [d["name"] for d in data] == list(GROUP_NAMES)


def test_catalog_one_and_json_flag():
    status, data = run_json("--json", "catalog", "--group", "p4m")
    assert status == 0 and data["name"] == "p4m"


def test_catalog_unknown_group():
    with pytest.raises(SystemExit) as exc:
        run("catalog", "--group", "p5")
    assert exc.value.code == 2


def test_elem_canonical():
    status, text = run("elem", "--group", "pg", "([1/3 u+0 v+1/2 z, s], -2)")
    assert status == 0
    assert text.strip() == "([1/3 u + 0 v + 1/2 z, s], -2)"
    status, data = run_json("elem", "--json", "--group", "pg", text.strip())
    assert data["x"] == ["1/3", "1/2"] and data["L"] == "s" and data["ell"] == -2


def test_elem_errors():
    status, data = run_json("elem", "--group", "p1", "([1 u, id], 0)")
    assert status == 2
    assert data["error"] == "ParseError" and data["position"] == 5
    status, data = run_json("elem", "--group", "p4", "([0 u + 0 v, s], 0)")
    assert status == 2 and data["error"] == "InvalidForGroup"


def test_orbit_canon():
    status, data = run_json("orbit", "canon", "--group", "p4", "--omega=-1,-6")
    assert status == 0
    assert data["ell"] == 1
    L = get_group("p4").element(data["L"])
    back = 3.0 ** data["ell"] * (np.array(L.cart) @ np.array(data["omega_prime"]))
    assert back == pytest.approx([-1.0, -6.0], abs=1e-12)
    status, data = run_json("orbit", "canon", "--group", "p4", "--omega", "2,0")
    assert data == {"boundary": True}
    status, data = run_json("orbit", "canon", "--group", "p4", "--omega", "0.5,2")
    assert data["L"] == "id" and data["ell"] == 0


def test_rep_sigma():
    status, data = run_json("rep", "sigma", "--group", "p4", "--elem", "([0 u + 0 v, r90], 1)",
                            "--omega", "1.5,0.5", "--vec", "(id,0):1,0")
    assert status == 0
    (entry,) = data["result"]
    assert (entry["L"], entry["m"]) == ("r90", 1)
    assert abs(complex(entry["re"], entry["im"])) == pytest.approx(1.0)


def test_rep_vhat():
    status, data = run_json("rep", "vhat", "--group", "p1", "--elem", "([0 u + 0 v, id], 1)",
                            "--packet", "1,0,0,1,0,1,0,0")
    assert status == 0
    assert data["packet"]["c"] == pytest.approx([1 / 3, 0])
    assert np.ravel(data["packet"]["P"]) == pytest.approx([1 / 9, 0, 0, 1 / 9])


def test_rep_missing_inputs():
    with pytest.raises(SystemExit) as exc:
        run("rep", "sigma", "--group", "p4", "--elem", "([0 u + 0 v, id], 0)")
    assert exc.value.code == 2


def test_verify_report_shape():
    status, data = run_json("verify", "--group", "p1", "--suite", "intertwine", "--seed", "42",
                            "--tol", "1e-9")
    assert status == 0
    assert {"suite", "group", "cases", "max_residual", "pass"} <= set(data)
    assert data["suite"] == "intertwine" and data["group"] == "p1" and data["pass"]
    assert data["cases"] >= 1000


def test_verify_deterministic():
    args = ("verify", "--group", "pg,p3m1", "--suite", "induced,intertwine", "--seed", "7")
    assert run(*args)[1] == run(*args)[1]


def test_verify_seed_from_environment(monkeypatch):
    args = ("verify", "--group", "p2", "--suite", "intertwine")
    monkeypatch.setenv(SEED_ENV, "5")
    from_env = run(*args)[1]
    explicit = run(*args, "--seed", "5")[1]
    monkeypatch.setenv(SEED_ENV, "6")
    other = run(*args)[1]
    assert from_env == explicit
    assert from_env != other


def test_verify_unknown_suite():
    with pytest.raises(SystemExit) as exc:
        run("verify", "--suite", "nonsense")
    assert exc.value.code == 2


def test_verify_failing_suite_exit_status():
    # a negative tolerance cannot be met by any floating-point residual
    status, data = run_json("verify", "--group", "p1", "--suite", "induced", "--tol", "-1")
    assert status == 1 and data["pass"] is False


def test_verify_report_only_groups_pass():
    status, data = run_json("verify", "--group", "pgg2", "--suite", "intertwine")
    assert status == 0
    assert data["components"]["intertwining"]["asserted"] is False


def test_verify_figure(tmp_path):
    fig = tmp_path / "res.svg"
    status, _ = run("verify", "--group", "p1,pg", "--suite", "induced", "--figure", str(fig))
    assert status == 0
    assert _ids(fig.read_text(), "bars-induced-")


def test_render_p4_orbits():
    status, svg = run("render", "orbits", "--group", "p4", "--omega", "2,1")
    assert status == 0
    assert len(_ids(svg, "orbit-point-")) == 12


def test_render_pg_lattice_glides():
    status, svg = run("render", "lattice", "--group", "pg")
    assert len(_ids(svg, "glide-axis-")) == len(_ids(svg, "glide-marker-")) > 0
    status, svg = run("render", "lattice", "--group", "p4")
    assert not _ids(svg, "glide-axis-")


@pytest.mark.parametrize("name", ["p1", "p4m", "pg", "p6"])
def test_render_cross_section(name):
    gd = get_group(name)
    status, svg = run("render", "cross-section", "--group", name)
    assert status == 0
    assert _ids(svg, "cross-section")
    copies = {tuple(re.fullmatch(r"copy-(.+?)-(-?\d+)", c).groups()) for c in _ids(svg, "copy-")}
    expected = {(L.name, str(ell)) for L in gd.point_group for ell in (-1, 0, 1)} - {("id", "0")}
    assert copies == expected


def test_render_p1_full_annulus():
    cs = build_cross_section(get_group("p1"))
    assert (cs.theta1, cs.theta2, cs.r_min, cs.r_max) == pytest.approx((0, 2 * 3.141592653589793, 1, 3))
    svg = run("render", "cross-section", "--group", "p1")[1]
    assert _ids(svg, "copy-id--1") and _ids(svg, "copy-id-1")


def test_render_to_file(tmp_path):
    path = tmp_path / "x.svg"
    status, data = run_json("render", "lattice", "--json", "--group", "cmm", "--out", str(path))
    assert status == 0 and data["path"] == str(path)
    ET.parse(path)


def test_render_deterministic():
    assert run("render", "orbits", "--group", "p6m")[1] == run("render", "orbits", "--group", "p6m")[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wallwave", "verify", "--suite", "bogus"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert "unknown suite" in proc.stderr
