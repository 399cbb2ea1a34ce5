#!/usr/bin/env python3
"""Smoke test for the genring_py extension module.

Builds the cdylib with cargo, loads it from the target directory, and
exercises every exported function once with known-good values. Run from
anywhere inside the repository:

    python3 python/smoke_test.py
"""

import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_extension() -> Path:
    subprocess.run(
        ["cargo", "build", "-p", "genring-py", "--release"],
        cwd=ROOT,
        check=True,
    )
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    built = ROOT / "target" / "release" / "libgenring_py.so"
    if not built.exists():  # e.g. macOS
        built = ROOT / "target" / "release" / "libgenring_py.dylib"
    stage = Path(tempfile.mkdtemp(prefix="genring-py-"))
    target = stage / f"genring_py{suffix}"
    shutil.copy2(built, target)
    return stage


def main() -> None:
    stage = build_extension()
    sys.path.insert(0, str(stage))
    import genring_py as gr

    # Exact arithmetic and the product formula.
    assert gr.vp(2, "12") == 2
    assert gr.vp(5, "6/5") == -1
    assert gr.abs_at("inf", "-3/2") == "3/2"
    assert gr.abs_at("2", "12") == "1/4"
    pf = gr.product_formula("6/5")
    assert pf["holds"] and pf["finite_product"] == "5/6"

    # Coefficient monads.
    assert gr.contains("AN:2", ["1/2", "1/2"])
    assert not gr.contains("AN:2", ["1/3"])
    assert gr.substitute("Z", ["2", "3"], [["1", "1"], ["0", "5"]]) == ["2", "17"]
    assert gr.induced("Z", [1, 1], ["3", "4"], 1) == ["7"]
    assert gr.intersect(["N", "Zinf"]) == "F1"
    assert gr.intersect(["Z", "AN:6"]) == "F12"
    assert gr.in_localization("AN:2", "1/2", ["3/4", "1/2"], 8) == 1
    assert gr.in_localization("Z", "2", ["1/3"], 8) is None

    # Structural analysis.
    row = gr.classify_additivity("AN:2")
    assert (row["hypoadditive"], row["hyperadditive"]) == ("oui", "non")
    assert gr.classify_additivity("BN:6")["additive"]
    assert gr.commute("AN:2", "1/2,1/2", "1/2,-1/2")
    assert gr.pseudoaddition("Z") == "(1,1)"
    assert gr.pseudoaddition("AN:2") is None

    # Spectra.
    assert gr.spec_points("AN:2", 10) == ["xi", "3", "5", "7", "inf"]
    assert gr.closure("AN:2", "5") == ["5", "inf"]
    assert gr.closure("Z", "xi") == "whole"
    assert gr.closure("hat", "7") == ["7"]
    assert gr.is_open("hat:6", ["2", "3", "inf"])
    assert not gr.is_open("hat:6", ["5"])
    assert gr.stalk("hat", "inf") == "Zinf"
    assert gr.stalk_contains("hat:6", "5", "5/3")
    assert not gr.stalk_contains("hat:6", "5", "3/5")
    ideal_list = gr.ideals("F1")
    assert len(ideal_list) == 2 and sum(1 for _, prime in ideal_list if prime) == 1

    # Presentations, proving, refutation.
    zpres = (
        "base F1; gen neg/1, add/2;"
        " rel add(x1,neg(x1)) = 0;"
        " rel add(x1,0) = x1; rel add(0,x1) = x1;"
        " rel add(add(x1,x2),x3) = add(x1,add(x2,x3));"
        " rel add(x1,x2) = add(x2,x1);"
    )
    assert len(gr.free_terms("base F_empty; gen z/0;", 2, 1)) == 3
    assert gr.prove(zpres, "add(x1,0)", "x1", 1)
    assert gr.countermodel(zpres, "add(x1,x2)", "add(x2,x1)", 2) == "none"
    assert gr.countermodel("base F1;", "x1", "0", 2) == "found"
    tensored = gr.tensor(zpres, zpres)
    assert "add_1" in tensored and "add_2" in tensored
    assert gr.check_relations(zpres, "Z", {"neg": ["-1"], "add": ["1", "1"]})
    assert not gr.check_relations(zpres, "Z", {"neg": ["-1"], "add": ["1", "2"]})

    # Proj and the compactification.
    assert gr.proj_count(1) == 3
    assert gr.proj_count(10) == 2**11 - 1
    assert gr.proj_verify(2, 20)
    assert gr.deg0_member(2, "f2", ["1/2", "1/2"]) == 1
    assert gr.deg0_member(2, "f2", ["1/3"]) is None

    # Picard.
    assert gr.pic_rank(12) == 2
    assert gr.pic_basis(12) == ["log 2", "log 3"]
    assert gr.factor_vec("3/2") == {2: -1, 3: 1}

    # Lattices and Minkowski.
    count, points = gr.sections("oct:1", 2)
    assert count == 5 and [0, 0] in points
    volume, exceeds, point = gr.minkowski("box:21/20,21/20")
    assert volume == "441/100" and exceeds and any(point)

    # Models over the archimedean valuation ring.
    assert gr.poly_norm("3/2 T1^2 - 1/2 T1 T2") == "2"
    model = gr.build_model(["T1^2 + T2^2 - 1"])
    assert model["rescaled"] == [True] and model["generators"] == ["T1", "T2"]

    print("smoke test passed:", len([n for n in dir(gr) if not n.startswith("_")]), "functions exercised")


if __name__ == "__main__":
    main()
