"""Loads the newest built cdylib from target/ and exercises every binding."""

import glob
import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    hits = glob.glob(os.path.join(ROOT, "target", "*", "libanergodic_py.so"))
    if hits:
        tmp = tempfile.mkdtemp()
        shutil.copy(max(hits, key=os.path.getmtime), os.path.join(tmp, "anergodic.so"))
        sys.path.insert(0, tmp)
        import anergodic

        return anergodic
    sys.exit("libanergodic_py.so not found; run `cargo build -p anergodic-py` first")


def main():
    an = load()
    rows = an.cf("golden", 10)
    assert len(rows) == 10 and int(rows[-1]["q_r"]) == 89, rows[-1]
    assert float(rows[0]["q_slash_r"]["lo"]) > 1.618

    digits = an.ostrowski("golden", 100)
    assert sum(int(r["b_r"]) * int(r["q_r"]) for r in digits) == 100

    s = an.birkhoff_sum("golden", "theta:1", 10)[0]["sum"]
    assert abs(float(s["lo"]) - 33.0928899470059) < 1e-9, s

    b = an.bounds("golden", "theta:1", 10)
    assert all(r["verdict"] == "PASS" for r in b)

    e = an.estimate("golden", 50, beta="3/2", method="C")
    assert all(r["verdict"] in ("PASS", None) for r in e)

    lang = an.compare("lang", "golden", n=100)
    assert {r["label"] for r in lang} >= {"theirs", "ours", "ratio", "direct"}

    sw = an.sweep("alphas = golden\nns = 1..8\nphis = theta\nchecks = sandwich; epsilon\n")
    assert sw == an.sweep("alphas = golden\nns = 1..8\nphis = theta\nchecks = sandwich; epsilon\n")

    try:
        an.cf("2/3")
    except ValueError:
        pass
    else:
        raise AssertionError("rational alpha accepted")
    print("smoke test ok:", an.__version__)


if __name__ == "__main__":
    main()
