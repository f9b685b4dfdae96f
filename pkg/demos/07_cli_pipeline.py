"""The config-driven pipeline: simulate a covering probability across
blocklengths, then join the estimates with their analytic prediction and
fit the exponential decay slope.

Everything here also works from a shell:

    srgauss simulate --config psi.ini --out psi.csv
    srgauss compare  --config cmp.ini --out cmp.csv
"""

import tempfile
from pathlib import Path

from srgauss.cli import main
from srgauss.report import read_report

PSI_CONFIG = """
[source]
family = gaussian
sigma2 = 1.0

[distortion]
d1 = 0.5
d2 = 0.25

[simulate]
mode = psi
kind = iid
n = 10 20 30
norm_arg = 1.0
power = 0.66
distortion = 0.66
trials = 200000
seed = 17
"""

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    (tmp / "psi.ini").write_text(PSI_CONFIG, encoding="utf-8")

    print("1. simulate: single-codeword covering frequencies across n")
    rc = main(["simulate", "--config", str(tmp / "psi.ini"), "--out", str(tmp / "psi.csv")])
    assert rc == 0
    for row in read_report(str(tmp / "psi.csv")):
        print(f"   n={row['n']:2d}  estimate={row['estimate']:.6f}  "
              f"[{row['lo']:.6f}, {row['hi']:.6f}]")

    print()
    print("2. compare: join with the analytic decay rate and fit the slope")
    (tmp / "cmp.ini").write_text(
        f"[compare]\nsimulation = {tmp / 'psi.csv'}\nquantity = estimate\n",
        encoding="utf-8",
    )
    rc = main(["compare", "--config", str(tmp / "cmp.ini"), "--out", str(tmp / "cmp.csv")])
    assert rc == 0
    for row in read_report(str(tmp / "cmp.csv")):
        if row["row_kind"] == "point":
            print(f"   n={row['n']:2d}  estimate={row['estimate']:.6f}  "
                  f"prediction={row['prediction']:.6f}  gap={row['gap']:+.6f}")
        else:
            print(f"   slope={row['slope']:.5f} +/- {row['slope_stderr']:.5f}  "
                  f"target={row['slope_target']:.5f}  within 2se: {row['within_2se']}")
    print("   (the slope runs ~0.03 above the target at these n: the fit is")
    print("   precise enough to resolve the 1/sqrt(n) factor the pure")
    print("   exponential prediction leaves out)")

    print()
    print("3. guard rails: the same commands refuse oversized runs (exit 4)", flush=True)
    rc = main(["simulate", "--config", str(tmp / "psi.ini"), "--budget", "100"])
    print(f"   with --budget 100 the run is refused, exit code {rc}")
