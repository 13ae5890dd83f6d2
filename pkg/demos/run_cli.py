"""
Driving the command line
========================

Writes a configuration, runs ``speclag verify``, then exports a point cloud.
Equivalent shell commands are printed alongside.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

work = Path(tempfile.mkdtemp())
config = {
    "family": {"kind": "lawlor", "a": [1.0, 1.0], "psi": [0.2, -0.4]},
    "samples": {"seed": 7, "sigma_count": 50, "s_count": 21},
}
(work / "run.json").write_text(json.dumps(config, indent=2))


def speclag(*args):
    print("$ speclag", " ".join(args))
    proc = subprocess.run([sys.executable, "-m", "speclag", *args], capture_output=True, text=True)
    print("exit", proc.returncode)
    return proc


proc = speclag("verify", "--config", str(work / "run.json"), "--out", str(work / "report.json"))
report = json.loads((work / "report.json").read_text())
for check in report["checks"]:
    print(f"   {check['check']:<16} pass={check['pass']}")

##############################################################################
# Unequal parameters fail the Fubini-Study check, so the exit code is 1.

config["family"]["a"] = [1.0, 2.0]
(work / "bad.json").write_text(json.dumps(config))
speclag("verify", "--config", str(work / "bad.json"))

##############################################################################
# Point cloud export.

speclag("sample", "--config", str(work / "run.json"), "--csv", str(work / "cloud.csv"))
print((work / "cloud.csv").read_text().splitlines()[:3])
