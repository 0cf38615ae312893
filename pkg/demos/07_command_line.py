"""
Command line
============

Everything above is also reachable from the ``axtcp`` command.  Here it is
driven in-process through ``axtcp.cli.run``, which returns the exit code.
"""

import os
import tempfile

from axtcp.cli import run

tmp = tempfile.mkdtemp()
out = os.path.join(tmp, "r.csv")
code = run(["simulate", "--stations", "4", "--segment", "1460", "--strategy", "3", "--load", "0.03",
            "--snr", "36.6", "--txops", "100", "--seed", "7", "--out", out])
print("exit", code)
print(open(out).read())

# Missing --load for strategy 3 is a usage error (exit 2, JSON line on stderr)
print("exit", run(["simulate", "--strategy", "3"]))

# Config files hold the same keys; flags win
cfg = os.path.join(tmp, "scenario.cfg")
with open(cfg, "w") as fh:
    fh.write("strategy=3\nload=0.5\ntxops=20\ntf_bytes=120\n")
run(["simulate", "--config", cfg, "--load", "0.1"])

run(["packing", "--snr", "33.5", "--segment", "208", "--error-model", "bit"])
run(["tables", "export", "--kind", "phy", "--stations", "32"])
