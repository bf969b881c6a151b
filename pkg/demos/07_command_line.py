"""
The command-line workflow
=========================

The same operations are available as batch commands that read JSON/CSV
files and print a JSON report (with input file digests) on stdout. This
script drives them in-process through ``localpriv.cli.main``; from a shell
the equivalent is ``localpriv design krr --k 4 --eps 1 -o rr.json`` etc.
"""

import tempfile
from pathlib import Path

from localpriv.cli import main

work = Path(tempfile.mkdtemp())
rr, reports = work / "rr.json", work / "reports.csv"

commands = [
    ["design", "krr", "--alphabet", "a,b,c,d", "--eps", "1", "-o", str(rr)],
    ["audit", "ldp", "--channel", str(rr)],
    ["audit", "mil", "--channel", str(rr)],
    ["sample", "--channel", str(rr), "--input", "c", "--n", "2000", "--seed", "7", "-o", str(reports)],
    ["estimate", "--reports", str(reports)],
    ["audit", "geo", "--channel", str(rr)],  # missing --metric: exit code 2
]
for argv in commands:
    print("$ localpriv", " ".join(argv))
    print("exit code:", main(argv))
