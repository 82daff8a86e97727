"""
Files and the command line
==========================

Maps and implementations are stored as JSON with exact scalars written as
strings.  The same pipeline is available as ``cslrank`` (or
``python3 -m cslrank``).
"""

import tempfile
from pathlib import Path

from cslrank.cli import main
from cslrank.demos import phi2_spec
from cslrank.fileio import save_map

tmp = Path(tempfile.mkdtemp())
save_map(phi2_spec(), tmp / "phi2.json")

main(["classify", str(tmp / "phi2.json"), "--trials", "8"])
main(["reconstruct", str(tmp / "phi2.json"), "--out", str(tmp / "impl.json"), "--trials", "0"])
main(["verify", str(tmp / "phi2.json"), str(tmp / "impl.json")])
