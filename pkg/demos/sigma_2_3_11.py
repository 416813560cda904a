"""
Representation points of Sigma(2,3,11)
======================================

"""

import json
import tempfile
from pathlib import Path

from su21reps import BrieskornPresentation, SearchConfig, search
from su21reps.io import RunDocument, emit_run, format_table, parse_run, recertify

pres = BrieskornPresentation.canonical(2, 3, 11)
print("weights:", pres.weights)

result = search(2, 3, 11, SearchConfig())
print(result.diagnostics)

doc = RunDocument.from_result(result, "0.1.0")
print(format_table(doc))

# write, read back, re-check every witness from scratch
path = Path(tempfile.mkdtemp()) / "sigma_2_3_11.json"
path.write_text(emit_run(doc), encoding="utf-8")
back = parse_run(path.read_text(encoding="utf-8"))
for i, rec in enumerate(back.points):
    chk = recertify(back, rec, i)
    print(i, chk.accepted, f"{max(chk.residuals.values()):.1e}")

print(json.dumps(json.loads(path.read_text())["points"][0], indent=1, ensure_ascii=False)[:600])
