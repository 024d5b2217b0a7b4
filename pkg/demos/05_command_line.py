# %% [markdown]
# # The command line pipeline
#
# `isoext generate` writes a seeded instance; `verify`, `span` and `extend`
# read it and write a JSON report.  With `--no-meta` the reports are byte
# identical across runs.  Exit codes: 0 success, 1 mathematical failure,
# 2 malformed input.

# %%
import json
import pathlib
import tempfile

from isoext.cli import main

work = pathlib.Path(tempfile.mkdtemp())
inst = work / "inst.json"
main(["generate", "-n", "6", "-k", "2", "--seed", "7", "--queries", "2", "--no-meta", "-o", str(inst)])

for cmd in ("verify", "span", "extend"):
    out = work / f"{cmd}.json"
    code = main([cmd, str(inst), "--no-meta", "-o", str(out)])
    print(cmd, "exit", code, "->", sorted(json.loads(out.read_text()))[:6])

# %% [markdown]
# A sheared pairing fails with exit code 1 and an error object.

# %%
bad = work / "bad.json"
main(["generate", "--kind", "sheared", "-n", "6", "-k", "3", "--delta", "0.1", "-o", str(bad)])
code = main(["extend", str(bad), "--no-meta", "-o", str(work / "bad_report.json")])
print("exit", code, json.loads((work / "bad_report.json").read_text())["error"]["type"])

# %% [markdown]
# Same input twice, same bytes.

# %%
main(["extend", str(inst), "--no-meta", "-o", str(work / "again.json")])
print("identical:", (work / "again.json").read_bytes() == (work / "extend.json").read_bytes())
