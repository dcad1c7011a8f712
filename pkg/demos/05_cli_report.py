"""Driving a verification run from Python and reading its report.

The same run is available from the shell as
``hyperdual --suite lemmas --n 2 --K 0..3 --trials 2 --format text``.
"""

import json

from hyperdual.cli import RunConfig, emit_report, run_verify

config = RunConfig(suite="lemmas", n=(2,), K=(0, 1, 2, 3), trials=2, seed=5)
report, code = run_verify(config)
print(emit_report(report, "text").decode().splitlines()[-1], "exit code", code)

doc = json.loads(emit_report(report))
first = doc["cells"][0]
print("first record:", {key: first[key] for key in ("check", "n", "K", "p", "equal", "point_digest")})

again = emit_report(run_verify(config)[0])
print("rerun is byte-identical:", again == emit_report(report))

printed = RunConfig(suite="lemmas", n=(2,), K=(2,), trials=1, seed=5, prefactor="printed")
report, code = run_verify(printed)
print("with the [tq]_2p prefactor:", report.summary, "exit code", code)
