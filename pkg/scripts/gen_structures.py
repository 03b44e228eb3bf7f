"""Regenerate structures/*.json from the built-in catalog recipes."""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from hhglab.builders import FIXTURE_BUILDERS, STANDARD_BUILDERS, build_named

out_dir = pathlib.Path(__file__).resolve().parents[1] / "structures"
out_dir.mkdir(exist_ok=True)
for name in sorted(list(STANDARD_BUILDERS) + list(FIXTURE_BUILDERS)):
    recipe = build_named(name).to_json()
    path = out_dir / f"{name}.json"
    path.write_text(json.dumps(recipe, sort_keys=True, indent=2) + "\n")
    print(f"wrote {path}")
