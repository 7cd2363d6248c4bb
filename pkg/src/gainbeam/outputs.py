"""CSV and manifest writers.

All numeric output uses 17 significant digits so doubles round-trip
losslessly; newlines are Unix; files are written atomically (temp file in
the target directory, then rename) so concurrent scenario runs never see
a partial file.
"""

import json
import os
import tempfile

from .config import ScenarioConfig

__all__ = [
    "format_number",
    "atomic_write_text",
    "write_csv",
    "write_heatmap_csv",
    "write_manifest",
    "read_manifest_config",
]

MANIFEST_FORMAT = "gainbeam-manifest/1"


def format_number(x) -> str:
    return f"{float(x):.17g}"


def atomic_write_text(path, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_number(v) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_heatmap_csv(path, x, zs, matrix):
    """Matrix of renormalized intensity: rows are z samples, columns grid points."""
    header = ["z"] + [format_number(xi) for xi in x]
    lines = [",".join(header)]
    for z, row in zip(zs, matrix):
        lines.append(",".join([format_number(z)] + [format_number(v) for v in row]))
    atomic_write_text(path, "\n".join(lines) + "\n")


def _flatten(prefix: str, value, out: list):
    if isinstance(value, dict):
        for k in value:
            _flatten(f"{prefix}.{k}", value[k], out)
    else:
        out.append((prefix, json.dumps(value)))


def write_manifest(path, config: ScenarioConfig | dict, tool_version: str,
                   derived: dict | None = None, report: dict | None = None):
    """Key-value manifest holding everything needed to re-run the scenario.

    ``config.*`` keys reconstruct the configuration exactly (see
    :func:`read_manifest_config`); ``derived.*`` and ``report.*`` keys are
    informational only.
    """
    cfg_dict = config.to_dict() if isinstance(config, ScenarioConfig) else dict(config)
    pairs: list = []
    _flatten("config", cfg_dict, pairs)
    for section, data in (("derived", derived), ("report", report)):
        if data:
            _flatten(section, data, pairs)
    lines = [f"format = {MANIFEST_FORMAT}", f"tool = gainbeam/{tool_version}"]
    lines.extend(f"{key} = {val}" for key, val in pairs)
    atomic_write_text(path, "\n".join(lines) + "\n")


def _unflatten(pairs: dict) -> dict:
    root: dict = {}
    for key, value in pairs.items():
        parts = key.split(".")
        node = root
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value
    return root


def read_manifest_config(path) -> ScenarioConfig:
    """Reconstruct the ScenarioConfig recorded in a manifest."""
    pairs = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or "=" not in line:
                continue
            key, _, raw = line.partition("=")
            key = key.strip()
            if key.startswith("config."):
                pairs[key[len("config."):]] = json.loads(raw.strip())
    if not pairs:
        raise ValueError(f"no config entries found in manifest {path}")
    return ScenarioConfig.from_dict(_unflatten(pairs))
