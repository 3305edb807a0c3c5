#!/usr/bin/env python3
"""Download the KEEL benchmark files used by the test suite.

The KEEL repository (https://sci2s.ugr.es/keel/datasets.php) serves
each dataset as a small zip holding one .dat file. The exact directory
layout on that server has moved around over the years, so every
dataset carries a list of candidate URLs that are tried in order.

Nominal input columns (for example the Sex column of abalone19) are
rewritten as integer codes in declaration order, because the loader
accepts numeric inputs only. The class column is left as it is.

Each fetched file is parsed and checked against the expected row,
attribute, and minority counts before it is kept.

Usage:
    python3 scripts/fetch_keel.py              # everything
    python3 scripts/fetch_keel.py pima yeast4  # a subset
"""
from __future__ import annotations

import argparse
import io
import re
import sys
import urllib.error
import urllib.request
import zipfile
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO_ROOT / "src"))

from frlstsvm.dataset import load_keel  # noqa: E402

BASE = "https://sci2s.ugr.es/keel"
TEMPLATES = {
    "classification": [
        BASE + "/dataset/data/classification/{name}.zip",
        BASE + "/keel-dataset/datasets/classification/{name}.zip",
    ],
    "imbalanced": [
        BASE + "/dataset/data/imbalanced/{name}.zip",
        BASE + "/keel-dataset/datasets/imbalanced/imb_IRlowerThan9/{name}.zip",
        BASE + "/keel-dataset/datasets/imbalanced/imb_IRhigherThan9p1/{name}.zip",
        BASE + "/keel-dataset/datasets/imbalanced/imb_IRhigherThan9p2/{name}.zip",
        BASE + "/keel-dataset/datasets/imbalanced/imb_IRhigherThan9p3/{name}.zip",
    ],
}

# name -> (group, expected rows, expected attributes, expected minority)
DATASETS = {
    "haberman": ("classification", 306, 3, 81),
    "pima": ("classification", 768, 8, 268),
    "wisconsin": ("classification", 683, 9, 239),
    "yeast3": ("imbalanced", 1484, 8, 163),
    "vehicle0": ("imbalanced", 846, 18, 199),
    "yeast4": ("imbalanced", 1484, 8, 51),
    "abalone19": ("imbalanced", 4174, 8, 32),
}

NOMINAL_RE = re.compile(
    r"@attribute\s+(\S+)\s*\{([^}]*)\}", re.IGNORECASE
)
ATTR_NAME_RE = re.compile(r"@attribute\s+([^\s{]+)", re.IGNORECASE)


def download(name: str, group: str, timeout: float) -> bytes:
    errors = []
    for template in TEMPLATES[group]:
        url = template.format(name=name)
        try:
            with urllib.request.urlopen(url, timeout=timeout) as resp:
                data = resp.read()
            print(f"  fetched {url} ({len(data)} bytes)")
            return data
        except (urllib.error.URLError, OSError) as exc:
            errors.append(f"{url}: {exc}")
    raise RuntimeError(
        f"no candidate URL worked for {name}:\n  " + "\n  ".join(errors)
    )


def pick_member(archive: zipfile.ZipFile, name: str) -> str:
    """The full-data member, not one of the cross-validation splits."""
    candidates = [
        m for m in archive.namelist()
        if m.lower().endswith(f"{name}.dat".lower())
        and "-5-" not in m and "-10-" not in m
        and "tra" not in Path(m).stem[len(name):]
        and "tst" not in Path(m).stem[len(name):]
    ]
    if not candidates:
        raise RuntimeError(
            f"{name}.zip holds no full-data member, only "
            f"{archive.namelist()}"
        )
    return sorted(candidates, key=len)[0]


def recode_nominal_inputs(text: str, name: str) -> str:
    """Rewrite nominal input attributes as integer codes.

    The declaration order fixes the coding (first value becomes 0).
    The output attribute keeps its nominal declaration so the loader
    can treat it as the class column.
    """
    lines = text.splitlines()
    outputs: set[str] = set()
    last_attribute = None
    for line in lines:
        stripped = line.strip()
        low = stripped.lower()
        if low.startswith("@outputs"):
            outputs = {t.strip() for t in stripped[len("@outputs"):]
                       .replace(",", " ").split()}
        elif low.startswith("@attribute"):
            named = ATTR_NAME_RE.match(stripped)
            if named is not None:
                last_attribute = named.group(1)
    if not outputs and last_attribute is not None:
        outputs = {last_attribute}

    codings: dict[int, dict[str, str]] = {}
    attr_position = -1
    for i, line in enumerate(lines):
        if not line.strip().lower().startswith("@attribute"):
            continue
        attr_position += 1
        match = NOMINAL_RE.match(line.strip())
        if match is None or match.group(1) in outputs:
            continue
        values = [v.strip() for v in match.group(2).split(",")]
        codings[attr_position] = {v: str(k) for k, v in enumerate(values)}
        lines[i] = (f"@attribute {match.group(1)} integer "
                    f"[0, {len(values) - 1}]")
        print(f"  recoded nominal input {match.group(1)}: "
              + ", ".join(f"{v}->{k}" for k, v in enumerate(values)))

    if codings:
        in_data = False
        for i, line in enumerate(lines):
            if line.strip().lower().startswith("@data"):
                in_data = True
                continue
            if not in_data or not line.strip():
                continue
            cells = [c.strip() for c in line.split(",")]
            for pos, mapping in codings.items():
                if pos < len(cells) and cells[pos] in mapping:
                    cells[pos] = mapping[cells[pos]]
            lines[i] = ", ".join(cells)
    return "\n".join(lines) + "\n"


def fetch_one(name: str, out_dir: Path, timeout: float) -> None:
    group, rows, attrs, minority = DATASETS[name]
    print(f"{name}:")
    payload = download(name, group, timeout)
    with zipfile.ZipFile(io.BytesIO(payload)) as archive:
        member = pick_member(archive, name)
        text = archive.read(member).decode("utf-8", errors="replace")
    text = recode_nominal_inputs(text, name)

    out_path = out_dir / f"{name}.dat"
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path.write_text(text)

    ds = load_keel(out_path)
    pos, neg = ds.class_counts()
    problems = []
    if ds.n_rows != rows:
        problems.append(f"rows {ds.n_rows} != {rows}")
    if ds.n_attributes != attrs:
        problems.append(f"attributes {ds.n_attributes} != {attrs}")
    if pos != minority:
        problems.append(f"minority {pos} != {minority}")
    if problems:
        out_path.unlink()
        raise RuntimeError(f"{name} failed verification: "
                           + "; ".join(problems))
    print(f"  wrote {out_path} ({rows} rows, {attrs} attributes, "
          f"minority {pos}, ratio {neg / pos:.4f})")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="fetch and verify the KEEL benchmark files"
    )
    parser.add_argument("names", nargs="*",
                        help="datasets to fetch (default: all of "
                             + ", ".join(DATASETS) + ")")
    parser.add_argument("--out-dir", default=str(REPO_ROOT / "data" / "keel"),
                        help="target directory (default: data/keel)")
    parser.add_argument("--timeout", type=float, default=30.0,
                        help="per-request timeout in seconds")
    args = parser.parse_args(argv)

    names = args.names or list(DATASETS)
    unknown = [n for n in names if n not in DATASETS]
    if unknown:
        parser.error(f"unknown dataset(s): {', '.join(unknown)}; "
                     f"known: {', '.join(DATASETS)}")
    failures = 0
    for name in names:
        try:
            fetch_one(name, Path(args.out_dir), args.timeout)
        except (RuntimeError, zipfile.BadZipFile) as exc:
            failures += 1
            print(f"  ERROR: {exc}", file=sys.stderr)
    if failures:
        print(f"{failures} of {len(names)} datasets failed",
              file=sys.stderr)
        return 1
    print("all requested datasets verified")
    return 0


if __name__ == "__main__":
    sys.exit(main())
