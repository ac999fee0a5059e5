"""Sample files.

JSON layout::

    {"format": "halfhex-samples", "version": ..., "rng": "splitmix64-addr/v1",
     "seed": 7, "order": 3, "model": "tableau", "count": 1,
     "samples": [{"stream": 0, "model": "tableau", "order": 3, "rows": [...]}, ...]}

Each entry of ``samples`` is the model's own dictionary (see
:func:`halfhex.bijections.to_dict`).  Sample ``k`` is drawn from stream ``k``
of the seed, so any single sample can be regenerated on its own.

CSV files carry the same header as ``# key=value`` comment lines followed by
one record per line; the columns depend on the model.
"""
from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path
from typing import Iterable

from . import __version__
from .bijections import MODELS, convert, from_dict, to_dict
from .rng import RNG_NAME
from .shuffle import sample

CSV_COLUMNS = {
    "tableau": ["sample", "row", "col", "value"],
    "particles": ["sample", "row", "position"],
    "matching": ["sample", "row", "position"],
    "lozenges": ["sample", "kind", "a", "b"],
    "paths": ["sample", "path", "steps"],
}


def header(seed: int, order: int, model: str, count: int) -> dict:
    return {"format": "halfhex-samples", "version": __version__, "rng": RNG_NAME,
            "seed": seed, "order": order, "model": model, "count": count}


def draw(order: int, count: int, seed: int, model: str = "tableau") -> list:
    if model not in MODELS:
        raise ValueError(f"model must be one of {', '.join(MODELS)}")
    return [convert(sample(order, seed, stream=k), model) for k in range(count)]


def dumps_json(objs: list, head: dict) -> str:
    doc = dict(head)
    doc["samples"] = [dict(stream=k, **to_dict(o)) for k, o in enumerate(objs)]
    return json.dumps(doc, separators=(",", ":")) + "\n"


def loads_json(text: str) -> tuple[dict, list]:
    doc = json.loads(text)
    if "samples" not in doc:
        # a bare model dictionary
        return {}, [from_dict(doc)]
    head = {k: v for k, v in doc.items() if k != "samples"}
    objs = []
    for entry in doc["samples"]:
        entry = {k: v for k, v in entry.items() if k != "stream"}
        objs.append(from_dict(entry))
    return head, objs


def _records(k: int, d: dict) -> Iterable[list]:
    model = d["model"]
    if model == "tableau":
        for r, row in enumerate(d["rows"]):
            for j, v in enumerate(row):
                yield [k, r, j, v]
    elif model == "particles":
        for r, p in d["particles"]:
            yield [k, r, p]
    elif model == "matching":
        for r, p in d["vertical_edges"]:
            yield [k, r, p]
    elif model == "lozenges":
        for kind, a, b in d["tiles"]:
            yield [k, kind, a, b]
    elif model == "paths":
        for i, steps in enumerate(d["paths"], start=1):
            yield [k, i, steps]


def dumps_csv(objs: list, head: dict) -> str:
    buf = _io.StringIO()
    for key, value in head.items():
        buf.write(f"# {key}={value}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS[head["model"]])
    for k, o in enumerate(objs):
        w.writerows(_records(k, to_dict(o)))
    return buf.getvalue()


def _parse_value(v: str):
    try:
        return int(v)
    except ValueError:
        return v


def loads_csv(text: str) -> tuple[dict, list]:
    lines = text.splitlines()
    head = {}
    body = []
    for line in lines:
        if line.startswith("# ") and "=" in line:
            key, value = line[2:].split("=", 1)
            head[key] = _parse_value(value)
        elif line.strip():
            body.append(line)
    model, n, count = head["model"], int(head["order"]), int(head["count"])
    docs: list[dict] = [{"model": model, "order": n} for _ in range(count)]
    for d in docs:
        d.update({"tableau": {"rows": [[] for _ in range(n + 1)]},
                  "particles": {"particles": []}, "matching": {"vertical_edges": []},
                  "lozenges": {"tiles": []}, "paths": {"paths": [""] * n}}[model])
    reader = csv.reader(body)
    next(reader)
    for rec in reader:
        k = int(rec[0])
        d = docs[k]
        if model == "tableau":
            d["rows"][int(rec[1])].append(int(rec[3]))
        elif model == "particles":
            d["particles"].append([int(rec[1]), int(rec[2])])
        elif model == "matching":
            d["vertical_edges"].append([int(rec[1]), int(rec[2])])
        elif model == "lozenges":
            d["tiles"].append([rec[1], int(rec[2]), int(rec[3])])
        else:
            d["paths"][int(rec[1]) - 1] = rec[2]
    return head, [from_dict(d) for d in docs]


def write_samples(path: str | Path, objs: list, head: dict, fmt: str = "json") -> None:
    text = dumps_json(objs, head) if fmt == "json" else dumps_csv(objs, head)
    Path(path).write_text(text)


def read_samples(path: str | Path) -> tuple[dict, list]:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return loads_json(text)
    return loads_csv(text)
