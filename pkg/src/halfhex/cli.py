"""``halfhex`` command line.

Relative output paths resolve against ``$HALFHEX_OUT`` when it is set.
Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .bijections import MODELS

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _out_path(p: str) -> Path:
    path = Path(p)
    base = os.environ.get("HALFHEX_OUT")
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def cmd_sample(args) -> int:
    from . import io

    objs = io.draw(args.order, args.count, args.seed, args.model)
    head = io.header(args.seed, args.order, args.model, args.count)
    text = io.dumps_json(objs, head) if args.format == "json" else io.dumps_csv(objs, head)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        _write(_out_path(args.out), text)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import SUITES, as_dicts, run_suite

    suites = list(SUITES) if args.suite == "all" else [args.suite]
    checks = []
    for name in suites:
        max_order = min(args.max_order, SUITES[name][1]) if args.suite == "all" else args.max_order
        for c in run_suite(name, max_order):
            checks.append(c)
            if not args.json:
                print(f"{'PASS' if c.ok else 'FAIL'}  {c.suite:<18} n={c.order}  {c.detail}  ({c.seconds:.2f}s)")
    ok = all(c.ok for c in checks)
    if args.json:
        print(json.dumps({"ok": ok, "checks": as_dicts(checks)}, indent=1))
    else:
        print(f"{'all checks passed' if ok else 'FAILURES'}: {sum(c.ok for c in checks)}/{len(checks)}")
    if args.report:
        _write(_out_path(args.report), json.dumps({"ok": ok, "checks": as_dicts(checks)}, indent=1) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_render(args) -> int:
    from . import render
    from .io import read_samples

    text = Path(args.input).read_text()
    doc = json.loads(text) if text.lstrip().startswith("{") else None
    if doc is not None and "dominoes" in doc:
        from .aztec import read_tiling

        region, dominoes = read_tiling(args.input)
        svg = render.to_svg(render.half_diamond_scene(region.order, dominoes, scale=args.scale))
    else:
        _, objs = read_samples(args.input)
        if not 0 <= args.index < len(objs):
            raise ValueError(f"sample index {args.index} out of range (file has {len(objs)})")
        if args.view == "half-diamond":
            scene = render.half_diamond_scene(render.to_tableau(objs[args.index]).order,
                                              phase=args.phase, scale=args.scale)
            svg = render.to_svg(scene)
        else:
            svg = render.render(objs[args.index], args.view, scale=args.scale)
    _write(_out_path(args.out), svg)
    return EXIT_OK


def cmd_limitshape(args) -> int:
    from . import limitshape as ls

    d = ls.empirical_density(args.order, args.samples, args.seed)
    pts = ls.frozen_boundary(d, args.threshold)
    fits = [ls.fit_curve(pts, "quadratic"), ls.fit_curve(pts, "conic")]
    out = _out_path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ls.write_density_csv(out / "density.csv", d)
    ls.write_points_csv(out / "boundary.csv", pts)
    ls.write_fits_csv(out / "fits.csv", fits)
    q, c = fits
    summary = {
        "order": args.order, "samples": args.samples, "seed": args.seed,
        "threshold": args.threshold, "boundary_points": len(pts),
        "quadratic": {"coefficients": q.coefficients.tolist(), "sup_residual": q.sup_residual,
                      "rms_residual": q.rms_residual, **q.extra},
        "conic": {"coefficients": c.coefficients.tolist(), "sup_residual": c.sup_residual,
                  "rms_residual": c.rms_residual, "discriminant": c.discriminant,
                  "normalized_discriminant": ls.normalized_discriminant(c)},
    }
    _write(out / "summary.json", json.dumps(summary, indent=1) + "\n")
    print(f"{len(pts)} boundary points; quadratic y = {q.coefficients[0]:.4f} "
          f"+ {q.coefficients[1]:.4f} x + {q.coefficients[2]:.4f} x^2, "
          f"sup residual {q.sup_residual:.4f}; conic sup residual {c.sup_residual:.4f}, "
          f"normalised discriminant {ls.normalized_discriminant(c):.4f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    from .render import VIEWS
    from .verify import SUITES

    p = argparse.ArgumentParser(prog="halfhex", description="Half-hexagon sampler and checker.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="draw exactly uniform samples")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--model", choices=MODELS, default="tableau")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--out", default="-", help="output file, '-' for stdout")
    s.set_defaults(func=cmd_sample)

    v = sub.add_parser("verify", help="run an exact verification suite")
    v.add_argument("--suite", choices=(*SUITES, "all"), required=True)
    v.add_argument("--max-order", type=int, default=3)
    v.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    v.add_argument("--report", help="also write the JSON report here")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", help="draw a sample file as SVG")
    r.add_argument("input")
    r.add_argument("--view", choices=VIEWS, default="lozenges")
    r.add_argument("--out", required=True)
    r.add_argument("--index", type=int, default=0, help="which sample in the file")
    r.add_argument("--scale", type=float, default=20.0)
    r.add_argument("--phase", choices=("parity", "balanced"), default="parity")
    r.set_defaults(func=cmd_render)

    lsp = sub.add_parser("limitshape", help="empirical frozen boundary and curve fits")
    lsp.add_argument("--order", type=int, required=True)
    lsp.add_argument("--samples", type=int, required=True)
    lsp.add_argument("--seed", type=int, default=0)
    lsp.add_argument("--threshold", type=float, default=0.05)
    lsp.add_argument("--out", required=True, help="output directory")
    lsp.set_defaults(func=cmd_limitshape)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("order", "count", "samples", "max_order"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            parser.error(f"--{name.replace('_', '-')} must be non-negative")
    if getattr(args, "count", 1) == 0 or getattr(args, "samples", 1) == 0:
        parser.error("need at least one sample")
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"halfhex: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
