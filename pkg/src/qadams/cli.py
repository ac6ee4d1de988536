"""Command-line front end: charts, verifiers and oracles.

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.
A reproducibility header goes to stderr so that chart output stays byte-stable.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from typing import Dict, List, Optional

from . import __version__
from .charts import ExtChart, to_ascii, to_svg
from .errors import QAError, UnsupportedPrime, CostGuard

CONFIG_KEYS = {"prime": int, "max_t": int, "max_s": int, "max_stem": int, "max_n": int, "k": int,
               "format": str, "mode": str}


class UsageError(Exception):
    pass


def read_config(path: str) -> Dict[str, object]:
    """key = value lines; '#' starts a comment."""
    out: Dict[str, object] = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key = value")
            key, val = (x.strip() for x in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{n}: unknown key {key!r}")
            try:
                out[key] = CONFIG_KEYS[key](val.strip('"'))
            except ValueError:
                raise UsageError(f"{path}:{n}: bad value for {key}")
    return out


def _threads() -> int:
    raw = os.environ.get("QA_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"QA_THREADS must be an integer, got {raw!r}")
    if n < 1:
        raise UsageError("QA_THREADS must be positive")
    return n


def _header(args, window: str, presets: List[str], fixtures: Optional[Dict[str, str]] = None) -> None:
    parts = [f"qadams {__version__}", f"command={args.verb} {args.sub}", f"prime={getattr(args, 'prime', None)}",
             f"window={window}", f"threads={_threads()}"]
    if presets:
        parts.append("presets=" + ",".join(presets))
    for name, digest in sorted((fixtures or {}).items()):
        parts.append(f"{name}=sha256:{digest[:16]}")
    print("# " + " ".join(parts), file=sys.stderr)


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _emit(chart: ExtChart, fmt: str, out: Optional[str]) -> None:
    if fmt == "json":
        text = chart.to_json()
    elif fmt == "ascii":
        text = to_ascii(chart)
    elif fmt == "svg":
        text = to_svg(chart)
    else:
        raise UsageError(f"unknown format {fmt!r}")
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require(args, *names):
    for n in names:
        if getattr(args, n, None) is None:
            raise UsageError(f"--{n.replace('_', '-')} is required")


# -- commands ---------------------------------------------------------------

def cmd_chart_ext_a(args) -> int:
    from .steenrod import minimal_resolution
    _require(args, "prime", "max_t")
    max_s = args.max_s if args.max_s is not None else args.max_t
    res = minimal_resolution(args.prime, max_s, args.max_t)
    chart = res.chart(name=f"Ext_A p={args.prime}")
    _header(args, f"s<={max_s},t<={args.max_t}", [], {"resolution": _digest(res.to_json())})
    _emit(chart, args.format, args.out)
    return 0


def cmd_chart_sphere(args) -> int:
    from .couples import integral_preset
    from .mv import sphere_pipeline
    _require(args, "prime", "max_stem")
    report = sphere_pipeline(args.prime, args.max_stem, args.max_s)
    preset = integral_preset(args.prime)
    _header(args, f"stem<={args.max_stem},s<={report.chart.max_s}", [f"{preset.name}@{preset.version}"],
            {"preset": _digest(json.dumps(preset.to_dict(), sort_keys=True))})
    _emit(report.chart, args.format, args.out)
    return 0


def cmd_chart_bp(args) -> int:
    _require(args, "prime", "max_t")
    mode = args.mode or "mv"
    if mode == "mv":
        from .mv import bp_pipeline
        chart = bp_pipeline(args.prime, args.max_t, args.max_s).chart
    elif mode == "closed-form":
        from .bp_analysis import bp_closed_form_chart
        chart = bp_closed_form_chart(args.prime, args.max_t, args.max_s)
    else:
        raise UsageError(f"unknown mode {mode!r}")
    _header(args, f"s<={chart.max_s},t<={args.max_t}", [f"integral-{args.prime}@1"], {"mode": _digest(mode)})
    _emit(chart, args.format, args.out)
    return 0


def cmd_couples_ext(args) -> int:
    from .quiver import Representation, ext
    _require(args, "input", "max_s", "max_t")
    try:
        with open(args.input) as fh:
            text = fh.read()
        X = Representation.from_json(text)
        Y = X
        if args.target:
            with open(args.target) as fh:
                Y = Representation.from_json(fh.read())
    except (OSError, ValueError, KeyError) as e:
        raise UsageError(f"cannot read representation: {e}")
    X.validate()
    Y.validate()
    min_t = args.min_t if args.min_t is not None else -args.max_t
    chart = ext(X, Y, args.max_s, (min_t, args.max_t), name="Ext_P")
    _header(args, f"s<={args.max_s},{min_t}<=t<={args.max_t}", [f"{X.preset.name}@{X.preset.version}"],
            {"input": _digest(text)})
    _emit(chart, args.format, args.out)
    return 0


def cmd_verify_moore(args) -> int:
    from .couples import moore_maps, moore_resolution_check
    _require(args, "prime", "k")
    f = None
    if args.tamper:
        f, _ = moore_maps(args.prime, args.k)
        f = [[args.prime * f[0][0]], f[1]]
    _header(args, f"k={args.k}", [f"integral-{args.prime}@1"])
    report = moore_resolution_check(args.prime, args.k, f_int=f)
    for line in report.checked:
        print(f"ok  {line}")
    return 0


def cmd_verify_toda(args) -> int:
    from .bp_analysis import toda_vanishing_check
    _require(args, "prime", "max_n")
    _header(args, f"n<={args.max_n}", [f"integral-{args.prime}@1"])
    report = toda_vanishing_check(args.prime, args.max_n)
    sys.stdout.write(report.table())
    print(f"# parity scan: {report.scanned} cells in positive filtration")
    return 0


def cmd_verify_einfty(args) -> int:
    from .bp_analysis import bp_einfty_check
    _require(args, "prime", "max_t")
    _header(args, f"t<={args.max_t}", [f"integral-{args.prime}@1"])
    report = bp_einfty_check(args.prime, args.max_t)
    print("t\te2_rank\tsurvivor_rank\tsubring_rank\tindex_exponent\tclasses_killed")
    for r in report.rows:
        print("\t".join(str(r[k]) for k in ("t", "e2_rank", "survivor_rank", "subring_rank",
                                             "index_exponent", "classes_killed")))
    if not report.ok:
        bad = [r["t"] for r in report.rows if r["survivor_rank"] != r["subring_rank"]
               or r["index_exponent"] != r["classes_killed"]]
        print(f"FAIL: counting identity broken in degree {bad[0] if bad else '?'}", file=sys.stderr)
        return 1
    return 0


def cmd_oracle_cobar(args) -> int:
    from .steenrod import cobar_ext_oracle
    _require(args, "prime", "max_t")
    chart = cobar_ext_oracle(args.prime, args.max_t)
    _header(args, f"t<={args.max_t}", [])
    _emit(chart, args.format, args.out)
    return 0


COMMANDS = {
    ("chart", "ext-a"): cmd_chart_ext_a,
    ("chart", "integral-sphere"): cmd_chart_sphere,
    ("chart", "bp"): cmd_chart_bp,
    ("couples", "ext"): cmd_couples_ext,
    ("verify", "moore"): cmd_verify_moore,
    ("verify", "toda"): cmd_verify_toda,
    ("verify", "einfty-bp"): cmd_verify_einfty,
    ("oracle", "cobar"): cmd_oracle_cobar,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qadams", description="Integral Adams E2 charts and verifiers.")
    ap.add_argument("--config", help="key = value file presetting prime and window; flags override it")
    verbs = ap.add_subparsers(dest="verb", required=True)

    def common(p, *flags):
        p.add_argument("--prime", type=int)
        for f in flags:
            if f in ("format",):
                p.add_argument("--format", choices=["json", "ascii", "svg"])
                p.add_argument("--out")
            elif f == "mode":
                p.add_argument("--mode", choices=["mv", "closed-form"])
            elif f in ("input", "target"):
                p.add_argument(f"--{f}")
            elif f == "tamper":
                p.add_argument("--tamper", action="store_true", help="scale the first matrix by p (negative control)")
            else:
                p.add_argument(f"--{f.replace('_', '-')}", type=int, dest=f)

    chart = verbs.add_parser("chart").add_subparsers(dest="sub", required=True)
    common(chart.add_parser("ext-a"), "max_t", "max_s", "format")
    common(chart.add_parser("integral-sphere"), "max_stem", "max_s", "format")
    common(chart.add_parser("bp"), "max_t", "max_s", "mode", "format")
    couples = verbs.add_parser("couples").add_subparsers(dest="sub", required=True)
    common(couples.add_parser("ext"), "input", "target", "max_s", "max_t", "min_t", "format")
    verify = verbs.add_parser("verify").add_subparsers(dest="sub", required=True)
    common(verify.add_parser("moore"), "k", "tamper")
    common(verify.add_parser("toda"), "max_n")
    common(verify.add_parser("einfty-bp"), "max_t")
    oracle = verbs.add_parser("oracle").add_subparsers(dest="sub", required=True)
    common(oracle.add_parser("cobar"), "max_t", "format")
    return ap


def run(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.config:
            for k, v in read_config(args.config).items():
                if hasattr(args, k) and getattr(args, k) is None:
                    setattr(args, k, v)
        if hasattr(args, "format") and args.format is None:
            args.format = "json"
        if hasattr(args, "format") and args.format not in ("json", "ascii", "svg"):
            raise UsageError(f"unknown format {args.format!r}")
        _threads()
        return COMMANDS[(args.verb, args.sub)](args)
    except UsageError as e:
        print(f"qadams: error: {e}", file=sys.stderr)
        return 2
    except (UnsupportedPrime, CostGuard) as e:
        print(f"qadams: error: {e}", file=sys.stderr)
        return 2
    except QAError as e:
        witness = getattr(e, "witness", None) or getattr(e, "cell", None) or getattr(e, "degree", None)
        print(f"FAIL: {type(e).__name__}: {e}" + (f" (witness {witness})" if witness is not None else ""),
              file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
