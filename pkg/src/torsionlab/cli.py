"""Command-line entry point.

Exit codes::

    0  success
    1  a verification check failed
    2  malformed input (unreadable JSON, missing keys, bad field name)
    3  invalid chain complex (boundary maps do not compose to zero)
    4  representation violates the surface relation or the group
    5  representation is reducible (H_0 or H_2 nonzero)
    6  transverse cocycle violates a switch condition

Reports are JSON lines with sorted keys: a header recording the
configuration and seed, one line per check, then a summary.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .errors import (
    AdmissibilityError,
    ChainComplexError,
    DimensionError,
    DomainError,
    FieldError,
    GroupMembershipError,
    InvalidRepresentationError,
    ReducibleRepresentationError,
    TorsionLabError,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_MALFORMED = 2
EXIT_BAD_COMPLEX = 3
EXIT_RELATOR = 4
EXIT_REDUCIBLE = 5
EXIT_INADMISSIBLE = 6

SUITES = ("invariance", "main-theorem", "symplectic", "all")


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple
    field: str | None = None
    tol: float = 1e-9
    out: str | None = None
    seed: int = 0
    suite: str = "all"
    samples: int = 20

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")


class _Fail(Exception):
    def __init__(self, code: int, message: str, **extra):
        super().__init__(message)
        self.code = code
        self.extra = extra


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _Fail(EXIT_MALFORMED, f"cannot read {path}: {exc}") from None


def _field(cfg: RunConfig, default: str = "rational"):
    from .fieldlin import field_from_name

    name = cfg.field or default
    try:
        return field_from_name(name, tol=cfg.tol)
    except (FieldError, ValueError) as exc:
        raise _Fail(EXIT_MALFORMED, str(exc)) from None


def _line(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, default=str)


def fixture_seed(seed: int, name: str) -> int:
    """Per-fixture seed, independent of processing order."""
    return (seed * 1_000_003 + zlib.crc32(name.encode())) % (2 ** 32)


# ---------------------------------------------------------------------------
# torsion


def cmd_torsion(cfg: RunConfig) -> tuple[int, list]:
    from .chaincore import (
        chain_complex_from_json,
        homology_basis_default,
        homology_basis_from_json,
        homology_basis_to_json,
        torsion,
    )
    from .errors import ContractError

    obj = _load_json(cfg.inputs[0])
    if not isinstance(obj, dict):
        raise _Fail(EXIT_MALFORMED, "chain complex file must hold a JSON object")
    F = _field(cfg, obj.get("field", "rational") if cfg.field is None else cfg.field)
    try:
        c = chain_complex_from_json(obj, F)
    except ChainComplexError as exc:
        raise _Fail(EXIT_BAD_COMPLEX, str(exc), degree=exc.degree) from None
    except (KeyError, TypeError, DimensionError, ValueError) as exc:
        raise _Fail(EXIT_MALFORMED, f"malformed chain complex: {exc}") from None
    if len(cfg.inputs) > 1:
        hobj = _load_json(cfg.inputs[1])
        try:
            h = homology_basis_from_json(hobj, F)
        except (KeyError, TypeError, DimensionError, ValueError) as exc:
            raise _Fail(EXIT_MALFORMED, f"malformed homology basis: {exc}") from None
    else:
        h = homology_basis_default(c)
    try:
        t = torsion(c, h)
    except ContractError as exc:
        raise _Fail(EXIT_MALFORMED, str(exc)) from None
    rec = {"check": "torsion", "value": str(t.value), "field": F.name,
           "homology_dims": list(c.homology_dims()), "homology_basis": homology_basis_to_json(h)}
    return EXIT_OK, [rec]


# ---------------------------------------------------------------------------
# verify


def _suite_invariance(rep, rng) -> list:
    from .surfcx import invariance_suite

    rep_out = invariance_suite(rep, rng)
    return [{"check": "invariance", "pass": bool(rep_out["agree"]),
             "reference": str(rep_out["reference"]), "changes": len(rep_out["values"])}]


def _suite_main(rep, rng) -> list:
    from .pairings import verify_main_theorem

    r = verify_main_theorem(rep)
    out = r.to_json()
    out["check"] = "main-theorem"
    return [out]


def _suite_symplectic(field, rng, samples: int) -> list:
    from .chaincore import torsion
    from .randgen import random_homology_basis, random_symplectic_complex
    from .sympcc import torsion_via_symplectic

    fails = 0
    for _ in range(samples):
        k, l = rng.randint(0, 2), rng.randint(1, 2)
        s = random_symplectic_complex(rng, k, l, field=field)
        h = random_homology_basis(rng, s.base)
        a = torsion(s.base, h).value
        b = torsion_via_symplectic(s, h).value
        ok = a == b if field.exact else abs(float(a) - float(b)) <= field.tol * max(1.0, abs(float(a)))
        fails += not ok
    return [{"check": "symplectic", "pass": fails == 0, "samples": samples, "failures": fails}]


def run_fixture(cfg: RunConfig, path: str) -> dict:
    """All requested suites on one representation file; returns lines and an exit code."""
    from .surfcx import representation_from_json

    name = Path(path).stem
    lines: list = []
    code = EXIT_OK
    try:
        obj = _load_json(path)
        if not isinstance(obj, dict):
            raise _Fail(EXIT_MALFORMED, "representation file must hold a JSON object")
        name = str(obj.get("name", name))
        if cfg.field is not None:
            obj = dict(obj, field=cfg.field)
        try:
            rep = representation_from_json(obj, tol=cfg.tol)
        except (InvalidRepresentationError, GroupMembershipError) as exc:
            raise _Fail(EXIT_RELATOR, str(exc)) from None
        except (DomainError, DimensionError, FieldError, KeyError, TypeError, ValueError) as exc:
            raise _Fail(EXIT_MALFORMED, f"malformed representation: {exc}") from None
        rng = random.Random(fixture_seed(cfg.seed, name))
        suites = ("invariance", "main-theorem", "symplectic") if cfg.suite == "all" else (cfg.suite,)
        for suite in suites:
            try:
                if suite == "invariance":
                    recs = _suite_invariance(rep, rng)
                elif suite == "main-theorem":
                    recs = _suite_main(rep, rng)
                else:
                    recs = _suite_symplectic(rep.field, rng, cfg.samples)
            except ReducibleRepresentationError as exc:
                raise _Fail(EXIT_REDUCIBLE, str(exc), suite=suite) from None
            for r in recs:
                r["fixture"] = name
                lines.append(r)
                if not r["pass"]:
                    code = max(code, EXIT_CHECK_FAILED)
    except _Fail as f:
        lines.append(dict({"fixture": name, "error": str(f), "exit": f.code}, **f.extra))
        code = f.code
    except TorsionLabError as exc:
        lines.append({"fixture": name, "error": f"{type(exc).__name__}: {exc}", "exit": EXIT_MALFORMED})
        code = EXIT_MALFORMED
    return {"fixture": name, "lines": lines, "exit": code}


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("TORSIONLAB_THREADS", "1")))
    except ValueError:
        return 1


def cmd_verify(cfg: RunConfig) -> tuple[int, list]:
    paths = list(cfg.inputs)
    workers = min(_threads(), len(paths))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run_fixture, [cfg] * len(paths), paths))
    else:
        results = [run_fixture(cfg, p) for p in paths]
    results.sort(key=lambda r: r["fixture"])
    lines = [ln for r in results for ln in r["lines"]]
    failing = [r["exit"] for r in results if r["exit"]]
    # input errors take precedence over failed checks
    code = max(failing, key=lambda c: (c != EXIT_CHECK_FAILED, -c)) if failing else EXIT_OK
    summary = {"summary": [{"fixture": r["fixture"], "exit": r["exit"]} for r in results], "exit": code}
    return code, lines + [summary]


# ---------------------------------------------------------------------------
# thurston


def cmd_thurston(cfg: RunConfig, to_form: str = "thurston") -> tuple[int, list]:
    from .pairings import form_conversion, thurston_form, train_track_from_json

    track_obj = _load_json(cfg.inputs[0])
    try:
        track = train_track_from_json(track_obj)
    except DomainError as exc:
        raise _Fail(EXIT_MALFORMED, str(exc)) from None
    cocycles = []
    for p in cfg.inputs[1:3]:
        obj = _load_json(p)
        if isinstance(obj, dict) and "weights" in obj:
            obj = obj["weights"]
        cocycles.append(obj)
    if len(cocycles) != 2:
        raise _Fail(EXIT_MALFORMED, "thurston needs a track file and two cocycle files")
    try:
        value = thurston_form(track, *cocycles)
        value = form_conversion(value, "thurston", to_form)
    except AdmissibilityError as exc:
        raise _Fail(EXIT_INADMISSIBLE, str(exc)) from None
    except (DomainError, TypeError, ValueError) as exc:
        raise _Fail(EXIT_MALFORMED, str(exc)) from None
    return EXIT_OK, [{"check": "thurston", "form": to_form, "value": str(value)}]


# ---------------------------------------------------------------------------
# driver


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torsionlab", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"torsionlab {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=None, help="rational | quad:d | float (default: from input)")
    common.add_argument("--tol", type=float, default=1e-9, help="tolerance for the float field")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("torsion", parents=[common], help="torsion of a based chain complex")
    t.add_argument("complex")
    t.add_argument("homology", nargs="?")

    v = sub.add_parser("verify", parents=[common], help="verification suites on representations")
    v.add_argument("representations", nargs="+")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--samples", type=int, default=20, help="random complexes in the symplectic suite")

    th = sub.add_parser("thurston", parents=[common], help="Thurston form of two transverse cocycles")
    th.add_argument("track")
    th.add_argument("cocycles", nargs=2)
    th.add_argument("--to", default="thurston", help="thurston | psl2 | wp")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_MALFORMED
    if args.command == "torsion":
        inputs = (args.complex,) + ((args.homology,) if args.homology else ())
    elif args.command == "verify":
        inputs = tuple(args.representations)
    else:
        inputs = (args.track, *args.cocycles)
    cfg = RunConfig(args.command, inputs, args.field, args.tol, args.out, args.seed,
                    getattr(args, "suite", "all"), getattr(args, "samples", 20))
    header = {"header": {k: v for k, v in asdict(cfg).items() if k != "out"}}
    try:
        if cfg.command == "torsion":
            code, lines = cmd_torsion(cfg)
        elif cfg.command == "verify":
            code, lines = cmd_verify(cfg)
        else:
            code, lines = cmd_thurston(cfg, args.to)
    except _Fail as f:
        code, lines = f.code, [dict({"error": str(f), "exit": f.code}, **f.extra)]
    text = "\n".join(_line(x) for x in [header] + lines) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    if code:
        for x in lines:
            if "error" in x:
                print(f"error: {x['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
