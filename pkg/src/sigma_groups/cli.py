"""Command-line front end.

Exit codes: 0 success, 2 when the answer is Unsupported or NotStabilized
(a partial report is still written), 1 on any other error, 64 on usage
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from contextlib import contextmanager

from . import __version__, diff_ring
from .errors import NotStabilized, SigmaGroupError, Unsupported

EXIT_OK, EXIT_ERROR, EXIT_PARTIAL, EXIT_USAGE = 0, 1, 2, 64
BUDGET_ENV = "SIGMA_GROUPS_BUDGET"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _load_spec(path):
    return diff_ring.GroupSpec.from_json(_load_json(path))


@contextmanager
def _budget(extra):
    old = diff_ring.DEFAULT_CAP_EXTRA
    diff_ring.DEFAULT_CAP_EXTRA = extra
    try:
        yield
    finally:
        diff_ring.DEFAULT_CAP_EXTRA = old


# -- commands ------------------------------------------------------------------


def _levels(args, spec):
    from .tower import default_levels

    return args.levels if args.levels is not None else default_levels(spec, args.lookahead)


def cmd_tower(args):
    from .tower import build_tower

    spec = _load_spec(args.spec)
    return build_tower(spec, _levels(args, spec), args.lookahead).to_json()


def cmd_invariants(args):
    from .tower import build_tower, invariants

    spec = _load_spec(args.spec)
    tower = build_tower(spec, _levels(args, spec), args.lookahead)
    try:
        return invariants(tower).to_json()
    except NotStabilized as exc:
        exc.partial = {"dims": tower.dims(), "fiber_vecdims": [lv.fiber_vecdim for lv in tower.levels]}
        raise


def cmd_check_subgroup(args):
    from .hopf import is_hopf_ideal

    spec = _load_spec(args.spec)
    level = args.levels if args.levels is not None else spec.order
    return is_hopf_ideal(spec, level, args.lookahead).to_json()


def cmd_morphism(args):
    from . import morphisms as M
    from .textio import format_poly

    phi = M.MorphismSpec.from_json(_load_json(args.morphism))
    bound = args.bound if args.bound is not None else phi.order + 1
    if args.action == "image":
        level = args.levels if args.levels is not None else bound
        ideal = M.image_ideal(phi, level, lookahead=args.lookahead)
        return {"level": level, "image_ideal": [format_poly(g) for g in ideal.basis]}
    if args.action == "kernel":
        return {"kernel": M.kernel_group(phi).to_json()}
    if args.action == "preimage":
        if not args.z:
            raise UsageError("morphism preimage needs --z FILE")
        return {"preimage": M.preimage_group(phi, _load_spec(args.z)).to_json()}
    if args.action == "classify":
        return {
            "bound": bound,
            "injective": M.is_injective(phi, bound, args.lookahead),
            "surjective": M.is_surjective(phi, bound, args.lookahead),
            "kernel": [format_poly(g) for g in M.kernel_group(phi).generators],
        }
    return M.factorize(phi, bound, args.lookahead).to_json()


def cmd_quotient(args):
    from .quotients import quotient_spec, verify_quotient_invariants

    G, N = _load_spec(args.group), _load_spec(args.normal)
    res = quotient_spec(G, N, args.degree, args.levels, args.lookahead)
    out = res.to_json()
    out["invariants"] = verify_quotient_invariants(G, N, res.quotient, args.lookahead).to_json()
    return out


def cmd_components(args):
    from .components import components_at_level, identity_component
    from .textio import format_poly

    spec = _load_spec(args.spec)
    L = args.levels if args.levels is not None else spec.order
    out = components_at_level(spec, L, args.lookahead, args.factor_cap).to_json()
    out["identity_component"] = [
        format_poly(g) for g in identity_component(spec, L, args.lookahead, args.factor_cap).basis
    ]
    return out


def cmd_sigma_components(args):
    from .components import sigma_components

    spec = _load_spec(args.spec)
    L = args.levels if args.levels is not None else spec.order
    rep = sigma_components(spec, L, args.lookahead, args.factor_cap)
    return {
        "level": L,
        "count": rep.sigma_component_count,
        "components": len(rep.components),
        "window": [list(w) for w in rep.window],
        "stable": rep.stable,
    }


def cmd_closure(args):
    from .textio import format_poly

    spec = _load_spec(args.spec)
    bound = args.bound if args.bound is not None else spec.order
    if args.kind == "reflexive":
        res = diff_ring.reflexive_closure(spec, bound)
    else:
        res = diff_ring.perfect_closure_step(spec.generators, spec, bound)
    return {
        "kind": res.kind,
        "bound": res.bound,
        "closed": res.closed_flag,
        "generators": [format_poly(g) for g in res.generators],
        "added": [format_poly(g) for g in res.added],
    }


def cmd_stabilizer(args):
    from .hopf import is_hopf_ideal
    from .reps import Comodule, check_comodule, stabilizer_ideal

    c = Comodule.from_json(_load_json(args.comodule))
    stab = stabilizer_ideal(c, args.m)
    level = max(stab.order, c.level)
    return {
        "comodule_valid": check_comodule(c, None, args.lookahead),
        "stabilizer": stab.to_json(),
        "hopf": is_hopf_ideal(stab, level, args.lookahead).hopf,
    }


def cmd_torus_decompose(args):
    from .reps import Comodule, torus_decompose

    c = Comodule.from_json(_load_json(args.comodule))
    return {"lines": [l.to_json() for l in torus_decompose(c)]}


COMMANDS = {
    "tower": cmd_tower,
    "invariants": cmd_invariants,
    "check-subgroup": cmd_check_subgroup,
    "morphism": cmd_morphism,
    "quotient": cmd_quotient,
    "components": cmd_components,
    "sigma-components": cmd_sigma_components,
    "closure": cmd_closure,
    "stabilizer": cmd_stabilizer,
    "torus-decompose": cmd_torus_decompose,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--levels", type=int, help="tower depth or working level")
    common.add_argument("--lookahead", type=int, default=diff_ring.DEFAULT_LOOKAHEAD)
    common.add_argument("--degree", type=int, default=4, help="degree bound for quotients")
    common.add_argument("--bound", type=int, help="level bound for morphisms and closures")
    common.add_argument("--budget", type=int, default=diff_ring.DEFAULT_CAP_EXTRA,
                        help="prolongation cap: level i may prolong up to i + BUDGET")
    common.add_argument("--factor-cap", type=int, default=8, help="largest irreducible factor degree")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--timing", action="store_true", help="include wall time in the report")

    parser = _Parser(prog="sigma-groups", description="Invariants of difference algebraic groups.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("tower", "invariants", "check-subgroup", "components", "sigma-components"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("spec")
    p = sub.add_parser("morphism", parents=[common])
    p.add_argument("action", choices=("image", "kernel", "preimage", "classify", "factorize"))
    p.add_argument("morphism")
    p.add_argument("--z", help="subgroup of the target for preimage")
    p = sub.add_parser("quotient", parents=[common])
    p.add_argument("group")
    p.add_argument("normal")
    p = sub.add_parser("closure", parents=[common])
    p.add_argument("spec")
    p.add_argument("--kind", choices=("reflexive", "perfect"), default="reflexive")
    p = sub.add_parser("stabilizer", parents=[common])
    p.add_argument("comodule")
    p.add_argument("--m", type=int, required=True, help="W is spanned by the first m basis vectors")
    p = sub.add_parser("torus-decompose", parents=[common])
    p.add_argument("comodule")
    return parser


def _echo(args) -> dict:
    skip = {"out", "format", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _render_text(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for k, v in report.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_render_text(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            for item in v:
                lines.append(_render_text(item, indent + 1))
                lines.append(f"{pad}  --")
        else:
            lines.append(f"{pad}{k}: {json.dumps(v) if isinstance(v, (list, bool)) or v is None else v}")
    return "\n".join(lines)


def _emit(report: dict, args):
    if args.format == "json":
        text = json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    else:
        text = _render_text(report) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    budget = args.budget
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            budget = int(env)
        except ValueError:
            print(f"{BUDGET_ENV} must be an integer", file=sys.stderr)
            return EXIT_USAGE
    report = {"command": args.command, "args": _echo(args), "budget": {"cap_extra": budget}}
    start = time.perf_counter()
    code = EXIT_OK
    try:
        with _budget(budget):
            report["result"] = COMMANDS[args.command](args)
        report["status"] = "ok"
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (Unsupported, NotStabilized) as exc:
        report["status"] = type(exc).__name__
        report["error"] = str(exc)
        partial = getattr(exc, "partial", None)
        if isinstance(partial, dict):
            report["partial"] = partial
        code = EXIT_PARTIAL
    except (SigmaGroupError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        report["status"] = "error"
        report["error"] = f"{type(exc).__name__}: {exc}"
        code = EXIT_ERROR
    if args.timing:
        report["wall_time"] = round(time.perf_counter() - start, 6)
    _emit(report, args)
    if code == EXIT_ERROR:
        print(report["error"], file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
