"""Command-line front end.

Every subcommand writes its results as files (JSON for structure, CSV for
tables, P6 pixmaps for images) into the output directory together with a
run manifest listing each artifact and its SHA-256 digest.  Outputs are
deterministic for fixed parameters.  Exit codes: 0 success, 2 usage,
3 precision exhaustion, 4 invariant violation; failures also print a
machine-readable JSON object on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import InvariantError, PrecisionError

PREC_ENV = "QUADDYN_PREC"


@dataclass
class ArtifactWriter:
    """Collects written files and their digests for the manifest."""

    out_dir: Path
    records: list[dict] = field(default_factory=list)

    def write(self, name: str, data: "bytes | str") -> Path:
        if isinstance(data, str):
            data = data.encode()
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        path.write_bytes(data)
        self.records.append(
            {
                "name": name,
                "sha256": hashlib.sha256(data).hexdigest(),
                "bytes": len(data),
            }
        )
        return path

    def write_json(self, name: str, document: dict) -> Path:
        return self.write(name, json.dumps(document, indent=2, sort_keys=True) + "\n")


def _default_prec(args: argparse.Namespace) -> int | None:
    if getattr(args, "prec", None) is not None:
        return args.prec
    env = os.environ.get(PREC_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise InvariantError(f"{PREC_ENV} must be an integer, got {env!r}") from exc
    return None


def _parse_pq(text: str) -> tuple[int, int]:
    try:
        p_str, q_str = text.split("/")
        return int(p_str), int(q_str)
    except ValueError:
        raise ValueError(f"expected p/q, got {text!r}") from None


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ValueError(f"expected re[,im], got {text!r}")


def _parse_angle_arg(text: str) -> "Fraction | float":
    if "/" in text:
        return Fraction(text)
    if "." in text or "e" in text or "E" in text:
        return float(text)
    return Fraction(int(text))


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        lo_str, hi_str = text.split("..", 1)
        lo, hi = int(lo_str), int(hi_str)
        if hi < lo:
            raise InvariantError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(s) for s in text.split(",") if s.strip()]


def _cf_from_args(args: argparse.Namespace):
    from .cfrac import cf_expand, parse_cf_text

    if getattr(args, "cf", None):
        return parse_cf_text(args.cf)
    if getattr(args, "value", None):
        return cf_expand(Fraction(args.value))
    raise InvariantError("need --cf or --value")


# -- subcommand handlers -----------------------------------------------------


def _run_angle(args, writer: ArtifactWriter) -> dict:
    from .angles import Angle, double

    if args.cf and args.value:
        raise ValueError("pass either --cf or --value, not both")
    if args.cf:
        from .cardioid import external_angle
        from .cfrac import parse_cf_text

        prec = _default_prec(args) or 64
        result = external_angle(parse_cf_text(args.cf), prec)
        doc = {
            "approx": str(result.approx),
            "bound": f"2^-{prec - 1}",
            "iterates": [str(a) for a in result.iterates],
        }
        if result.exact_pair is not None:
            doc["exact_pair"] = [str(a) for a in result.exact_pair]
        writer.write_json("angle.json", doc)
        return doc
    if not args.value:
        raise ValueError("angle needs --cf or --value")
    a = Angle.parse(args.value)
    orbit = [a]
    for _ in range(args.steps):
        orbit.append(double(orbit[-1]))
    periodic = a.denominator % 2 == 1
    doc = {
        "angle": str(a),
        "purely_periodic": periodic,
        "doubling_orbit": [str(x) for x in orbit],
    }
    writer.write_json("angle.json", doc)
    return doc


def _run_orbit(args, writer: ArtifactWriter) -> dict:
    from .cardioid import find_orbit

    p, q = _parse_pq(args.pq)
    orbit = find_orbit(p, q)
    doc = {
        "rotation": f"{p}/{q}",
        "period": orbit.period,
        "angles": [str(a) for a in orbit.angles],
    }
    writer.write_json("orbit.json", doc)
    return doc


def _run_landing_pair(args, writer: ArtifactWriter) -> dict:
    from .cardioid import landing_pair

    p, q = _parse_pq(args.pq)
    lo, hi = landing_pair(p, q)
    doc = {"alpha_minus": str(lo), "alpha_plus": str(hi)}
    writer.write_json("landing-pair.json", doc)
    return doc


def _run_cantor(args, writer: ArtifactWriter) -> dict:
    from .cantor import cover
    from .imaging import cover_strip_image, ppm_bytes

    cf = _cf_from_args(args)
    result = cover(cf, args.depth, prec=_default_prec(args))
    doc = {
        "depth": result.depth,
        "arc_count": len(result.arcs),
        "total_length": str(result.total_length()),
        "hausdorff_bound": str(result.hausdorff_bound),
        "arcs": [{"lo": str(a.lo), "hi": str(a.hi)} for a in result.arcs],
    }
    writer.write_json("cantor-cover.json", doc)
    writer.write("cantor-cover.ppm", ppm_bytes(cover_strip_image(result.arcs)))
    return doc


def _run_brjuno(args, writer: ArtifactWriter) -> dict:
    from .cfrac import brjuno_partial_sums

    cf = _cf_from_args(args)
    prec = _default_prec(args) or 128
    sums = brjuno_partial_sums(cf, args.terms, prec_bits=prec)
    doc = {
        "terms": args.terms,
        "prec_bits": prec,
        "value": float(sums[-1]),
        "nondecreasing": all(b >= a for a, b in zip(sums, sums[1:])),
    }
    writer.write_json("brjuno.json", doc)
    return doc


def _run_cf(args, writer: ArtifactWriter) -> dict:
    from .cfrac import convergents

    cf = _cf_from_args(args)
    prec = _default_prec(args) or 64
    count = args.count
    if cf.is_rational:
        count = min(count, len(cf.quotients))
    lo, hi = cf.bracket(Fraction(1, 2**prec))
    approx = [str(v) for v in convergents(cf, count)]
    doc = {
        "quotients": list(cf.prefix(count)),
        "periodic": not cf.is_rational,
        "convergents": approx,
        # Second indexing: the classical pictures number the approximants
        # from the second convergent on.
        "convergents_from_second": approx[1:],
        "bracket_prec_bits": prec,
        "bracket": [str(lo), str(hi)],
    }
    writer.write_json("cf.json", doc)
    return doc


def _run_radius(args, writer: ArtifactWriter) -> dict:
    from .linearize import (
        conformal_radius_estimate,
        inner_radius_probe,
        linearization_coeffs,
    )

    cf = _cf_from_args(args)
    prec = _default_prec(args) or 256
    series = linearization_coeffs(cf, args.order, prec=prec)
    est = conformal_radius_estimate(series)
    probe = inner_radius_probe(series, est.r_hat)
    doc = {
        "order": args.order,
        "prec_bits": prec,
        "r_hat": float(est.r_hat),
        "r_hat_half_order": float(est.half_order),
        "reliable": est.reliable,
        "inner_radius": float(probe.value),
        "inner_tail_flagged": probe.tail_flagged,
        "koebe_lower": float(est.r_hat) / 4,
        "koebe_ok": bool(
            0.99 * float(est.r_hat) / 4 <= float(probe.value) <= 1.01 * float(est.r_hat)
        ),
    }
    writer.write_json("radius.json", doc)
    return doc


def _run_ratio_experiment(args, writer: ArtifactWriter) -> dict:
    from .linearize import radius_ratio_experiment

    prefix = tuple(int(s) for s in args.prefix.split(",") if s.strip())
    ns = _parse_range(args.n)
    prec = _default_prec(args) or 256
    exp = radius_ratio_experiment(
        prefix, Fraction(args.amplitude), ns, order=args.order, prec=prec
    )
    lines = ["n,scaled,deviation,reliable"]
    for row in exp.rows:
        lines.append(
            f"{row.n},{float(row.scaled)!r},{float(row.deviation)!r},{row.reliable}"
        )
    writer.write("ratio-experiment.csv", "\n".join(lines) + "\n")
    doc = {
        "base_r_hat": float(exp.base_r_hat),
        "amplitude": args.amplitude,
        "n": ns,
        "trend_ok": exp.trend_ok,
        "reliable": exp.reliable,
    }
    writer.write_json("ratio-experiment.json", doc)
    return doc


def _run_julia(args, writer: ArtifactWriter) -> dict:
    from .dynamics import render_julia
    from .imaging import classification_image, ppm_bytes

    c = _parse_complex(args.c)
    grid = render_julia(c, args.res, max_iter=args.max_iter, safety=args.safety)
    writer.write("julia.ppm", ppm_bytes(classification_image(grid.cells)))
    doc = {
        "c": [c.real, c.imag],
        "resolution_exponent": grid.resolution_exponent,
        "extent": [
            [grid.origin.real, grid.origin.real + grid.extent],
            [grid.origin.imag, grid.origin.imag + grid.extent],
        ],
        "safety": args.safety,
        "max_iter": args.max_iter,
        "counts": grid.counts(),
    }
    writer.write_json("julia.json", doc)
    return doc


def _run_ray(args, writer: ArtifactWriter) -> dict:
    from .dynamics import trace_ray

    c = _parse_complex(args.c)
    angle = _parse_angle_arg(args.angle)
    ray = trace_ray(c, angle, t_min=args.tmin)
    lines = ["t,re,im"]
    for t, z in zip(ray.potentials, ray.points):
        lines.append(f"{t!r},{z.real!r},{z.imag!r}")
    writer.write("ray.csv", "\n".join(lines) + "\n")
    doc = {
        "c": [c.real, c.imag],
        "angle": str(angle),
        "t_min": args.tmin,
        "points": len(ray.points),
        "terminus": [ray.points[-1].real, ray.points[-1].imag],
        "landing_estimate": [ray.landing_estimate.real, ray.landing_estimate.imag],
    }
    writer.write_json("ray.json", doc)
    return doc


def _sequence_from_arg(text: str, slot: str):
    from .combdomain import SequenceDirection, parse_sequence_expr, toy_sequences

    if text == "builtin:toy":
        a_seq, b_seq = toy_sequences()
        return a_seq if slot == "a" else b_seq
    direction = (
        SequenceDirection.INCREASING if slot == "a" else SequenceDirection.DECREASING
    )
    return parse_sequence_expr(text, direction)


def _run_omega(args, writer: ArtifactWriter) -> dict:
    from .combdomain import (
        OmegaDomain,
        build_gamma_n,
        chain_midpoint,
        crosscut_chain,
        impression_segments,
    )
    from .imaging import domain_image, ppm_bytes

    dom = OmegaDomain(
        _sequence_from_arg(args.a_seq, "a"), _sequence_from_arg(args.b_seq, "b")
    )
    curves = {}
    for n in range(1, args.depth + 1):
        verts = build_gamma_n(dom, n)
        curves[str(n)] = [[str(x), str(y)] for x, y in verts]
    chain = []
    for n in range(1, args.depth + 1):
        seg = crosscut_chain(n)
        mid = chain_midpoint(n)
        chain.append(
            {
                "n": n,
                "from": [str(seg.start[0]), str(seg.start[1])],
                "to": [str(seg.end[0]), str(seg.end[1])],
                "diameter": str(seg.diameter),
                "marked_point": [str(mid[0]), str(mid[1])],
            }
        )
    inner, outer = impression_segments(dom, args.depth)
    doc = {
        "depth": args.depth,
        "boundary_curves": curves,
        "crosscut_chain": chain,
        "impression_inner": [str(inner.start[0]), str(inner.end[0])],
        "impression_outer": [str(outer.start[0]), str(outer.end[0])],
    }
    writer.write_json("omega.json", doc)
    writer.write(
        "omega.ppm", ppm_bytes(domain_image(dom, args.depth, resolution=args.res))
    )
    return doc


def _run_lavrentiev(args, writer: ArtifactWriter) -> dict:
    from .dynamics import lavrentiev_check, lavrentiev_monte_carlo

    if args.endpoints:
        x1_str, x2_str = args.endpoints.split(",")
        result = lavrentiev_check((float(x1_str), float(x2_str)), args.distance)
        doc = {
            "mode": "single",
            "center": result.center,
            "radius": result.radius,
            "crosscut_diam": result.crosscut_diam,
            "image_diam": result.image_diam,
            "bound": result.bound,
            "holds": result.holds,
            "margin": result.margin,
        }
    else:
        results = lavrentiev_monte_carlo(args.count, seed=args.seed)
        violations = [r for r in results if not r.holds]
        doc = {
            "mode": "monte-carlo",
            "count": len(results),
            "seed": args.seed,
            "violations": len(violations),
            "worst_ratio": max(r.image_diam / r.bound for r in results),
        }
    writer.write_json("lavrentiev.json", doc)
    return doc


def _run_accept(args, writer: ArtifactWriter) -> dict:
    from .acceptance import run_all

    results = run_all()
    for r in results:
        print(r.line)
    doc = {
        "passed": all(r.passed for r in results),
        "criteria": [
            {
                "id": r.ident,
                "title": r.title,
                "passed": r.passed,
                "seconds": round(r.seconds, 3),
                "detail": r.detail,
            }
            for r in results
        ],
    }
    writer.write_json("accept.json", doc)
    return doc


_HANDLERS = {
    "angle": _run_angle,
    "orbit": _run_orbit,
    "landing-pair": _run_landing_pair,
    "cantor": _run_cantor,
    "brjuno": _run_brjuno,
    "cf": _run_cf,
    "radius": _run_radius,
    "ratio-experiment": _run_ratio_experiment,
    "julia": _run_julia,
    "ray": _run_ray,
    "omega": _run_omega,
    "lavrentiev": _run_lavrentiev,
    "accept": _run_accept,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=".", help="output directory for artifacts")
    common.add_argument(
        "--prec",
        type=int,
        default=None,
        help=f"working precision in bits (default: ${PREC_ENV} or per-command)",
    )
    common.add_argument(
        "--json", action="store_true", help="print the result JSON to stdout"
    )

    parser = argparse.ArgumentParser(
        prog="quaddyn",
        description="Exact and numerical tools for quadratic dynamics.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "angle",
        parents=[common],
        help="doubling orbit of an exact angle, or the external angle of a "
        "continued-fraction rotation number",
    )
    p.add_argument("--value", help="exact angle as a fraction, e.g. 3/7")
    p.add_argument("--cf", help="rotation number, e.g. 1,1,1:rep=1")
    p.add_argument("--steps", type=int, default=8)

    p = sub.add_parser("orbit", parents=[common], help="rotation cycle for p/q")
    p.add_argument("--pq", required=True, help="rotation number, e.g. 2/5")

    p = sub.add_parser(
        "landing-pair", parents=[common], help="wake boundary angles for p/q"
    )
    p.add_argument("--pq", required=True)

    p = sub.add_parser("cantor", parents=[common], help="rotation-set cover arcs")
    p.add_argument("--cf", help="angle as continued fraction, e.g. 1:rep=1")
    p.add_argument("--value", help="rational angle as a fraction")
    p.add_argument("--depth", type=int, default=8)

    p = sub.add_parser("brjuno", parents=[common], help="Brjuno partial sums")
    p.add_argument("--cf", help="continued fraction literal")
    p.add_argument("--value", help="rational value (finite expansion)")
    p.add_argument("--terms", type=int, default=50)

    p = sub.add_parser("cf", parents=[common], help="expansion and convergents")
    p.add_argument("--cf", help="continued fraction literal")
    p.add_argument("--value", help="rational value to expand")
    p.add_argument("--count", type=int, default=12)

    p = sub.add_parser("radius", parents=[common], help="conformal radius estimate")
    p.add_argument("--cf", required=True)
    p.add_argument("--order", type=int, default=256)

    p = sub.add_parser(
        "ratio-experiment", parents=[common], help="perturbed-radius trend table"
    )
    p.add_argument("--prefix", required=True, help="comma list, e.g. 1,1,1,1,1,1")
    p.add_argument("--amplitude", "--A", type=int, default=2)
    p.add_argument("--n", required=True, help="depths, e.g. 3..6 or 3,4,5")
    p.add_argument("--order", type=int, default=256)

    p = sub.add_parser("julia", parents=[common], help="render a Julia set grid")
    p.add_argument("--c", required=True, help="parameter, e.g. -2,0")
    p.add_argument("--res", type=int, default=8, help="resolution exponent")
    p.add_argument("--max-iter", type=int, default=128)
    p.add_argument("--safety", type=float, default=4.0)

    p = sub.add_parser("ray", parents=[common], help="trace an external ray")
    p.add_argument("--c", required=True)
    p.add_argument("--angle", required=True, help="fraction or float in turns")
    p.add_argument("--tmin", type=float, default=1e-6)

    p = sub.add_parser("omega", parents=[common], help="carved-square gallery")
    p.add_argument("--a-seq", default="builtin:toy")
    p.add_argument("--b-seq", default="builtin:toy")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--res", type=int, default=384)

    p = sub.add_parser(
        "lavrentiev", parents=[common], help="crosscut inequality checks"
    )
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=20240801)
    p.add_argument("--endpoints", help="single crosscut, e.g. 0.9999,1.0001")
    p.add_argument("--distance", type=float, help="gap lower bound for --endpoints")

    sub.add_parser("accept", parents=[common], help="run the acceptance checklist")

    return parser


def _emit_error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


# flags whose values may begin with a minus sign, which argparse would
# otherwise read as another option (e.g. --c -2,0)
_GLUE_FLAGS = {"--c", "--angle", "--value", "--endpoints", "--pq", "--distance"}


def _glue_negative_values(argv: list[str]) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _GLUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: "list[str] | None" = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_glue_negative_values(list(argv)))
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        if code not in (0, None):
            _emit_error("UsageError", "unrecognized or malformed arguments")
            return 2
        return 0

    writer = ArtifactWriter(Path(args.out))
    try:
        doc = _HANDLERS[args.command](args, writer)
    except InvariantError as exc:
        _emit_error("InvariantError", str(exc))
        return 4
    except PrecisionError as exc:
        _emit_error("PrecisionError", str(exc))
        return 3
    except ValueError as exc:
        _emit_error("UsageError", str(exc))
        return 2

    params = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in {"command", "json"} and v is not None
    }
    params["out"] = str(params.get("out", "."))
    manifest = {
        "command": args.command,
        "version": __version__,
        "precision_bits": _default_prec(args) if hasattr(args, "prec") else None,
        "parameters": params,
        "artifacts": writer.records,
    }
    writer.out_dir.mkdir(parents=True, exist_ok=True)
    (writer.out_dir / f"{args.command}-manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )

    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        names = ", ".join(rec["name"] for rec in writer.records)
        print(f"{args.command}: wrote {names} in {writer.out_dir}")

    if args.command == "accept" and not doc["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
