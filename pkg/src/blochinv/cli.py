"""Command-line interface.

Subcommands: invariant, fill, cs, borel, relation, scissors.  Exit codes:
0 success, 1 numeric non-convergence, 2 invalid input.  ``--format records``
emits a single JSON document with a versioned schema tag instead of text.
"""

from __future__ import annotations

import argparse
import json
import sys

import mpmath as mp

from . import __version__
from .borel import (borel_regulator, detect_relation, galois_conjugate_sum,
                    rank_witness)
from .chern_simons import (cs_formula, rationalize_mod_pi2, rho_of_beta,
                           solve_flattening)
from .dilog import volume_of_prebloch
from .errors import (BlochError, Diverged, DegeneratedToFlat,
                     JacobianSingular, NotCoprime, NotIntegral,
                     RootFindingFailed, TriangulationSyntaxError)
from .numfield import embeddings
from .prebloch import is_bloch, parse_element, six_fold_normalize
from .scissors import (cone_decomposition, decomposition_class,
                       parse_polyhedron, polyhedron_class)
from .surgery import FillingSpec, filled_system, newton_solve, solution_volume
from .triang import (bloch_invariant, embedding_for_validation,
                     parse_triangulation)

SCHEMA = "blochinv.report/1"

_NUMERIC_ERRORS = (Diverged, DegeneratedToFlat, JacobianSingular,
                   RootFindingFailed)
_INPUT_ERRORS = (TriangulationSyntaxError, NotIntegral, NotCoprime)


def _digits(precision):
    return max(10, int(precision * 0.30103) - 2)


def _fmt(x, precision):
    return mp.nstr(x, _digits(precision), strip_zeros=False)


class Report:
    """Collects key/value findings; renders as text lines or one JSON doc."""

    def __init__(self, command, config):
        self.data = {"schema": SCHEMA, "command": command,
                     "precision": config.precision}
        self.lines = []

    def add(self, key, value, text=None):
        self.data[key] = value
        self.lines.append("%-22s %s" % (key + ":", text if text is not None
                                        else value))

    def emit(self, config):
        if config.format == "records":
            print(json.dumps(self.data, default=str, indent=2))
        else:
            for line in self.lines:
                print(line)


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise TriangulationSyntaxError(str(exc))


def _is_triangulation(text):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            return line.split()[0] in ("tets", "cusps")
    return False


def _load_element(path, precision):
    element, places = parse_element(_read(path), precision=precision)
    if element.is_zero() and element.field is None:
        raise TriangulationSyntaxError("no element data in %s" % path)
    return element, places


def _element_places(element, places, precision):
    if places is not None:
        return places
    if element.field is None:
        return None
    return embeddings(element.field, precision).places


# ---------------------------------------------------------------------------

def cmd_invariant(args, config):
    rep = Report("invariant", config)
    text = _read(args.file)
    prec = config.precision
    if _is_triangulation(text):
        t = parse_triangulation(text, precision=prec)
        emb = None
        if t.exact_shapes():
            emb = embedding_for_validation(t, precision=prec)
            rep.add("field", list(t.field.min_poly))
        t.validate(precision=prec, embedding=emb)
        rep.add("validated", True)
        element = bloch_invariant(t)
    else:
        element, places = _load_element(args.file, prec)
        element = six_fold_normalize(element)
        if element.field is not None:
            rep.add("field", list(element.field.min_poly))
        emb = None
        if places:
            with mp.workprec(prec + 16):
                vols = [volume_of_prebloch(element, embedding=r, precision=prec)
                        for r in places]
            for j, v in enumerate(vols):
                rep.add("volume_place_%d" % j, _fmt(v, prec))
    rep.add("terms", len(element))
    from .prebloch import serialize_element
    rep.add("element", serialize_element(element).strip().splitlines(),
            text="; ".join(serialize_element(element).strip().splitlines()))
    if element.is_exact() and element.field is not None:
        cert = is_bloch(element, precision=prec)
        rep.add("bloch_certificate", cert.verdict)
        es = embeddings(element.field, prec)
        with mp.workprec(prec + 16):
            for j, root in enumerate(es.places):
                v = volume_of_prebloch(element, embedding=root, precision=prec)
                rep.add("volume_embedding_%d" % j, _fmt(v, prec),
                        text="%s (at root %s)" % (_fmt(v, prec),
                                                  mp.nstr(root, 12)))
    elif not element.is_exact():
        with mp.workprec(prec + 16):
            v = volume_of_prebloch(element, precision=prec)
        rep.add("volume", _fmt(v, prec))
    rep.emit(config)
    return 0


def _parse_fill_flags(fills, h):
    if not fills:
        return None
    if len(fills) != h:
        raise NotCoprime("need %d --fill flags, got %d" % (h, len(fills)))
    out = []
    for f in fills:
        if f == "complete":
            out.append(None)
        else:
            p, q = f.replace(",", " ").split()
            out.append((int(p), int(q)))
    return out


def cmd_fill(args, config):
    rep = Report("fill", config)
    prec = config.precision
    t = parse_triangulation(_read(args.file), precision=prec)
    fillings = _parse_fill_flags(args.fill, t.h) or t.fillings
    filling = FillingSpec(fillings)
    system = filled_system(t, filling)
    res = newton_solve(system, precision=prec, allow_flat=config.allow_flat)
    rep.add("converged", res.converged)
    rep.add("steps", res.steps)
    rep.add("residual", mp.nstr(res.residual, 8))
    for i, z in enumerate(res.shapes):
        rep.add("shape_%d" % i, _fmt(z, prec))
    for j, lam in enumerate(res.lambdas):
        rep.add("core_length_%d" % j, _fmt(lam, prec))
    with mp.workprec(prec + 16):
        rep.add("volume", _fmt(solution_volume(res, precision=prec), prec))
    rep.emit(config)
    return 0


def cmd_cs(args, config):
    rep = Report("cs", config)
    prec = config.precision
    t = parse_triangulation(_read(args.file), precision=prec)
    emb = embedding_for_validation(t, precision=prec) if t.exact_shapes() else None
    t.validate(precision=prec, embedding=emb)
    flat = solve_flattening(t.U, t.d)
    rep.add("flattening", [str(q) for q in flat.c],
            text=" ".join(str(q) for q in flat.c))
    rep.add("flattening_integral", flat.integral)
    filling = FillingSpec(t.fillings)
    if any(f is not None for f in filling):
        res = newton_solve(filled_system(t, filling), precision=prec,
                           allow_flat=config.allow_flat)
        shapes = res.shapes
        lambdas = res.lambdas
    else:
        shapes = t.numeric_shapes(prec, embedding=emb)
        lambdas = [mp.mpc(0)] * t.h
    result = cs_formula(shapes, lambdas, flat, precision=prec)
    with mp.workprec(prec + 16):
        rep.add("vol", _fmt(result.vol, prec))
        rep.add("cs_representative", _fmt(result.cs_mod_rational, prec))
        probe = rationalize_mod_pi2(result.cs_mod_rational,
                                    config.denom_bound, prec)
        rep.add("cs_over_pi2_rational", str(probe) if probe is not None
                else None, text=probe if probe is not None else "NotFound")
        rep.add("denominator_bound", config.denom_bound)
        rho = rho_of_beta(shapes, flat, precision=prec, lambdas=lambdas)
        rep.add("rho_representative", _fmt(rho.value, prec))
        if args.calibrate_cs is not None:
            known = mp.mpf(args.calibrate_cs)
            alpha = (result.vol + mp.mpc(0, 1) * known) - result.value
            q = rationalize_mod_pi2(mp.im(alpha), config.denom_bound, prec)
            rep.add("alpha_fitted_over_pi2", str(q) if q is not None else None,
                    text=q if q is not None else "NotFound")
    rep.emit(config)
    return 0


def cmd_borel(args, config):
    rep = Report("borel", config)
    prec = config.precision
    for path in args.files:
        element, places = _load_element(path, prec)
        places = _element_places(element, places, prec)
        vec = borel_regulator(element, precision=prec, places=places)
        rep.add("places_%s" % path,
                [mp.nstr(r, 20) for r in places])
        rep.add("regulator_%s" % path, [_fmt(v, prec) for v in vec.values],
                text=" ".join(_fmt(v, prec) for v in vec.values))
        with mp.workprec(prec + 16):
            gal = galois_conjugate_sum(element, precision=prec)
            rep.add("galois_sum_%s" % path, mp.nstr(mp.fsum(gal), 8))
    rep.emit(config)
    return 0


def cmd_relation(args, config):
    rep = Report("relation", config)
    prec = config.precision
    vectors = []
    elements = []
    for path in args.files:
        element, places = _load_element(path, prec)
        places = _element_places(element, places, prec)
        vectors.append(borel_regulator(element, precision=prec, places=places))
        elements.append(element)
    report = detect_relation(vectors, coefficient_bound=args.bound,
                             precision=prec, elements=elements)
    if report is None:
        rep.add("relation", None, text="None")
    else:
        rep.add("relation", list(report.coefficients))
        rep.add("residual", mp.nstr(report.residual, 8))
        rep.add("confidence", report.confidence)
    rep.add("rank_witness", rank_witness(vectors, precision=prec))
    rep.emit(config)
    return 0


def cmd_scissors(args, config):
    rep = Report("scissors", config)
    prec = config.precision
    poly = parse_polyhedron(_read(args.file), precision=prec)
    element = polyhedron_class(poly)
    rep.add("vertices", len(poly.vertices))
    rep.add("triangles", len(poly.triangles()))
    rep.add("class_terms", len(element))
    with mp.workprec(prec + 16):
        vols = []
        for apex in range(len(poly.vertices)):
            e = decomposition_class(poly, cone_decomposition(poly, apex))
            vols.append(volume_of_prebloch(e, precision=prec))
        spread = max(vols) - min(vols)
        rep.add("volume", _fmt(vols[0], prec))
        rep.add("apex_independence_spread", mp.nstr(spread, 8))
        ok = spread < mp.mpf(2) ** (-prec // 2)
        rep.add("apex_independent", bool(ok))
    rep.emit(config)
    return 0 if ok else 1


# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="blochinv",
        description="Bloch invariants, Chern-Simons values and Borel "
                    "regulators from ideal-triangulation data.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--precision", type=int, default=256,
                    help="working precision in bits (default 256)")
    ap.add_argument("--denom-bound", type=int, default=120,
                    help="denominator bound for mod-pi^2-Q reconstruction")
    ap.add_argument("--format", choices=("text", "records"), default="text")
    ap.add_argument("--allow-flat", action="store_true",
                    help="admit flat (real-shape) solutions in solves")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariant", help="Bloch invariant report")
    p.add_argument("file")
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("fill", help="Dehn filling solve")
    p.add_argument("file")
    p.add_argument("--fill", action="append",
                   help="per-cusp filling 'p,q' or 'complete' "
                        "(default: the file's fill lines)")
    p.set_defaults(func=cmd_fill)

    p = sub.add_parser("cs", help="volume + Chern-Simons report")
    p.add_argument("file")
    p.add_argument("--calibrate-cs", default=None,
                   help="known CS value fixing the constant alpha")
    p.set_defaults(func=cmd_cs)

    p = sub.add_parser("borel", help="Borel regulator vectors")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_borel)

    p = sub.add_parser("relation", help="integer-relation detection")
    p.add_argument("files", nargs="+")
    p.add_argument("--bound", type=int, default=64,
                   help="coefficient bound for the relation search")
    p.set_defaults(func=cmd_relation)

    p = sub.add_parser("scissors", help="polyhedron class report")
    p.add_argument("file")
    p.set_defaults(func=cmd_scissors)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.precision < 64:
        ap.error("precision must be at least 64 bits")
    try:
        return args.func(args, args)
    except _NUMERIC_ERRORS as exc:
        print("numeric failure: %s" % exc, file=sys.stderr)
        return 1
    except _INPUT_ERRORS as exc:
        print("invalid input: %s" % exc, file=sys.stderr)
        return 2
    except BlochError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
