# command line interface for quiverstab

import argparse
import logging
import sys
from typing import Optional, Sequence

from quiverstab import __version__
from quiverstab.config.computation import DEFAULT_EPSILON, DEFAULT_SWEEP_DEPTH
from quiverstab.config.report import LOG_FORMAT, VALID_FORMATS
from quiverstab.core.errors import InputError, InvariantError, QuiverStabError, exit_code_for
from quiverstab.core.hua import kac_polynomial, kac_polynomial_decomposition_route
from quiverstab.core.nakajima import (
    NakajimaInstance,
    hilbert_coefficient_identity_check,
    hilbert_series,
    multiplicity_bound_report,
    nakajima_kac_sweep,
)
from quiverstab.core.oracle import census, interpolate, thin_kac
from quiverstab.core.quiver import (
    cartan_form,
    check_star,
    crawley_boevey,
    dim_vector,
    euler_form,
    generic_character,
    is_generic,
    is_indivisible,
    root_type,
)
from quiverstab.core.stabilize import (
    kac_sweep,
    max_pairing,
    min_hn_codim,
    multi_part_max,
    near_max_decompositions,
    stab_bound_Mn,
)
from quiverstab.core.state import (
    VALID_DIST_INTERPRETATIONS,
    VALID_FORMS,
    VALID_KAC_ROUTES,
    VALID_SWEEP_MODES,
    ComputationSettings,
)
from quiverstab.reports.documents import QuiverDocument, dump_document, load_document, parse_vector
from quiverstab.reports.export import (
    Rendered,
    emit,
    render_census,
    render_hilbert,
    render_items,
    render_multiplicity,
    render_near_max,
    render_star,
    render_sweep,
    render_value,
)

LOGGER = logging.getLogger(__name__)

KAC_COMMAND_ROUTES = {
    "auto": "auto",
    "log": "log",
    "decomp": "decomposition",
    "decomposition": "decomposition",
    "eval": "eval",
    "both": "both",
}


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors (exit 1), not argparse's exit 2."""

    def error(self, message):
        raise InputError(message)


# ---------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------

def parse_range(text: str) -> range:
    """'A..B' (inclusive) or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return range(int(lo), int(hi) + 1)
        return range(int(text), int(text) + 1)
    except ValueError as exc:
        raise InputError(f"cannot read '{text}' as a range A..B") from exc


def parse_ints(text: str, count: Optional[int] = None, what: str = "list") -> tuple[int, ...]:
    values = parse_vector(text)
    if count is not None and len(values) != count:
        raise InputError(f"{what} needs {count} comma-separated integers, got '{text}'")
    return values


def _common_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--format", choices=VALID_FORMATS, default="text",
                        help="Output format (default: text)")
    parent.add_argument("--threads", type=int, default=None,
                        help="Worker processes for sweeps")
    parent.add_argument("--cap", type=int, default=None,
                        help="Override every enumeration cap")
    parent.add_argument("-v", "--verbose", action="count", default=0,
                        help="Log progress (-v INFO, -vv DEBUG)")
    parent.add_argument("--quiet", action="store_true",
                        help="No progress bars")
    return parent


def _route_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--route", choices=VALID_KAC_ROUTES, default=None,
                        help="How Kac polynomials are extracted from the Hua grid")
    return parent


def _quiver_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--quiver", required=True, help="Quiver document (.quiver)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="quiverstab",
        description="Kac polynomials, stabilization sweeps and finite-field oracles for quivers",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _common_parent()
    route = _route_parent()
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("form", parents=[common], help="Euler or Cartan pairing of two vectors")
    _quiver_argument(p)
    p.add_argument("--d", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--form", choices=VALID_FORMS, default="euler")

    p = sub.add_parser("root-type", parents=[common], help="Real root, imaginary root or not a root")
    _quiver_argument(p)
    p.add_argument("--d", required=True)

    p = sub.add_parser("star", parents=[common], help="Evaluate condition (star) for delta")
    _quiver_argument(p)
    p.add_argument("--delta", required=True)
    p.add_argument("--form", choices=VALID_FORMS, default="cartan")
    strictness = p.add_mutually_exclusive_group()
    strictness.add_argument("--strict", dest="strictness", action="store_const", const="strict")
    strictness.add_argument("--weak", dest="strictness", action="store_const", const="weak")
    p.set_defaults(strictness="strict")
    p.add_argument("--dist-interpretation", choices=VALID_DIST_INTERPRETATIONS, default="proof")

    p = sub.add_parser("kac", parents=[common], help="Kac polynomial A_d(q)")
    _quiver_argument(p)
    p.add_argument("--d", required=True)
    p.add_argument("--route", choices=list(KAC_COMMAND_ROUTES), default=None,
                   help="log, decomp, eval, auto or both (log checked against decomp)")

    p = sub.add_parser("sweep", parents=[common, route], help="Top coefficients along d + n delta")
    _quiver_argument(p)
    p.add_argument("--d", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--n", required=True, help="Range A..B")
    p.add_argument("--depth", type=int, default=DEFAULT_SWEEP_DEPTH)
    p.add_argument("--mode", choices=VALID_SWEEP_MODES, default="kac")

    p = sub.add_parser("hn", parents=[common], help="Pairing maxima and HN codimension")
    _quiver_argument(p)
    p.add_argument("--tau", required=True)
    p.add_argument("--max-parts", type=int, default=4)
    p.add_argument("--form", choices=VALID_FORMS, default="euler")

    p = sub.add_parser("near-max", parents=[common], help="Decompositions of d + n delta with pairing above -M")
    _quiver_argument(p)
    p.add_argument("--d", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)

    p = sub.add_parser("generic-chi", parents=[common], help="A generic character for d")
    _quiver_argument(p)
    p.add_argument("--d", required=True)

    p = sub.add_parser("cb", parents=[common], help="Crawley-Boevey quiver document")
    _quiver_argument(p)
    p.add_argument("--w", required=True)

    p = sub.add_parser("nakajima-sweep", parents=[common, route], help="Kac sweep of (d + n delta, 1) on Q_w")
    _quiver_argument(p)
    p.add_argument("--w", required=True)
    p.add_argument("--d", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--n", required=True, help="Range A..B")
    p.add_argument("--depth", type=int, default=DEFAULT_SWEEP_DEPTH)

    p = sub.add_parser("hilbert", parents=[common], help="Hilbert scheme generating series")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--b", type=int, default=None)
    p.add_argument("--orders", required=True, help="NT,NQ")
    p.add_argument("--identity", default=None, help="k,a")

    p = sub.add_parser("oracle", parents=[common, route], help="Thin or finite-field ground truth")
    _quiver_argument(p)
    p.add_argument("--d", required=True)
    oracle = p.add_mutually_exclusive_group(required=True)
    oracle.add_argument("--thin", action="store_true")
    oracle.add_argument("--census-primes", default=None, help="e.g. 2,3,5")

    p = sub.add_parser("bound", parents=[common], help="Closed-form bound M_n")
    _quiver_argument(p)
    p.add_argument("--d", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--form", choices=VALID_FORMS, default="euler")

    p = sub.add_parser("multiplicity", parents=[common], help="Bound on the multiplicity at 1 - (d, d)/2")
    _quiver_argument(p)
    p.add_argument("--d", required=True)

    return parser


# ---------------------------------------------------------
# Commands
# ---------------------------------------------------------

def _settings(args) -> ComputationSettings:
    params = {"show_progress": not args.quiet}
    if args.threads is not None:
        params["threads"] = args.threads
    route = getattr(args, "route", None)
    if route in VALID_KAC_ROUTES:
        params["kac_route"] = route
    try:
        settings = ComputationSettings(**params)
        if args.cap is not None:
            settings.override_caps(args.cap)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return settings


def _cmd_form(args, doc, settings) -> Rendered:
    quiver = doc.to_quiver()
    d = parse_vector(args.d, doc.dimension_vectors)
    v = parse_vector(args.v, doc.dimension_vectors)
    pairing = euler_form if args.form == "euler" else cartan_form
    value = pairing(quiver, d, v)
    return render_value(value, {"d": list(d), "v": list(v), "form": args.form, "value": value})


def _cmd_root_type(args, doc, settings) -> Rendered:
    d = parse_vector(args.d, doc.dimension_vectors)
    kind = root_type(doc.to_quiver(), d)
    return render_value(kind, {"d": list(d), "root_type": kind})


def _cmd_star(args, doc, settings) -> Rendered:
    quiver = doc.to_quiver()
    delta = parse_vector(args.delta, doc.dimension_vectors)
    report = check_star(quiver, delta, args.form, args.strictness, args.dist_interpretation)
    return render_star(report, quiver, delta)


def _cmd_kac(args, doc, settings) -> Rendered:
    quiver = doc.to_quiver()
    d = parse_vector(args.d, doc.dimension_vectors)
    route = KAC_COMMAND_ROUTES[args.route] if args.route else settings.kac_route
    if route == "both":
        log = kac_polynomial(quiver, d, "log", settings)
        decomposition = kac_polynomial_decomposition_route(quiver, d, settings)
        if log != decomposition:
            raise InvariantError(f"routes disagree: log gives {log}, decomposition gives {decomposition}")
        poly = log
    else:
        poly = kac_polynomial(quiver, d, route, settings)
    return render_value(poly, {
        "d": list(d),
        "route": route,
        "polynomial": str(poly),
        "coefficients": list(poly.coeffs),
    })


def _cmd_sweep(args, doc, settings) -> Rendered:
    quiver = doc.to_quiver()
    d = parse_vector(args.d, doc.dimension_vectors)
    delta = parse_vector(args.delta, doc.dimension_vectors)
    report = kac_sweep(quiver, d, delta, parse_range(args.n), args.depth, args.mode, settings=settings)
    return render_sweep(report)


def _cmd_hn(args, doc, settings) -> Rendered:
    quiver = doc.to_quiver()
    tau = parse_vector(args.tau, doc.dimension_vectors)
    best, argmax = max_pairing(quiver, tau, args.form, settings)
    items = {
        "tau": tuple(tau),
        "Form": args.form,
        "Min HN codimension": min_hn_codim(quiver, tau, settings),
        "Max pairing": best,
        "Argmax": argmax,
        f"Max over at most {args.max_parts} parts": multi_part_max(quiver, tau, args.form, args.max_parts, settings),
    }
    return render_items("Harder-Narasimhan strata", items)


def _cmd_near_max(args, doc, settings) -> Rendered:
    quiver = doc.to_quiver()
    d = parse_vector(args.d, doc.dimension_vectors)
    delta = parse_vector(args.delta, doc.dimension_vectors)
    report = near_max_decompositions(quiver, d, delta, args.n, args.M, args.epsilon, settings)
    return render_near_max(report)


def _cmd_generic_chi(args, doc, settings) -> Rendered:
    quiver = doc.to_quiver()
    d = parse_vector(args.d, doc.dimension_vectors)
    chi = generic_character(quiver, d)
    return render_items(
        "Generic character",
        {"d": tuple(d), "Weights": chi.weights, "Generic": is_generic(quiver, d, chi)},
    )


def _cmd_cb(args, doc, settings) -> Rendered:
    quiver = doc.to_quiver()
    w = parse_vector(args.w, doc.framings)
    cb = crawley_boevey(quiver, w)
    cb_doc = QuiverDocument.from_quiver(cb)
    text = dump_document(cb_doc)
    return Rendered(markdown=text, payload=cb_doc.to_dict())


def _cmd_nakajima_sweep(args, doc, settings) -> Rendered:
    inst = NakajimaInstance(
        doc.to_quiver(),
        parse_vector(args.w, doc.framings),
        parse_vector(args.d, doc.dimension_vectors),
        parse_vector(args.delta, doc.dimension_vectors),
    )
    return render_sweep(nakajima_kac_sweep(inst, parse_range(args.n), args.depth, settings))


def _cmd_hilbert(args, doc, settings) -> Rendered:
    orders = parse_ints(args.orders, 2, "--orders")
    b = args.b if args.b is not None else args.r - 1
    series = hilbert_series(args.r, b, orders)
    check = None
    if args.identity is not None:
        k, a = parse_ints(args.identity, 2, "--identity")
        check = hilbert_coefficient_identity_check(b, k, a)
    return render_hilbert(series, args.r, b, check)


def _cmd_oracle(args, doc, settings) -> Rendered:
    quiver = doc.to_quiver()
    d = dim_vector(quiver, parse_vector(args.d, doc.dimension_vectors))
    if args.thin:
        hua = kac_polynomial(quiver, d, settings=settings)
        thin = thin_kac(quiver, d)
        return render_items(
            "Thin oracle",
            {"d": d, "Hua": hua, "Thin count": thin, "Agreement": thin == hua},
            {"d": list(d), "hua": str(hua), "thin": str(thin), "agreement": thin == hua},
        )
    primes = parse_ints(args.census_primes)
    results = [census(quiver, d, p, settings) for p in primes]
    # censuses also run on divisible vectors, which Hua's route rejects
    hua = kac_polynomial(quiver, d, settings=settings) if any(d) and is_indivisible(d) else None
    bound = max(0, 1 - euler_form(quiver, d, d))
    interpolated = None
    if len(results) >= bound + 1:
        interpolated = interpolate([(r.q, r.absolutely_indecomposable) for r in results], bound)
    return render_census(d, results, hua, interpolated)


def _cmd_bound(args, doc, settings) -> Rendered:
    quiver = doc.to_quiver()
    d = parse_vector(args.d, doc.dimension_vectors)
    delta = parse_vector(args.delta, doc.dimension_vectors)
    value = stab_bound_Mn(quiver, d, delta, args.n, args.form)
    return render_value(value, {"d": list(d), "delta": list(delta), "n": args.n, "form": args.form, "M_n": value})


def _cmd_multiplicity(args, doc, settings) -> Rendered:
    d = parse_vector(args.d, doc.dimension_vectors)
    return render_multiplicity(d, multiplicity_bound_report(doc.to_quiver(), d))


COMMANDS = {
    "form": _cmd_form,
    "root-type": _cmd_root_type,
    "star": _cmd_star,
    "kac": _cmd_kac,
    "sweep": _cmd_sweep,
    "hn": _cmd_hn,
    "near-max": _cmd_near_max,
    "generic-chi": _cmd_generic_chi,
    "cb": _cmd_cb,
    "nakajima-sweep": _cmd_nakajima_sweep,
    "hilbert": _cmd_hilbert,
    "oracle": _cmd_oracle,
    "bound": _cmd_bound,
    "multiplicity": _cmd_multiplicity,
}


def run(argv: Optional[Sequence[str]] = None) -> str:
    """Parse the command line and return the rendered output."""
    args = build_parser().parse_args(argv)
    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)

    settings = _settings(args)
    doc = load_document(args.quiver) if hasattr(args, "quiver") else None
    LOGGER.info("running %s with %s", args.command, settings.as_dict())
    rendered = COMMANDS[args.command](args, doc, settings)
    return emit(rendered, args.format)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        output = run(argv)
    except QuiverStabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    print(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
