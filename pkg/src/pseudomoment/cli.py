"""Command-line front end.

Exit codes: 0 = success, 2 = a check produced a negative verdict
(pseudo-positivity failure, representability rejection, node at zero),
1 = the computation itself failed.  With --json-errors, failures are
reported as machine-readable JSON objects on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from . import cubature as cub
from . import decompose as dec
from . import io as pio
from . import refmeasures as ref
from . import report as rpt
from . import stieltjes as stj
from .polycore import parse_poly

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERDICT_FAIL = 2


@dataclass
class RunConfig:
    dimension: int = 2
    k_max: int = 4
    order: int = 2
    angular_degree: int = 6
    psd_eps: float = dec.PSD_EPS
    zero_node_eps: float = stj.ZERO_NODE_EPS
    input: str | None = None
    output: str | None = None
    json_errors: bool = False

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if self.psd_eps <= 0 or self.zero_node_eps <= 0:
            raise ValueError("tolerances must be positive")


def _add_common(p):
    p.add_argument("--dimension", type=int, default=2)
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--angular-degree", type=int, default=6)
    p.add_argument("--psd-eps", type=float, default=dec.PSD_EPS)
    p.add_argument("--zero-node-eps", type=float, default=stj.ZERO_NODE_EPS)
    p.add_argument("--input", "-i")
    p.add_argument("--output", "-o")
    p.add_argument("--json-errors", action="store_true")


def build_parser():
    ap = argparse.ArgumentParser(prog="pseudomoment",
                                 description="Pseudo-positive moment problems and signed cubature")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="polynomial -> Laplace-Fourier components JSON")
    p.add_argument("--poly", help="polynomial text; alternative to --input file")
    _add_common(p)

    p = sub.add_parser("convert", help="monomial CSV <-> distributed JSON")
    p.add_argument("--to", choices=["distributed", "monomial"], required=True)
    p.add_argument("--degree", type=int, help="target monomial degree cap")
    _add_common(p)

    p = sub.add_parser("check", help="pseudo-positive-definiteness verdict")
    _add_common(p)

    p = sub.add_parser("solve", help="moment table -> component measures")
    p.add_argument("--reduced", action="store_true",
                   help="table holds reduced moments of r^{-k} d sigma")
    _add_common(p)

    p = sub.add_parser("cubature", help="component measures -> signed point/shell rule")
    _add_common(p)

    p = sub.add_parser("integrate", help="rule + polynomial -> value")
    p.add_argument("--poly", required=True)
    p.add_argument("--use-shells", action="store_true",
                   help="evaluate through the shell form instead of the points")
    _add_common(p)

    p = sub.add_parser("diagnose", help="summability / representability / determinacy report")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--carleman-terms", type=int, default=40)
    p.add_argument("--no-figures", action="store_true")
    _add_common(p)

    p = sub.add_parser("refmeasure", help="emit a closed-form reference moment table")
    p.add_argument("--family", required=True,
                   choices=["poisson-alpha", "poisson-reduced", "univariate", "dirac"])
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--interval", type=float, nargs=2, default=(1.0, 1.0), metavar=("A", "B"))
    p.add_argument("--nodes", type=float, nargs="+", default=[1.0])
    p.add_argument("--weights", type=float, nargs="+", default=[1.0])
    _add_common(p)
    return ap


def _config(args):
    return RunConfig(
        dimension=args.dimension, k_max=args.k_max, order=args.order,
        angular_degree=args.angular_degree, psd_eps=args.psd_eps,
        zero_node_eps=args.zero_node_eps, input=args.input, output=args.output,
        json_errors=args.json_errors)


def _emit(cfg, payload):
    text = pio.dumps_canonical(payload)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_poly(cfg, args):
    if getattr(args, "poly", None):
        return parse_poly(args.poly, cfg.dimension)
    if cfg.input:
        with open(cfg.input) as fh:
            return parse_poly(fh.read(), cfg.dimension)
    raise ValueError("provide --poly or --input")


def cmd_decompose(cfg, args):
    P = _load_poly(cfg, args)
    k_max = max(cfg.k_max, P.degree)
    basis = pio.cached_basis(cfg.dimension, k_max)
    d = dec.laplace_fourier_decompose(P, basis)
    comps = [
        {"k": k, "l": l,
         "coefficients": [{"re": c.real, "im": c.imag} for c in p.coeffs]}
        for (k, l), p in sorted(d.components.items())
    ]
    _emit(cfg, {"dimension": cfg.dimension, "basis_fingerprint": basis.fingerprint(),
                "components": comps})
    return EXIT_OK


def cmd_convert(cfg, args):
    tbl = pio.load_moment_table(cfg.input)
    if args.to == "distributed":
        if not isinstance(tbl, dec.MonomialMomentTable):
            raise ValueError("input is already a distributed table")
        basis = pio.cached_basis(tbl.dim, cfg.k_max)
        out = dec.distributed_from_monomial(tbl, basis, cfg.order, cfg.k_max)
        if not cfg.output:
            raise ValueError("--output required for convert")
        pio.write_distributed_table(cfg.output, out)
    else:
        if not isinstance(tbl, dec.DistributedMomentTable):
            raise ValueError("input is already a monomial table")
        degree = args.degree if args.degree is not None else min(2 * tbl.order, tbl.k_max)
        basis = pio.cached_basis(tbl.dim, max(tbl.k_max, degree))
        out = dec.monomial_from_distributed(tbl, basis, degree)
        if not cfg.output:
            raise ValueError("--output required for convert")
        pio.write_monomial_csv(cfg.output, out)
    return EXIT_OK


def cmd_check(cfg, args):
    tbl = pio.load_moment_table(cfg.input)
    verdict = dec.is_pseudo_positive_definite(tbl, eps_rel=cfg.psd_eps)
    payload = {"passed": bool(verdict)}
    if not verdict:
        payload.update({
            "component": list(verdict.component),
            "which_matrix": verdict.which_matrix,
            "witness": [float(x) for x in verdict.witness],
            "witness_value": verdict.witness_value,
        })
    _emit(cfg, payload)
    return EXIT_OK if verdict else EXIT_VERDICT_FAIL


def cmd_solve(cfg, args):
    tbl = pio.load_moment_table(cfg.input)
    basis = pio.cached_basis(tbl.dim, tbl.k_max)
    cms, diag = cub.solve_truncated(tbl, basis, reduced=args.reduced,
                                    zero_node_eps=cfg.zero_node_eps)
    if cfg.output:
        pio.write_component_measures(cfg.output, cms)
    flags = diag["node_at_zero"]
    info = {
        "components": len(cms.entries),
        "ranks": {f"{k},{l}": r for (k, l), r in sorted(diag["ranks"].items())},
        "node_at_zero": [f"node at zero, component ({k},{l})" for (k, l) in flags],
    }
    print(pio.dumps_canonical(info), file=sys.stderr)
    return EXIT_VERDICT_FAIL if flags else EXIT_OK


def cmd_cubature(cfg, args):
    cms = pio.load_component_measures(cfg.input)
    basis = pio.cached_basis(cms.dim, max(cms.max_k(), cfg.angular_degree))
    rule = cub.point_cubature(cms, basis, cfg.angular_degree,
                              zero_node_eps=cfg.zero_node_eps)
    if not cfg.output:
        raise ValueError("--output required for cubature")
    pio.write_cubature(cfg.output, rule)
    return EXIT_OK


def cmd_integrate(cfg, args):
    rule = pio.load_cubature(cfg.input)
    P = parse_poly(args.poly, rule.dim)
    if rule.points is not None and not args.use_shells:
        value = rule.integrate_points(P)
    else:
        cms = cub.ComponentMeasureSet(
            dim=rule.dim, entries={(k, l): m for k, l, m in rule.shells})
        basis = pio.cached_basis(rule.dim, max(P.degree, cms.max_k()))
        value = cub.functional_value(cms, P, basis)
    _emit(cfg, {"value": float(value)})
    return EXIT_OK


def cmd_diagnose(cfg, args):
    cms = pio.load_component_measures(cfg.input)
    report = cub.summability(cms, args.n_max, zero_node_eps=cfg.zero_node_eps)
    status, reason = cub.representability_check(cms, tolerance=cfg.zero_node_eps)
    carleman = {}
    for (k, l), sigma in cms.sorted_items():
        if len(sigma) == 0:
            continue
        tmeas = stj.pushforward_square(sigma)
        seq = [tmeas.moment(j) for j in range(args.carleman_terms + 1)]
        try:
            carleman[f"{k},{l}"] = stj.carleman_diagnostic(seq)
        except ValueError:
            carleman[f"{k},{l}"] = "inconclusive"
    payload = {
        "C_N": [("inf" if math.isinf(c) else c) for c in report.c_values],
        "per_component": {f"{k},{l}": ("inf" if math.isinf(v) else v)
                          for (k, l), v in sorted(report.per_component.items())},
        "representability": status,
        "reason": reason,
        "carleman": carleman,
        "node_at_zero": [f"({k},{l})" for (k, l) in report.node_at_zero],
    }
    _emit(cfg, payload)
    if cfg.output:
        prefix = cfg.output.rsplit(".", 1)[0]
        rpt.write_summability_csv(report, prefix + ".csv")
        if not args.no_figures:
            rpt.render_summability_figures(report, prefix)
    return EXIT_VERDICT_FAIL if status == "rejected" else EXIT_OK


def cmd_refmeasure(cfg, args):
    basis = None
    if args.family in ("poisson-alpha", "poisson-reduced"):
        basis = pio.cached_basis(2, cfg.k_max)
        maker = ref.poisson_alpha_table if args.family == "poisson-alpha" else ref.poisson_reduced_table
        tbl = maker(args.alpha, cfg.k_max, cfg.order, basis=basis)
    elif args.family == "univariate":
        basis = pio.cached_basis(1, 1)
        sigma = stj.AtomicMeasure(tuple(args.nodes), tuple(args.weights))
        tbl = ref.univariate_example_table(args.interval[0], args.interval[1], sigma,
                                           cfg.order, basis=basis)
    else:
        basis = pio.cached_basis(cfg.dimension, 1)
        tbl = ref.dirac_counterexample_table(cfg.order, dim=cfg.dimension, basis=basis)
    if not cfg.output:
        raise ValueError("--output required for refmeasure")
    pio.write_distributed_table(cfg.output, tbl)
    return EXIT_OK


_COMMANDS = {
    "decompose": cmd_decompose,
    "convert": cmd_convert,
    "check": cmd_check,
    "solve": cmd_solve,
    "cubature": cmd_cubature,
    "integrate": cmd_integrate,
    "diagnose": cmd_diagnose,
    "refmeasure": cmd_refmeasure,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        return _COMMANDS[args.command](cfg, args)
    except Exception as e:  # noqa: BLE001 - single reporting point for the CLI
        if getattr(args, "json_errors", False):
            print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        else:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
