"""
nmdslab

Command line front end: field tables, NMDS verification, branch numbers,
XOR costs, search campaigns, the catalog and the result tables

"""

import os
import sys
import logging
import argparse as ap
from datetime import datetime

from nmdslab.mpi import mpi_controller as mpi
from nmdslab.gf import parse_field, FieldError
from nmdslab.linalg import FieldMatrix, MatrixError, mat_pow
from nmdslab.construct import circulant, left_circulant, companion, ConstructionError
from nmdslab.branch import is_nmds, branch_report, BranchError
from nmdslab.cost import matrix_cost, composed_cost, element_xor, METRICS, CostError
from nmdslab.search import run_campaign, SearchError
from nmdslab.catalog import load_catalog, catalog_list, catalog_verify, CatalogError
from nmdslab.config import CampaignConfig, CampaignConfigError
from nmdslab.input import CampaignInput
from nmdslab.input.input import CampaignInputError
from nmdslab.input.larkeval import LarkExpressionError
from nmdslab.input.specs import (
    parse_element_list,
    parse_dls_spec,
    parse_gdls_spec,
    SpecParseError,
)
from nmdslab.input.matrixio import (
    load_matrix,
    matrix_to_dict,
    dumps,
    MatrixFormatError,
)
from nmdslab.report import (
    TABLES,
    FORMATS,
    render_table,
    existence_campaigns,
    existence_table,
    catalog_summary,
    comparison_table,
    lowest_cost_table,
)
from nmdslab.utils import hexstr

LOGFORMAT = "[%(levelname)s] [%(threadName)s] [%(asctime)s] %(message)s"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNRESOLVED = 3

# Errors caused by what the user asked for, reported with the usage exit code
_USAGE_ERRORS = (
    FieldError,
    MatrixError,
    ConstructionError,
    BranchError,
    CostError,
    SearchError,
    CatalogError,
    CampaignConfigError,
    CampaignInputError,
    LarkExpressionError,
    SpecParseError,
    MatrixFormatError,
    OSError,
)


class _Source(object):
    # A matrix together with what it came from
    def __init__(self, matrix, label, entry=None):
        self.matrix = matrix
        self.label = label
        self.entry = entry


def _setup_logging(logfile=None):
    if logfile is not None:
        logging.basicConfig(
            filename=logfile,
            filemode="w",
            level=logging.INFO,
            format=LOGFORMAT,
            datefmt="%Y-%m-%d %H:%M:%S",
        )
    else:
        logging.basicConfig(
            level=logging.WARNING, format=LOGFORMAT, datefmt="%Y-%m-%d %H:%M:%S"
        )


def _emit(args, text):
    if not mpi.is_root:
        return
    if args.out is not None:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _matrix_source(args):
    field = parse_field(args.field)

    if args.catalog is not None:
        entry = load_catalog(args.catalog_file).get(args.catalog)
        return _Source(entry.matrix(), "catalog entry {0}".format(entry.id), entry)
    elif args.circ is not None:
        return _Source(circulant(parse_element_list(args.circ, field), field), "circulant")
    elif args.lcirc is not None:
        M = left_circulant(parse_element_list(args.lcirc, field), field)
        return _Source(M, "left-circulant")
    elif args.companion is not None:
        return _Source(companion(parse_element_list(args.companion, field), field), "companion")
    elif args.identity is not None:
        return _Source(FieldMatrix.identity(args.identity, field), "identity")
    elif args.dls is not None:
        return _Source(parse_dls_spec(args.dls, field).matrix(), "DLS")
    elif args.gdls is not None:
        if args.ring is not None:
            spec = parse_gdls_spec(args.gdls, m=args.ring)
        else:
            spec = parse_gdls_spec(args.gdls, field)
        return _Source(spec.matrix(), "GDLS")
    elif args.matrix_file is not None:
        return _Source(load_matrix(args.matrix_file), args.matrix_file)

    raise SpecParseError("No matrix given")


def _cost_of(src, metric):
    if src.entry is not None and src.entry.construction["kind"] == "product":
        total = composed_cost(src.entry.factors(), metric)
        return {"total": total, "composed": True}
    return matrix_cost(src.matrix, metric).to_dict()


def _kv_table(pairs):
    return render_table(["Property", "Value"], [[k, v] for k, v in pairs])


def cmd_field_info(args):
    field = parse_field(args.field)
    els = []
    if args.elements:
        for e in field.nonzero():
            try:
                c, bound = element_xor(e, args.metric)
            except CostError:
                c, bound = None, False
            els.append(
                {
                    "value": hexstr(e.value),
                    "alpha_exponent": field.alpha_exponent(e.value),
                    "xor": c,
                    "bound": bound,
                }
            )

    d = {
        "field": field.describe(),
        "r": field.r,
        "modulus": hexstr(field.modulus),
        "order": field.order,
        "primitive": field.is_primitive,
        "alpha": hexstr(field.alpha.value),
    }
    if args.elements:
        d["elements"] = els

    if args.json:
        _emit(args, dumps(d) + "\n")
    else:
        text = _kv_table([(k, d[k]) for k in ("field", "r", "modulus", "order", "primitive", "alpha")])
        if args.elements:
            rows = [[x["value"], x["alpha_exponent"], x["xor"]] for x in els]
            text += "\n" + render_table(["Element", "Exponent of alpha", "XOR"], rows)
        _emit(args, text)
    return EXIT_PASS


def cmd_verify(args):
    src = _matrix_source(args)
    k = args.power
    M = src.matrix
    Mk = mat_pow(M, k) if k > 1 else M
    verdict = is_nmds(Mk)

    try:
        cost = _cost_of(src, args.metric)
    except CostError as e:
        cost = {"error": str(e)}

    logging.info(
        "Verified {0} at power {1}: MDS {2}, NMDS {3}".format(
            src.label, k, verdict.is_mds, verdict.is_nmds
        )
    )

    if args.json:
        d = {
            "source": src.label,
            "power": k,
            "matrix": matrix_to_dict(M),
            "verdict": verdict.to_dict(),
            "cost": cost,
        }
        _emit(args, dumps(d) + "\n")
    else:
        pairs = [
            ("source", src.label),
            ("power", k),
            ("MDS", verdict.is_mds),
            ("NMDS", verdict.is_nmds),
            ("cost", cost.get("decomposition", cost.get("total", cost.get("error")))),
        ]
        if verdict.certificate is not None:
            pairs.append(("witness", verdict.certificate))
        _emit(args, _kv_table(pairs))

    return EXIT_PASS if verdict.is_nmds else EXIT_FAIL


def cmd_branch(args):
    src = _matrix_source(args)
    M = mat_pow(src.matrix, args.power) if args.power > 1 else src.matrix
    rep = branch_report(M)

    if args.json:
        _emit(args, dumps(rep.to_dict()) + "\n")
    else:
        d = rep.to_dict()
        _emit(
            args,
            _kv_table(
                [
                    ("differential branch number", d["beta_d"]),
                    ("linear branch number", d["beta_l"]),
                    ("differential witness", d["witness_d"]),
                    ("linear witness", d["witness_l"]),
                ]
            ),
        )
    return EXIT_PASS


def cmd_cost(args):
    src = _matrix_source(args)
    cost = _cost_of(src, args.metric)

    if args.json:
        _emit(args, dumps(cost) + "\n")
    elif "decomposition" in cost:
        rows = [[i, j, c] for i, j, c in cost["elements"]]
        text = _kv_table(
            [
                ("fixed XOR", cost["fixed_xor"]),
                ("metric", cost["metric"]),
                ("upper bound only", cost["bound"]),
                ("total", cost["decomposition"]),
            ]
        )
        text += "\n" + render_table(["Row", "Column", "XOR"], rows)
        _emit(args, text)
    else:
        _emit(args, _kv_table([("composed total", cost["total"])]))
    return EXIT_PASS


def _hit_str(h):
    if "spec" in h:
        s = h["spec"]
        return ";".join(
            "{0}={1}".format(k, ",".join(str(x) for x in s[k])) for k in sorted(s) if k != "kind"
        )
    return ",".join(str(x) for x in h.get("row", []))


def cmd_search(args):
    if mpi.is_root:
        logging.info("Launching search campaign from file: {0}".format(args.campaign_file))
    with open(args.campaign_file) as fs:
        infile = CampaignInput(fs)

    overrides = {
        "seed": args.seed,
        "budget": args.budget,
        "long": True if args.long else None,
    }
    config = CampaignConfig(infile.evaluate(), overrides)

    report = run_campaign(config.campaign, args.jobs, args.checkpoint, mpi.size > 1)

    if args.json:
        _emit(args, dumps(report.to_dict(timing=False)) + "\n")
    else:
        rows = []
        for v in report.verdicts:
            w = v.witness.to_string() if v.witness is not None else (v.note or "")
            rows.append([v.n, v.l, v.k, v.status, w])
        title = "Campaign {0} ({1})".format(config.name, config.campaign.mode)
        text = render_table(["n", "K", "k", "Status", "Witness"], rows, title=title)
        if report.hits:
            hrows = [[h.get("cost", "-"), h.get("k", "-"), _hit_str(h)] for h in report.hits]
            text += "\n" + render_table(["Cost", "k", "Candidate"], hrows)
        _emit(args, text)

    return EXIT_UNRESOLVED if report.unresolved else EXIT_PASS


def _catalog_filter(args):
    filt = {}
    for key in ("order", "type", "input"):
        v = getattr(args, key)
        if v is not None:
            filt[key] = v
    return filt


def cmd_catalog(args):
    cat = load_catalog(args.catalog_file)

    if args.action == "list":
        entries = catalog_list(_catalog_filter(args), cat)
        if args.json:
            _emit(args, dumps([e.to_dict() for e in entries]) + "\n")
        else:
            rows = [
                [
                    e.id,
                    e.order,
                    e.type,
                    e.input,
                    e.ring,
                    e.expected.get("k", "-"),
                    e.expected.get("cost", "-"),
                ]
                for e in entries
            ]
            _emit(
                args,
                render_table(
                    ["Id", "Order n", "Type", "Input", "Ring", "k", "XOR count"], rows
                ),
            )
        return EXIT_PASS

    if args.id:
        entries = [cat.get(i) for i in args.id]
    else:
        entries = catalog_list(_catalog_filter(args), cat)

    t0 = datetime.now()
    rep = catalog_verify(entries, cat, args.jobs, mpi.size > 1)
    logging.info(
        "Catalog verification completed in {0:.3f} seconds".format(
            (datetime.now() - t0).total_seconds()
        )
    )

    if args.json:
        _emit(args, dumps(rep.to_dict()) + "\n")
    else:
        rows = []
        for r in rep.results:
            diffs = "; ".join(
                "{0}: expected {1}, got {2}".format(c["check"], c["expected"], c["actual"])
                for c in r.mismatches
            )
            rows.append([r.id, "pass" if r.passed else "FAIL", r.error or diffs])
        _emit(args, render_table(["Id", "Result", "Mismatches"], rows))

    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_report(args):
    fmt = "csv" if args.csv else "md"

    if args.table == "existence":
        orders = args.orders or [4, 5]
        camps = existence_campaigns(orders, args.K, args.fields, args.budget, args.long)
        reports = []
        for c in camps:
            logging.info("Running existence cell {0}".format(c.name))
            reports.append(run_campaign(c, args.jobs, None, mpi.size > 1))
        _emit(args, existence_table(reports, fmt))
        if any(r.unresolved for r in reports):
            return EXIT_UNRESOLVED
    elif args.table == "catalog-summary":
        _emit(args, catalog_summary(load_catalog(args.catalog_file), fmt))
    elif args.table == "comparison":
        _emit(args, comparison_table(load_catalog(args.catalog_file), fmt))
    else:
        orders = args.orders or [5, 6, 7, 8]
        _emit(args, lowest_cost_table(orders, parse_field(args.field), fmt))

    return EXIT_PASS


def _parser():
    common = ap.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Canonical JSON output")
    common.add_argument("--out", type=str, default=None, help="Write output to file")
    common.add_argument("--log", type=str, default=None, help="Log file")
    common.add_argument(
        "--field", type=str, default="4:0x13", help="Field as r:hexpoly (default 4:0x13)"
    )

    parallel = ap.ArgumentParser(add_help=False)
    parallel.add_argument("--jobs", type=int, default=1, help="Worker processes")

    source = ap.ArgumentParser(add_help=False)
    source.add_argument("matrix_file", nargs="?", default=None, help="JSON matrix file")
    group = source.add_mutually_exclusive_group()
    group.add_argument("--catalog", type=str, default=None, metavar="ID")
    group.add_argument("--circ", type=str, default=None, metavar="ROW")
    group.add_argument("--lcirc", type=str, default=None, metavar="ROW")
    group.add_argument("--companion", type=str, default=None, metavar="COEFFS")
    group.add_argument("--identity", type=int, default=None, metavar="N")
    group.add_argument("--dls", type=str, default=None, metavar="SPEC")
    group.add_argument("--gdls", type=str, default=None, metavar="SPEC")
    source.add_argument("--ring", type=int, default=None, metavar="M",
                        help="Block size of GDLS entries over GL(M, F2)")
    source.add_argument("--power", type=int, default=1, metavar="K")
    source.add_argument("--metric", choices=METRICS, default="auto")
    source.add_argument("--catalog-file", type=str, default=None)

    parser = ap.ArgumentParser(prog="nmdslab")
    sub = parser.add_subparsers(dest="command")
    sub.required = True

    p = sub.add_parser("field-info", parents=[common], help="Describe a field")
    p.add_argument("--elements", action="store_true", help="List every element")
    p.add_argument("--metric", choices=METRICS, default="auto")
    p.set_defaults(func=cmd_field_info)

    p = sub.add_parser("verify", parents=[common, source], help="NMDS verdict and cost")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("branch", parents=[common, source], help="Branch numbers")
    p.set_defaults(func=cmd_branch)

    p = sub.add_parser("cost", parents=[common, source], help="XOR cost")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("search", parents=[common, parallel], help="Run a campaign file")
    p.add_argument("campaign_file", type=str)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--long", action="store_true", help="Allow very large domains")
    p.add_argument("--checkpoint", type=str, default=None)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("catalog", parents=[common, parallel], help="List or verify")
    p.add_argument("action", choices=("list", "verify"))
    p.add_argument("--id", action="append", default=None)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--type", type=str, default=None)
    p.add_argument("--input", type=str, default=None)
    p.add_argument("--md", action="store_true", help="Markdown output (default)")
    p.add_argument("--catalog-file", type=str, default=None)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("report", parents=[common, parallel], help="Result tables")
    p.add_argument("table", choices=TABLES)
    p.add_argument("--orders", type=int, nargs="+", default=None)
    p.add_argument("--K", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--fields", type=str, nargs="+", default=["4:0x13", "8:0x1c3"])
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--long", action="store_true")
    p.add_argument("--csv", action="store_true", help="CSV instead of markdown")
    p.add_argument("--catalog-file", type=str, default=None)
    p.set_defaults(func=cmd_report)

    return parser


def run(argv=None, use_mpi=False):
    """Parse the arguments and run a subcommand; returns the exit code"""

    if use_mpi:
        mpi.connect()

    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    logfile = args.log
    if logfile is None and args.command == "search":
        logfile = "{0}.log".format(os.path.splitext(args.campaign_file)[0])
    if mpi.is_root:
        _setup_logging(logfile)

    tstart = datetime.now()
    try:
        code = args.func(args)
    except _USAGE_ERRORS as e:
        logging.error(str(e))
        if mpi.is_root:
            sys.stderr.write("nmdslab: error: {0}\n".format(e))
        return EXIT_USAGE

    if mpi.is_root:
        simtime = (datetime.now() - tstart).total_seconds()
        logging.info("Command {0} completed in {1:.3f} seconds".format(args.command, simtime))

    return code


def main(use_mpi=False):
    sys.exit(run(sys.argv[1:], use_mpi))


def main_mpi():
    main(use_mpi=True)


if __name__ == "__main__":
    main()
