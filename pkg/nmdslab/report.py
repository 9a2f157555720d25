"""report.py

Tables of results: existence of k-NMDS DLS matrices, the catalog summary,
the comparison with earlier constructions and the lowest cost of family
NMDS matrices, rendered as markdown or CSV"""

import io
import csv

from nmdslab.gf import parse_field
from nmdslab.search import SearchCampaign
from nmdslab.cost import family_cost_lower_bound
from nmdslab.catalog import catalog_list, load_catalog

TABLES = ("existence", "catalog-summary", "comparison", "lowest-cost")
FORMATS = ("md", "csv")

# Fixed XOR values of the existence grid
EXISTENCE_K = (2, 3, 4)
EXISTENCE_FIELDS = ("4:0x13", "8:0x1c3")
MISSING = "--"


class ReportError(Exception):
    pass


def render_table(headers, rows, fmt="md", title=None):
    """Render a table as markdown (with a version header) or as CSV"""

    if fmt == "csv":
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(headers)
        for r in rows:
            w.writerow(r)
        return out.getvalue()
    elif fmt != "md":
        raise ReportError("Unknown table format '{0}'".format(fmt))

    from nmdslab import __version__

    lines = ["NMDSLAB v.{0}".format(__version__), ""]
    if title is not None:
        lines += [title, ""]
    lines.append("| " + " | ".join(str(h) for h in headers) + " |")
    lines.append("|" + "|".join("---" for h in headers) + "|")
    for r in rows:
        lines.append("| " + " | ".join(str(v) for v in r) + " |")
    return "\n".join(lines) + "\n"


def existence_campaigns(orders, ls=EXISTENCE_K, fields=EXISTENCE_FIELDS, budget=None, long=False):
    """Reduced-DLS campaigns for every (n, K, field) cell with K <= n - 2,
    testing k = n - 1 and k = n"""

    camps = []
    for n in orders:
        for l in ls:
            if l > n - 2:
                continue
            for f in fields:
                field = parse_field(f) if isinstance(f, str) else f
                camps.append(
                    SearchCampaign(
                        n,
                        l,
                        field,
                        [n - 1, n],
                        budget=budget,
                        name="existence-n{0}-K{1}-{2}".format(n, l, field.describe()),
                        long=long,
                    )
                )
    return camps


def existence_table(reports, fmt="md"):
    """Grid of k-NMDS DLS existence: one row per (n, k), one column per
    (K, field); cells missing from the reports are shown as --"""

    cells = {}
    cols = []
    orders = set()
    for rep in reports:
        c = rep.campaign
        col = (c.l, c.field.r, c.field.describe())
        if col not in cols:
            cols.append(col)
        orders.add(c.n)
        for v in rep.verdicts:
            cells[(c.n, v.k, col)] = v.status

    cols.sort()
    headers = ["Order n", "k"] + ["K={0} over {1}".format(l, f) for l, _, f in cols]
    rows = []
    for n in sorted(orders):
        for k in (n - 1, n):
            rows.append(
                [n if k == n - 1 else "", k]
                + [cells.get((n, k, col), MISSING) for col in cols]
            )

    return render_table(
        headers, rows, fmt, title="k-NMDS DLS matrices with k = n - 1 and k = n"
    )


def _summary_rows(catalog):
    rows = []
    for e in catalog_list(catalog=catalog):
        if e.type not in ("recursive", "nonrecursive"):
            continue
        it = e.expected.get("k", "-") if e.type == "recursive" else "-"
        rows.append(
            [e.order, e.input, e.type, it, e.expected.get("cost", "-"), e.ring, e.id]
        )
    rows.sort(key=lambda r: (r[0], r[1], r[2] != "recursive", str(r[3]), r[6]))
    return rows


def catalog_summary(catalog=None, fmt="md"):
    """Order, input size, type, iterations and XOR count of every recursive
    and nonrecursive catalog construction"""

    headers = ["Order n", "Input", "Type", "Iterations", "XOR count", "Ring", "Id"]
    return render_table(
        headers, _summary_rows(catalog), fmt, title="Summary of catalogued NMDS matrices"
    )


def comparison_table(catalog=None, fmt="md"):
    """Catalogued constructions next to the reference rows of earlier ones"""

    catalog = load_catalog() if catalog is None else catalog

    rows = []
    for r in catalog.references:
        it = r.get("iterations")
        rows.append(
            [
                r["order"],
                r["input"],
                r["type"],
                "-" if it is None else it,
                r["ring"],
                r["xor"],
                r.get("source", ""),
            ]
        )
    for s in _summary_rows(catalog):
        rows.append([s[0], s[1], s[2], s[3], s[5], s[4], s[6]])

    rows.sort(key=lambda r: (r[0], r[1], r[2], str(r[3]), r[5] if isinstance(r[5], int) else 0))
    headers = ["Order n", "Input", "Type", "Iterations", "Ring", "XOR count", "Source"]
    return render_table(headers, rows, fmt, title="Comparison of NMDS constructions")


def lowest_cost_table(orders=(5, 6, 7, 8), field=None, fmt="md"):
    """Least XOR count of Hadamard, circulant or left-circulant NMDS
    matrices"""

    field = parse_field("4:0x13") if field is None else field
    rows = [[n, family_cost_lower_bound(n, field)] for n in orders]
    return render_table(
        ["Order n", "XOR count"],
        rows,
        fmt,
        title="Lowest XOR count of family NMDS matrices over {0}".format(field),
    )


def existence_status_counts(reports):
    """Number of cells per status, for logging"""
    counts = {}
    for rep in reports:
        for v in rep.verdicts:
            counts[v.status] = counts.get(v.status, 0) + 1
    return counts
